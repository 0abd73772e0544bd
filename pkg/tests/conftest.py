import pytest

from acyclic.hf import hf_universe

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.fixture(scope="session")
def v3():
    return hf_universe(3)


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    if report.when == "call" or report.outcome == "failed":
        entry = _criteria.setdefault(props["criterion"], {"title": props["title"],
                                                           "passed": True, "notes": []})
        entry["passed"] &= report.outcome == "passed"
        entry["notes"].extend(v for k, v in report.user_properties if k == "note")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        c = _criteria[n]
        verdict = "PASS" if c["passed"] else "FAIL"
        terminalreporter.write_line(f"criterion {n} {verdict}: {c['title']}")
        for note in c["notes"]:
            terminalreporter.write_line(f"    {note}")
