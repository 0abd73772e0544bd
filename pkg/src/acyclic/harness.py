"""Finite-model equivalence checking for translations.

The original formula is evaluated over a small base universe.  Its
translation is evaluated over a witness-closure universe: the transitive
closure of the base together with the intended coding functions for the
assignment at hand.  Quantifiers over the original variables keep ranging
over the base; only the auxiliary variables introduced by the gadgets see
the enlarged carrier.

Every universal in a translation is guarded by membership in a coding
function or by a chain of memberships ending in one, so a transitively
closed carrier containing the coding apparatus decides those formulas the
same way an unbounded model would.  The existential over the coding
function is completed by the intended functions (which make the true
direction go through) plus whatever ``extra`` candidates the caller adds
to probe the false direction.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from acyclic.evaluate import Evaluator
from acyclic.formula import Formula, bound_vars, free_vars
from acyclic.hf import (
    EMPTY, HFSet, Universe, closure_universe, singleton, wiener_pair,
)


def build_coding_function(assignment: dict, indices: dict, depths: dict,
                          coded: Iterable[str] = None, empty: HFSet = EMPTY) -> HFSet:
    """The set of pairs ``(iota^i(empty), iota^d(a(x_i)))``.

    ``depths`` maps each variable to its negated type; ``coded`` restricts
    to a subset of the indexed variables.
    """
    names = list(indices) if coded is None else list(coded)
    return HFSet.of(
        wiener_pair(singleton(empty, indices[v]), singleton(assignment[v], depths[v]))
        for v in names)


def rank_bound(indices: dict, depths: dict, assignment: dict) -> int:
    """Upper bound on the rank of the intended coding function.

    A key ``iota^i(0)`` has rank ``i + 1`` and a value ``iota^d(x)`` rank
    ``rank(x) + d``; the pair adds three levels and the function one more.
    """
    worst = 0
    for v, i in indices.items():
        value_rank = assignment[v].rank + depths[v] if v in assignment else depths[v]
        worst = max(worst, i + 1, value_rank)
    return worst + 4


@dataclass
class Disagreement:
    assignment: dict
    original: bool
    translated: bool

    def describe(self) -> str:
        vals = ", ".join(f"{k}={v}" for k, v in self.assignment.items())
        return (f"[{vals}] original={str(self.original).lower()} "
                f"translated={str(self.translated).lower()}")


@dataclass
class EquivReport:
    original: Formula
    translated: Formula
    base: Universe
    verdicts: list = field(default_factory=list)  # (assignment, phi, psi)
    disagreements: list = field(default_factory=list)
    universe_sizes: list = field(default_factory=list)
    strategy: str = ""

    @property
    def checked(self) -> int:
        return len(self.verdicts)

    @property
    def agreed(self) -> int:
        return self.checked - len(self.disagreements)

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def replay(self, d: Disagreement, **kwargs) -> tuple:
        """Re-evaluate one disagreement from scratch."""
        again = check_equivalence(self.original, self.translated, self.base,
                                  assignments=[d.assignment], **kwargs)
        _, phi, psi = again.verdicts[0]
        return phi, psi

    def summary(self) -> str:
        lines = [f"assignments checked: {self.checked}",
                 f"agreements: {self.agreed}",
                 f"disagreements: {len(self.disagreements)}",
                 f"base universe: {len(self.base)} elements"]
        if self.universe_sizes:
            lines.append(f"enriched universe: {min(self.universe_sizes)}"
                         f"..{max(self.universe_sizes)} elements")
        if self.strategy:
            lines.append(f"enrichment: {self.strategy}")
        for d in self.disagreements:
            lines.append("disagree " + d.describe())
        return "\n".join(lines) + "\n"


def _extensions(assignment, names, base):
    todo = [v for v in names if v not in assignment]
    for values in itertools.product(base.elements, repeat=len(todo)):
        yield {**assignment, **dict(zip(todo, values))}


def coding_seeds(assignment: dict, report, base: Universe, pinned=None) -> set:
    """Intended coding functions for every scope of ``report`` and every way
    of extending ``assignment`` to the scope's variables over ``base``.

    Only variables free in the translation are held fixed; a variable the
    translation no longer mentions is as unconstrained as a bound one.
    """
    seeds = set()
    depths = report.depths
    if pinned is None:
        pinned = set(free_vars(report.output))
    for scope in report.scopes:
        fixed = {v: assignment[v] for v in scope.variables if v in pinned}
        for ext in _extensions(fixed, scope.variables, base):
            seeds.add(build_coding_function(ext, report.indices, depths, scope.variables))
    n = max(report.indices.values(), default=0)
    seeds.update(singleton(EMPTY, i) for i in range(n + 3))
    return seeds


def check_equivalence(phi: Formula, psi: Formula, base: Universe, report=None,
                      assignments: Optional[Iterable[dict]] = None,
                      extra: Optional[Callable[[dict], Iterable[HFSet]]] = None,
                      evaluators: tuple = None) -> EquivReport:
    """Compare ``phi`` over ``base`` with ``psi`` over an enriched universe.

    ``report`` is the :class:`TranslationReport` that produced ``psi``; it
    tells which variables each coding function covers.  Without it ``psi``
    is evaluated over the base closure alone.  ``extra(assignment)`` may
    return further seeds (adversarial candidates for the coding function).
    """
    free = free_vars(phi)
    if not set(free_vars(psi)) <= set(free):
        raise ValueError(f"free variables differ: {free} vs {free_vars(psi)}")
    if evaluators is None:
        evaluators = (Evaluator(phi), Evaluator(psi))
    ev_phi, ev_psi = evaluators
    original = set(bound_vars(phi))
    if report is not None:
        original |= {v for s in report.scopes for v in s.variables}
        original |= set(report.indices)
    original -= set(free)
    domains = {v: base.elements for v in original} or None

    strategy = "base closure"
    if report is not None:
        strategy = ("base + intended coding functions for every scope and every "
                    "extension over the base")
    if extra is not None:
        strategy += " + extra candidates"
    out = EquivReport(phi, psi, base, strategy=strategy)

    if assignments is None:
        assignments = (dict(zip(free, vals))
                       for vals in itertools.product(base.elements, repeat=len(free)))
    cache = {}
    pinned = set(free_vars(psi))
    for a in assignments:
        truth_phi = ev_phi.holds(base, a)
        seeds = set(base.elements)
        if report is not None:
            seeds |= coding_seeds(a, report, base, pinned)
        if extra is not None:
            seeds |= set(extra(a))
        key = frozenset(seeds)
        universe = cache.get(key)
        if universe is None:
            universe = cache[key] = closure_universe(seeds)
        out.universe_sizes.append(len(universe))
        truth_psi = ev_psi.holds(universe, a, domains)
        out.verdicts.append((a, truth_phi, truth_psi))
        if truth_phi != truth_psi:
            out.disagreements.append(Disagreement(a, truth_phi, truth_psi))
    return out


def verify_translation(phi: Formula, report, base: Universe, **kwargs) -> EquivReport:
    return check_equivalence(phi, report.output, base, report=report, **kwargs)




# ---------------------------------------------------------------------------
# adversarial candidates

def atom_keyed_candidates(assignment: dict, report, base: Universe) -> set:
    """Intended functions with one junk pair keyed by an atom-built
    ``iota^i(a)`` added, or with one genuine key replaced by it."""
    atoms_ = [e for e in base.elements if e.is_atom]
    out = set()
    if not atoms_:
        return out
    depths = report.depths
    pinned = set(free_vars(report.output))
    for scope in report.scopes:
        fixed = {v: assignment[v] for v in scope.variables if v in pinned}
        for ext in _extensions(fixed, scope.variables, base):
            intended = build_coding_function(ext, report.indices, depths, scope.variables)
            for t in atoms_:
                for v in scope.variables:
                    i, d = report.indices[v], depths[v]
                    good = wiener_pair(singleton(EMPTY, i), singleton(ext[v], d))
                    moved = wiener_pair(singleton(t, i), singleton(ext[v], d))
                    out.add(HFSet.of((set(intended.members) - {good}) | {moved}))
                    for b in base.elements:
                        junk = wiener_pair(singleton(t, i), singleton(b, d))
                        out.add(HFSet.of(set(intended.members) | {junk}))
    return out


def merged_key_candidates(assignment: dict, report, base: Universe) -> set:
    """Intended functions where two pairs are fused into one non-pair
    element carrying both keys and both values."""
    out = set()
    depths = report.depths
    pinned = set(free_vars(report.output))
    for scope in report.scopes:
        fixed = {v: assignment[v] for v in scope.variables if v in pinned}
        names = list(scope.variables)
        for ext in _extensions(fixed, names, base):
            intended = build_coding_function(ext, report.indices, depths, names)
            for u, v in itertools.combinations(names, 2):
                ku, kv = singleton(EMPTY, report.indices[u]), singleton(EMPTY, report.indices[v])
                vu, vv = singleton(ext[u], depths[u]), singleton(ext[v], depths[v])
                fused = HFSet.of((singleton(ku, 2), singleton(kv, 2),
                                  HFSet.of((singleton(vu), singleton(vv), EMPTY))))
                rest = set(intended.members) - {wiener_pair(ku, vu), wiener_pair(kv, vv)}
                out.add(HFSet.of(rest | {fused}))
    return out


ADVERSARIES = {
    "atom-keyed": atom_keyed_candidates,
    "merged-keys": merged_key_candidates,
}


def adversary(report, base: Universe, kinds=tuple(ADVERSARIES)):
    """An ``extra`` callback for :func:`check_equivalence`."""
    def extra(assignment):
        out = set()
        for k in kinds:
            out |= ADVERSARIES[k](assignment, report, base)
        return out
    return extra


__all__ = [
    "ADVERSARIES", "Disagreement", "EquivReport", "adversary",
    "atom_keyed_candidates", "build_coding_function", "check_equivalence",
    "coding_seeds", "merged_key_candidates", "rank_bound", "verify_translation",
]
