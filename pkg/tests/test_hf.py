import pickle

import pytest

from acyclic.hf import (
    EMPTY, CapExceeded, HFSet, closure_universe, hf_size, hf_universe,
    parse_hf, singleton, wiener_pair,
)


def test_small_universes():
    assert [str(e) for e in hf_universe(1)] == ["{}"]
    assert [str(e) for e in hf_universe(2)] == ["{}", "{{}}"]
    assert [str(e) for e in hf_universe(3)] == ["{}", "{{}}", "{{},{{}}}", "{{{}}}"]
    assert len(hf_universe(4)) == 16
    assert len(hf_universe(2, 2)) == 66


def test_sizes_and_cap():
    assert hf_size(5, 0) == 65536
    assert hf_size(3, 2) == float("inf")
    with pytest.raises(CapExceeded):
        hf_universe(6)
    with pytest.raises(CapExceeded):
        hf_universe(5, cap=1000)


def test_interning_and_order():
    a = HFSet.of([EMPTY, singleton(EMPTY)])
    b = HFSet.of([singleton(EMPTY), EMPTY])
    assert a is b
    assert HFSet.atom(0) is not EMPTY
    assert HFSet.atom(0) < HFSet.atom(1) < EMPTY < singleton(EMPTY)
    assert pickle.loads(pickle.dumps(a)) is a
    with pytest.raises(TypeError):
        HFSet()


def test_ranks():
    assert HFSet.atom(3).rank == 0
    assert EMPTY.rank == 1
    assert singleton(HFSet.atom(0)).rank == 1
    assert singleton(EMPTY, 3).rank == 4


def test_parse_hf_round_trip():
    for e in hf_universe(2, 1):
        assert parse_hf(str(e)) is e
    with pytest.raises(ValueError):
        parse_hf("{a0,")


def test_pair_closure():
    a, b = HFSet.atom(0), HFSet.atom(1)
    u = closure_universe([wiener_pair(a, b)])
    expected = {wiener_pair(a, b), singleton(a, 2), HFSet.of([singleton(b), EMPTY]),
                singleton(a), singleton(b), EMPTY, a, b}
    assert set(u.elements) == expected
    assert u.is_transitive()
    assert closure_universe(u.elements) == u
    assert closure_universe([EMPTY]).elements == (EMPTY,)


def test_universes_transitive():
    for u in (hf_universe(3), hf_universe(2, 2), hf_universe(4)):
        assert u.is_transitive()
