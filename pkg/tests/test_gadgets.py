import itertools

import pytest

from acyclic.analysis import check_acyclic
from acyclic.evaluate import evaluate
from acyclic.formula import Mem, free_vars, render, variables
from acyclic.gadgets import CONSTANT, PREDICATE, Gadget, GadgetBuilder, GadgetError
from acyclic.hf import (
    EMPTY, HFSet, closure_universe, hf_universe, singleton, wiener_pair,
)
from oracles import (
    first_is, is_iter_singleton, is_pair, is_singleton_of, iterated_elements,
    second_is,
)

A0, A1 = HFSet.atom(0), HFSet.atom(1)


def holds(gadget, **values):
    u = closure_universe(values.values())
    return evaluate(gadget.formula, u, values)


def test_empty_gadget_text():
    assert render(GadgetBuilder().empty("x").formula) == "A _g1. ~(_g1 in x)"


def test_singleton_gadget_text():
    g = GadgetBuilder().singleton("y", "x")
    assert render(g.formula) == "(E _g1. _g1 in y) & A _g2. _g2 in y -> _g2 = x"
    with pytest.raises(ValueError):
        GadgetBuilder().singleton("x", "x")


def test_certification_rejects_bad_formulas():
    with pytest.raises(GadgetError):
        Gadget.certify(Mem("x", "x"), ["x"])
    with pytest.raises(GadgetError):
        Gadget.certify(Mem("x", "y"), ["x"])


def test_singleton_examples():
    g = GadgetBuilder()
    assert holds(g.singleton("y", "x"), y=singleton(A0), x=A0)
    assert not holds(g.singleton("y", "x"), y=EMPTY, x=A0)
    assert not holds(g.singleton("y", "x"), y=HFSet.of([A0, A1]), x=A0)


def test_iter_singleton_examples():
    g = GadgetBuilder()
    assert holds(g.iter_singleton("y", "x", 2), y=singleton(A0, 2), x=A0)
    assert not holds(g.iter_singleton("y", "x", 3), y=singleton(A0, 2), x=A0)


def test_iter_empty_readings():
    g = GadgetBuilder()
    assert holds(g.iter_empty("y", 1, PREDICATE), y=singleton(EMPTY))
    assert holds(g.iter_empty("y", 1, PREDICATE), y=singleton(A0))
    assert holds(g.iter_empty("y", 1, CONSTANT), y=singleton(EMPTY))
    assert not holds(g.iter_empty("y", 1, CONSTANT), y=singleton(A0))
    assert render(g.iter_empty("y", 0, CONSTANT).formula) == "y = 0"


def test_iter_element_examples():
    g = GadgetBuilder()
    assert render(g.iter_element("e", "k", 1).formula) == "e in k"
    assert holds(g.iter_element("e", "k", 2), e=A0, k=singleton(A0, 2))
    k = singleton(A0)
    u = closure_universe([k])
    assert not any(evaluate(g.iter_element("e", "k", 2).formula, u, {"e": e, "k": k})
                   for e in u)


def test_pair_examples():
    g = GadgetBuilder()
    p = wiener_pair(A0, A1)
    assert holds(g.wiener_pair("p"), p=p)
    assert not holds(g.wiener_pair("p"), p=singleton(A0))
    assert holds(g.proj1("x", "p"), x=A0, p=p)
    assert not holds(g.proj1("x", "p"), x=A1, p=p)
    assert holds(g.proj2("x", "p"), x=A1, p=p)
    diag = wiener_pair(A0, A0)
    assert holds(g.proj1("x", "p"), x=A0, p=diag)
    assert holds(g.proj2("x", "p"), x=A0, p=diag)


def _truth_table(gadget, universe, oracle):
    names = gadget.interface
    for vals in itertools.product(universe.elements, repeat=len(names)):
        a = dict(zip(names, vals))
        assert evaluate(gadget.formula, universe, a) == oracle(*vals), a


def _pair_universe():
    base = hf_universe(1, 1).elements
    seeds = [wiener_pair(a, b) for a in base for b in base]
    seeds += [HFSet.of([singleton(a, 2)]) for a in base]
    seeds += [HFSet.of([singleton(a, 2), HFSet.of([singleton(b), singleton(a)])])
              for a in base for b in base]
    return closure_universe(seeds)


def test_pair_truth_tables():
    g, u = GadgetBuilder(), _pair_universe()
    _truth_table(g.wiener_pair("p"), u, is_pair)
    _truth_table(g.proj1("x", "p"), u, first_is)
    _truth_table(g.proj2("x", "p"), u, second_is)


def test_chain_truth_tables():
    g, u = GadgetBuilder(), hf_universe(2, 1)
    _truth_table(g.singleton("y", "x"), u, is_singleton_of)
    _truth_table(g.iter_singleton("y", "x", 2), u, lambda y, x: is_iter_singleton(y, x, 2))
    _truth_table(g.iter_element("e", "k", 2), u, lambda e, k: e in iterated_elements(k, 2))


def _coding(pairs):
    return HFSet.of(wiener_pair(singleton(EMPTY, i), v) for i, v in pairs)


def test_apply_eq_examples():
    x, y, z = EMPTY, singleton(EMPTY), singleton(EMPTY, 2)
    f = _coding([(1, singleton(x, 2)), (2, singleton(y)), (3, singleton(z, 2))])
    g = GadgetBuilder()
    assert holds(g.apply_eq("f", 2, "x", 1), f=f, x=y)
    assert not holds(g.apply_eq("f", 4, "x", 1), f=f, x=y)
    assert not holds(g.apply_eq("f", 1, "x", 1), f=f, x=x)
    assert holds(g.apply_eq("f", 1, "x", 2), f=f, x=x)


def test_eq_translation_examples():
    g = GadgetBuilder()
    same = _coding([(1, singleton(EMPTY)), (2, singleton(EMPTY))])
    diff = _coding([(1, singleton(EMPTY)), (2, singleton(A0))])
    assert holds(g.eq_translation("f", 1, 2), f=same)
    assert not holds(g.eq_translation("f", 1, 2), f=diff)
    assert holds(g.eq_translation("f", 1, 1), f=diff)


def test_three_pair_function_breaks_equality_under_predicate_reading():
    x = y = EMPTY
    z = singleton(EMPTY)
    f = HFSet.of([wiener_pair(singleton(EMPTY), singleton(x)),
                  wiener_pair(singleton(EMPTY, 2), singleton(y)),
                  wiener_pair(singleton(A0), singleton(z))])
    assert not holds(GadgetBuilder(reading=PREDICATE).eq_translation("f", 1, 2), f=f)
    assert holds(GadgetBuilder(reading=CONSTANT).eq_translation("f", 1, 2), f=f)


@pytest.mark.parametrize("x, y, member", [
    (EMPTY, HFSet.of([EMPTY, singleton(EMPTY)]), True),
    (EMPTY, HFSet.of([singleton(EMPTY)]), False),
])
def test_mem_translation(x, y, member):
    # x in y with types -2, -1: f = {(iota(0), iota^2(x)), (iota^2(0), iota(y))}
    f = _coding([(1, singleton(x, 2)), (2, singleton(y))])
    g = GadgetBuilder()
    assert holds(g.mem_translation("f", 1, 2, 1), f=f) is member
    assert holds(g.unified_translation("f", 1, 2, 2), f=f) is member


def test_unified_equality_is_singleton_intersection():
    g = GadgetBuilder()
    for a, b in itertools.product(hf_universe(2, 1).elements, repeat=2):
        f = _coding([(1, singleton(a)), (2, singleton(b))])
        assert holds(g.unified_translation("f", 1, 2, 1), f=f) is (a is b)


def test_guards():
    g = GadgetBuilder()
    f = _coding([(1, singleton(EMPTY, 2)), (2, singleton(EMPTY)), (3, singleton(A0, 2))])
    assert holds(g.fn_guard("f", 3), f=f)
    assert not holds(g.fn_guard("f", 3), f=EMPTY)
    assert not holds(g.fn_guard("f", 3), f=HFSet.of(list(f.elements) + [EMPTY]))
    assert holds(g.size_guard("f", 3), f=f)
    assert not holds(g.size_guard("f", 2), f=f)
    assert holds(g.size_guard("f", 1), f=EMPTY)


def test_fresh_variables_never_shared():
    g = GadgetBuilder()
    made = [g.singleton("y", "x"), g.wiener_pair("p"), g.fn_guard("f", 2),
            g.unified_translation("f", 1, 2, 2)]
    seen = set()
    for gadget in made:
        own = set(variables(gadget.formula)) - set(gadget.interface)
        assert not own & seen
        seen |= own
        assert check_acyclic(gadget.formula).is_acyclic
        assert set(free_vars(gadget.formula)) == set(gadget.interface)
