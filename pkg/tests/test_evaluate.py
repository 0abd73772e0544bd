import itertools
import random

import pytest

from acyclic.corpus import random_formula
from acyclic.evaluate import Evaluator, UnboundVariable, evaluate
from acyclic.formula import free_vars, parse
from acyclic.gadgets import GadgetBuilder
from acyclic.hf import (
    EMPTY, HFSet, closure_universe, hf_universe, singleton, wiener_pair,
)


def test_basic_truths(v3):
    one = singleton(EMPTY)
    assert evaluate(parse("x in y"), v3, {"x": EMPTY, "y": one})
    assert not evaluate(parse("y in x"), v3, {"x": EMPTY, "y": one})
    assert evaluate(parse("E z. z in y & z = x"), v3, {"x": EMPTY, "y": one})
    assert evaluate(parse("x = 0", allow_constant=True), v3, {"x": EMPTY})


def test_atoms_are_empty_but_distinct():
    u = hf_universe(1, 1)
    a = HFSet.atom(0)
    assert evaluate(parse("A y. ~(y in x)"), u, {"x": a})
    assert not evaluate(parse("x = 0", allow_constant=True), u, {"x": a})
    assert not evaluate(parse("x = y"), u, {"x": a, "y": EMPTY})


def test_unbound_variable(v3):
    with pytest.raises(UnboundVariable):
        evaluate(parse("x in y"), v3, {"x": EMPTY})


def test_domain_override(v3):
    f = parse("E x. x in y")
    y = HFSet.of([singleton(EMPTY, 2)])
    u = closure_universe([y])
    assert evaluate(f, u, {"y": y})
    assert not evaluate(f, u, {"y": y}, domains={"x": [EMPTY]})


def _agree(f, universe, domains=None):
    fast, slow = Evaluator(f), Evaluator(f, optimize=False)
    fv = free_vars(f)
    for vals in itertools.product(universe.elements, repeat=len(fv)):
        a = dict(zip(fv, vals))
        assert fast.holds(universe, a, domains) == slow.holds(universe, a, domains), (f, a)


def test_optimised_matches_plain_on_random_formulas(v3):
    rng = random.Random(5)
    u = hf_universe(2, 1)
    for _ in range(150):
        f = random_formula(rng, max_vars=3, max_atoms=4, quantifiers=rng.randint(0, 3))
        _agree(f, v3)
        _agree(f, u)


def test_optimised_matches_plain_with_domains(v3):
    rng = random.Random(6)
    for _ in range(60):
        f = random_formula(rng, max_vars=3, max_atoms=3, quantifiers=2)
        _agree(f, v3, domains={"x": v3.elements[:2], "y": v3.elements[1:]})


@pytest.mark.parametrize("make", [
    lambda g: g.singleton("y", "x"),
    lambda g: g.iter_singleton("y", "x", 2),
    lambda g: g.iter_element("e", "k", 2),
    lambda g: g.iter_empty("y", 1),
    lambda g: g.size_guard("f", 2),
    lambda g: g.subset("a", "b"),
])
def test_optimised_matches_plain_on_gadgets(make, v3):
    _agree(make(GadgetBuilder()).formula, v3)
    _agree(make(GadgetBuilder()).formula, hf_universe(2, 1))


def test_pair_gadget_optimised_matches_plain():
    a, b = HFSet.atom(0), EMPTY
    u = closure_universe([wiener_pair(a, b), wiener_pair(b, a)])
    _agree(GadgetBuilder().proj1("x", "p").formula, u)
