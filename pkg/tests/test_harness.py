import random

import pytest

from acyclic.evaluate import evaluate
from acyclic.formula import parse
from acyclic.gadgets import GadgetBuilder
from acyclic.harness import (
    adversary, build_coding_function, check_equivalence, rank_bound,
    verify_translation,
)
from acyclic.hf import (
    EMPTY, HFSet, closure_universe, hf_universe, singleton, wiener_pair,
)
from acyclic.translate import TranslationOptions, translate

A0, A1, A2, A3 = (HFSet.atom(i) for i in range(4))


def pair(i, value, depth):
    return wiener_pair(singleton(EMPTY, i), singleton(value, depth))


def test_coding_function_three_variables():
    indices = {"x": 1, "y": 2, "z": 3}
    depths = {"x": 2, "y": 1, "z": 2}
    f = build_coding_function({"x": A0, "y": A1, "z": A2}, indices, depths)
    assert f is HFSet.of([pair(1, A0, 2), pair(2, A1, 1), pair(3, A2, 2)])


def test_coding_function_forster():
    indices = {"x": 1, "y": 2, "z": 3, "w": 4}
    depths = {"x": 2, "y": 1, "z": 2, "w": 3}
    a = {"x": A0, "y": A1, "z": A2, "w": A3}
    f = build_coding_function(a, indices, depths)
    assert f is HFSet.of([pair(1, A0, 2), pair(2, A1, 1), pair(3, A2, 2), pair(4, A3, 3)])


def test_coding_function_single():
    f = build_coding_function({"x": A0}, {"x": 1}, {"x": 1})
    assert f is HFSet.of([wiener_pair(singleton(EMPTY), singleton(A0))])


def test_rank_bound_examples():
    indices, depths = {"r": 1, "s": 2}, {"r": 2, "s": 1}
    for r, s in [(EMPTY, EMPTY), (A0, EMPTY), (EMPTY, A1)]:
        a = {"r": r, "s": s}
        assert rank_bound(indices, depths, a) == 7
        assert build_coding_function(a, indices, depths).rank <= 7
    # rank(0) is 1, so the lone pair (iota(0), iota(0)) sits at rank 5 and f at 6
    assert rank_bound({"x": 1}, {"x": 1}, {"x": EMPTY}) == 6
    f = build_coding_function({"x": EMPTY}, {"x": 1}, {"x": 1})
    assert f.rank == 6


def test_rank_bound_is_an_upper_bound():
    rng = random.Random(2)
    pool = hf_universe(3).elements + hf_universe(1, 2).elements
    for _ in range(300):
        names = ["x", "y", "z", "w"][:rng.randint(1, 4)]
        indices = {v: i for i, v in enumerate(names, 1)}
        depths = {v: rng.randint(1, 4) for v in names}
        a = {v: rng.choice(pool) for v in names}
        assert build_coding_function(a, indices, depths).rank <= rank_bound(indices, depths, a)


def test_coding_function_satisfies_guards_and_idents():
    g = GadgetBuilder()
    indices = {"x": 1, "y": 2, "z": 3}
    depths = {"x": 2, "y": 1, "z": 2}
    base = hf_universe(2).elements
    for x in base:
        for y in base:
            a = {"x": x, "y": y, "z": EMPTY}
            f = build_coding_function(a, indices, depths)
            u = closure_universe([f])
            assert evaluate(g.fn_guard("f", 3).formula, u, {"f": f})
            assert evaluate(g.size_guard("f", 3).formula, u, {"f": f})
            for v in a:
                ident = g.apply_eq("f", indices[v], "v", depths[v]).formula
                assert evaluate(ident, u, {"f": f, "v": a[v]})


def test_worked_example_agrees(v3):
    phi = parse("x in y & z in y")
    result = verify_translation(phi, translate(phi), v3)
    assert result.checked == 64
    assert result.ok


def test_identity_trivially_agrees(v3):
    phi = parse("E z. z in x & ~(z = y)")
    assert check_equivalence(phi, phi, v3).ok


def test_dropped_ident_is_caught(v3):
    phi = parse("x = y")
    r = translate(phi, TranslationOptions(mutate="drop-ident"))
    result = verify_translation(phi, r, v3)
    assert not result.ok
    d = result.disagreements[0]
    assert result.replay(d, report=r) == (d.original, d.translated)
    assert "disagree [" in result.summary()


def test_larger_enrichment_keeps_verdicts(v3):
    phi = parse("x in y & z in y")
    r = translate(phi)
    plain = verify_translation(phi, r, v3)
    bigger = verify_translation(phi, r, v3, extra=lambda a: hf_universe(4).elements)
    assert min(bigger.universe_sizes) > max(plain.universe_sizes)
    assert [v for _, _, v in plain.verdicts] == [v for _, _, v in bigger.verdicts]


def test_nested_modes_agree(v3):
    phi = parse("E x. (x in y & A z. z in x -> z in w)")
    for mode in ("nested", "nested-agreement"):
        r = translate(phi, TranslationOptions(pipeline=mode))
        assert verify_translation(phi, r, v3).ok


def test_nonextensional_base():
    base = hf_universe(1, 2)
    for text in ("x = y", "x in y"):
        phi = parse(text)
        for reading in ("predicate", "constant"):
            r = translate(phi, TranslationOptions(reading=reading))
            assert verify_translation(phi, r, base).ok


def test_merged_key_element_defeats_size_guard_with_separate_atoms(v3):
    # one non-pair element carrying both keys satisfies both identification
    # conjuncts and the size bound, and the separate equality translation
    # then accepts distinct values; the function guard rejects it
    phi = parse("x = y")
    weak = translate(phi, TranslationOptions(guard="size", atom_mode="separate"))
    strong = translate(phi, TranslationOptions(guard="fn", atom_mode="separate"))
    assert not verify_translation(phi, weak, v3, extra=adversary(weak, v3)).ok
    assert verify_translation(phi, strong, v3, extra=adversary(strong, v3)).ok


def test_free_variable_mismatch_rejected(v3):
    with pytest.raises(ValueError):
        check_equivalence(parse("x in y"), parse("x in z"), v3)
