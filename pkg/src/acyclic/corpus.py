"""Deterministic random stratified formulas for property checks."""
from __future__ import annotations

import random

from acyclic.analysis import StratFailure, stratify
from acyclic.formula import (
    And, Eq, Exists, Forall, Formula, Implies, Mem, Not, Or, parse, rectify,
    render, variables,
)

WORKED_EXAMPLES = (
    "x in y & z in y",
    "x in y & z in y & w in x & w in z",
    "r in s",
    "x = y",
    "E x. (x in y & A z. z in x -> z in w)",
)

POOL = ("x", "y", "z", "w")


def _atom(rng, names):
    a, b = rng.choice(names), rng.choice(names)
    if rng.random() < 0.3:
        return Eq(a, b)
    return Mem(a, b)


def _combine(rng, parts):
    while len(parts) > 1:
        i = rng.randrange(len(parts) - 1)
        left, right = parts[i], parts[i + 1]
        op = rng.choice((And, And, Or, Implies))
        parts[i:i + 2] = [op(left, right)]
    return parts[0]


def _negate_some(rng, f):
    if isinstance(f, (Mem, Eq)):
        return Not(f) if rng.random() < 0.2 else f
    if isinstance(f, Not):
        return Not(_negate_some(rng, f.body))
    if isinstance(f, (And, Or, Implies)):
        out = type(f)(_negate_some(rng, f.left), _negate_some(rng, f.right))
        return Not(out) if rng.random() < 0.1 else out
    return type(f)(f.var, _negate_some(rng, f.body))


def _subterms(f, path=()):
    yield path, f
    if isinstance(f, Not):
        yield from _subterms(f.body, path + ("body",))
    elif isinstance(f, (And, Or, Implies)):
        yield from _subterms(f.left, path + ("left",))
        yield from _subterms(f.right, path + ("right",))
    elif isinstance(f, (Exists, Forall)):
        yield from _subterms(f.body, path + ("body",))


def _replace(f, path, new):
    if not path:
        return new
    head, rest = path[0], path[1:]
    if isinstance(f, Not):
        return Not(_replace(f.body, rest, new))
    if isinstance(f, (Exists, Forall)):
        return type(f)(f.var, _replace(f.body, rest, new))
    if head == "left":
        return type(f)(_replace(f.left, rest, new), f.right)
    return type(f)(f.left, _replace(f.right, rest, new))


def random_formula(rng: random.Random, max_vars=4, max_atoms=4, quantifiers=0) -> Formula:
    names = list(POOL[:rng.randint(1, max_vars)])
    body = _negate_some(rng, _combine(rng, [_atom(rng, names)
                                            for _ in range(rng.randint(1, max_atoms))]))
    for _ in range(quantifiers):
        spots = list(_subterms(body))
        path, sub = rng.choice(spots)
        q = rng.choice((Exists, Forall))
        body = _replace(body, path, q(rng.choice(names), sub))
    return body


def stratified_corpus(count: int, seed: int = 0, max_vars=4, max_atoms=4,
                      max_quantifiers=2, quantified: bool = None) -> list:
    """``count`` distinct stratified formulas.

    Variables are counted after renaming bound variables apart, so
    ``x in y & E x. x = y`` has three.  ``quantified`` forces (True) or
    forbids (False) quantifiers; by default both kinds are mixed.
    """
    rng = random.Random(seed)
    out, seen = [], set()
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > 10000 * count:
            raise RuntimeError("could not generate enough stratified formulas")
        if quantified is None:
            k = rng.randint(0, max_quantifiers)
        elif quantified:
            k = rng.randint(1, max_quantifiers)
        else:
            k = 0
        f = random_formula(rng, max_vars, max_atoms, k)
        text = render(f)
        if (text in seen or len(variables(rectify(f))) > max_vars
                or isinstance(stratify(f), StratFailure)):
            continue
        seen.add(text)
        out.append(f)
    return out


def worked_examples() -> list:
    return [parse(t) for t in WORKED_EXAMPLES]


__all__ = ["POOL", "WORKED_EXAMPLES", "random_formula", "stratified_corpus", "worked_examples"]
