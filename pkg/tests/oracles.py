"""Direct set-level meaning of each gadget, used as the reference."""
import itertools

from acyclic.hf import (
    EMPTY, HFSet, Universe, closure_universe, hf_universe, is_empty, singleton,
    wiener_pair,
)


def is_singleton_of(y, x):
    return y.elements == frozenset([x])


def is_iter_singleton(y, x, n):
    return y is singleton(x, n)


def iterated_elements(k, d):
    level = {k}
    for _ in range(d):
        level = {e for s in level for e in s.elements}
    return level


def is_pair(p):
    """``{{{a}}, {{b}, e}}`` with ``e`` any element-less object."""
    if len(p) != 2:
        return False
    firsts = [q for q in p if len(q) == 1 and len(next(iter(q))) == 1]
    seconds = [q for q in p if len(q) == 2
               and sum(is_empty(r) for r in q) == 1
               and sum(len(r) == 1 for r in q) == 1]
    return len(firsts) == 1 and len(seconds) == 1


def first_is(x, p):
    return singleton(x, 2) in p


def second_is(x, p, d=0):
    target = singleton(x, d + 1)
    return any(any(is_empty(r) for r in b) and target in b for b in p)


def key_is(p, i, empty_objects):
    return any(singleton(e, i + 2) in p for e in empty_objects)


def oracle_universe():
    """Everything of rank <= 4 with no atoms, rank <= 2 over two atoms, and
    genuine and near-miss pairs over the rank-1 two-atom sets."""
    small = hf_universe(1, 2).elements
    a0, a1 = HFSet.atom(0), HFSet.atom(1)
    seeds = set(hf_universe(4).elements) | set(hf_universe(2, 2).elements)
    for a, b in itertools.product(small, repeat=2):
        seeds.add(wiener_pair(a, b))
        seeds.add(wiener_pair(a, b, empty=a0))
    for a, b in itertools.product(small[:4], repeat=2):
        good = wiener_pair(a, b)
        seeds.add(HFSet.of(list(good.elements) + [singleton(a1, 2)]))
        seeds.add(HFSet.of([singleton(a, 2)]))
        seeds.add(HFSet.of([singleton(a, 2), HFSet.of([singleton(b), EMPTY, a1])]))
        seeds.add(HFSet.of([singleton(a, 2), HFSet.of([singleton(b), singleton(a)])]))
        seeds.add(HFSet.of([singleton(a, 3), HFSet.of([singleton(b), EMPTY])]))
    return closure_universe(seeds)
