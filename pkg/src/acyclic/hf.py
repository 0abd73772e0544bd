"""Hereditarily finite sets over a pool of atoms, and finite universes.

Values are interned: two structurally equal sets are the same object, so
membership and equality reduce to identity tests.  Atoms are element-less
but distinct from the canonical empty set and from each other, which is how
non-extensional models with several empty objects are represented.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

DEFAULT_CAP = 100_000


class HFSet:
    __slots__ = ("elements", "atom_id", "rank", "sort_key", "_members", "__weakref__")

    _table: dict = {}

    def __new__(cls, *args, **kwargs):
        raise TypeError("use HFSet.atom() or HFSet.of()")

    @classmethod
    def _intern(cls, key, elements, atom_id):
        obj = cls._table.get(key)
        if obj is None:
            obj = object.__new__(cls)
            obj.elements = elements
            obj.atom_id = atom_id
            if atom_id is not None:
                obj.rank = 0
                obj.sort_key = (0, 0, atom_id)
            else:
                ordered = sorted(elements, key=_key)
                obj.rank = 1 + max((e.rank for e in ordered), default=0)
                obj.sort_key = (obj.rank, 1, tuple(e.sort_key for e in ordered))
                obj._members = tuple(ordered)
            cls._table[key] = obj
        return obj

    @classmethod
    def atom(cls, i: int) -> "HFSet":
        return cls._intern(("atom", i), frozenset(), i)

    @classmethod
    def of(cls, elements: Iterable["HFSet"] = ()) -> "HFSet":
        els = frozenset(elements)
        return cls._intern(els, els, None)

    @property
    def is_atom(self) -> bool:
        return self.atom_id is not None

    @property
    def members(self) -> tuple:
        """Elements in canonical order."""
        return () if self.atom_id is not None else self._members

    def __contains__(self, x) -> bool:
        return x in self.elements

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.elements)

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    def __reduce__(self):
        if self.atom_id is not None:
            return (HFSet.atom, (self.atom_id,))
        return (HFSet.of, (self.members,))

    def __repr__(self):
        return f"HFSet({self})"

    def __str__(self):
        if self.atom_id is not None:
            return f"a{self.atom_id}"
        return "{" + ",".join(str(e) for e in self.members) + "}"


def _key(x: HFSet):
    return x.sort_key


EMPTY = HFSet.of()


def singleton(x: HFSet, n: int = 1) -> HFSet:
    """``n``-fold iterated singleton of ``x``."""
    for _ in range(n):
        x = HFSet.of((x,))
    return x


def wiener_pair(a: HFSet, b: HFSet, empty: HFSet = EMPTY) -> HFSet:
    """``(a, b) = {{{a}}, {{b}, 0}}``."""
    return HFSet.of((singleton(a, 2), HFSet.of((singleton(b), empty))))


def is_empty(x: HFSet) -> bool:
    return not x.elements


def parse_hf(text: str) -> HFSet:
    """Read ``{}``, ``a0`` or ``{e1,e2,...}``."""
    tokens = re.findall(r"a\d+|[{},]|\S", text)
    pos = 0

    def go():
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError(f"truncated set term {text!r}")
        tok = tokens[pos]
        pos += 1
        if re.fullmatch(r"a\d+", tok):
            return HFSet.atom(int(tok[1:]))
        if tok != "{":
            raise ValueError(f"bad set term {text!r} at {tok!r}")
        items = []
        if tokens[pos:pos + 1] == ["}"]:
            pos += 1
            return EMPTY
        while True:
            items.append(go())
            if pos >= len(tokens):
                raise ValueError(f"truncated set term {text!r}")
            tok = tokens[pos]
            pos += 1
            if tok == "}":
                return HFSet.of(items)
            if tok != ",":
                raise ValueError(f"bad set term {text!r} at {tok!r}")

    out = go()
    if pos != len(tokens):
        raise ValueError(f"trailing input in set term {text!r}")
    return out


# ---------------------------------------------------------------------------
# universes

class CapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class Universe:
    """Finite, transitively closed carrier used as the quantifier range."""

    elements: tuple

    @cached_property
    def element_set(self) -> frozenset:
        return frozenset(self.elements)

    @cached_property
    def atom_count(self) -> int:
        return sum(1 for e in self.elements if e.is_atom)

    @property
    def extensional(self) -> bool:
        return self.atom_count == 0

    @cached_property
    def parents(self) -> dict:
        """Map each element to the members of the universe containing it."""
        out = {e: [] for e in self.elements}
        for s in self.elements:
            for x in s.members:
                out[x].append(s)
        return {k: tuple(v) for k, v in out.items()}

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return x in self.element_set

    def __iter__(self):
        return iter(self.elements)

    def is_transitive(self) -> bool:
        return all(x in self.element_set for s in self.elements for x in s.elements)


def hf_size(max_rank: int, atom_count: int) -> int:
    """Number of objects of rank at most ``max_rank``; may be astronomically large."""
    size = atom_count
    for _ in range(max_rank):
        if size > 64:
            return float("inf")
        size = atom_count + 2 ** size
    return size


def hf_universe(max_rank: int, atom_count: int = 0, cap: int = DEFAULT_CAP) -> Universe:
    """Every object of rank <= ``max_rank`` over ``atom_count`` atoms.

    Atoms have rank 0 and the empty set rank 1.
    """
    if max_rank < 0 or atom_count < 0:
        raise ValueError("rank and atom count must be non-negative")
    total = hf_size(max_rank, atom_count)
    if total > cap:
        shown = "more than 2**64" if total == float("inf") else str(total)
        raise CapExceeded(
            f"rank {max_rank} with {atom_count} atoms has {shown} elements (cap {cap})")
    atoms_ = [HFSet.atom(i) for i in range(atom_count)]
    level = list(atoms_)
    for _ in range(max_rank):
        nxt = list(atoms_)
        n = len(level)
        for mask in range(2 ** n):
            nxt.append(HFSet.of(level[i] for i in range(n) if mask >> i & 1))
        level = nxt
    return Universe(tuple(sorted(set(level), key=_key)))


def transitive_closure(seeds: Iterable[HFSet]) -> set:
    out = set()
    stack = list(seeds)
    while stack:
        x = stack.pop()
        if x not in out:
            out.add(x)
            stack.extend(x.elements)
    return out


def closure_universe(seeds: Iterable[HFSet]) -> Universe:
    return Universe(tuple(sorted(transitive_closure(seeds), key=_key)))
