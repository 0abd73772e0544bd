"""Acyclic building blocks.

Every gadget is built from globally fresh auxiliary variables, so the only
variables two gadgets can share are the interface variables passed in by
the caller.  Each :class:`Gadget` is checked for acyclicity and for its
free variables at construction.

Ordered pairs are Wiener pairs ``(a, b) = {{{a}}, {{b}, 0}}``.  The first
component is recognised as the element of the pair that is a singleton of
a singleton; the second component sits inside the element that has an
empty member.  "Empty" always means "has no elements", so atoms count.
"""
from __future__ import annotations

from dataclasses import dataclass

from acyclic.analysis import Acyclic, check_acyclic
from acyclic.formula import (
    EqConst, Eq, Exists, Forall, FreshNames, Formula, Implies, Mem, Not,
    conj, disj, free_vars,
)

PREDICATE = "predicate"
CONSTANT = "constant"


class GadgetError(RuntimeError):
    pass


@dataclass(frozen=True)
class Gadget:
    formula: Formula
    interface: tuple
    certificate: Acyclic = None

    @classmethod
    def certify(cls, formula: Formula, interface) -> "Gadget":
        interface = tuple(interface)
        cert = check_acyclic(formula)
        if not cert.is_acyclic:
            raise GadgetError(f"gadget is cyclic: {cert.describe()}")
        if set(free_vars(formula)) != set(interface):
            raise GadgetError(
                f"gadget free variables {free_vars(formula)} != interface {list(interface)}")
        return cls(formula, interface, cert)


class GadgetBuilder:
    """Builds gadgets drawing auxiliaries from one fresh-name supply.

    ``reading`` fixes how ``iota^n(0)`` is expressed: ``predicate`` says
    "n-fold singleton of some element-less object", ``constant`` uses the
    parameter ``0`` for the canonical empty set.
    """

    def __init__(self, fresh: FreshNames = None, reading: str = PREDICATE):
        if reading not in (PREDICATE, CONSTANT):
            raise ValueError(f"unknown reading {reading!r}")
        self.fresh = fresh if fresh is not None else FreshNames()
        self.reading = reading
        self.count = 0

    def _done(self, formula, *interface) -> Gadget:
        self.count += 1
        return Gadget.certify(formula, interface)

    # -- sets ------------------------------------------------------------

    def empty(self, x: str) -> Gadget:
        """``x`` has no elements."""
        return self._done(self._empty(x), x)

    def _empty(self, x):
        y = self.fresh()
        return Forall(y, Not(Mem(y, x)))

    def singleton(self, y: str, x: str) -> Gadget:
        """``y = {x}``."""
        if y == x:
            raise ValueError("singleton gadget needs two distinct variables")
        return self._done(self._singleton(y, x), y, x)

    def _singleton(self, y, x):
        w, z = self.fresh(), self.fresh()
        return conj(Exists(w, Mem(w, y)), Forall(z, Implies(Mem(z, y), Eq(z, x))))

    def iter_singleton(self, y: str, x: str, n: int) -> Gadget:
        """``y = iota^n(x)`` for ``n >= 1``."""
        if n < 1:
            raise ValueError("iteration count must be positive")
        if y == x:
            raise ValueError("iterated singleton gadget needs two distinct variables")
        return self._done(self._iter_singleton(y, x, n), y, x)

    def _iter_singleton(self, y, x, n):
        if n == 1:
            return self._singleton(y, x)
        u = self.fresh()
        return Exists(u, conj(self._singleton(y, u), self._iter_singleton(u, x, n - 1)))

    def iter_empty(self, y: str, n: int, reading: str = None) -> Gadget:
        """``y = iota^n(0)`` under the chosen reading of ``0``."""
        if n < 0:
            raise ValueError("iteration count must be non-negative")
        return self._done(self._iter_empty(y, n, reading or self.reading), y)

    def _iter_empty(self, y, n, reading):
        if n == 0:
            return EqConst(y) if reading == CONSTANT else self._empty(y)
        u = self.fresh()
        return Exists(u, conj(self._singleton(y, u), self._iter_empty(u, n - 1, reading)))

    def iter_element(self, e: str, k: str, d: int) -> Gadget:
        """``e`` is a ``d``-fold iterated element of ``k``."""
        if d < 1:
            raise ValueError("depth must be positive")
        if e == k:
            raise ValueError("iterated element gadget needs two distinct variables")
        return self._done(self._iter_element(e, k, d), e, k)

    def _iter_element(self, e, k, d):
        if d == 1:
            return Mem(e, k)
        u = self.fresh()
        return Exists(u, conj(Mem(u, k), self._iter_element(e, u, d - 1)))

    # -- Wiener pairs ----------------------------------------------------

    def _has_empty(self, b):
        e = self.fresh()
        return Exists(e, conj(Mem(e, b), self._empty(e)))

    def _first_shape(self, q):
        u = self.fresh()
        return Exists(u, self._iter_singleton(q, u, 2))

    def _second_shape(self, b):
        # b = {{v}, e} with e empty
        s, v, r, v2, c1, r1, c2, r2 = (self.fresh() for _ in range(8))
        return conj(
            self._has_empty(b),
            Exists(s, conj(Mem(s, b), Exists(v, self._singleton(s, v)))),
            Forall(r, Implies(Mem(r, b), disj(self._empty(r),
                                              Exists(v2, self._singleton(r, v2))))),
            Exists(c1, Forall(r1, Implies(conj(Mem(r1, b), self._empty(r1)), Eq(r1, c1)))),
            Exists(c2, Forall(r2, Implies(conj(Mem(r2, b), Not(self._empty(r2))),
                                          Eq(r2, c2)))),
        )

    def wiener_pair(self, p: str) -> Gadget:
        """``p`` is an ordered pair."""
        return self._done(self._wiener_pair(p), p)

    def _wiener_pair(self, p):
        a, b, q1, c1, q2, c2, q3 = (self.fresh() for _ in range(7))
        return conj(
            Exists(a, conj(Mem(a, p), self._first_shape(a))),
            Exists(b, conj(Mem(b, p), self._second_shape(b))),
            Forall(q3, Implies(Mem(q3, p), disj(self._first_shape(q3),
                                                self._second_shape(q3)))),
            Exists(c1, Forall(q1, Implies(conj(Mem(q1, p), self._first_shape(q1)),
                                          Eq(q1, c1)))),
            Exists(c2, Forall(q2, Implies(conj(Mem(q2, p), self._second_shape(q2)),
                                          Eq(q2, c2)))),
        )

    def proj1(self, x: str, p: str) -> Gadget:
        """``x`` is the first component of ``p``."""
        return self._done(self._proj1(x, p), x, p)

    def _proj1(self, x, p):
        a = self.fresh()
        return Exists(a, conj(Mem(a, p), self._iter_singleton(a, x, 2)))

    def proj2(self, x: str, p: str) -> Gadget:
        """``x`` is the second component of ``p``."""
        return self._done(self._value_is(p, x, 0), x, p)

    def _value_is(self, p, x, d):
        # second component of p equals iota^d(x)
        b, s = self.fresh(), self.fresh()
        return Exists(b, conj(
            Mem(b, p), self._has_empty(b),
            Exists(s, conj(Mem(s, b), self._iter_singleton(s, x, d + 1)))))

    def _key_is(self, p, i):
        # first component of p equals iota^i(0)
        a = self.fresh()
        return Exists(a, conj(Mem(a, p), self._iter_empty(a, i + 2, self.reading)))

    def key_is(self, p: str, i: int) -> Gadget:
        """The first component of ``p`` is ``iota^i(0)``."""
        return self._done(self._key_is(p, i), p)

    def value_is(self, p: str, x: str, d: int) -> Gadget:
        """The second component of ``p`` is ``iota^d(x)``."""
        return self._done(self._value_is(p, x, d), p, x)

    # -- coding-function gadgets -------------------------------------------

    def apply_eq(self, f: str, i: int, x: str, d: int) -> Gadget:
        """``f(iota^i(0)) = iota^d(x)``."""
        if i < 1 or d < 1:
            raise ValueError("index and depth must be positive")
        p = self.fresh()
        body = Exists(p, conj(Mem(p, f), self._key_is(p, i), self._value_is(p, x, d)))
        return self._done(body, f, x)

    def _keyed(self, p, i, j):
        return disj(self._key_is(p, i), self._key_is(p, j))

    def eq_translation(self, f: str, i: int, j: int) -> Gadget:
        """``f(iota^i(0)) = f(iota^j(0))``."""
        y, p = self.fresh(), self.fresh()
        body = Exists(y, Forall(p, Implies(
            conj(Mem(p, f), self._keyed(p, i, j)), self._value_is(p, y, 0))))
        return self._done(body, f)

    def mem_translation(self, f: str, i: int, j: int, d: int) -> Gadget:
        """Assuming ``f(iota^i(0)) = iota^(d+1)(x)``: some ``y`` with
        ``f(iota^j(0)) = iota^d(y)`` has ``x in y``."""
        if d < 1:
            raise ValueError("depth must be positive")
        z, p, w = self.fresh(), self.fresh(), self.fresh()
        body = Exists(z, Forall(p, Forall(w, Implies(
            conj(Mem(p, f), self._value_is(p, w, d), self._keyed(p, i, j)),
            Mem(z, w)))))
        return self._done(body, f)

    def unified_translation(self, f: str, i: int, j: int, d: int) -> Gadget:
        """Some ``e`` is a ``d``-fold element of both ``f`` values; covers
        equality and membership atoms alike."""
        if d < 1:
            raise ValueError("depth must be positive")
        e, p, k = self.fresh(), self.fresh(), self.fresh()
        body = Exists(e, Forall(p, Forall(k, Implies(
            conj(Mem(p, f), self._keyed(p, i, j), self._value_is(p, k, 0)),
            self._iter_element(e, k, d)))))
        return self._done(body, f)

    # -- guards ----------------------------------------------------------

    def fn_guard(self, f: str, indices) -> Gadget:
        """``f`` is a function whose domain is exactly ``{iota^i(0)}``.

        ``indices`` is ``n`` (meaning 1..n) or an explicit collection.
        """
        idx = list(range(1, indices + 1)) if isinstance(indices, int) else sorted(indices)
        if not idx:
            raise ValueError("guard needs at least one index")
        p = self.fresh()
        parts = [Forall(p, Implies(Mem(p, f), conj(
            self._wiener_pair(p), disj(*(self._key_is(p, i) for i in idx)))))]
        for i in idx:
            q = self.fresh()
            parts.append(Exists(q, conj(Mem(q, f), self._key_is(q, i))))
        for i in idx:
            y, q = self.fresh(), self.fresh()
            parts.append(Exists(y, Forall(q, Implies(
                conj(Mem(q, f), self._key_is(q, i)), self._value_is(q, y, 0)))))
        return self._done(conj(*parts), f)

    def size_guard(self, f: str, n: int) -> Gadget:
        """``f`` has at most ``n`` elements."""
        if n < 1:
            raise ValueError("size bound must be positive")
        ms = [self.fresh() for _ in range(n)]
        p = self.fresh()
        out = Forall(p, Implies(Mem(p, f), disj(*(Eq(p, m) for m in ms))))
        for m in reversed(ms):
            out = Exists(m, out)
        return self._done(out, f)

    def subset(self, small: str, big: str) -> Gadget:
        """``small`` is a subset of ``big``."""
        q = self.fresh()
        return self._done(Forall(q, Implies(Mem(q, small), Mem(q, big))), small, big)

    def has_key(self, f: str, i: int) -> Gadget:
        """Some element of ``f`` has first component ``iota^i(0)``."""
        p = self.fresh()
        return self._done(Exists(p, conj(Mem(p, f), self._key_is(p, i))), f)

    def agreement(self, fi: str, fj: str) -> Gadget:
        """Pairs of ``fi`` and ``fj`` with a common key have one value."""
        x, y, p = self.fresh(), self.fresh(), self.fresh()
        body = Forall(x, Exists(y, Forall(p, Implies(
            conj(disj(Mem(p, fi), Mem(p, fj)), self._proj1(x, p)),
            self._value_is(p, y, 0)))))
        return self._done(body, fi, fj)
