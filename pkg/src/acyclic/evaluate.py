"""Tarski satisfaction over finite transitively closed universes.

Quantifiers range over the universe (or an explicit per-variable domain).
:class:`Evaluator` compiles a formula once and applies three optimisations
that never change the verdict:

* guard restriction - if ``E x. phi`` can only be true when an atom such
  as ``x in g`` holds (``g`` bound outside), ``x`` ranges over the elements
  of ``g`` only; dually for ``A x`` and the atoms forced by falsity;
* active domain - when ``x`` has no guard but every atom mentioning it
  relates it to a variable whose possible values are computable, all values
  outside that set behave alike and one representative suffices;
* memoisation of quantifier nodes on the values of their free variables,
  plus cheapest-first evaluation of conjunctions and disjunctions.

``Evaluator(f, optimize=False)`` is the plain textbook evaluator; tests
use it as the oracle for the optimised one.
"""
from __future__ import annotations

import sys
from typing import Optional

from acyclic.formula import (
    And, Eq, EqConst, Exists, Formula, Implies, Mem, Not, Or, free_vars,
)
from acyclic.hf import EMPTY, HFSet, Universe

_UNGUARDED_COST = 40


class UnboundVariable(KeyError):
    pass


class _Rec:
    """Compile-time record for one syntax node."""

    __slots__ = ("node", "kind", "kids", "fv", "key", "cost", "var", "refs",
                 "occ", "guards", "active", "enter", "exit", "slot",
                 "enter_order")

    def __init__(self, node, kind):
        self.node = node
        self.kind = kind
        self.kids = []
        self.refs = ()
        self.occ = []
        self.guards = []
        self.active = None


class _Ctx:
    __slots__ = ("elements", "elemset", "parents", "domains", "memos", "key")


class Evaluator:
    """Compiled evaluator for one formula."""

    def __init__(self, formula: Formula, optimize: bool = True):
        if sys.getrecursionlimit() < 20000:
            sys.setrecursionlimit(20000)
        self.formula = formula
        self.optimize = optimize
        self.free = free_vars(formula)
        self._slots = 0
        self._binders = []
        self._counter = 0
        self._atoms = 0
        root = self._analyse(formula, {})
        if optimize:
            self._req_memo = {}
            for b in self._binders:
                self._find_guards(b)
            for b in self._binders:
                if not b.guards:
                    b.active = self._active_domain(b)
        self._cost(root)
        self._ctx = _Ctx()
        self._ctx.key = None
        self._fn = self._build(root)

    # -- analysis --------------------------------------------------------

    def _analyse(self, node, scope):
        if isinstance(node, (Mem, Eq, EqConst)):
            kind = type(node).__name__
            r = _Rec(node, kind)
            names = (node.lhs,) if isinstance(node, EqConst) else (node.lhs, node.rhs)
            r.refs = tuple((n, scope.get(n)) for n in names)
            r.fv = frozenset(names)
            self._atoms += 1
            r.enter_order = self._atoms
            for n, b in r.refs:
                if b is not None:
                    b.occ.append(r)
            return r
        if isinstance(node, Not):
            r = _Rec(node, "not")
            r.kids = [self._analyse(node.body, scope)]
            r.fv = r.kids[0].fv
            return r
        if isinstance(node, (And, Or)):
            # flatten chains of the same connective
            kind = "and" if isinstance(node, And) else "or"
            r = _Rec(node, kind)
            stack, parts = [node], []
            while stack:
                n = stack.pop()
                if type(n) is type(node):
                    stack.append(n.right)
                    stack.append(n.left)
                else:
                    parts.append(n)
            r.kids = [self._analyse(p, scope) for p in parts]
            r.fv = frozenset().union(*(k.fv for k in r.kids))
            return r
        if isinstance(node, Implies):
            r = _Rec(node, "implies")
            r.kids = [self._analyse(node.left, scope), self._analyse(node.right, scope)]
            r.fv = r.kids[0].fv | r.kids[1].fv
            return r
        r = _Rec(node, "exists" if isinstance(node, Exists) else "forall")
        r.var = node.var
        self._counter += 1
        r.enter = self._counter
        self._binders.append(r)
        r.kids = [self._analyse(node.body, {**scope, node.var: r})]
        r.exit = self._counter
        r.fv = r.kids[0].fv - {node.var}
        r.key = tuple(sorted(r.fv))
        r.slot = self._slots
        self._slots += 1
        return r

    def _required(self, r, pol):
        """Clauses (sets of atoms, one of which must hold) forced whenever
        ``r`` evaluates to ``pol``."""
        k = (id(r), pol)
        got = self._req_memo.get(k)
        if got is not None:
            return got
        kind = r.kind
        if kind in ("Mem", "Eq", "EqConst"):
            out = frozenset((frozenset((r,)),)) if pol else frozenset()
        elif kind == "not":
            out = self._required(r.kids[0], not pol)
        elif kind in ("and", "or"):
            sets = [self._required(c, pol) for c in r.kids]
            out = _union(sets) if (kind == "and") == pol else _product(sets)
        elif kind == "implies":
            if pol:
                out = _product([self._required(r.kids[0], False),
                                self._required(r.kids[1], True)])
            else:
                out = _union([self._required(r.kids[0], True),
                              self._required(r.kids[1], False)])
        else:
            inner = self._required(r.kids[0], pol)
            out = frozenset(c for c in inner
                            if all(b is not r for a in c for _, b in a.refs))
        self._req_memo[k] = out
        return out

    def _find_guards(self, b):
        """Each guard is a tuple of alternatives ``(kind, partner, binder)``;
        the variable's relevant values lie in the union of their ranges."""
        pol = b.kind == "exists"
        for clause in self._required(b.kids[0], pol):
            alts = []
            for a in sorted(clause, key=lambda a: a.enter_order):
                alt = _guard_alternative(a, b)
                if alt is None:
                    break
                alts.append(alt)
            else:
                b.guards.append(tuple(alts))
        order = {"const": 0, "eq": 0, "elem": 1, "parent": 2}
        b.guards.sort(key=lambda g: (len(g), max(order[k] for k, _, _ in g),
                                     tuple(str(p) for _, p, _ in g)))

    def _inside(self, inner, outer):
        return inner is not None and outer.enter < inner.enter <= outer.exit

    def _chains(self, t_name, t_binder, x, budget=16):
        """Alternatives ``(anchor, steps)`` whose union over-approximates
        the values ``t`` takes, anchored outside ``x``; ``None`` if there
        is no such description."""
        if t_binder is x:
            return None
        if not self._inside(t_binder, x):
            return [(t_name, [])]
        if not t_binder.guards:
            return None
        out = []
        for kind, pname, pbinder in t_binder.guards[0]:
            if kind == "const":
                out.append((None, []))
                continue
            sub = self._chains(pname, pbinder, x, budget)
            if sub is None:
                return None
            out.extend((anchor, steps + [kind]) for anchor, steps in sub)
            if len(out) > budget:
                return None
        return out

    def _active_domain(self, x):
        contributions = []
        for a in x.occ:
            if a.kind == "EqConst":
                contributions.append((None, []))
                continue
            (ln, lb), (rn, rb) = a.refs
            if lb is x and rb is x:
                return None
            if lb is x:
                pname, pbinder, rel = rn, rb, ("elem" if a.kind == "Mem" else "eq")
            else:
                pname, pbinder, rel = ln, lb, ("parent" if a.kind == "Mem" else "eq")
            chains = self._chains(pname, pbinder, x)
            if chains is None:
                return None
            contributions.extend((anchor, steps + [rel]) for anchor, steps in chains)
        return contributions

    def _cost(self, r):
        kind = r.kind
        if kind in ("Mem", "Eq", "EqConst"):
            r.cost = 1
        elif kind in ("not", "and", "or", "implies"):
            r.cost = 1 + sum(self._cost(k) for k in r.kids)
        else:
            body = self._cost(r.kids[0])
            if r.guards:
                weights = {"const": 1, "eq": 1, "elem": 3, "parent": 5}
                factor = sum(weights[k] for k, _, _ in r.guards[0])
            elif r.active is not None:
                factor = 6
            else:
                factor = _UNGUARDED_COST
            r.cost = 1 + factor * body
        return r.cost

    # -- code generation -------------------------------------------------

    def _build(self, r):
        kind = r.kind
        if kind == "Mem":
            a, b = r.node.lhs, r.node.rhs
            return lambda env: env[a] in env[b].elements
        if kind == "Eq":
            a, b = r.node.lhs, r.node.rhs
            return lambda env: env[a] is env[b]
        if kind == "EqConst":
            a = r.node.lhs
            return lambda env: env[a] is EMPTY
        if kind == "not":
            c = self._build(r.kids[0])
            return lambda env: not c(env)
        if kind in ("and", "or"):
            kids = sorted(r.kids, key=lambda k: k.cost) if self.optimize else r.kids
            fns = tuple(self._build(k) for k in kids)
            if kind == "and":
                def conj(env):
                    for fn in fns:
                        if not fn(env):
                            return False
                    return True
                return conj

            def disj(env):
                for fn in fns:
                    if fn(env):
                        return True
                return False
            return disj
        if kind == "implies":
            left, right = (self._build(k) for k in r.kids)
            if self.optimize and r.kids[1].cost < r.kids[0].cost:
                return lambda env: right(env) or not left(env)
            return lambda env: (not left(env)) or right(env)
        return self._build_quantifier(r)

    def _build_quantifier(self, r):
        body = self._build(r.kids[0])
        var = r.var
        want = r.kind == "exists"
        key_vars = r.key
        slot = r.slot
        guards = r.guards
        active = r.active
        ctx = self._ctx
        optimize = self.optimize

        def domain(env):
            over = ctx.domains.get(var) if ctx.domains else None
            if guards:
                best = None
                for guard in guards:
                    cand = ()
                    for kind, pname, _ in guard:
                        if kind == "eq":
                            part = (env[pname],)
                        elif kind == "const":
                            part = (EMPTY,) if EMPTY in ctx.elemset else ()
                        elif kind == "elem":
                            part = env[pname].members
                        else:
                            part = ctx.parents[env[pname]]
                        cand = part if not cand else tuple(dict.fromkeys(cand + part))
                    if best is None or len(cand) < len(best):
                        best = cand
                if over is not None:
                    best = [v for v in best if v in over[1]]
                return best
            if active is not None:
                base, baseset = over if over is not None else (ctx.elements, ctx.elemset)
                seen = set()
                for anchor, steps in active:
                    vals = {EMPTY} if anchor is None else {env[anchor]}
                    for st in steps:
                        if st == "elem":
                            vals = {e for v in vals for e in v.elements}
                        elif st == "parent":
                            vals = {p for v in vals for p in ctx.parents.get(v, ())}
                    seen |= vals
                dom = [v for v in seen if v in baseset]
                for v in base:
                    if v not in seen:
                        dom.append(v)
                        break
                return dom
            if over is not None:
                return over[0]
            return ctx.elements

        def quant(env):
            if optimize:
                memo = ctx.memos[slot]
                k = tuple([env[v] for v in key_vars])
                got = memo.get(k)
                if got is not None:
                    return got
            saved = env.get(var, _MISSING)
            result = not want
            for val in (domain(env) if optimize else _plain_domain(ctx, var)):
                env[var] = val
                if body(env) is want:
                    result = want
                    break
            if saved is _MISSING:
                env.pop(var, None)
            else:
                env[var] = saved
            if optimize:
                memo[k] = result
            return result

        return quant

    # -- public ------------------------------------------------------------

    def _prepare(self, universe: Universe, domains):
        dkey = None
        if domains:
            dkey = tuple(sorted((k, tuple(v)) for k, v in domains.items()))
        key = (universe, dkey)
        ctx = self._ctx
        if ctx.key is not None and ctx.key[0] is universe and ctx.key[1] == dkey:
            return
        ctx.key = key
        ctx.elements = universe.elements
        ctx.elemset = universe.element_set
        ctx.parents = universe.parents if self.optimize else None
        ctx.domains = ({k: (tuple(v), frozenset(v)) for k, v in domains.items()}
                       if domains else None)
        ctx.memos = [dict() for _ in range(self._slots)]

    def holds(self, universe: Universe, assignment: dict,
              domains: Optional[dict] = None) -> bool:
        """Truth of the formula under ``assignment``.

        ``domains`` optionally fixes the range of quantifiers binding the
        named variables (used to keep original variables on the base model).
        """
        missing = [v for v in self.free if v not in assignment]
        if missing:
            raise UnboundVariable(f"unbound variable(s): {', '.join(missing)}")
        self._prepare(universe, domains)
        return self._fn(dict(assignment))


_MISSING = object()


def _plain_domain(ctx, var):
    if ctx.domains and var in ctx.domains:
        return ctx.domains[var][0]
    return ctx.elements


def _union(sets):
    return frozenset().union(*sets)


def _product(sets, limit=64):
    """Disjunction of clause sets: one clause from each, merged."""
    out = {frozenset()}
    for clauses in sets:
        if not clauses:
            return frozenset()
        out = {a | c for a in out for c in clauses}
        if len(out) > limit:
            return frozenset()
    return frozenset(out)


def _guard_alternative(a, b):
    refs = a.refs
    if a.kind == "EqConst":
        return ("const", None, None) if refs[0][1] is b else None
    (ln, lb), (rn, rb) = refs
    if lb is b and rb is b:
        return None
    if lb is b:
        return ("elem" if a.kind == "Mem" else "eq", rn, rb)
    if rb is b:
        return ("parent" if a.kind == "Mem" else "eq", ln, lb)
    return None


def evaluate(f: Formula, universe: Universe, assignment: dict,
             domains: Optional[dict] = None, optimize: bool = True) -> bool:
    """One-shot convenience wrapper around :class:`Evaluator`."""
    return Evaluator(f, optimize=optimize).holds(universe, assignment, domains)


__all__ = ["Evaluator", "UnboundVariable", "evaluate", "HFSet"]
