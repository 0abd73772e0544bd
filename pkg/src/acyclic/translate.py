"""Translation of stratified formulas into acyclic ones.

Every variable ``x_i`` of the input is coded inside a single finite function
``f`` mapping ``iota^i(0)`` to ``iota^d(x_i)``, where ``d`` is the negated
stratification type of ``x_i``.  Atoms become statements about two values
of ``f`` whose only shared variable is ``f``, so the variable graph of the
output is a tree hanging off ``f``.

Two pipelines are provided.  ``prenex`` pulls every quantifier to the front
and wraps the matrix in one ``E f``.  ``nested`` keeps the quantifier
structure and introduces a fresh coding function after each quantifier
block, chained to the enclosing one either by inclusion (cumulative) or by
an agreement clause (``nested-agreement``).
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

from acyclic.analysis import (
    Acyclic, StratFailure, Stratification, check_acyclic, prenex, reprefix,
    stratify,
)
from acyclic.formula import (
    ATOMS, BINARY, Eq, EqConst, Exists, Forall, Formula, FreshNames, Implies,
    Mem, Not, conj, free_vars, rectify, size, variables,
)
from acyclic.gadgets import CONSTANT, PREDICATE, GadgetBuilder

GUARDS = ("fn", "size")
ATOM_MODES = ("separate", "unified")
READINGS = (PREDICATE, CONSTANT)
PIPELINES = ("prenex", "nested", "nested-agreement")
MUTATIONS = ("drop-ident",)


class NotStratified(ValueError):
    def __init__(self, failure: StratFailure):
        super().__init__(f"formula is not stratified: {failure.describe()}")
        self.failure = failure


class TranslationError(RuntimeError):
    pass


@dataclass(frozen=True)
class TranslationOptions:
    guard: str = "size"
    atom_mode: str = "unified"
    reading: str = PREDICATE
    pipeline: str = "prenex"
    mutate: str = None

    def __post_init__(self):
        for value, allowed, what in ((self.guard, GUARDS, "guard"),
                                     (self.atom_mode, ATOM_MODES, "atom mode"),
                                     (self.reading, READINGS, "reading"),
                                     (self.pipeline, PIPELINES, "pipeline")):
            if value not in allowed:
                raise ValueError(f"unknown {what} {value!r}; expected one of {allowed}")
        if self.mutate is not None and self.mutate not in MUTATIONS:
            raise ValueError(f"unknown mutation {self.mutate!r}")

    @property
    def uses_constant(self) -> bool:
        return self.reading == CONSTANT


@dataclass(frozen=True)
class CodingScope:
    """One coding function of the output and the variables it codes."""

    name: str
    variables: tuple


@dataclass
class TranslationReport:
    source: Formula
    output: Formula
    options: TranslationOptions
    stratification: Stratification
    indices: dict
    gadget_count: int
    fresh_consumed: int
    certificate: Acyclic
    scopes: list = field(default_factory=list)

    @property
    def depths(self) -> dict:
        return {v: -t for v, t in self.stratification.types.items()}

    def table(self) -> str:
        lines = [f"pipeline: {self.options.pipeline}",
                 f"guard: {self.options.guard}",
                 f"atoms: {self.options.atom_mode}",
                 f"empties: {self.options.reading}",
                 "variables:"]
        for v, i in self.indices.items():
            lines.append(f"  {v}  index {i}  type {self.stratification[v]}")
        lines.append("coding functions:")
        for s in self.scopes:
            lines.append(f"  {s.name}: {', '.join(s.variables)}")
        lines.append(f"gadgets: {self.gadget_count}")
        lines.append(f"fresh variables: {self.fresh_consumed}")
        lines.append(f"output size: {size(self.output)}")
        lines.append(f"acyclic: vertices {self.certificate.vertices}, "
                     f"edges {self.certificate.edges}")
        return "\n".join(lines) + "\n"


class _Run:
    """State of one translation: fresh names, types, indices, gadgets."""

    def __init__(self, phi: Formula, opts: TranslationOptions):
        self.opts = opts
        self.fresh = FreshNames(reserved=variables(phi))
        self.rectified = rectify(phi, self.fresh)
        self.gadgets = GadgetBuilder(self.fresh, opts.reading)
        self.used = set(variables(self.rectified))

    def check_types(self, f: Formula) -> Stratification:
        strat = stratify(f)
        if isinstance(strat, StratFailure):
            raise NotStratified(strat)
        return strat

    def coding_name(self, base: str) -> str:
        name, k = base, 1
        while name in self.used:
            k += 1
            name = f"{base}{k}"
        self.used.add(name)
        return name

    def atom(self, a: Formula, f: str) -> Formula:
        g, idx, d = self.gadgets, self.indices, self.strat.depth
        if isinstance(a, EqConst):
            return self.const_atom(f, idx[a.lhs], d(a.lhs))
        i, j = idx[a.lhs], idx[a.rhs]
        if self.opts.atom_mode == "unified":
            return g.unified_translation(f, i, j, d(a.lhs)).formula
        if isinstance(a, Eq):
            return g.eq_translation(f, i, j).formula
        return g.mem_translation(f, i, j, d(a.rhs)).formula

    def const_atom(self, f, i, d):
        # the coded value at index i is iota^d(0)
        g = self.gadgets
        p, w = self.fresh(), self.fresh()
        body = Forall(p, Forall(w, Implies(
            conj(Mem(p, f), g._key_is(p, i), g._value_is(p, w, d)), EqConst(w))))
        return g._done(body, f).formula

    def image(self, node: Formula, f: str) -> Formula:
        """Replace every atom by its coded counterpart over ``f``."""
        if isinstance(node, ATOMS):
            return self.atom(node, f)
        if isinstance(node, Not):
            return Not(self.image(node.body, f))
        if isinstance(node, BINARY):
            return type(node)(self.image(node.left, f), self.image(node.right, f))
        return type(node)(node.var, self.image(node.body, f))

    def guard(self, f: str, coded: list) -> Formula:
        if self.opts.guard == "fn":
            return self.gadgets.fn_guard(f, [self.indices[v] for v in coded]).formula
        return self.gadgets.size_guard(f, len(coded)).formula

    def idents(self, f: str, coded: list) -> list:
        out = [self.gadgets.apply_eq(f, self.indices[v], v, self.strat.depth(v)).formula
               for v in coded]
        if self.opts.mutate == "drop-ident" and out:
            top = max(range(len(coded)), key=lambda k: self.indices[coded[k]])
            del out[top]
        return out

    def report(self, phi: Formula, out: Formula, scopes) -> TranslationReport:
        cert = check_acyclic(out)
        if not cert.is_acyclic:
            raise TranslationError(f"output is cyclic: {cert.describe()}")
        # a mutant may lose free variables along with the dropped conjunct
        if self.opts.mutate is None and free_vars(out) != free_vars(phi):
            raise TranslationError(
                f"free variables changed: {free_vars(phi)} -> {free_vars(out)}")
        return TranslationReport(
            source=phi, output=out, options=self.opts, stratification=self.strat,
            indices=self.indices, gadget_count=self.gadgets.count,
            fresh_consumed=self.fresh.consumed, certificate=cert, scopes=scopes)


def _index(names) -> dict:
    return {v: i for i, v in enumerate(names, start=1)}


def translate_prenex(phi: Formula, opts: TranslationOptions = None) -> TranslationReport:
    """``Q x1..xk E f. (guard & image & idents)`` over the prenex matrix."""
    opts = opts or TranslationOptions()
    run = _Run(phi, opts)
    form = prenex(run.rectified)
    run.strat = run.check_types(form.matrix)
    coded = variables(form.matrix)
    run.indices = _index(coded)
    f = run.coding_name("f")
    body = conj(run.guard(f, coded), run.image(form.matrix, f), *run.idents(f, coded))
    out = reprefix(form.prefix, Exists(f, body))
    return run.report(phi, out, [CodingScope(f, tuple(coded))])


def _block(node: Formula):
    """Split off a maximal run of leading quantifiers."""
    prefix = []
    while isinstance(node, (Exists, Forall)):
        prefix.append(("E" if isinstance(node, Exists) else "A", node.var))
        node = node.body
    return tuple(prefix), node


def translate_nested(phi: Formula, opts: TranslationOptions = None) -> TranslationReport:
    """One coding function per quantifier block, chained to the enclosing one.

    Cumulative mode: the inner function contains the outer one and codes
    every variable in scope.  Agreement mode: the inner function codes only
    the block's own variables and the free variables of the block, and is
    tied to the outer one by an agreement clause plus key-existence clauses.
    """
    opts = opts or TranslationOptions(pipeline="nested")
    if opts.pipeline == "prenex":
        opts = replace(opts, pipeline="nested")
    agreement = opts.pipeline == "nested-agreement"
    run = _Run(phi, opts)
    run.strat = run.check_types(run.rectified)
    run.indices = _index(variables(run.rectified))
    scopes = []
    g = run.gadgets

    def coded_for(prefix, inner, outer_scope):
        names = [v for _, v in prefix]
        if agreement:
            extra = set(free_vars(reprefix(prefix, inner)))
        else:
            extra = set(outer_scope)
        return sorted(set(names) | extra, key=run.indices.get), names

    def block(prefix, inner, parent, outer_scope):
        coded, own = coded_for(prefix, inner, outer_scope)
        if not coded:
            # a closed boolean combination: each inner block starts afresh
            return walk(inner, None, coded)
        f = run.coding_name("f")
        scopes.append(CodingScope(f, tuple(coded)))
        parts = [run.guard(f, coded)]
        if parent is not None:
            if agreement:
                parts.append(g.agreement(parent, f).formula)
                for v in coded:
                    if v not in own:
                        parts.append(g.has_key(f, run.indices[v]).formula)
            else:
                parts.append(g.subset(parent, f).formula)
        parts.append(walk(inner, f, coded))
        if parent is None:
            parts.extend(run.idents(f, coded))
        else:
            parts.extend(run.idents(f, own))
        return reprefix(prefix, Exists(f, conj(*parts)))

    def walk(node, f, scope):
        if isinstance(node, ATOMS):
            return run.atom(node, f)
        if isinstance(node, Not):
            return Not(walk(node.body, f, scope))
        if isinstance(node, BINARY):
            return type(node)(walk(node.left, f, scope), walk(node.right, f, scope))
        prefix, inner = _block(node)
        return block(prefix, inner, f, scope)

    prefix, inner = _block(run.rectified)
    out = block(prefix, inner, None, free_vars(run.rectified))
    return run.report(phi, out, scopes)


def translate(phi: Formula, opts: TranslationOptions = None) -> TranslationReport:
    opts = opts or TranslationOptions()
    if opts.pipeline == "prenex":
        return translate_prenex(phi, opts)
    return translate_nested(phi, opts)


__all__ = [
    "ATOM_MODES", "CodingScope", "GUARDS", "MUTATIONS", "NotStratified",
    "PIPELINES", "READINGS", "TranslationError", "TranslationOptions",
    "TranslationReport", "translate", "translate_nested", "translate_prenex",
]
