"""Formulas over membership and equality: syntax trees, parsing, printing.

Surface grammar (whitespace is insignificant)::

    formula := impl
    impl    := disj ("->" formula)?
    disj    := conj ("|" conj)*
    conj    := neg ("&" neg)*
    neg     := "~" neg | quant | atom | "(" formula ")"
    quant   := ("E" | "A") var "." formula
    atom    := var ("in" | "=") (var | "0")

``&`` and ``|`` associate to the left, ``->`` to the right, and a quantifier
body extends as far right as possible.  The constant ``0`` (the empty set)
is only accepted when the caller enables it.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional, Union

RESERVED = frozenset({"E", "A", "in"})
FRESH_PREFIX = "_g"
CONST = "0"

_NAME_RE = re.compile(r"[A-Za-z_'][A-Za-z0-9_']*\Z")


class Formula:
    """Base class of all syntax tree nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Mem(Formula):
    lhs: str
    rhs: str


@dataclass(frozen=True)
class Eq(Formula):
    lhs: str
    rhs: str


@dataclass(frozen=True)
class EqConst(Formula):
    """``lhs = 0``; only produced under the constant reading of the empty set."""

    lhs: str
    rhs: str = CONST


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


Atom = Union[Mem, Eq, EqConst]
Quantifier = Union[Exists, Forall]
ATOMS = (Mem, Eq, EqConst)
BINARY = (And, Or, Implies)
QUANTIFIERS = (Exists, Forall)


def conj(*parts: Formula) -> Formula:
    """Left-nested conjunction of one or more formulas."""
    if not parts:
        raise ValueError("empty conjunction")
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(*parts: Formula) -> Formula:
    if not parts:
        raise ValueError("empty disjunction")
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def is_valid_name(name: str) -> bool:
    return bool(_NAME_RE.match(name)) and name not in RESERVED


class FreshNames:
    """Supply of ``_g1, _g2, ...`` that skips every reserved name."""

    def __init__(self, reserved=()):
        self.reserved = set(reserved)
        self.counter = 0
        self.consumed = 0

    def __call__(self) -> str:
        while True:
            self.counter += 1
            name = f"{FRESH_PREFIX}{self.counter}"
            if name not in self.reserved:
                self.reserved.add(name)
                self.consumed += 1
                return name

    def reserve(self, names) -> None:
        self.reserved.update(names)


# ---------------------------------------------------------------------------
# traversal helpers

def atoms(f: Formula) -> Iterator[Formula]:
    """Atomic subformula occurrences, left to right."""
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, ATOMS):
            yield node
        elif isinstance(node, Not):
            stack.append(node.body)
        elif isinstance(node, BINARY):
            stack.append(node.right)
            stack.append(node.left)
        else:
            stack.append(node.body)


def atom_vars(a: Formula) -> tuple:
    if isinstance(a, EqConst):
        return (a.lhs,)
    return (a.lhs, a.rhs)


def variables(f: Formula) -> list:
    """Every variable name (binders included) in textual order."""
    seen: dict = {}
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, ATOMS):
            for v in atom_vars(node):
                seen.setdefault(v, None)
        elif isinstance(node, Not):
            stack.append(node.body)
        elif isinstance(node, BINARY):
            stack.append(node.right)
            stack.append(node.left)
        else:
            seen.setdefault(node.var, None)
            stack.append(node.body)
    return list(seen)


def free_vars(f: Formula) -> list:
    """Free variables in order of first occurrence, without duplicates."""
    out: dict = {}

    def go(node, bound):
        if isinstance(node, ATOMS):
            for v in atom_vars(node):
                if v not in bound:
                    out.setdefault(v, None)
        elif isinstance(node, Not):
            go(node.body, bound)
        elif isinstance(node, BINARY):
            go(node.left, bound)
            go(node.right, bound)
        else:
            go(node.body, bound | {node.var})

    go(f, frozenset())
    return list(out)


def bound_vars(f: Formula) -> list:
    out = []
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, QUANTIFIERS):
            out.append(node.var)
            stack.append(node.body)
        elif isinstance(node, Not):
            stack.append(node.body)
        elif isinstance(node, BINARY):
            stack.append(node.right)
            stack.append(node.left)
    return out


def is_rectified(f: Formula) -> bool:
    bound = bound_vars(f)
    return len(bound) == len(set(bound)) and not set(bound) & set(free_vars(f))


def has_constant(f: Formula) -> bool:
    return any(isinstance(a, EqConst) for a in atoms(f))


def size(f: Formula) -> int:
    n = 0
    stack = [f]
    while stack:
        node = stack.pop()
        n += 1
        if isinstance(node, BINARY):
            stack.append(node.left)
            stack.append(node.right)
        elif not isinstance(node, ATOMS):
            stack.append(node.body)
    return n


def rename_free(f: Formula, mapping: dict) -> Formula:
    """Substitute free occurrences; callers guarantee no capture."""

    def go(node, bound):
        if isinstance(node, Mem):
            return Mem(_sub(node.lhs, bound), _sub(node.rhs, bound))
        if isinstance(node, Eq):
            return Eq(_sub(node.lhs, bound), _sub(node.rhs, bound))
        if isinstance(node, EqConst):
            return EqConst(_sub(node.lhs, bound))
        if isinstance(node, Not):
            return Not(go(node.body, bound))
        if isinstance(node, BINARY):
            return type(node)(go(node.left, bound), go(node.right, bound))
        return type(node)(node.var, go(node.body, bound | {node.var}))

    def _sub(v, bound):
        return v if v in bound else mapping.get(v, v)

    return go(f, frozenset())


def rectify(f: Formula, fresh: Optional[FreshNames] = None) -> Formula:
    """Rename bound variables so none is bound twice or also occurs free.

    Only binders that clash are renamed, so a rectified input comes back
    unchanged.
    """
    if fresh is None:
        fresh = FreshNames(variables(f))
    else:
        fresh.reserve(variables(f))
    used = set(free_vars(f))

    def go(node, ren):
        if isinstance(node, Mem):
            return Mem(ren.get(node.lhs, node.lhs), ren.get(node.rhs, node.rhs))
        if isinstance(node, Eq):
            return Eq(ren.get(node.lhs, node.lhs), ren.get(node.rhs, node.rhs))
        if isinstance(node, EqConst):
            return EqConst(ren.get(node.lhs, node.lhs))
        if isinstance(node, Not):
            return Not(go(node.body, ren))
        if isinstance(node, BINARY):
            return type(node)(go(node.left, ren), go(node.right, ren))
        v = node.var
        new = fresh() if v in used else v
        used.add(new)
        return type(node)(new, go(node.body, {**ren, v: new}))

    out = go(f, {})
    return f if out == f else out


# ---------------------------------------------------------------------------
# printing

_QUANT, _IMPL, _OR, _AND, _NEG = range(5)


def _level(f: Formula) -> int:
    if isinstance(f, Implies):
        return _IMPL
    if isinstance(f, Or):
        return _OR
    if isinstance(f, And):
        return _AND
    return _NEG


def render(f: Formula) -> str:
    """Surface text with the fewest parentheses the grammar allows.

    Negation always parenthesises a non-negated operand (``~(x in y)``).
    """
    return _render(f, _QUANT, True)


def _render(f, need, tail):
    if _level(f) < need or (isinstance(f, QUANTIFIERS) and not tail):
        return "(" + _body(f, True) + ")"
    return _body(f, tail)


def _body(f, tail):
    if isinstance(f, Mem):
        return f"{f.lhs} in {f.rhs}"
    if isinstance(f, Eq):
        return f"{f.lhs} = {f.rhs}"
    if isinstance(f, EqConst):
        return f"{f.lhs} = {CONST}"
    if isinstance(f, Not):
        if isinstance(f.body, Not):
            return "~" + _body(f.body, tail)
        return "~(" + _body(f.body, True) + ")"
    if isinstance(f, And):
        return _render(f.left, _AND, False) + " & " + _render(f.right, _NEG, tail)
    if isinstance(f, Or):
        return _render(f.left, _OR, False) + " | " + _render(f.right, _AND, tail)
    if isinstance(f, Implies):
        return _render(f.left, _OR, False) + " -> " + _render(f.right, _IMPL, tail)
    q = "E" if isinstance(f, Exists) else "A"
    return f"{q} {f.var}. " + _render(f.body, _QUANT, tail)


# ---------------------------------------------------------------------------
# parsing

class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<arrow>->)|(?P<punct>[()~&|.=])|(?P<const>0)"
    r"|(?P<name>[A-Za-z_'][A-Za-z0-9_']*)"
)


def _tokenize(text):
    pos, line, col = 0, 1, 1
    out = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        tok = m.group()
        if kind != "ws":
            out.append((tok, kind, line, col))
        for ch in tok:
            if ch == "\n":
                line, col = line + 1, 1
            else:
                col += 1
        pos = m.end()
    out.append(("", "eof", line, col))
    return out


class _Parser:
    def __init__(self, text, allow_constant, allow_generated):
        self.toks = _tokenize(text)
        self.i = 0
        self.allow_constant = allow_constant
        self.allow_generated = allow_generated

    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        tok, kind, line, col = self.next()
        if tok != value:
            found = "end of input" if kind == "eof" else repr(tok)
            raise ParseError(f"expected {value!r}, found {found}", line, col)

    def var(self):
        tok, kind, line, col = self.next()
        if kind != "name":
            found = "end of input" if kind == "eof" else repr(tok)
            raise ParseError(f"expected a variable, found {found}", line, col)
        if tok in RESERVED:
            raise ParseError(f"reserved word {tok!r} used as a variable", line, col)
        if tok.startswith(FRESH_PREFIX) and not self.allow_generated:
            raise ParseError(
                f"variable {tok!r} uses the reserved prefix {FRESH_PREFIX!r}", line, col)
        return tok

    def formula(self):
        left = self.disj()
        if self.peek()[0] == "->":
            self.next()
            return Implies(left, self.formula())
        return left

    def disj(self):
        out = self.conj()
        while self.peek()[0] == "|":
            self.next()
            out = Or(out, self.conj())
        return out

    def conj(self):
        out = self.neg()
        while self.peek()[0] == "&":
            self.next()
            out = And(out, self.neg())
        return out

    def neg(self):
        tok, kind, line, col = self.peek()
        if tok == "~":
            self.next()
            return Not(self.neg())
        if tok == "(":
            self.next()
            inner = self.formula()
            self.expect(")")
            return inner
        if tok in ("E", "A") and kind == "name":
            self.next()
            v = self.var()
            self.expect(".")
            body = self.formula()
            return Exists(v, body) if tok == "E" else Forall(v, body)
        return self.atom()

    def atom(self):
        lhs = self.var()
        tok, kind, line, col = self.next()
        if tok not in ("in", "="):
            found = "end of input" if kind == "eof" else repr(tok)
            raise ParseError(f"expected 'in' or '=', found {found}", line, col)
        rtok, rkind, rline, rcol = self.peek()
        if rkind == "const":
            self.next()
            if not self.allow_constant:
                raise ParseError("constant '0' is not enabled", rline, rcol)
            if tok == "in":
                raise ParseError("'0' may only appear on the right of '='", rline, rcol)
            return EqConst(lhs)
        rhs = self.var()
        return Mem(lhs, rhs) if tok == "in" else Eq(lhs, rhs)


def parse(text: str, allow_constant: bool = False, allow_generated: bool = False) -> Formula:
    """Parse surface text into a syntax tree.

    ``allow_generated`` admits names with the fresh-name prefix, which is
    needed to read back translator output.
    """
    p = _Parser(text, allow_constant, allow_generated)
    if p.peek()[1] == "eof":
        _, _, line, col = p.peek()
        raise ParseError("empty formula", line, col)
    out = p.formula()
    tok, kind, line, col = p.peek()
    if kind != "eof":
        raise ParseError(f"unexpected {tok!r}", line, col)
    return out


# ---------------------------------------------------------------------------
# structured interchange

_OPS = {Mem: "mem", Eq: "eq", EqConst: "eqconst", Not: "not", And: "and",
        Or: "or", Implies: "implies", Exists: "exists", Forall: "forall"}
_BY_OP = {v: k for k, v in _OPS.items()}


def to_dict(f: Formula) -> dict:
    op = _OPS[type(f)]
    if isinstance(f, ATOMS):
        return {"op": op, "lhs": f.lhs, "rhs": f.rhs}
    if isinstance(f, Not):
        return {"op": op, "body": to_dict(f.body)}
    if isinstance(f, BINARY):
        return {"op": op, "left": to_dict(f.left), "right": to_dict(f.right)}
    return {"op": op, "var": f.var, "body": to_dict(f.body)}


def from_dict(d: dict) -> Formula:
    cls = _BY_OP[d["op"]]
    if cls is EqConst:
        return EqConst(d["lhs"])
    if cls in (Mem, Eq):
        return cls(d["lhs"], d["rhs"])
    if cls is Not:
        return Not(from_dict(d["body"]))
    if cls in BINARY:
        return cls(from_dict(d["left"]), from_dict(d["right"]))
    return cls(d["var"], from_dict(d["body"]))
