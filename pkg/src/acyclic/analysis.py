"""Stratification, variable multigraphs, acyclicity and prenex form."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Union

from acyclic.formula import (
    ATOMS, BINARY, Eq, EqConst, Exists, Forall, Formula, Implies, Mem, Not,
    atoms, render, variables,
)


# ---------------------------------------------------------------------------
# stratification

@dataclass(frozen=True)
class Constraint:
    """``type(rhs) - type(lhs) == offset`` contributed by one atom occurrence."""

    index: int
    atom: Formula
    lhs: str
    rhs: str
    offset: int


@dataclass
class Stratification:
    types: dict
    components: list = field(default_factory=list)
    shifts: list = field(default_factory=list)

    def __getitem__(self, var):
        return self.types[var]

    def depth(self, var) -> int:
        """Iteration depth of the singleton wrapping, the negated type."""
        return -self.types[var]

    def satisfies(self, f: Formula) -> bool:
        for a in atoms(f):
            if isinstance(a, Mem) and self.types[a.rhs] != self.types[a.lhs] + 1:
                return False
            if isinstance(a, Eq) and self.types[a.rhs] != self.types[a.lhs]:
                return False
        return True


@dataclass
class StratFailure:
    """A cycle of constraints whose offsets do not cancel.

    ``witness`` holds ``(constraint, sign)`` pairs; walking the cycle adds
    ``sign * constraint.offset`` to the type at each step.
    """

    witness: list

    def offset_sum(self) -> int:
        return sum(sign * c.offset for c, sign in self.witness)

    def is_valid(self) -> bool:
        if not self.witness or self.offset_sum() == 0:
            return False
        # consecutive steps must chain head to tail and close up
        ends = [(c.lhs, c.rhs) if s > 0 else (c.rhs, c.lhs) for c, s in self.witness]
        return all(ends[i][1] == ends[(i + 1) % len(ends)][0] for i in range(len(ends)))

    def describe(self) -> str:
        steps = []
        for c, sign in self.witness:
            steps.append(f"{render(c.atom)} ({'+' if sign > 0 else '-'}{c.offset})")
        return "; ".join(steps) + f"  => t = t + {self.offset_sum()}"


def constraints(f: Formula) -> list:
    out = []
    for i, a in enumerate(atoms(f)):
        if isinstance(a, Mem):
            out.append(Constraint(i, a, a.lhs, a.rhs, 1))
        elif isinstance(a, Eq):
            out.append(Constraint(i, a, a.lhs, a.rhs, 0))
    return out


def stratify(f: Formula) -> Union[Stratification, StratFailure]:
    """Integer types with ``type(y) = type(x) + 1`` for ``x in y``.

    Each connected component of the constraint graph is shifted so its
    largest type is -1; variables in no atom get -1.
    """
    names = variables(f)
    parent = {v: v for v in names}
    offset = {v: 0 for v in names}  # type(v) - type(parent[v])
    adj = {v: [] for v in names}

    def find(v):
        path = []
        while parent[v] != v:
            path.append(v)
            v = parent[v]
        # compress, accumulating offsets from the root down
        for u in reversed(path):
            p = parent[u]
            if p != v:
                offset[u] += offset[p]
            parent[u] = v
        return v

    for c in constraints(f):
        ra, rb = find(c.lhs), find(c.rhs)
        if ra != rb:
            # type(rhs) = type(lhs) + offset
            parent[rb] = ra
            offset[rb] = offset[c.lhs] + c.offset - offset[c.rhs]
            adj[c.lhs].append((c, 1, c.rhs))
            adj[c.rhs].append((c, -1, c.lhs))
        elif offset[c.rhs] - offset[c.lhs] != c.offset:
            path = _constraint_path(adj, c.rhs, c.lhs)
            return StratFailure(path + [(c, 1)])

    roots = {}
    for v in names:
        roots.setdefault(find(v), []).append(v)
    types, comps, shifts = {}, [], []
    for members in roots.values():
        raw = {v: offset[v] for v in members}
        shift = -1 - max(raw.values())
        for v in members:
            types[v] = raw[v] + shift
        comps.append(tuple(members))
        shifts.append(shift)
    return Stratification({v: types[v] for v in names}, comps, shifts)


def _constraint_path(adj, src, dst):
    prev = {src: None}
    queue = deque([src])
    while queue:
        v = queue.popleft()
        if v == dst:
            break
        for c, sign, w in adj[v]:
            if w not in prev:
                prev[w] = (v, c, sign)
                queue.append(w)
    steps = []
    v = dst
    while prev[v] is not None:
        u, c, sign = prev[v]
        steps.append((c, sign))
        v = u
    return steps[::-1]


# ---------------------------------------------------------------------------
# identity indices

def identity_indices(f: Formula) -> dict:
    """Number the distinct variables 1..n by first textual occurrence."""
    return {v: i for i, v in enumerate(variables(f), start=1)}


# ---------------------------------------------------------------------------
# variable multigraph

@dataclass(frozen=True)
class Edge:
    u: str
    v: str
    id: int
    atom: Formula

    @property
    def label(self) -> str:
        return render(self.atom)

    def other(self, x: str) -> str:
        return self.v if x == self.u else self.u


@dataclass
class VariableGraph:
    vertices: tuple
    edges: tuple

    def to_dot(self, name: str = "G") -> str:
        lines = [f"graph {name} {{"]
        for v in self.vertices:
            shape = ' [shape=point, label="0"]' if v.startswith("0#") else ""
            lines.append(f'  "{v}"{shape};')
        for e in self.edges:
            lines.append(f'  "{e.u}" -- "{e.v}" [label="{e.label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def variable_graph(f: Formula) -> VariableGraph:
    """One vertex per variable, one edge per atom occurrence.

    Each occurrence of the constant ``0`` is its own pendant vertex ``0#k``.
    """
    verts = list(variables(f))
    edges = []
    consts = 0
    for i, a in enumerate(atoms(f)):
        if isinstance(a, EqConst):
            c = f"0#{consts}"
            consts += 1
            verts.append(c)
            edges.append(Edge(a.lhs, c, i, a))
        else:
            edges.append(Edge(a.lhs, a.rhs, i, a))
    return VariableGraph(tuple(verts), tuple(edges))


@dataclass(frozen=True)
class Acyclic:
    """Certificate that a formula's variable multigraph is a forest."""

    vertices: int
    edges: int

    is_acyclic = True


@dataclass(frozen=True)
class CycleWitness:
    """A closed walk ``walk[0] -e0- walk[1] -e1- ... - walk[0]``."""

    edges: tuple
    walk: tuple

    is_acyclic = False

    def is_valid(self, graph: VariableGraph = None) -> bool:
        if not self.edges or len({e.id for e in self.edges}) != len(self.edges):
            return False
        if graph is not None and not set(self.edges) <= set(graph.edges):
            return False
        k = len(self.edges)
        for i, e in enumerate(self.edges):
            a, b = self.walk[i], self.walk[(i + 1) % k]
            if {a, b} != {e.u, e.v}:
                return False
        return True

    def describe(self) -> str:
        return ", ".join(f"{e.u}-{e.v} [{e.label}]" for e in self.edges)


def check_acyclic(f: Formula) -> Union[Acyclic, CycleWitness]:
    """Forest test where parallel edges and self-loops count as cycles."""
    return graph_cycle(variable_graph(f))


def graph_cycle(g: VariableGraph) -> Union[Acyclic, CycleWitness]:
    parent = {v: v for v in g.vertices}
    adj = {v: [] for v in g.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in g.edges:
        if e.u == e.v:
            return CycleWitness((e,), (e.u,))
        ru, rv = find(e.u), find(e.v)
        if ru != rv:
            parent[ru] = rv
            adj[e.u].append(e)
            adj[e.v].append(e)
            continue
        path_edges, path_verts = _tree_path(adj, e.v, e.u)
        return _normalise_cycle(path_edges + [e], path_verts)
    return Acyclic(len(g.vertices), len(g.edges))


def _tree_path(adj, src, dst):
    prev = {src: None}
    queue = deque([src])
    while queue:
        v = queue.popleft()
        if v == dst:
            break
        for e in adj[v]:
            w = e.other(v)
            if w not in prev:
                prev[w] = (v, e)
                queue.append(w)
    edges, verts = [], [dst]
    v = dst
    while prev[v] is not None:
        u, e = prev[v]
        edges.append(e)
        verts.append(u)
        v = u
    edges.reverse()
    verts.reverse()
    return edges, verts


def _normalise_cycle(edges, verts):
    # verts[i] -edges[i]- verts[i+1 mod k]; start at the lowest edge id and
    # walk in the direction whose second edge id is smaller
    k = len(edges)
    verts = verts[:k]
    s = min(range(k), key=lambda i: edges[i].id)
    e = edges[s:] + edges[:s]
    v = verts[s:] + verts[:s]
    if k > 2:
        rev_e = [e[0]] + e[1:][::-1]
        if rev_e[1].id < e[1].id:
            e, v = rev_e, [v[1], v[0]] + v[2:][::-1]
    return CycleWitness(tuple(e), tuple(v))


# ---------------------------------------------------------------------------
# prenex normal form

@dataclass(frozen=True)
class PrenexForm:
    prefix: tuple  # of ("E" | "A", var)
    matrix: Formula

    def formula(self) -> Formula:
        return reprefix(self.prefix, self.matrix)


def reprefix(prefix, matrix: Formula) -> Formula:
    out = matrix
    for q, v in reversed(prefix):
        out = Exists(v, out) if q == "E" else Forall(v, out)
    return out


def _flip(prefix):
    return tuple(("A" if q == "E" else "E", v) for q, v in prefix)


def prenex(f: Formula) -> PrenexForm:
    """Pull quantifiers out, flipping them under negation and antecedents.

    Expects a rectified formula, so no renaming is needed.
    """
    if isinstance(f, ATOMS):
        return PrenexForm((), f)
    if isinstance(f, Not):
        inner = prenex(f.body)
        return PrenexForm(_flip(inner.prefix), Not(inner.matrix))
    if isinstance(f, BINARY):
        left, right = prenex(f.left), prenex(f.right)
        lp = _flip(left.prefix) if isinstance(f, Implies) else left.prefix
        return PrenexForm(lp + right.prefix, type(f)(left.matrix, right.matrix))
    inner = prenex(f.body)
    q = "E" if isinstance(f, Exists) else "A"
    return PrenexForm(((q, f.var),) + inner.prefix, inner.matrix)


def is_quantifier_free(f: Formula) -> bool:
    if isinstance(f, ATOMS):
        return True
    if isinstance(f, Not):
        return is_quantifier_free(f.body)
    if isinstance(f, BINARY):
        return is_quantifier_free(f.left) and is_quantifier_free(f.right)
    return False


__all__ = [
    "Acyclic", "Constraint", "CycleWitness", "Edge", "PrenexForm",
    "StratFailure", "Stratification", "VariableGraph", "check_acyclic",
    "constraints", "graph_cycle", "identity_indices", "is_quantifier_free",
    "prenex", "reprefix", "stratify", "variable_graph",
]
