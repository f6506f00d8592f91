"""Tree functionals, pairwise bounds λ(φ;a,b), λ-differences and Fréchet bounds.

λ(φ;a,b) is the best lower bound on Φ(⟨a,b⟩*) over all completely monotone
extensions Φ of φ.  It is computed as φ(b) minus a shortest-path distance:
on the complete digraph over L the edge u→v costs φ(u∨v) − φ(u), which is
nonnegative for monotone φ, and the cost of a path a→x equals the rooted
tree value of that path at x.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .capacity import ZERO, LatticeFn, require_m1
from .errors import (
    DuplicateElement,
    EmptyGenerator,
    Infeasible,
    NotATree,
    NotMonotonePath,
    RootNotInTree,
)
from .ideals import Extension, IdealLattice, _ideal_for, greedy_extension
from .lattice import Lattice, UpSet, is_monotone_path, up_set
from .lp import LinearProgram, solve


# -- trees -------------------------------------------------------------------


@dataclass(frozen=True)
class TreeGraph:
    vertices: frozenset
    edges: frozenset

    @classmethod
    def of(cls, vertices: Iterable, edges: Iterable = ()) -> "TreeGraph":
        return cls(frozenset(vertices), frozenset(frozenset(e) for e in edges))

    @classmethod
    def path(cls, seq: Sequence) -> "TreeGraph":
        if len(set(seq)) != len(seq):
            raise DuplicateElement("a path visits each vertex once")
        return cls.of(seq, zip(seq, seq[1:]))

    def validate(self, L: Lattice) -> None:
        if not self.vertices:
            raise NotATree("a tree needs at least one vertex")
        for v in self.vertices:
            L.index(v)
        for e in self.edges:
            if len(e) != 2 or not e <= self.vertices:
                raise NotATree(f"bad edge {sorted(e)}")
        if len(self.edges) != len(self.vertices) - 1:
            raise NotATree("edge count must be one less than vertex count")
        start = next(iter(self.vertices))
        if len(self._reach(start)) != len(self.vertices):
            raise NotATree("graph is not connected")

    def neighbours(self, v) -> list:
        return [u for e in self.edges if v in e for u in e if u != v]

    def _reach(self, root) -> dict:
        parent = {root: None}
        stack = [root]
        while stack:
            v = stack.pop()
            for u in self.neighbours(v):
                if u not in parent:
                    parent[u] = v
                    stack.append(u)
        return parent


def tree_value(phi: LatticeFn, G: TreeGraph) -> Fraction:
    """Sum of φ over vertices minus sum of φ(a ∨ b) over edges."""
    L = phi.lattice
    G.validate(L)
    total = sum((phi[v] for v in G.vertices), ZERO)
    for e in G.edges:
        a, b = tuple(e)
        total -= phi[L.join(a, b)]
    return total


def rooted_value(phi: LatticeFn, G: TreeGraph, root) -> Fraction:
    """Sum over child→parent edges (x, y) of φ(x ∨ y) − φ(x)."""
    L = phi.lattice
    G.validate(L)
    if root not in G.vertices:
        raise RootNotInTree(f"{root!r} is not a vertex of the tree")
    total = ZERO
    for x, y in G._reach(root).items():
        if y is not None:
            total += phi[L.join(x, y)] - phi[x]
    return total


def tree_certificate(L: Lattice, G: TreeGraph) -> LatticeFn:
    """Coefficients r with Σ r_x φ(x) = φ(G) and r ≤ χ{V ⪯ ⟨G⟩*} on every up-set."""
    G.validate(L)
    r = {x: 0 for x in L.elements}
    for v in G.vertices:
        r[v] += 1
    for e in G.edges:
        a, b = tuple(e)
        r[L.join(a, b)] -= 1
    return LatticeFn(L, r)


# -- λ and Λ -------------------------------------------------------------------


def _shortest(phi: LatticeFn, source: int):
    """Dijkstra from ``source``; returns distances and a settle-ordered predecessor map."""
    L = phi.lattice
    v = phi._v
    join = L._join
    n = len(L)
    dist: list = [None] * n
    dist[source] = ZERO
    done = [False] * n
    order = []
    for _ in range(n):
        u = min((i for i in range(n) if not done[i] and dist[i] is not None), key=lambda i: (dist[i], i))
        done[u] = True
        order.append(u)
        du, fu = dist[u], v[u]
        row = join[u]
        for w in range(n):
            if not done[w]:
                cand = du + v[row[w]] - fu
                if dist[w] is None or cand < dist[w]:
                    dist[w] = cand
    return dist, order


def lambda_diff(phi: LatticeFn, a) -> LatticeFn:
    """Λ_aφ(x) = φ(x) − λ(φ;a,x), the shortest-path distance from a to x."""
    require_m1(phi)
    dist, _ = _shortest(phi, phi.lattice.index(a))
    return LatticeFn._raw(phi.lattice, dist)


def lambda_fn(phi: LatticeFn, a) -> LatticeFn:
    """x ↦ λ(φ;a,x)."""
    return phi - lambda_diff(phi, a)


def lambda_bound(phi: LatticeFn, a, b) -> Fraction:
    require_m1(phi)
    L = phi.lattice
    dist, _ = _shortest(phi, L.index(a))
    return phi[b] - dist[L.index(b)]


def lambda_path(phi: LatticeFn, a, b) -> tuple[Fraction, tuple]:
    """λ(φ;a,b) together with a maximizing path from a to b.

    Among tied predecessors the earliest element-list position wins.
    """
    require_m1(phi)
    L = phi.lattice
    ia, ib = L.index(a), L.index(b)
    dist, order = _shortest(phi, ia)
    rank = {u: k for k, u in enumerate(order)}
    v = phi._v
    path = [ib]
    cur = ib
    while cur != ia:
        cands = [
            u for u in range(len(L))
            if rank[u] < rank[cur] and dist[u] + v[L._join[u][cur]] - v[u] == dist[cur]
        ]
        cur = min(cands)
        path.append(cur)
    path.reverse()
    return v[ib] - dist[ib], tuple(L.elements[i] for i in path)


def _checked_path(L: Lattice, seq: Sequence) -> tuple:
    seq = tuple(seq)
    if not seq:
        raise EmptyGenerator("a path needs at least one element")
    for x in seq:
        L.index(x)
    if len(set(seq)) != len(seq):
        raise DuplicateElement("path elements must be distinct")
    return seq


def successive_lambdas(phi: LatticeFn, seq: Sequence) -> list:
    """[φ_0, φ_1, ..., φ_n] with φ_i = Λ_{a_i} φ_{i-1}.

    A step whose element lies below an earlier one leaves the function
    unchanged and is skipped without computing it.
    """
    require_m1(phi)
    L = phi.lattice
    seq = _checked_path(L, seq)
    out = [phi]
    for k, a in enumerate(seq):
        if any(L.leq(a, prev) for prev in seq[:k]) or phi[a] == 0:
            out.append(phi)
            continue
        phi = lambda_diff(phi, a)
        out.append(phi)
    return out


def successive_lambda(phi: LatticeFn, seq: Sequence) -> LatticeFn:
    return successive_lambdas(phi, seq)[-1]


# -- Fréchet bounds ------------------------------------------------------------


def _g_getter(g) -> Callable:
    if callable(g):
        return g
    return lambda V: g.get(V, 0)


def indicator_below(ideal: IdealLattice, U: UpSet) -> dict:
    """g_U(V) = 1 if V ⪯ U (V ⊇ U), else 0."""
    return {V: (1 if ideal.precedes(V, U) else 0) for V in ideal.nodes}


def _marginal_rows(phi: LatticeFn, ideal: IdealLattice):
    L = phi.lattice
    rows = [[1 if x in V else 0 for V in ideal.nodes] for x in L.elements]
    return rows, ["="] * len(L), list(phi.values())


def optimal_extension(phi: LatticeFn, g, ideal: IdealLattice | None = None) -> tuple[Fraction, Extension]:
    """B_φ(g) and an extension attaining it."""
    ideal = _ideal_for(phi, ideal)
    get = _g_getter(g)
    cost = [Fraction(get(V)) for V in ideal.nodes]
    rows, senses, rhs = _marginal_rows(phi, ideal)
    out = solve(LinearProgram(cost, rows, senses, rhs))
    if not out.optimal:
        raise Infeasible("no extension has these marginals (is φ monotone and nonnegative?)")
    return out.value, Extension(ideal, dict(zip(ideal.nodes, out.x)))


def frechet_bound(phi: LatticeFn, g, ideal: IdealLattice | None = None) -> Fraction:
    """min Φ(g) over completely monotone extensions Φ of φ."""
    return optimal_extension(phi, g, ideal)[0]


def frechet_bound_at(phi: LatticeFn, U: UpSet | Iterable, ideal: IdealLattice | None = None) -> Fraction:
    """B_φ(U), the bound for g = χ{V ⪯ U}; ``U`` may be given by generators."""
    ideal = _ideal_for(phi, ideal)
    if not isinstance(U, UpSet):
        U = ideal.upset(U)
    return frechet_bound(phi, indicator_below(ideal, U), ideal)


def dual_bound(phi: LatticeFn, g, ideal: IdealLattice | None = None) -> tuple[Fraction, LatticeFn]:
    """max Σ r_x φ(x) over r with Σ_{x∈V} r_x ≤ g(V) for every up-set V.

    Solved as its own program (r split into positive and negative parts).
    """
    ideal = _ideal_for(phi, ideal)
    L = phi.lattice
    n = len(L)
    get = _g_getter(g)
    vals = phi.values()
    objective = vals + [-v for v in vals]
    rows, rhs = [], []
    for V in ideal.nodes:
        member = [1 if x in V else 0 for x in L.elements]
        rows.append(member + [-m for m in member])
        rhs.append(Fraction(get(V)))
    out = solve(LinearProgram(objective, rows, ["<="] * len(rows), rhs, maximize=True))
    if out.status != "optimal":
        raise Infeasible(f"dual program is {out.status} (is φ monotone and nonnegative?)")
    r = LatticeFn._raw(L, [out.x[i] - out.x[n + i] for i in range(n)])
    return out.value, r


# -- extension along a monotone path -------------------------------------------


def construct_extension_along_path(phi: LatticeFn, seq: Sequence, ideal: IdealLattice | None = None) -> Extension:
    """Φ = Ψ_0 + ... + Ψ_n with Ψ_i a greedy extension of λ(φ_i; a_{i+1}, ·)
    and Ψ_n a greedy extension of φ_n.

    On the result, Φ(π^x_{a_1..a_k}) = Λ_{a_1..a_k}φ(x) for every prefix.
    """
    require_m1(phi)
    L = phi.lattice
    seq = _checked_path(L, seq)
    if not is_monotone_path(L, seq):
        raise NotMonotonePath(f"{seq} is not a monotone path")
    ideal = _ideal_for(phi, ideal)
    total = Extension(ideal, {})
    cur = phi
    for a in seq:
        nxt = lambda_diff(cur, a)
        total = total + greedy_extension(cur - nxt, ideal)
        cur = nxt
    return total + greedy_extension(cur, ideal)


def evaluate_indicator(Phi: Extension, x, avoid: Iterable = ()) -> Fraction:
    """Mass of atoms V with x ∈ V and no element of ``avoid`` in V."""
    L = Phi.ideal.base
    ix = 1 << L.index(x)
    amask = L.mask(avoid)
    return sum((m for V, m in Phi.pmf.items() if V.mask & ix and not V.mask & amask), ZERO)
