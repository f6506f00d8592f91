"""Stochastic comparison of a random up-set 𝒳 with a random element Y.

Marginals: φ(x) = P(x ∈ 𝒳) for the random up-set, ψ the cdf of Y
(ψ(y) = P(Y ≤ y)), passed as LatticeFn values.  Couplings are returned as
:class:`JointPmf` atom lists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .capacity import (
    ONE,
    ZERO,
    LatticeFn,
    cdf_from_mass,
    mobius_inverse,
    nabla,
    require_m1,
)
from .errors import Infeasible, NotACdf, NotMonotonePath
from .frechet import dual_bound, frechet_bound, lambda_diff, successive_lambda
from .ideals import IdealLattice, _ideal_for
from .lattice import Lattice, antichains, is_monotone_path, iter_bits
from .lp import LinearProgram, feasible, solve, solve_via_dual


@dataclass(frozen=True)
class JointPmf:
    """Sparse joint mass; ``atoms`` is a tuple of ((first, y), mass), sorted."""

    atoms: tuple

    @classmethod
    def build(cls, pairs: dict, key: Callable) -> "JointPmf":
        kept = [(k, Fraction(m)) for k, m in pairs.items() if m]
        return cls(tuple(sorted(kept, key=lambda km: key(km[0]))))

    def as_dict(self) -> dict:
        return dict(self.atoms)

    @property
    def total(self) -> Fraction:
        return sum((m for _, m in self.atoms), ZERO)

    def expectation(self, w) -> Fraction:
        get = w if callable(w) else (lambda V, y: w.get((V, y), 0))
        return sum((m * Fraction(get(V, y)) for (V, y), m in self.atoms), ZERO)

    def __len__(self):
        return len(self.atoms)


def require_cdf(psi: LatticeFn) -> LatticeFn:
    """The point masses of ``psi``; raises unless it is the cdf of a probability."""
    f = mobius_inverse(psi)
    if any(v < 0 for v in f.values()):
        raise NotACdf("cdf has a negative point mass")
    if psi[psi.lattice.top] != 1:
        raise NotACdf("cdf must equal 1 at the top element")
    return f


def point_mass_cdf(L: Lattice, y) -> LatticeFn:
    return cdf_from_mass(LatticeFn(L, {y: 1}, default=0))


# -- dominance of random elements ------------------------------------------------


@dataclass(frozen=True)
class Dominance:
    holds: bool
    antichain: tuple | None = None
    lhs: Fraction | None = None
    rhs: Fraction | None = None


def norberg_dominance(phi_cdf: LatticeFn, psi_cdf: LatticeFn) -> Dominance:
    """Whether P(X ∉ ↓A) ≤ P(Y ∉ ↓A) for every antichain A.

    On failure the first violating antichain in enumeration order is
    returned.  The verdict is cross-checked against the up-set form
    P(X ∈ U) ≤ P(Y ∈ U) over all nonempty up-sets.
    """
    fx, fy = require_cdf(phi_cdf), require_cdf(psi_cdf)
    L = phi_cdf.lattice
    top = L.top
    found = Dominance(True)
    for A in antichains(L):
        lhs, rhs = nabla(phi_cdf, A, top), nabla(psi_cdf, A, top)
        if lhs > rhs:
            found = Dominance(False, A, lhs, rhs)
            break
    kko = True
    for A in antichains(L):
        U = L.full_mask & ~L.mask(_down_closure(L, A))
        if _mass_in(fx, U) > _mass_in(fy, U):
            kko = False
            break
    if kko != found.holds:
        raise AssertionError("antichain and up-set dominance tests disagree")
    return found


def _down_closure(L: Lattice, A) -> tuple:
    m = 0
    for a in A:
        m |= L.down_mask(a)
    return L.ids(m)


def _mass_in(f: LatticeFn, mask: int) -> Fraction:
    return sum((f.at(i) for i in iter_bits(mask)), ZERO)


def dominance_coupling(phi_cdf: LatticeFn, psi_cdf: LatticeFn) -> JointPmf | None:
    """A joint mass on pairs x ≤ y with the given marginals, or None."""
    fx, fy = require_cdf(phi_cdf), require_cdf(psi_cdf)
    L = phi_cdf.lattice
    n = len(L)
    pairs = [(i, j) for i in range(n) for j in range(n) if L._up[i] >> j & 1]
    rows = [[1 if p[0] == i else 0 for p in pairs] for i in range(n)]
    rows += [[1 if p[1] == j else 0 for p in pairs] for j in range(n)]
    rhs = fx.values() + fy.values()
    ok, x = feasible(LinearProgram([0] * len(pairs), rows, ["="] * len(rows), rhs))
    if not ok:
        return None
    atoms = {(L.elements[i], L.elements[j]): m for (i, j), m in zip(pairs, x)}
    return JointPmf.build(atoms, key=lambda k: (L.index(k[0]), L.index(k[1])))


# -- random up-set versus random element ----------------------------------------------


def _check_pair(phi: LatticeFn, psi_cdf: LatticeFn) -> LatticeFn:
    require_m1(phi)
    fy = require_cdf(psi_cdf)
    if phi.lattice != psi_cdf.lattice:
        raise ValueError("marginals live on different lattices")
    return fy


def _marginal_rows(phi, fy, pairs):
    L = phi.lattice
    n = len(L)
    rows = [[1 if V.mask >> i & 1 else 0 for V, _ in pairs] for i in range(n)]
    rows += [[1 if y == j else 0 for _, y in pairs] for j in range(n)]
    rhs = phi.values() + fy.values()
    return rows, rhs


def _atom_key(ideal: IdealLattice):
    L = ideal.base
    return lambda k: (ideal.index[k[0]], L.index(k[1]))


def membership_coupling(phi: LatticeFn, psi_cdf: LatticeFn, ideal: IdealLattice | None = None) -> JointPmf | None:
    """Joint law of (𝒳, Y) with P(Y ∈ 𝒳) = 1 and the given marginals, or None."""
    fy = _check_pair(phi, psi_cdf)
    ideal = _ideal_for(phi, ideal)
    pairs = [(V, y) for V in ideal.nodes for y in iter_bits(V.mask)]
    rows, rhs = _marginal_rows(phi, fy, pairs)
    ok, x = feasible(LinearProgram([0] * len(pairs), rows, ["="] * len(rows), rhs))
    if not ok:
        return None
    L = phi.lattice
    atoms = {(V, L.elements[y]): m for (V, y), m in zip(pairs, x)}
    return JointPmf.build(atoms, key=_atom_key(ideal))


def is_membership_coupling(Gamma: JointPmf, phi: LatticeFn, psi_cdf: LatticeFn) -> bool:
    """Replay: every atom has y ∈ V, masses are nonnegative, marginals match."""
    L = phi.lattice
    fy = require_cdf(psi_cdf)
    px = [ZERO] * len(L)
    py = [ZERO] * len(L)
    for (V, y), m in Gamma.atoms:
        if m < 0 or y not in V:
            return False
        for i in iter_bits(V.mask):
            px[i] += m
        py[L.index(y)] += m
    return px == phi.values() and py == fy.values()


def w_one(V, y) -> int:
    """w₁(V, y) = 1 if y ∈ V."""
    return 1 if y in V else 0


@dataclass(frozen=True)
class JointBound:
    value: Fraction
    coupling: JointPmf
    g: dict = field(repr=False)
    h: LatticeFn = field(repr=False)


def joint_frechet(phi: LatticeFn, psi_cdf: LatticeFn, w, ideal: IdealLattice | None = None) -> JointBound:
    """max Γ(w) over joint laws with marginals (φ, ψ), with a dual pair (g, h).

    The dual pair satisfies w(V,y) ≤ h(y) − g(V) everywhere and
    ψ(h) − S^φ(g) equals the returned value.
    """
    fy = _check_pair(phi, psi_cdf)
    ideal = _ideal_for(phi, ideal)
    L = phi.lattice
    if phi[L.top] != ONE:
        raise Infeasible("total masses differ: φ(1̂) must equal 1")
    get = w if callable(w) else (lambda V, y: w.get((V, y), 0))
    pairs = [(V, y) for V in ideal.nodes for y in range(len(L))]
    objective = [Fraction(get(V, L.elements[y])) for V, y in pairs]
    rows, rhs = _marginal_rows(phi, fy, pairs)
    out = solve(LinearProgram(objective, rows, ["="] * len(rows), rhs, maximize=True))
    if not out.optimal:
        raise Infeasible(f"joint program is {out.status}")
    n = len(L)
    a, eta = out.duals[:n], out.duals[n:]
    g = {V: -sum((a[i] for i in iter_bits(V.mask)), ZERO) for V in ideal.nodes}
    h = LatticeFn._raw(L, list(eta))
    atoms = {(V, L.elements[y]): m for (V, y), m in zip(pairs, out.x)}
    return JointBound(out.value, JointPmf.build(atoms, key=_atom_key(ideal)), g, h)


def joint_dual_value(phi: LatticeFn, psi_cdf: LatticeFn, g: dict, h: LatticeFn, w=None,
                     ideal: IdealLattice | None = None) -> Fraction:
    """ψ(h) − S^φ(g); when ``w`` is given the pair must satisfy w ≤ h(y) − g(V)."""
    fy = _check_pair(phi, psi_cdf)
    ideal = _ideal_for(phi, ideal)
    if w is not None:
        get = w if callable(w) else (lambda V, y: w.get((V, y), 0))
        for V in ideal.nodes:
            for y, hy in h.items():
                if Fraction(get(V, y)) > hy - g[V]:
                    raise ValueError(f"dual condition fails at ({V}, {y})")
    s, _ = dual_bound(phi, g, ideal)
    return sum((p * v for p, v in zip(fy.values(), h.values())), ZERO) - s


def monotone_rewrite(ideal: IdealLattice, g: dict) -> tuple[LatticeFn, dict]:
    """(h′, g′) for w₁: h′(y) = max_V (w₁(V,y) + g(V)), g′(V) = min_y (h′(y) − w₁(V,y))."""
    L = ideal.base
    hp = [max(w_one(V, y) + g[V] for V in ideal.nodes) for y in L.elements]
    gp = {V: min(hp[i] - w_one(V, y) for i, y in enumerate(L.elements)) for V in ideal.nodes}
    return LatticeFn._raw(L, hp), gp


def h_tilde(ideal: IdealLattice, h: LatticeFn) -> dict:
    """h̃(V) = min of h over V."""
    return {V: min(h.at(i) for i in iter_bits(V.mask)) for V in ideal.nodes}


@dataclass(frozen=True)
class ReducedDual:
    value: Fraction
    h: LatticeFn
    r: LatticeFn
    level_bound: Fraction | None = None
    level_set: tuple | None = None


def joint_dual_reduced(phi: LatticeFn, psi_cdf: LatticeFn, ideal: IdealLattice | None = None,
                       levels: bool = False) -> ReducedDual:
    """S_{(φ,ψ)}(w₁) = min {ψ(h) − S^φ(h̃) : h monotone, 0 ≤ h ≤ 1} + 1.

    S^φ(h̃) is folded in as max Σ r_x φ(x) with Σ_{x∈V} r_x ≤ h(y) for all
    y ∈ V, so the whole reduced problem is one program in (h, r).  The
    optimum is replayed by evaluating ψ(h) − S^φ(h̃) + 1 separately.

    With ``levels=True`` the 0/1 level functions h = χ_A (A an up-set of
    L, or empty) are also scored; their minimum is an upper bound on the
    value and is returned alongside it.
    """
    fy = _check_pair(phi, psi_cdf)
    ideal = _ideal_for(phi, ideal)
    L = phi.lattice
    n = len(L)
    # columns: h (n), r+ (n), r- (n)
    objective = list(fy.values()) + [-v for v in phi.values()] + list(phi.values())
    rows, senses, rhs = [], [], []
    for V in ideal.nodes:
        member = [1 if V.mask >> i & 1 else 0 for i in range(n)]
        for y in iter_bits(V.mask):
            hcol = [0] * n
            hcol[y] = -1
            rows.append(hcol + member + [-m for m in member])
            senses.append("<=")
            rhs.append(0)
    for y in range(n):
        row = [0] * (3 * n)
        row[y] = 1
        rows.append(row)
        senses.append("<=")
        rhs.append(1)
    for x, y in L.covers:
        row = [0] * (3 * n)
        row[L.index(x)] = 1
        row[L.index(y)] = -1
        rows.append(row)
        senses.append("<=")
        rhs.append(0)
    out = solve_via_dual(LinearProgram(objective, rows, senses, rhs))
    if not out.optimal:
        raise Infeasible(f"reduced dual is {out.status}")
    h = LatticeFn._raw(L, out.x[:n])
    r = LatticeFn._raw(L, [out.x[n + i] - out.x[2 * n + i] for i in range(n)])
    value = out.value + 1
    replay = _reduced_objective(phi, fy, ideal, h)
    if replay != value:
        raise AssertionError("reduced dual optimum does not replay")
    result = ReducedDual(value, h, r)
    if levels:
        best = None
        for A in ((),) + tuple(antichains(L)):
            mask = 0
            for a in A:
                mask |= L.up_mask(a)
            hA = LatticeFn._raw(L, [ONE if mask >> i & 1 else ZERO for i in range(n)])
            v = _reduced_objective(phi, fy, ideal, hA)
            if best is None or v < best[0]:
                best = (v, A)
        if best[0] < value:
            raise AssertionError("a level function beats the reduced optimum")
        result = ReducedDual(value, h, r, best[0], best[1])
    return result


def _reduced_objective(phi, fy, ideal, h) -> Fraction:
    s = frechet_bound(phi, h_tilde(ideal, h), ideal)
    return sum((p * v for p, v in zip(fy.values(), h.values())), ZERO) - s + 1


# -- the monotone-path condition ------------------------------------------------------


@dataclass(frozen=True)
class PathCheck:
    holds: bool
    path: tuple | None = None
    lhs: Fraction | None = None
    rhs: Fraction | None = None
    violations: tuple = ()
    states: int = 0


def path_sides(phi: LatticeFn, psi_cdf: LatticeFn, path: Sequence) -> tuple[Fraction, Fraction]:
    """(Λ_{path}φ(1̂), ∇_{path}ψ(1̂)) for one monotone path."""
    L = phi.lattice
    path = tuple(path)
    if not is_monotone_path(L, path):
        raise NotMonotonePath(f"{path} is not a monotone path")
    return successive_lambda(phi, path)[L.top], nabla(psi_cdf, path, L.top)


def comp_condition(phi: LatticeFn, psi_cdf: LatticeFn, paths: Iterable | None = None) -> PathCheck:
    """Whether Λ_{a₁..a_k}φ(1̂) ≤ ∇_{a₁..a_k}ψ(1̂) on every monotone path.

    Without ``paths`` every monotone path is covered by a breadth-first
    search over states (current Λ-image, down-set of the prefix); two
    prefixes with equal state have identical continuations.  Prefixes whose
    Λ-image vanishes at 1̂ are cut.  The witness is the first violation in
    breadth-first, position-lexicographic order, so it is a shortest one.

    With ``paths`` only those monotone paths are checked, in order, and all
    violating ones are listed.
    """
    fy = _check_pair(phi, psi_cdf)
    L = phi.lattice
    if paths is not None:
        bad = []
        for p in paths:
            lhs, rhs = path_sides(phi, psi_cdf, p)
            if lhs > rhs:
                bad.append((tuple(p), lhs, rhs))
        if not bad:
            return PathCheck(True)
        p, lhs, rhs = bad[0]
        return PathCheck(False, p, lhs, rhs, tuple(b[0] for b in bad))

    top, full = L._top, L.full_mask
    mass = fy.values()
    frontier = [((), phi, 0)]
    seen = set()
    while frontier:
        nxt = []
        for path, f, D in frontier:
            for a in range(len(L)):
                if D >> a & 1:
                    continue
                g = f if f.at(a) == 0 else lambda_diff(f, L.elements[a])
                D2 = D | L._down[a]
                key = (tuple(g._v), D2)
                if key in seen:
                    continue
                seen.add(key)
                p2 = path + (L.elements[a],)
                rhs = sum((mass[i] for i in range(len(L)) if not D2 >> i & 1), ZERO)
                if g.at(top) > rhs:
                    if nabla(psi_cdf, p2, L.top) != rhs:
                        raise AssertionError("tail mass and difference functional disagree")
                    return PathCheck(False, p2, g.at(top), rhs, (p2,), len(seen))
                if g.at(top) != 0 and D2 != full:
                    nxt.append((p2, g, D2))
        frontier = nxt
    return PathCheck(True, states=len(seen))
