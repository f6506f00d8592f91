"""The distributive lattice of nonempty up-sets and extensions over it.

Nodes are ordered by reverse inclusion: ``V ⪯ U`` iff ``V ⊇ U``.  The
minimum is the whole lattice ``⟨0̂⟩*`` and the maximum is ``⟨1̂⟩*``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping

from .capacity import (
    ZERO,
    LatticeFn,
    dual_capacity,
    is_capacity_fn,
    is_completely_alternating,
    mobius_inverse,
    require_m1,
)
from .errors import (
    CapExceeded,
    MarginalMismatch,
    NegativeValue,
    NotACapacity,
    NotCompletelyAlternating,
    NotCompletelyMonotone,
)
from .lattice import Lattice, UpSet, antichains, dual_lattice, iter_bits, up_set

DEFAULT_IDEAL_CAP = 200_000


class IdealLattice:
    """All nonempty up-sets of a base lattice.

    ``nodes`` is sorted by decreasing size and then by the generator
    positions, which is a linear extension of ⪯.
    """

    def __init__(self, base: Lattice, nodes: Iterable[UpSet], downsets: bool = False):
        self.base = base
        self.downsets = downsets
        self.nodes = tuple(sorted(nodes, key=self._key))
        self.index = {U: i for i, U in enumerate(self.nodes)}
        self._by_mask = {U.mask: U for U in self.nodes}
        self.principal = {x: self._by_mask[base.up_mask(x)] for x in base.elements}
        self._lattice: Lattice | None = None

    def _key(self, U):
        return (-len(U.members), tuple(self.base.index(g) for g in U.generators))

    def __len__(self):
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    def __contains__(self, U):
        return U in self.index

    @property
    def minimum(self) -> UpSet:
        return self.nodes[0]

    @property
    def maximum(self) -> UpSet:
        return self.nodes[-1]

    def upset(self, generators: Iterable) -> UpSet:
        """The node generated by ``generators`` (minimal elements need not be given)."""
        U = up_set(self.base, generators)
        return self._by_mask[U.mask]

    def from_mask(self, mask: int) -> UpSet:
        return self._by_mask[mask]

    def precedes(self, V: UpSet, U: UpSet) -> bool:
        """V ⪯ U, i.e. V contains U."""
        return U.mask & ~V.mask == 0

    def render(self, U: UpSet) -> str:
        if self.downsets:
            return "⟨" + ",".join(U.generators) + "⟩"
        return str(U)

    def as_lattice(self) -> Lattice:
        """The nodes as a :class:`Lattice` whose ids are the rendered up-sets."""
        if self._lattice is None:
            up = []
            for V in self.nodes:
                m = 0
                for j, U in enumerate(self.nodes):
                    if U.mask & ~V.mask == 0:
                        m |= 1 << j
                up.append(m)
            self._lattice = Lattice([self.render(U) for U in self.nodes], up)
        return self._lattice

    def fn(self, values: Mapping) -> LatticeFn:
        """A function on the nodes, as a LatticeFn over :meth:`as_lattice`."""
        lat = self.as_lattice()
        return LatticeFn._raw(lat, [Fraction(values.get(U, 0)) for U in self.nodes])


def build_ideal_lattice(L: Lattice, cap: int = DEFAULT_IDEAL_CAP) -> IdealLattice:
    nodes = []
    for count, A in enumerate(antichains(L), 1):
        if count > cap:
            raise CapExceeded("ideal lattice size", count, cap)
        nodes.append(up_set(L, A))
    return IdealLattice(L, nodes)


def build_downset_lattice(L: Lattice, cap: int = DEFAULT_IDEAL_CAP) -> IdealLattice:
    """Nonempty order ideals of ``L``: the up-sets of the dual lattice."""
    D = dual_lattice(L)
    nodes = []
    for count, A in enumerate(antichains(D), 1):
        if count > cap:
            raise CapExceeded("ideal lattice size", count, cap)
        nodes.append(up_set(D, A))
    return IdealLattice(D, nodes, downsets=True)


@dataclass(frozen=True)
class Extension:
    """A nonnegative pmf on the ideal lattice; Φ(U) sums the atoms V ⪯ U."""

    ideal: IdealLattice
    pmf: dict = field(compare=False)

    def __post_init__(self):
        clean = {}
        for U, m in self.pmf.items():
            m = Fraction(m)
            if m < 0:
                raise NegativeValue(f"negative mass {m} at {U}")
            if m:
                clean[U] = clean.get(U, ZERO) + m
        ordered = dict(sorted(clean.items(), key=lambda kv: self.ideal.index[kv[0]]))
        object.__setattr__(self, "pmf", ordered)

    def __eq__(self, other):
        if not isinstance(other, Extension):
            return NotImplemented
        return self.ideal is other.ideal and self.pmf == other.pmf

    def __call__(self, U: UpSet) -> Fraction:
        return evaluate(self, U)

    def __add__(self, other: "Extension") -> "Extension":
        pmf = dict(self.pmf)
        for U, m in other.pmf.items():
            pmf[U] = pmf.get(U, ZERO) + m
        return Extension(self.ideal, pmf)

    @property
    def total(self) -> Fraction:
        return sum(self.pmf.values(), ZERO)

    def expectation(self, g) -> Fraction:
        """Sum of pmf(V) g(V); ``g`` is a mapping or a callable on nodes."""
        get = g if callable(g) else (lambda V: g.get(V, 0))
        return sum((m * Fraction(get(V)) for V, m in self.pmf.items()), ZERO)

    def values(self) -> dict:
        return {U: evaluate(self, U) for U in self.ideal.nodes}

    def as_fn(self) -> LatticeFn:
        return self.ideal.fn(self.values())


def evaluate(Phi: Extension, U: UpSet) -> Fraction:
    """Φ(U): total mass of atoms V with V ⊇ U."""
    return sum((m for V, m in Phi.pmf.items() if U.mask & ~V.mask == 0), ZERO)


def project(Phi: Extension) -> LatticeFn:
    """φ(x) = Φ(⟨x⟩*) = total mass of atoms containing x."""
    L = Phi.ideal.base
    vals = [ZERO] * len(L)
    for V, m in Phi.pmf.items():
        for i in iter_bits(V.mask):
            vals[i] += m
    return LatticeFn._raw(L, vals)


def _ideal_for(phi: LatticeFn, ideal: IdealLattice | None) -> IdealLattice:
    if ideal is None:
        return build_ideal_lattice(phi.lattice)
    if ideal.base is not phi.lattice and ideal.base != phi.lattice:
        raise ValueError("ideal lattice built over a different lattice")
    return ideal


def greedy_extension(phi: LatticeFn, ideal: IdealLattice | None = None) -> Extension:
    """Layer-cake extension: mass r_i - r_{i-1} on each level set {φ > r_{i-1}}."""
    require_m1(phi)
    ideal = _ideal_for(phi, ideal)
    L = phi.lattice
    levels = sorted(set(phi.values()) | {ZERO})
    pmf = {}
    for lo, hi in zip(levels, levels[1:]):
        mask = 0
        for i, v in enumerate(phi.values()):
            if v > lo:
                mask |= 1 << i
        pmf[ideal.from_mask(mask)] = hi - lo
    return Extension(ideal, pmf)


def mobius_extension(phi: LatticeFn, ideal: IdealLattice | None = None) -> Extension:
    """Atoms f(x) on the principal up-sets ⟨x⟩*, f the Möbius inverse."""
    f = mobius_inverse(phi)
    neg = [x for x, v in f.items() if v < 0]
    if neg:
        raise NotCompletelyMonotone(f"Möbius inverse is {f[neg[0]]} at {neg[0]!r}")
    ideal = _ideal_for(phi, ideal)
    return Extension(ideal, {ideal.principal[x]: v for x, v in f.items() if v})


def is_mobius_extension(Phi: Extension, phi: LatticeFn) -> bool:
    """Pair test: Φ(⟨a,b⟩*) = φ(a ∧ b) for every pair."""
    if project(Phi) != phi:
        raise MarginalMismatch("extension does not project onto the given function")
    L = phi.lattice
    ideal = Phi.ideal
    for a, b in combinations(L.elements, 2):
        if evaluate(Phi, ideal.upset((a, b))) != phi[L.meet(a, b)]:
            return False
    return True


def is_dual_mobius_extension(Phi: Extension, phi: LatticeFn) -> bool:
    """Pair test: Φ(⟨a,b⟩*) = φ(a) + φ(b) - φ(a ∨ b) for every pair."""
    if project(Phi) != phi:
        raise MarginalMismatch("extension does not project onto the given function")
    L = phi.lattice
    ideal = Phi.ideal
    for a, b in combinations(L.elements, 2):
        if evaluate(Phi, ideal.upset((a, b))) != phi[a] + phi[b] - phi[L.join(a, b)]:
            return False
    return True


def dual_mobius_extension(phi: LatticeFn, ideal: IdealLattice | None = None) -> Extension:
    """Extension whose atoms are complements of principal order ideals.

    The complement L \\ ↓x carries the Möbius mass of the dual capacity at x
    (inverted over the dual lattice).
    """
    if not is_capacity_fn(phi):
        raise NotACapacity("dual Möbius extension needs a capacity")
    if not is_completely_alternating(phi):
        raise NotCompletelyAlternating("capacity is not completely alternating")
    ideal = _ideal_for(phi, ideal)
    L = phi.lattice
    fstar = mobius_inverse(dual_capacity(phi))
    pmf = {}
    for x, m in fstar.items():
        if not m:
            continue
        mask = L.full_mask & ~L.down_mask(x)
        U = ideal.from_mask(mask)
        pmf[U] = pmf.get(U, ZERO) + m
    return Extension(ideal, pmf)
