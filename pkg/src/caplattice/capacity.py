"""Functions on a lattice: Möbius inversion, difference functionals, duals."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .errors import (
    EmptyGenerator,
    NotACapacity,
    NotADownSet,
    NotMonotone,
    NegativeValue,
    Unreducible,
)
from .lattice import Lattice, dual_lattice, iter_bits, meet_of

ZERO = Fraction(0)
ONE = Fraction(1)


def to_fraction(value) -> Fraction:
    """Exact conversion; floats are refused so nothing inexact sneaks in."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"refusing inexact value {value!r}; use a string like '1/3'")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot read {value!r} as a rational")


class LatticeFn:
    """A total map from the elements of a lattice to rationals."""

    __slots__ = ("lattice", "_v")

    def __init__(self, lattice: Lattice, values: Mapping | Callable | Sequence, default=None):
        self.lattice = lattice
        if callable(values):
            self._v = [to_fraction(values(x)) for x in lattice.elements]
        elif isinstance(values, Mapping):
            unknown = [x for x in values if x not in lattice]
            if unknown:
                lattice.index(unknown[0])
            if default is None:
                missing = [x for x in lattice.elements if x not in values]
                if missing:
                    raise ValueError(f"no value given for {missing[0]!r}")
            self._v = [to_fraction(values.get(x, default)) for x in lattice.elements]
        else:
            values = list(values)
            if len(values) != len(lattice):
                raise ValueError("value list length differs from lattice size")
            self._v = [to_fraction(v) for v in values]

    @classmethod
    def _raw(cls, lattice, values):
        fn = cls.__new__(cls)
        fn.lattice = lattice
        fn._v = values
        return fn

    def __getitem__(self, x) -> Fraction:
        return self._v[self.lattice.index(x)]

    def at(self, i: int) -> Fraction:
        return self._v[i]

    def values(self) -> list:
        return list(self._v)

    def items(self):
        return zip(self.lattice.elements, self._v)

    def as_dict(self) -> dict:
        return dict(self.items())

    def support(self) -> tuple:
        return tuple(x for x, v in self.items() if v != 0)

    def __eq__(self, other):
        if not isinstance(other, LatticeFn):
            return NotImplemented
        return self.lattice == other.lattice and self._v == other._v

    def __hash__(self):
        return hash(tuple(self._v))

    def __add__(self, other):
        return LatticeFn._raw(self.lattice, [a + b for a, b in zip(self._v, other._v)])

    def __sub__(self, other):
        return LatticeFn._raw(self.lattice, [a - b for a, b in zip(self._v, other._v)])

    def __neg__(self):
        return LatticeFn._raw(self.lattice, [-a for a in self._v])

    def scaled(self, c) -> "LatticeFn":
        c = to_fraction(c)
        return LatticeFn._raw(self.lattice, [c * a for a in self._v])

    def on(self, lattice: Lattice) -> "LatticeFn":
        """Same values viewed over another lattice on the same element list."""
        if lattice.elements != self.lattice.elements:
            raise ValueError("element lists differ")
        return LatticeFn._raw(lattice, list(self._v))

    def __repr__(self):
        body = ", ".join(f"{x}: {v}" for x, v in self.items() if v != 0)
        return f"LatticeFn({{{body}}})"


def constant(L: Lattice, c) -> LatticeFn:
    return LatticeFn._raw(L, [to_fraction(c)] * len(L))


# -- predicates ----------------------------------------------------------


def is_monotone(phi: LatticeFn) -> bool:
    L = phi.lattice
    return all(phi[x] <= phi[y] for x, y in L.covers)


def is_nonnegative(phi: LatticeFn) -> bool:
    return all(v >= 0 for v in phi._v)


def require_m1(phi: LatticeFn) -> None:
    """Raise unless ``phi`` is nonnegative and monotone."""
    if not is_monotone(phi):
        raise NotMonotone("function is not monotone")
    if not is_nonnegative(phi):
        raise NegativeValue("function takes a negative value")


def is_capacity_fn(phi: LatticeFn) -> bool:
    L = phi.lattice
    return is_monotone(phi) and phi[L.bottom] == 0 and phi[L.top] == 1


@dataclass(frozen=True)
class CapacityClass:
    is_monotone: bool
    is_capacity: bool
    is_completely_monotone: bool
    is_completely_alternating: bool
    # False flags that the Möbius sign test runs outside the usual phi(0) >= 0 setting.
    bottom_nonnegative: bool = True


def classify(phi: LatticeFn) -> CapacityClass:
    L = phi.lattice
    monotone = is_monotone(phi)
    return CapacityClass(
        is_monotone=monotone,
        is_capacity=monotone and phi[L.bottom] == 0 and phi[L.top] == 1,
        is_completely_monotone=is_completely_monotone(phi),
        is_completely_alternating=is_completely_alternating(phi),
        bottom_nonnegative=phi[L.bottom] >= 0,
    )


def is_completely_monotone(phi: LatticeFn) -> bool:
    """Every difference functional is nonnegative.

    Equivalent to the Möbius inverse being nonnegative off the bottom
    element; the bottom mass never enters a difference functional.
    """
    f = mobius_inverse(phi)
    b = phi.lattice._bottom
    return all(v >= 0 for i, v in enumerate(f._v) if i != b)


def is_completely_alternating(phi: LatticeFn) -> bool:
    """Every dual difference is nonpositive, i.e. -phi is completely monotone on the dual."""
    return is_completely_monotone(-phi.on(dual_lattice(phi.lattice)))


# -- Möbius inversion ------------------------------------------------------


def mobius_inverse(phi: LatticeFn) -> LatticeFn:
    """f(x) = sum over y <= x of phi(y) mu(y, x)."""
    L = phi.lattice
    f = [ZERO] * len(L)
    for i, v in enumerate(phi._v):
        if not v:
            continue
        for j, mu in L.mobius_row(i).items():
            if mu:
                f[j] += v * mu
    return LatticeFn._raw(L, f)


def cdf_from_mass(f: LatticeFn) -> LatticeFn:
    """Zeta transform: phi(x) = sum over y <= x of f(y)."""
    L = f.lattice
    out = []
    for i in range(len(L)):
        out.append(sum((f._v[j] for j in iter_bits(L._down[i])), ZERO))
    return LatticeFn._raw(L, out)


# -- difference functionals --------------------------------------------------


def difference(phi: LatticeFn, a) -> LatticeFn:
    """One-step difference x -> phi(x) - phi(x meet a)."""
    L = phi.lattice
    ia = L.index(a)
    return LatticeFn._raw(L, [phi._v[i] - phi._v[L._meet[i][ia]] for i in range(len(L))])


def successive_difference(phi: LatticeFn, seq: Iterable) -> LatticeFn:
    for a in seq:
        phi = difference(phi, a)
    return phi


def maximal_meet_antichain(L: Lattice, A: Iterable, b) -> tuple:
    """Largest b-meet antichain inside ``A`` dominating every a meet b."""
    A = L.sort(A)
    ib = L.index(b)
    if not A:
        raise EmptyGenerator("difference functional needs a nonempty set")
    if any(L.leq(b, a) for a in A):
        raise Unreducible(f"{b!r} lies below an element of the set")
    meets = {a: L._meet[L.index(a)][ib] for a in A}
    kept = []
    seen = set()
    for a in A:
        m = meets[a]
        if m in seen:
            continue
        if any(m != m2 and L._up[m] >> m2 & 1 for m2 in meets.values()):
            continue
        seen.add(m)
        kept.append(a)
    return tuple(kept)


def nabla(phi: LatticeFn, A: Iterable, b) -> Fraction:
    """Successive difference functional at ``b`` over the set ``A``.

    The set is reduced to a maximal b-meet antichain first, then expanded
    by inclusion-exclusion over its subsets with merged meets.
    """
    L = phi.lattice
    A = L.sort(A)
    if not A:
        raise EmptyGenerator("difference functional needs a nonempty set")
    ib = L.index(b)
    if any(L.leq(b, a) for a in A):
        return ZERO
    reduced = maximal_meet_antichain(L, A, b)
    terms = {ib: 1}
    for a in reduced:
        ia = L.index(a)
        nxt = dict(terms)
        for m, coef in terms.items():
            k = L._meet[m][ia]
            nxt[k] = nxt.get(k, 0) - coef
        terms = nxt
    return sum((coef * phi._v[m] for m, coef in terms.items() if coef), ZERO)


def nabla_expansion(phi: LatticeFn, A: Iterable, b) -> Fraction:
    """Plain 2^|A| inclusion-exclusion with no reduction (reference path)."""
    L = phi.lattice
    A = L.sort(A)
    total = ZERO
    for k in range(len(A) + 1):
        for sub in combinations(A, k):
            total += (-1) ** k * phi[L.meet(meet_of(L, sub), b)]
    return total


def pi_set(L: Lattice, A: Iterable, b) -> frozenset:
    """Elements below ``b`` and below no member of ``A``."""
    A = L.sort(A)
    if not A:
        raise EmptyGenerator("pi-set needs a nonempty set")
    blocked = 0
    for a in A:
        blocked |= L.down_mask(a)
    return frozenset(L.ids(L.down_mask(b) & ~blocked))


def support_check(phi: LatticeFn, V: Iterable) -> bool:
    """Whether the Möbius inverse of ``phi`` vanishes outside the down-set ``V``.

    Decided twice, once from the inverse and once from the difference
    functionals over ``V``; the two must agree.
    """
    L = phi.lattice
    vmask = L.mask(V)
    closure = 0
    for i in iter_bits(vmask):
        closure |= L._down[i]
    if closure != vmask:
        raise NotADownSet(f"{L.ids(closure & ~vmask)[0]!r} is below V but not in it")
    f = mobius_inverse(phi)
    by_inverse = all(f._v[i] == 0 for i in range(len(L)) if not vmask >> i & 1)
    outside = [L.elements[i] for i in range(len(L)) if not vmask >> i & 1]
    if vmask:
        V = L.ids(vmask)
        by_nabla = all(nabla(phi, V, b) == 0 for b in outside)
    else:
        by_nabla = all(phi[b] == 0 for b in outside)
    if by_inverse != by_nabla:
        raise AssertionError("support criteria disagree")
    return by_inverse


# -- duals ------------------------------------------------------------------


def dual_capacity(phi: LatticeFn) -> LatticeFn:
    """1 - phi, attached to the dual lattice."""
    if not is_capacity_fn(phi):
        raise NotACapacity("dual capacity needs a capacity")
    return LatticeFn._raw(dual_lattice(phi.lattice), [ONE - v for v in phi._v])


def delta(phi: LatticeFn, B: Iterable, b) -> Fraction:
    """Dual successive difference: the difference functional on the dual lattice."""
    return nabla(phi.on(dual_lattice(phi.lattice)), B, b)


def dual_difference(phi: LatticeFn, b) -> LatticeFn:
    """One-step dual difference x -> phi(x) - phi(x join b)."""
    L = phi.lattice
    ib = L.index(b)
    return LatticeFn._raw(L, [phi._v[i] - phi._v[L._join[i][ib]] for i in range(len(L))])
