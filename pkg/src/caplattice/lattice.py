"""Finite lattices built from a generating order relation.

Elements are opaque string ids.  Internally every subset of a lattice is an
integer bitmask over element positions, so order ideals, filters and
intervals are cheap to intersect.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .errors import (
    CapExceeded,
    CapLatticeError,
    DuplicateElement,
    EmptyGenerator,
    NotALattice,
    NotAPoset,
    NotComparable,
    NotDominating,
    UnknownElement,
)

DEFAULT_CAP = 64
BOOLEAN_CAP = 6
EMPTY_NAME = "∅"


def iter_bits(mask: int) -> Iterator[int]:
    """Positions of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Lattice:
    """A validated finite lattice.

    Instances are immutable; build them with :func:`build_lattice` or one of
    the generators.  ``elements`` keeps the caller's order, which is also the
    order used for every deterministic enumeration in the package.
    """

    def __init__(self, elements: Sequence[str], up: Sequence[int]):
        self.elements = tuple(elements)
        self._pos = {x: i for i, x in enumerate(self.elements)}
        n = len(self.elements)
        self._up = list(up)
        self._down = [0] * n
        for i in range(n):
            for j in iter_bits(self._up[i]):
                self._down[j] |= 1 << i
        self.full_mask = (1 << n) - 1
        self._topo = sorted(range(n), key=lambda i: (self._down[i].bit_count(), i))

        by_down = {m: i for i, m in enumerate(self._down)}
        by_up = {m: i for i, m in enumerate(self._up)}
        self._meet = [[0] * n for _ in range(n)]
        self._join = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                m = by_down.get(self._down[i] & self._down[j])
                if m is None:
                    raise NotALattice((self.elements[i], self.elements[j]), "meet")
                u = by_up.get(self._up[i] & self._up[j])
                if u is None:
                    raise NotALattice((self.elements[i], self.elements[j]), "join")
                self._meet[i][j] = self._meet[j][i] = m
                self._join[i][j] = self._join[j][i] = u

        self._bottom = self._topo[0]
        self._top = self._topo[-1]
        self.bottom = self.elements[self._bottom]
        self.top = self.elements[self._top]
        covers = []
        for i in range(n):
            above = self._up[i] & ~(1 << i)
            for j in iter_bits(above):
                between = above & self._down[j] & ~(1 << j)
                if not between:
                    covers.append((self.elements[i], self.elements[j]))
        self.covers = tuple(covers)
        self._mobius_rows: dict[int, dict[int, int]] = {}
        self._dual: Lattice | None = None

    # -- basic queries -------------------------------------------------

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self._pos

    def __eq__(self, other):
        if not isinstance(other, Lattice):
            return NotImplemented
        return self.elements == other.elements and self._up == other._up

    def __hash__(self):
        return hash((self.elements, tuple(self._up)))

    def __repr__(self):
        return f"Lattice({len(self)} elements, bottom={self.bottom!r}, top={self.top!r})"

    def index(self, x) -> int:
        try:
            return self._pos[x]
        except KeyError:
            raise UnknownElement(f"{x!r} is not an element of the lattice") from None

    def leq(self, x, y) -> bool:
        return bool(self._up[self.index(x)] >> self.index(y) & 1)

    def lt(self, x, y) -> bool:
        return x != y and self.leq(x, y)

    def comparable(self, x, y) -> bool:
        return self.leq(x, y) or self.leq(y, x)

    def meet(self, x, y):
        return self.elements[self._meet[self.index(x)][self.index(y)]]

    def join(self, x, y):
        return self.elements[self._join[self.index(x)][self.index(y)]]

    # -- masks ---------------------------------------------------------

    def mask(self, ids: Iterable) -> int:
        m = 0
        for x in ids:
            m |= 1 << self.index(x)
        return m

    def ids(self, mask: int) -> tuple:
        return tuple(self.elements[i] for i in iter_bits(mask))

    def down_mask(self, x) -> int:
        return self._down[self.index(x)]

    def up_mask(self, x) -> int:
        return self._up[self.index(x)]

    def sort(self, ids: Iterable) -> tuple:
        """Canonical order of a subset: element-list position."""
        return tuple(sorted(set(ids), key=self.index))

    def topological(self) -> tuple:
        """A fixed linear extension (by rank, then position)."""
        return tuple(self.elements[i] for i in self._topo)

    def minimal_of(self, mask: int) -> int:
        out = 0
        for i in iter_bits(mask):
            if not (self._down[i] & mask) & ~(1 << i):
                out |= 1 << i
        return out

    def maximal_of(self, mask: int) -> int:
        out = 0
        for i in iter_bits(mask):
            if not (self._up[i] & mask) & ~(1 << i):
                out |= 1 << i
        return out

    def upset_from_mask(self, mask: int) -> "UpSet":
        if not mask:
            raise EmptyGenerator("the empty up-set has no generator")
        gens = self.ids(self.minimal_of(mask))
        return UpSet(gens, frozenset(self.ids(mask)), mask)

    # -- Möbius function -----------------------------------------------

    def mobius_row(self, i: int) -> dict[int, int]:
        """``{j: mu(i, j)}`` for every j >= i (integer values)."""
        row = self._mobius_rows.get(i)
        if row is None:
            row = {i: 1}
            above = self._up[i]
            for j in self._topo:
                if j == i or not above >> j & 1:
                    continue
                interval = above & self._down[j] & ~(1 << j)
                row[j] = -sum(row[k] for k in iter_bits(interval))
            self._mobius_rows[i] = row
        return row


@dataclass(frozen=True)
class UpSet:
    """A nonempty dual order ideal, keyed by its antichain of minimal elements."""

    generators: tuple
    members: frozenset = field(compare=False)
    mask: int = field(compare=False, repr=False)

    def __str__(self):
        return "⟨" + ",".join(self.generators) + "⟩*"

    def __contains__(self, x):
        return x in self.members

    def __len__(self):
        return len(self.members)

    def contains_upset(self, other: "UpSet") -> bool:
        return other.mask & ~self.mask == 0


# -- construction ------------------------------------------------------


def build_lattice(elements: Sequence[str], relation_pairs: Iterable = (), cap: int = DEFAULT_CAP) -> Lattice:
    """Close ``relation_pairs`` (x <= y) reflexively and transitively and validate.

    Any generating relation is accepted; covers are recomputed.
    """
    elements = tuple(elements)
    if not elements:
        raise CapLatticeError("a lattice needs at least one element")
    if len(elements) > cap:
        raise CapExceeded("lattice size", len(elements), cap)
    pos = {}
    for i, x in enumerate(elements):
        if x in pos:
            raise DuplicateElement(f"element {x!r} listed twice")
        pos[x] = i
    n = len(elements)
    up = [1 << i for i in range(n)]
    for pair in relation_pairs:
        x, y = pair
        for z in (x, y):
            if z not in pos:
                raise UnknownElement(f"relation mentions undeclared element {z!r}")
        up[pos[x]] |= 1 << pos[y]
    for k in range(n):
        bit = 1 << k
        uk = up[k]
        for i in range(n):
            if up[i] & bit:
                up[i] |= uk
    for i in range(n):
        for j in iter_bits(up[i] & ~(1 << i)):
            if up[j] >> i & 1:
                raise NotAPoset(f"cycle through {elements[i]!r} and {elements[j]!r}")
    return Lattice(elements, up)


def boolean_lattice(n: int, cap: int = BOOLEAN_CAP) -> Lattice:
    """Subsets of {1..n} by inclusion, named "∅", "1", "12", ...

    Elements are listed by size, then lexicographically.
    """
    if n < 0 or n > cap:
        raise CapExceeded("Boolean lattice rank", n, cap)
    if n > 9:
        raise CapLatticeError("digit-string naming only covers n <= 9")
    digits = "123456789"[:n]
    subsets = [c for k in range(n + 1) for c in combinations(digits, k)]
    names = ["".join(c) or EMPTY_NAME for c in subsets]
    relation = []
    for c, name in zip(subsets, names):
        for d in digits:
            if d not in c:
                bigger = "".join(sorted(c + (d,)))
                relation.append((name, bigger))
    return build_lattice(names, relation, cap=max(DEFAULT_CAP, len(names)))


def chain_lattice(names: Sequence[str] | int) -> Lattice:
    if isinstance(names, int):
        names = [str(i) for i in range(names)]
    return build_lattice(names, list(zip(names, names[1:])))


def dual_lattice(L: Lattice) -> Lattice:
    """Order reversed: meets and joins swap, bottom and top swap."""
    if L._dual is None:
        dual = Lattice(L.elements, L._down)
        dual._dual = L
        L._dual = dual
    return L._dual


# -- operations ----------------------------------------------------------


def meet_of(L: Lattice, A: Iterable) -> str:
    """Greatest lower bound of ``A``; the empty meet is the top element."""
    result = L._top
    for x in A:
        result = L._meet[result][L.index(x)]
    return L.elements[result]


def join_of(L: Lattice, A: Iterable) -> str:
    result = L._bottom
    for x in A:
        result = L._join[result][L.index(x)]
    return L.elements[result]


def mobius(L: Lattice, x, y) -> Fraction:
    i, j = L.index(x), L.index(y)
    if not L._up[i] >> j & 1:
        raise NotComparable(f"mobius({x!r}, {y!r}) needs {x!r} <= {y!r}")
    return Fraction(L.mobius_row(i)[j])


def mobius_crosscut(L: Lattice, a, b, C: Iterable) -> Fraction:
    """Möbius value from a dominating cross-cut ``C`` of the interval [a, b).

    Sums (-1)^k N_k where N_k counts k-subsets of ``C`` whose meet is ``a``.
    """
    if not L.lt(a, b):
        raise NotComparable(f"cross-cut formula needs {a!r} < {b!r}")
    interval = L.up_mask(a) & L.down_mask(b) & ~(1 << L.index(b))
    C = L.sort(C)
    cmask = L.mask(C)
    if cmask & ~interval:
        raise NotDominating(f"{L.ids(cmask & ~interval)} lie outside [{a}, {b})")
    covered = 0
    for c in C:
        covered |= L.down_mask(c)
    if interval & ~covered:
        missing = L.ids(interval & ~covered)
        raise NotDominating(f"no element of C lies above {missing[0]!r}")
    ia = L.index(a)
    total = 0
    for k in range(1, len(C) + 1):
        count = 0
        for sub in combinations(C, k):
            if L.index(meet_of(L, sub)) == ia:
                count += 1
        total += (-1) ** k * count
    return Fraction(total)


def down_set(L: Lattice, A: Iterable) -> frozenset:
    mask = 0
    for a in A:
        mask |= L.down_mask(a)
    return frozenset(L.ids(mask))


def up_set(L: Lattice, A: Iterable) -> UpSet:
    mask = 0
    for a in A:
        mask |= L.up_mask(a)
    return L.upset_from_mask(mask)


def is_antichain(L: Lattice, A: Iterable) -> bool:
    A = list(A)
    return all(not L.comparable(x, y) for x, y in combinations(A, 2))


def antichains(L: Lattice) -> Iterator[tuple]:
    """Every nonempty antichain, lexicographic in element positions."""
    n = len(L)
    comp = [L._up[i] | L._down[i] for i in range(n)]

    def extend(chosen, blocked, start):
        for j in range(start, n):
            if blocked >> j & 1:
                continue
            nxt = chosen + (j,)
            yield tuple(L.elements[k] for k in nxt)
            yield from extend(nxt, blocked | comp[j], j + 1)

    yield from extend((), 0, 0)


def linear_extensions(L: Lattice) -> Iterator[tuple]:
    """Lazily enumerate linear extensions, lexicographic in element positions."""
    n = len(L)
    strict_down = [L._down[i] & ~(1 << i) for i in range(n)]
    order: list[int] = []

    def rec(placed):
        if len(order) == n:
            yield tuple(L.elements[i] for i in order)
            return
        for i in range(n):
            if placed >> i & 1 or strict_down[i] & ~placed:
                continue
            order.append(i)
            yield from rec(placed | 1 << i)
            order.pop()

    yield from rec(0)


def is_monotone_path(L: Lattice, seq: Sequence) -> bool:
    """True iff no later element lies strictly below an earlier one."""
    seen = set()
    for x in seq:
        L.index(x)
        if x in seen:
            raise DuplicateElement(f"{x!r} repeats in the sequence")
        seen.add(x)
    for i, x in enumerate(seq):
        for y in seq[i + 1:]:
            if L.lt(y, x):
                return False
    return True
