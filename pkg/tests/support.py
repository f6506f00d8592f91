"""Random instances and brute-force oracles shared by the test modules.

Random lattices are intersection-closed families of subsets of a small
ground set (with the full set added), ordered by inclusion.  In such a
family the meet is plain intersection, which gives the oracles a way to
compute meets that never touches the library's tables.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, permutations

from caplattice.capacity import LatticeFn, cdf_from_mass
from caplattice.lattice import Lattice, build_lattice

F = Fraction


def set_name(s: frozenset) -> str:
    return "".join(sorted(s)) if s else "∅"


def family_lattice(sets) -> tuple[Lattice, dict]:
    """Lattice of a family of frozensets under inclusion, plus name → set."""
    sets = sorted(set(sets), key=lambda s: (len(s), sorted(s)))
    names = [set_name(s) for s in sets]
    pairs = [(set_name(a), set_name(b)) for a in sets for b in sets if a < b]
    return build_lattice(names, pairs), dict(zip(names, sets))


def random_family(rng: random.Random, max_size: int = 6) -> list:
    """An intersection-closed family containing the full ground set.

    Families with fewer than four members are mostly rejected so that
    chains do not dominate the sample.
    """
    while True:
        ground = "abcd"[: rng.randint(2, 4)]
        full = frozenset(ground)
        fam = {full}
        for _ in range(rng.randint(2, 6)):
            fam.add(frozenset(c for c in ground if rng.random() < 0.5))
        changed = True
        while changed:
            changed = False
            for a, b in list(combinations(fam, 2)):
                if a & b not in fam:
                    fam.add(a & b)
                    changed = True
        if len(fam) > max_size or (len(fam) < 4 and rng.random() < 0.85):
            continue
        return sorted(fam, key=lambda s: (len(s), sorted(s)))


def random_lattice(rng: random.Random, max_size: int = 6) -> tuple[Lattice, dict]:
    return family_lattice(random_family(rng, max_size))


def random_rational(rng: random.Random, hi: int = 4, den: int = 6) -> Fraction:
    return F(rng.randint(0, hi), rng.randint(1, den))


def random_monotone(rng: random.Random, L: Lattice, sets: dict, capacity: bool = False) -> LatticeFn:
    """Nonnegative monotone values built up along inclusion."""
    names = sorted(L.elements, key=lambda x: len(sets[x]))
    vals = {}
    for x in names:
        below = [vals[y] for y in vals if sets[y] < sets[x]]
        base = max(below, default=F(0))
        vals[x] = base + (random_rational(rng) if rng.random() < 0.45 else 0)
    if capacity:
        bot = min(names, key=lambda x: len(sets[x]))
        top = max(names, key=lambda x: len(sets[x]))
        vals = {x: v - vals[bot] for x, v in vals.items()}
        if vals[top] == 0:
            vals = {x: F(1) if x == top else F(0) for x in vals}
        else:
            vals = {x: v / vals[top] for x, v in vals.items()}
    return LatticeFn(L, vals)


def random_mass(rng: random.Random, L: Lattice, total=None) -> LatticeFn:
    m = {x: random_rational(rng) if rng.random() < 0.6 else F(0) for x in L.elements}
    if not any(m.values()):
        m[L.top] = F(1)
    if total is not None:
        s = sum(m.values())
        m = {x: v * total / s for x, v in m.items()}
    return LatticeFn(L, m)


def random_cdf(rng: random.Random, L: Lattice) -> LatticeFn:
    return cdf_from_mass(random_mass(rng, L, total=F(1)))


# -- oracles ---------------------------------------------------------------------


def leq(sets, x, y) -> bool:
    return sets[x] <= sets[y]


def meet_name(sets, xs, top) -> str:
    """Meet in an intersection-closed family: intersect, then look up by set."""
    s = sets[top]
    for x in xs:
        s = s & sets[x]
    return next(n for n, t in sets.items() if t == s)


def mobius_oracle(sets, x, y) -> int:
    """Recursive definition µ(x,x) = 1, µ(x,y) = −Σ_{x≤z<y} µ(x,z)."""
    memo = {}

    def mu(z):
        if z in memo:
            return memo[z]
        if z == x:
            v = 1
        else:
            v = -sum(mu(w) for w in sets if sets[x] <= sets[w] < sets[z])
        memo[z] = v
        return v

    return mu(y) if sets[x] <= sets[y] else 0


def inverse_oracle(sets, phi: dict) -> dict:
    """f with φ(x) = Σ_{y ≤ x} f(y), solved upward by subtraction."""
    f = {}
    for x in sorted(sets, key=lambda n: len(sets[n])):
        f[x] = phi[x] - sum(f[y] for y in f if sets[y] < sets[x])
    return f


def nabla_oracle(sets, phi: dict, A, b, top) -> Fraction:
    total = F(0)
    for k in range(len(A) + 1):
        for sub in combinations(A, k):
            total += (-1) ** k * phi[meet_name(sets, list(sub) + [b], top)]
    return total


def upsets_oracle(L: Lattice) -> list:
    """Nonempty up-closed subsets by scanning every subset."""
    n = len(L)
    up = [frozenset(y for y in L.elements if L.leq(x, y)) for x in L.elements]
    out = []
    for mask in range(1, 1 << n):
        members = [L.elements[i] for i in range(n) if mask >> i & 1]
        if all(up[L.index(x)] <= set(members) for x in members):
            out.append(frozenset(members))
    return out


def tree_value_oracle(L: Lattice, phi: LatticeFn, path) -> Fraction:
    total = sum(phi[v] for v in path)
    for u, v in zip(path, path[1:]):
        total -= phi[L.join(u, v)]
    return total


def lambda_oracle(L: Lattice, phi: LatticeFn, a, b) -> Fraction:
    """Max tree value over every simple path from a to b."""
    if a == b:
        return phi[a]
    inner = [x for x in L.elements if x not in (a, b)]
    best = None
    for k in range(len(inner) + 1):
        for mid in permutations(inner, k):
            v = tree_value_oracle(L, phi, (a,) + mid + (b,))
            if best is None or v > best:
                best = v
    return best


def random_monotone_path(rng: random.Random, L: Lattice, length: int) -> tuple:
    """Distinct elements with no later one strictly below an earlier one."""
    chosen = []
    pool = list(L.elements)
    rng.shuffle(pool)
    for x in pool:
        if len(chosen) == length:
            break
        if all(not L.lt(x, y) for y in chosen):
            chosen.append(x)
    return tuple(chosen)
