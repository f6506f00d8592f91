import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from caplattice.capacity import LatticeFn, cdf_from_mass, nabla
from caplattice.errors import (
    DuplicateElement,
    EmptyGenerator,
    Infeasible,
    NotATree,
    NotMonotone,
    NotMonotonePath,
    RootNotInTree,
)
from caplattice.frechet import (
    TreeGraph,
    construct_extension_along_path,
    dual_bound,
    evaluate_indicator,
    frechet_bound,
    frechet_bound_at,
    indicator_below,
    lambda_bound,
    lambda_diff,
    lambda_fn,
    lambda_path,
    optimal_extension,
    rooted_value,
    successive_lambda,
    successive_lambdas,
    tree_certificate,
    tree_value,
)
from caplattice.ideals import build_ideal_lattice, evaluate, mobius_extension, project
from caplattice.lattice import boolean_lattice, linear_extensions
from caplattice.reference import load_bundled

from .support import lambda_oracle, random_lattice, random_mass, random_monotone, tree_value_oracle

seeds = st.integers(0, 2**32 - 1)


@pytest.fixture(scope="module")
def b3():
    return load_bundled("b3.json")


@pytest.fixture(scope="module")
def I3(b3):
    return build_ideal_lattice(b3.lattice)


@pytest.fixture(scope="module")
def b4():
    return load_bundled("phi4.json")


@pytest.fixture(scope="module")
def I4(b4):
    return build_ideal_lattice(b4.lattice)


def test_tree_value_examples(b3):
    half, two3 = b3.capacity("phi_1/2"), b3.capacity("phi_2/3")
    assert tree_value(half, TreeGraph.of(["12"])) == F(1, 2)
    assert tree_value(half, TreeGraph.path(["12", "13"])) == 0
    assert tree_value(two3, TreeGraph.path(["12", "13"])) == F(1, 3)


def test_rooted_value_examples(b3):
    two3 = b3.capacity("phi_2/3")
    assert rooted_value(two3, TreeGraph.of(["1"]), "1") == 0
    assert rooted_value(two3, TreeGraph.path(["12", "13"]), "13") == F(1, 3)
    star = TreeGraph.of(["1", "12", "13", "23"], [("1", "12"), ("1", "13"), ("13", "23")])
    for root in star.vertices:
        assert tree_value(two3, star) + rooted_value(two3, star, root) == two3[root]
    with pytest.raises(RootNotInTree):
        rooted_value(two3, star, "2")


def test_not_a_tree(b3):
    phi = b3.capacity("phi_1/2")
    with pytest.raises(NotATree):
        tree_value(phi, TreeGraph.of(["1", "2"]))
    with pytest.raises(NotATree):
        tree_value(phi, TreeGraph.of(["1", "2", "3"], [("1", "2"), ("2", "3"), ("1", "3")]))
    with pytest.raises(DuplicateElement):
        TreeGraph.path(["1", "1"])


def test_lambda_examples(b3):
    two3, half = b3.capacity("phi_2/3"), b3.capacity("phi_1/2")
    assert lambda_bound(two3, "12", "12") == F(2, 3)
    assert lambda_bound(two3, "12", "13") == F(1, 3)
    assert lambda_bound(half, "12", "13") == 0
    value, path = lambda_path(two3, "12", "13")
    assert value == tree_value(two3, TreeGraph.path(path)) and path[0] == "12" and path[-1] == "13"


def test_lambda_rejects_non_monotone(b3):
    bad = LatticeFn(b3.lattice, {"1": 1}, default=0)
    for call in (lambda: lambda_bound(bad, "1", "2"), lambda: lambda_diff(bad, "1"),
                 lambda: successive_lambda(bad, ["1"])):
        with pytest.raises(NotMonotone):
            call()


def test_lambda_diff_examples(b3, b4):
    phi = b4.capacity("phi")
    L = b4.lattice
    for a in L.elements:
        assert lambda_diff(phi, a)[a] == 0
    assert successive_lambda(lambda_diff(phi, "12"), ["34"])["234"] == F(1, 3)
    cm = b3.capacity("phi_1/3")
    L3 = b3.lattice
    for a in L3.elements:
        d = lambda_diff(cm, a)
        assert all(d[x] == cm[x] - cm[L3.meet(a, x)] for x in L3.elements)


def test_successive_lambda_examples(b4):
    phi = b4.capacity("phi")
    assert successive_lambda(phi, ["34", "12"])["234"] == F(1, 6)
    assert successive_lambda(phi, ["12", "34"])["1234"] == F(2, 3)
    assert successive_lambda(phi, ["34", "12", "234"])["1234"] == F(1, 2)
    with pytest.raises(EmptyGenerator):
        successive_lambda(phi, [])
    with pytest.raises(DuplicateElement):
        successive_lambda(phi, ["12", "12"])


def test_dominated_step_is_dropped(b4):
    phi = b4.capacity("phi")
    # 23 lies below 234, so appending it changes nothing
    assert successive_lambda(phi, ["234", "23"]) == successive_lambda(phi, ["234"])
    stages = successive_lambdas(phi, ["12", "34"])
    assert stages[0] == phi and len(stages) == 3


def test_bound_examples(b3, I3):
    two3, half, third = (b3.capacity(n) for n in ("phi_2/3", "phi_1/2", "phi_1/3"))
    U = I3.upset(["12", "13"])
    assert frechet_bound_at(two3, U, I3) == F(1, 3)
    assert frechet_bound_at(half, U, I3) == 0
    M = mobius_extension(third, I3)
    assert all(frechet_bound_at(third, V, I3) == evaluate(M, V) for V in I3.nodes)


def test_bound_infeasible_for_non_monotone(b3, I3):
    bad = LatticeFn(b3.lattice, {"1": 1}, default=0)
    with pytest.raises(Infeasible):
        frechet_bound(bad, indicator_below(I3, I3.maximum), I3)


def test_dual_bound_examples(b3, I3):
    two3 = b3.capacity("phi_2/3")
    L = b3.lattice
    for a in L.elements:
        for b in L.elements:
            U = I3.upset([a, b])
            value, r = dual_bound(two3, indicator_below(I3, U), I3)
            assert value == lambda_bound(two3, a, b)
    value, _ = dual_bound(two3, {V: 1 for V in I3.nodes}, I3)
    assert value == two3[L.top]
    # the path certificate is dual feasible and evaluates to the tree value
    G = TreeGraph.path(["12", "13", "23"])
    r = tree_certificate(L, G)
    U = I3.upset(sorted(G.vertices))
    assert all(sum((r[x] for x in V.members), F(0)) <= (1 if I3.precedes(V, U) else 0) for V in I3.nodes)
    assert sum((r[x] * two3[x] for x in L.elements), F(0)) == tree_value(two3, G)
    assert tree_value(two3, G) <= frechet_bound_at(two3, U, I3)


def test_optimal_extension_attains_the_bound(b3, I3):
    two3 = b3.capacity("phi_2/3")
    U = I3.upset(["12", "13"])
    value, Phi = optimal_extension(two3, indicator_below(I3, U), I3)
    assert project(Phi) == two3 and evaluate(Phi, U) == value == F(1, 3)


def test_construct_extension_examples(b3, b4, I3, I4):
    cm = b3.capacity("phi_1/3")
    ext = next(linear_extensions(b3.lattice))
    assert construct_extension_along_path(cm, ext, I3) == mobius_extension(cm, I3)
    phi = b4.capacity("phi")
    L = b4.lattice
    Phi1 = construct_extension_along_path(phi, ["12"], I4)
    assert evaluate_indicator(Phi1, L.top, ["12"]) == phi[L.top] - lambda_bound(phi, "12", L.top)
    Phi = construct_extension_along_path(phi, ["34", "12"], I4)
    assert project(Phi) == phi
    assert evaluate_indicator(Phi, "234", ["34", "12"]) == F(1, 6)
    with pytest.raises(NotMonotonePath):
        construct_extension_along_path(phi, ["234", "34"], I4)


def test_evaluate_indicator_examples(b3, I3):
    M = mobius_extension(b3.capacity("phi_1/3"), I3)
    assert evaluate_indicator(M, "12", []) == evaluate(M, I3.principal["12"])
    assert evaluate_indicator(M, "12", ["12"]) == 0
    assert evaluate_indicator(M, "123", ["12"]) == F(2, 3)


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_lambda_three_ways(seed):
    rng = random.Random(seed)
    L, sets = random_lattice(rng)
    I = build_ideal_lattice(L)
    phi = random_monotone(rng, L, sets)
    for a in L.elements:
        row = lambda_fn(phi, a)
        diff = lambda_diff(phi, a)
        for b in L.elements:
            lam = lambda_bound(phi, a, b)
            assert lam == row[b] == lambda_oracle(L, phi, a, b)
            assert lam == frechet_bound_at(phi, I.upset([a, b]), I)
            assert lam >= phi[L.meet(a, b)]
            assert lam + diff[b] == phi[b]
            value, path = lambda_path(phi, a, b)
            assert value == lam == tree_value_oracle(L, phi, path)
        # both summands are monotone
        for x in L.elements:
            for y in L.elements:
                if L.leq(x, y):
                    assert row[x] <= row[y] and diff[x] <= diff[y]


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_strong_duality_and_trees(seed):
    rng = random.Random(seed)
    L, sets = random_lattice(rng)
    I = build_ideal_lattice(L)
    phi = random_monotone(rng, L, sets)
    g = {V: F(rng.randint(-3, 3), rng.randint(1, 3)) for V in I.nodes}
    primal = frechet_bound(phi, g, I)
    dual, r = dual_bound(phi, g, I)
    assert primal == dual
    assert all(sum((r[x] for x in V.members), F(0)) <= g[V] for V in I.nodes)
    # a random spanning tree on a random vertex set stays below the bound
    verts = rng.sample(L.elements, rng.randint(1, len(L)))
    edges = [(v, rng.choice(verts[:k])) for k, v in enumerate(verts) if k]
    G = TreeGraph.of(verts, edges)
    assert tree_value(phi, G) <= frechet_bound_at(phi, I.upset(verts), I)


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_lambda_equals_nabla_on_completely_monotone(seed):
    rng = random.Random(seed)
    L, _ = random_lattice(rng)
    cm = cdf_from_mass(random_mass(rng, L))
    for seq in list(linear_extensions(L))[:3]:
        k = rng.randint(1, len(seq))
        lam = successive_lambda(cm, seq[:k])
        assert all(lam[x] == nabla(cm, seq[:k], x) for x in L.elements)
