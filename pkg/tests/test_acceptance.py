"""Acceptance checks: one PASS/FAIL line per criterion, exact comparisons only.

Run with ``pytest tests/test_acceptance.py -s`` to see just these lines; under
plain ``pytest -v`` they are printed as well because output capture is
suspended while reporting.
"""

from __future__ import annotations

from fractions import Fraction as F

import pytest

from caplattice import (
    JointPmf,
    boolean_lattice,
    build_ideal_lattice,
    classify,
    comp_condition,
    frechet_bound_at,
    greedy_extension,
    membership_coupling,
    mobius_extension,
    nabla,
    successive_lambda,
)
from caplattice.ideals import evaluate
from caplattice.lattice import antichains, up_set
from caplattice.reference import load_bundled
from caplattice.stochastic import is_membership_coupling

from .propsuite import LETTERS, run_suite
from .support import upsets_oracle


@pytest.fixture
def report(capsys):
    def emit(n: int, ok: bool, text: str) -> None:
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {text}")
        assert ok, text

    return emit


@pytest.fixture(scope="module")
def b3():
    return load_bundled("b3.json")


@pytest.fixture(scope="module")
def ideal3(b3):
    return build_ideal_lattice(b3.lattice)


@pytest.fixture(scope="module")
def b4():
    return load_bundled("phi4.json")


LISTING = [
    "⟨∅⟩*", "⟨1,2,3⟩*", "⟨1,2⟩*", "⟨1,3⟩*", "⟨2,3⟩*", "⟨1,23⟩*", "⟨2,13⟩*",
    "⟨3,12⟩*", "⟨1⟩*", "⟨2⟩*", "⟨3⟩*", "⟨12,13,23⟩*", "⟨12,13⟩*", "⟨12,23⟩*",
    "⟨13,23⟩*", "⟨12⟩*", "⟨13⟩*", "⟨23⟩*", "⟨123⟩*",
]


def test_criterion_1_upset_lattices(report, ideal3):
    listing = [str(U) for U in ideal3.nodes]
    L4 = boolean_lattice(4)
    by_library = build_ideal_lattice(L4)
    generated = {frozenset(U.members) for U in by_library.nodes}
    # second enumerator: up-closure of every antichain via the lattice tables
    via_antichains = {frozenset(up_set(L4, A).members) for A in antichains(L4)}
    # oracle: scan all 2^16 subsets for up-closure
    scanned = set(upsets_oracle(L4))
    ok = (listing == LISTING and len(by_library) == 167 and generated == via_antichains == scanned
          and len(scanned) == 167)
    report(1, ok, f"B3 has {len(listing)} up-sets listed in order; B4 has {len(by_library)} "
                  f"(antichain closure {len(via_antichains)}, subset scan {len(scanned)})")


def test_criterion_2_greedy_tables(report, b3, ideal3):
    top = ideal3.upset(["123"])
    ring = ideal3.upset(["12", "13", "23"])
    bad = []
    for c in ("1/4", "1/3", "1/2", "2/3"):
        Phi = greedy_extension(b3.capacity(f"phi_{c}"), ideal3)
        for U, v in Phi.values().items():
            want = F(1) if U == top else F(c) if ideal3.precedes(ring, U) else F(0)
            if v != want:
                bad.append((c, str(U), v, want))
    report(2, not bad, "greedy extension gives 1 / c / 0 for c in 1/4, 1/3, 1/2, 2/3"
                       + (f"; mismatches {bad[:3]}" if bad else ""))


def test_criterion_3_mobius_extension(report, b3, ideal3):
    phi = b3.capacity("phi_1/3")
    M = mobius_extension(phi, ideal3)
    pmf = {str(U): m for U, m in M.pmf.items()}
    L = b3.lattice
    pairs = [(a, b) for i, a in enumerate(L.elements) for b in L.elements[i + 1:]]
    pair_ok = all(evaluate(M, ideal3.upset([a, b])) == phi[L.meet(a, b)] for a, b in pairs)
    ok = pmf == {"⟨12⟩*": F(1, 3), "⟨13⟩*": F(1, 3), "⟨23⟩*": F(1, 3)} and len(pairs) == 28 and pair_ok
    report(3, ok, f"Möbius extension pmf {pmf}; pair condition on {len(pairs)} pairs: {pair_ok}")


def test_criterion_4_lower_bound_tables(report, b3, ideal3):
    expected = {
        "2/3": {"⟨123⟩*": F(1), "⟨12⟩*": F(2, 3), "⟨13⟩*": F(2, 3), "⟨23⟩*": F(2, 3),
                "⟨12,13⟩*": F(1, 3), "⟨12,23⟩*": F(1, 3), "⟨13,23⟩*": F(1, 3)},
        "1/2": {"⟨123⟩*": F(1), "⟨12⟩*": F(1, 2), "⟨13⟩*": F(1, 2), "⟨23⟩*": F(1, 2)},
    }
    results = {}
    for c, nonzero in expected.items():
        phi = b3.capacity(f"phi_{c}")
        B = {U: frechet_bound_at(phi, U, ideal3) for U in ideal3.nodes}
        table_ok = all(v == nonzero.get(str(U), F(0)) for U, v in B.items())
        results[c] = (table_ok, classify(ideal3.fn(B)).is_completely_monotone)
    ok = results == {"2/3": (True, True), "1/2": (True, False)}
    report(4, ok, f"bound tables match and completely monotone flags are {results}")


def test_criterion_5_order_dependence(report, b4):
    phi = b4.capacity("phi")
    one = successive_lambda(phi, ["12", "34"])
    two = successive_lambda(phi, ["34", "12"])
    table = {"1234": F(2, 3), "124": F(1, 3), "13": F(1, 6), "23": F(1, 6), "123": F(1, 6), "134": F(1, 6)}
    rest = all(one[x] == two[x] == table.get(x, F(0)) for x in b4.lattice.elements if x != "234")
    ok = one["234"] == F(1, 3) and two["234"] == F(1, 6) and rest
    report(5, ok, f"orders 12,34 and 34,12 give {one['234']} and {two['234']} at 234; shared table {rest}")


GAMMA = [
    (["12"], "12", F(1, 6)),
    (["13", "23", "34"], "34", F(1, 6)),
    (["13", "23"], "234", F(1, 6)),
    (["234"], "234", F(1, 6)),
    (["124"], "124", F(1, 3)),
]


def test_criterion_6_path_condition_not_necessary(report, b4):
    phi, psi = b4.capacity("phi"), b4.require_psi()
    L = b4.lattice
    path = ("34", "12", "234")
    lam = successive_lambda(phi, path)[L.top]
    nab = nabla(psi, path, L.top)
    single = comp_condition(phi, psi, paths=[path])
    overall = comp_condition(phi, psi)
    I4 = build_ideal_lattice(L)
    feasible = membership_coupling(phi, psi, I4) is not None
    gamma = JointPmf.build({(I4.upset(g), y): m for g, y, m in GAMMA},
                           key=lambda k: (I4.index[k[0]], L.index(k[1])))
    replays = is_membership_coupling(gamma, phi, psi)
    ok = (lam == F(1, 2) and nab == F(1, 3) and not single.holds and single.path == path
          and not overall.holds and feasible and replays)
    report(6, ok, f"Λ={lam} > ∇={nab} on {path}; condition {overall.holds} "
                  f"(first violation {overall.path}); coupling feasible {feasible}; listed coupling replays {replays}")


def test_criterion_7_property_suite(report):
    tallies = run_suite()
    summary = ", ".join(f"({k}) {tallies[k].checks}" for k in LETTERS)
    failures = {k: t.failure for k, t in tallies.items() if t.failure is not None}
    ok = not failures and all(t.checks > 0 for t in tallies.values())
    report(7, ok, f"200 random lattices, checks per property: {summary}"
                  + (f"; failures {failures}" if failures else ""))


def test_criterion_8_finite_stand_ins(report):
    tallies = run_suite()
    ok = tallies["c"].failure is None and tallies["h"].failure is None
    report(8, ok, "compact-set and continuous-poset statements are out of scope (not reproducible); "
                  "their finite counterparts, properties (c) and (h), pass")
