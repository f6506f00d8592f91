"""Worked examples with known answers, recomputed from the bundled data files.

Each check compares an exact expected value with a freshly computed one;
``reference-examples`` on the command line prints them and fails on any
mismatch.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .capacity import classify, nabla
from .frechet import frechet_bound_at, successive_lambda
from .ideals import build_ideal_lattice, greedy_extension, is_mobius_extension, mobius_extension
from .lattice import boolean_lattice
from .problem import Problem, parse_problem
from .stochastic import JointPmf, comp_condition, is_membership_coupling, membership_coupling

F = Fraction

B3_UPSETS = (
    "⟨∅⟩*", "⟨1,2,3⟩*", "⟨1,2⟩*", "⟨1,3⟩*", "⟨2,3⟩*", "⟨1,23⟩*", "⟨2,13⟩*",
    "⟨3,12⟩*", "⟨1⟩*", "⟨2⟩*", "⟨3⟩*", "⟨12,13,23⟩*", "⟨12,13⟩*", "⟨12,23⟩*",
    "⟨13,23⟩*", "⟨12⟩*", "⟨13⟩*", "⟨23⟩*", "⟨123⟩*",
)

# Λ_{12,34}φ and Λ_{34,12}φ on B4 agree off 234
ORDER_TABLE = {"1234": F(2, 3), "124": F(1, 3), "13": F(1, 6), "23": F(1, 6), "123": F(1, 6), "134": F(1, 6)}

# the coupling that meets P(Y ∈ 𝒳) = 1 on B4
GAMMA = ((("12",), "12", F(1, 6)), (("13", "23", "34"), "34", F(1, 6)), (("13", "23"), "234", F(1, 6)),
         (("234",), "234", F(1, 6)), (("124",), "124", F(1, 3)))


@dataclass(frozen=True)
class Check:
    name: str
    expected: object
    got: object

    @property
    def ok(self) -> bool:
        return self.expected == self.got


def load_bundled(name: str) -> Problem:
    text = resources.files("caplattice.data").joinpath(name).read_text(encoding="utf-8")
    return parse_problem(text)


def _three_case(ideal, hi, mid, top_node, mid_node):
    """1 at the top node, ``mid`` on nodes between ``mid_node`` and the top, else 0."""
    out = {}
    for U in ideal.nodes:
        if U == top_node:
            out[str(U)] = hi
        elif ideal.precedes(mid_node, U):
            out[str(U)] = mid
        else:
            out[str(U)] = F(0)
    return out


def checks() -> list[Check]:
    out = []
    b3 = load_bundled("b3.json")
    L3 = b3.lattice
    I3 = build_ideal_lattice(L3)
    out.append(Check("B3 up-set listing", B3_UPSETS, tuple(str(U) for U in I3.nodes)))
    out.append(Check("B4 up-set count", 167, len(build_ideal_lattice(boolean_lattice(4)))))

    top, ring = I3.upset(["123"]), I3.upset(["12", "13", "23"])
    for c in ("1/4", "1/3", "1/2", "2/3"):
        phi = b3.capacity(f"phi_{c}")
        Phi = greedy_extension(phi, I3)
        got = {str(U): v for U, v in Phi.values().items()}
        out.append(Check(f"greedy extension, c={c}", _three_case(I3, F(1), F(c), top, ring), got))

    phi = b3.capacity("phi_1/3")
    M = mobius_extension(phi, I3)
    third = F(1, 3)
    out.append(Check("Möbius extension pmf, c=1/3",
                     {"⟨12⟩*": third, "⟨13⟩*": third, "⟨23⟩*": third},
                     {str(U): m for U, m in M.pmf.items()}))
    out.append(Check("pair condition on all 28 pairs, c=1/3", True, is_mobius_extension(M, phi)))

    tables = {
        "2/3": {"⟨123⟩*": F(1), "⟨12⟩*": F(2, 3), "⟨13⟩*": F(2, 3), "⟨23⟩*": F(2, 3),
                "⟨12,13⟩*": F(1, 3), "⟨12,23⟩*": F(1, 3), "⟨13,23⟩*": F(1, 3)},
        "1/2": {"⟨123⟩*": F(1), "⟨12⟩*": F(1, 2), "⟨13⟩*": F(1, 2), "⟨23⟩*": F(1, 2)},
    }
    for c, nonzero in tables.items():
        phi = b3.capacity(f"phi_{c}")
        B = {U: frechet_bound_at(phi, U, I3) for U in I3.nodes}
        expected = {str(U): nonzero.get(str(U), F(0)) for U in I3.nodes}
        out.append(Check(f"lower bound table, c={c}", expected, {str(U): v for U, v in B.items()}))
        cm = classify(I3.fn(B)).is_completely_monotone
        out.append(Check(f"lower bound completely monotone, c={c}", c == "2/3", cm))

    b4 = load_bundled("phi4.json")
    L4, phi4, psi4 = b4.lattice, b4.capacity("phi"), b4.require_psi()
    one = successive_lambda(phi4, ["12", "34"])
    two = successive_lambda(phi4, ["34", "12"])
    out.append(Check("Λ_{12,34}φ(234)", F(1, 3), one["234"]))
    out.append(Check("Λ_{34,12}φ(234)", F(1, 6), two["234"]))
    shared = {x: ORDER_TABLE.get(x, F(0)) for x in L4.elements if x != "234"}
    out.append(Check("Λ_{12,34}φ off 234", shared, {x: v for x, v in one.items() if x != "234"}))
    out.append(Check("Λ_{34,12}φ off 234", shared, {x: v for x, v in two.items() if x != "234"}))

    path = ("34", "12", "234")
    out.append(Check("Λ_{34,12,234}φ(1234)", F(1, 2), successive_lambda(phi4, path)["1234"]))
    out.append(Check("∇_{34,12,234}ψ(1234)", F(1, 3), nabla(psi4, path, "1234")))
    verdict = comp_condition(phi4, psi4, paths=[path])
    out.append(Check("path (34,12,234) violates the path condition", (False, path), (verdict.holds, verdict.path)))
    out.append(Check("path condition fails overall", False, comp_condition(phi4, psi4).holds))
    I4 = build_ideal_lattice(L4)
    out.append(Check("membership coupling exists", True, membership_coupling(phi4, psi4, I4) is not None))
    gamma = JointPmf.build({(I4.upset(g), y): m for g, y, m in GAMMA},
                           key=lambda k: (I4.index[k[0]], L4.index(k[1])))
    out.append(Check("listed coupling replays", True, is_membership_coupling(gamma, phi4, psi4)))
    return out
