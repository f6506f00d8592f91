"""Exact capacities on finite lattices."""

from .capacity import (
    LatticeFn,
    cdf_from_mass,
    classify,
    delta,
    is_completely_alternating,
    is_completely_monotone,
    mobius_inverse,
    nabla,
    pi_set,
    support_check,
)
from .frechet import (
    TreeGraph,
    construct_extension_along_path,
    dual_bound,
    evaluate_indicator,
    frechet_bound,
    frechet_bound_at,
    lambda_bound,
    lambda_diff,
    lambda_path,
    rooted_value,
    successive_lambda,
    tree_value,
)
from .ideals import (
    Extension,
    IdealLattice,
    build_ideal_lattice,
    dual_mobius_extension,
    greedy_extension,
    mobius_extension,
)
from .lattice import Lattice, UpSet, boolean_lattice, build_lattice, chain_lattice, dual_lattice, mobius
from .lp import LinearProgram, feasible, solve
from .stochastic import (
    JointPmf,
    comp_condition,
    dominance_coupling,
    joint_dual_reduced,
    joint_frechet,
    membership_coupling,
    norberg_dominance,
)

__all__ = [name for name in dir() if not name.startswith("_")]
