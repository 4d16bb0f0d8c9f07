"""Negative-type classification and exact gap constants for finite metric
spaces.

The public surface is re-exported here; the modules group as

  linalg        symmetric matrices, pivoted LDL^T, spectra
  metric        metric validation, graphs, generators, power matrices
  negtype       classification and the corrected matrices B and C
  gap           exact sign-vector maximization, witnesses, branch-and-bound
  closed_forms  oracles for discrete spaces, cycles, and trees
  cli           command-line front end
"""

from . import errors
from .closed_forms import (
    B_tree,
    OracleResult,
    cycle_binary_maximizer,
    gamma_cycle,
    gamma_discrete,
    gamma_tree,
    inverse_cycle,
    inverse_tree,
    tree_two_coloring,
)
from .gap import (
    MAX_ENUM_N,
    BnbResult,
    GapInequalityReport,
    GapResult,
    beta_binary,
    beta_hypercube,
    beta_opnorm,
    branch_and_bound,
    make_witness,
    solve_gap,
    verify_gap_inequality,
)
from .linalg import (
    Factorization,
    SymMatrix,
    eigenvalues_sym,
    factor,
    invert,
    quad_form,
    solve,
)
from .metric import (
    MetricSpace,
    NegTypeMatrix,
    WeightedGraph,
    gen_cycle,
    gen_discrete,
    gen_path,
    gen_random_tree,
    gen_tree,
    is_tree,
    path_metric,
    power_matrix,
    validate_metric,
)
from .negtype import (
    NEGATIVE_TYPE_NON_STRICT,
    NOT_NEGATIVE_TYPE,
    STRICT_NEGATIVE_TYPE,
    GapMatrices,
    NegTypeReport,
    Tolerances,
    build_B,
    classify,
    compute_M_z,
    oscillation,
    project_to_F,
)

__version__ = "0.1.0"

__all__ = [
    "B_tree",
    "BnbResult",
    "Factorization",
    "GapInequalityReport",
    "GapMatrices",
    "GapResult",
    "MAX_ENUM_N",
    "MetricSpace",
    "NEGATIVE_TYPE_NON_STRICT",
    "NOT_NEGATIVE_TYPE",
    "NegTypeMatrix",
    "NegTypeReport",
    "OracleResult",
    "STRICT_NEGATIVE_TYPE",
    "SymMatrix",
    "Tolerances",
    "WeightedGraph",
    "beta_binary",
    "beta_hypercube",
    "beta_opnorm",
    "branch_and_bound",
    "build_B",
    "classify",
    "compute_M_z",
    "cycle_binary_maximizer",
    "eigenvalues_sym",
    "errors",
    "factor",
    "gamma_cycle",
    "gamma_discrete",
    "gamma_tree",
    "gen_cycle",
    "gen_discrete",
    "gen_path",
    "gen_random_tree",
    "gen_tree",
    "inverse_cycle",
    "inverse_tree",
    "invert",
    "is_tree",
    "make_witness",
    "oscillation",
    "path_metric",
    "power_matrix",
    "project_to_F",
    "quad_form",
    "solve",
    "solve_gap",
    "tree_two_coloring",
    "validate_metric",
    "verify_gap_inequality",
]
