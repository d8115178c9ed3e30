"""Sparse recovery of underdetermined linear systems via solution-set lifting.

Given x = Q s with more columns than rows, the solution set is an affine
subspace s0 + range(W) obtained from a thin SVD of Q.  This package
implements greedy recovery algorithms that operate directly on that
lifted, L-dimensional representation (normalized and plain lifted OMP, a
greedy l1 method, and a CoSaMP-style method with a closed-form l1 atom
score), classical baselines (OMP, basis pursuit, CoSaMP), and a seeded
Monte-Carlo benchmark harness with a CLI.
"""

from .bench import (
    ALGORITHM_IDS,
    AlgorithmSpec,
    AlgorithmStats,
    PhaseConfig,
    PhaseReport,
    SuiteConfig,
    SuiteReport,
    SweepConfig,
    SweepReport,
    TrialRecord,
    gen_problem,
    judge,
    run_phase,
    run_suite,
    run_sweep,
    snr_db,
    suite_sample,
)
from .cosamp import alg_l2l1, cosamp_c
from .gbp import GbpIterRecord, GbpTrace, alg_gbp
from .greedy import omp_c, omp_hd, omp_ihd
from .lp import LpProblem, LpResult, LpSolveError, bp_classic, lp_solve, min_l1_affine
from .lstsq import LsSolution, least_squares, residual_hd
from .matio import load_matrix, load_vector, read_bundle, save_matrix, write_bundle
from .model import (
    LiftedInstance,
    LiftedSystem,
    Problem,
    RankDeficientError,
    SparseEstimate,
    densify,
    lift,
    lift_instance,
    normalize_columns,
    top_indices,
)
from .scalar_l1 import (
    PiecewiseL1Instance,
    atom_l1_score,
    atom_l1_scores,
    piecewise_instance,
    scalar_l1_min,
)

__version__ = "0.1.0"

__all__ = [
    "ALGORITHM_IDS",
    "AlgorithmSpec",
    "AlgorithmStats",
    "GbpIterRecord",
    "GbpTrace",
    "LiftedInstance",
    "LiftedSystem",
    "LpProblem",
    "LpResult",
    "LpSolveError",
    "LsSolution",
    "PhaseConfig",
    "PhaseReport",
    "PiecewiseL1Instance",
    "Problem",
    "RankDeficientError",
    "SparseEstimate",
    "SuiteConfig",
    "SuiteReport",
    "SweepConfig",
    "SweepReport",
    "TrialRecord",
    "alg_gbp",
    "alg_l2l1",
    "atom_l1_score",
    "atom_l1_scores",
    "bp_classic",
    "cosamp_c",
    "densify",
    "gen_problem",
    "judge",
    "least_squares",
    "lift",
    "lift_instance",
    "load_matrix",
    "load_vector",
    "lp_solve",
    "min_l1_affine",
    "normalize_columns",
    "omp_c",
    "omp_hd",
    "omp_ihd",
    "piecewise_instance",
    "read_bundle",
    "residual_hd",
    "run_phase",
    "run_suite",
    "run_sweep",
    "save_matrix",
    "scalar_l1_min",
    "snr_db",
    "suite_sample",
    "top_indices",
    "write_bundle",
]
