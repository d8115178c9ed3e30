"""Orthogonal matching pursuit, classical and in the lifted solution space.

The lifted variants run OMP on the L-dimensional system s0 = Qbar s, where
Qbar = V1 @ V1.T is the row-space projector.  Because every residual stays
in range(V1), the normalized correlation of atom i with the residual
reduces to s(i) / ||V1[i, :]||, so selection costs O(L) per iteration with
the column norms cached on the LiftedSystem.
"""

from __future__ import annotations

import numpy as np

from .lstsq import least_squares
from .model import LiftedInstance, LiftedSystem, Problem, SparseEstimate

__all__ = ["omp_c", "omp_hd", "omp_ihd"]

STOP_TOL = 1e-12
DEGENERATE_COL_TOL = 1e-12


def omp_c(prob: Problem) -> SparseEstimate:
    """Classical OMP on x = Q s: pick the atom most correlated with the residual.

    Runs kappa iterations with a full least-squares refit each time; stops
    early once ||r||_2 <= 1e-12.
    """
    Q, x = prob.Q, prob.x
    support = []
    beta = np.zeros(0)
    r = x
    for _ in range(prob.kappa):
        if np.linalg.norm(r) <= STOP_TOL:
            break
        scores = np.abs(Q.T @ r)
        scores[support] = -1.0
        support.append(int(np.argmax(scores)))
        beta = least_squares(Q[:, support], x).beta
        r = x - Q[:, support] @ beta
    return SparseEstimate(support=support, coeffs=beta)


def _omp_lifted(sys: LiftedSystem, inst: LiftedInstance, kappa: int,
                normalized: bool) -> SparseEstimate:
    col_norms = sys.qbar_col_norms
    degenerate = col_norms <= DEGENERATE_COL_TOL
    support = []
    beta = np.zeros(0)
    s = inst.s0
    for _ in range(kappa):
        if np.linalg.norm(s) <= STOP_TOL:
            break
        scores = np.abs(s)
        if normalized:
            # safe: degenerate columns are masked out below
            scores = np.divide(scores, col_norms, out=np.zeros_like(scores),
                               where=~degenerate)
        scores[degenerate] = -1.0
        scores[support] = -1.0
        support.append(int(np.argmax(scores)))
        beta = least_squares(sys.Qc[:, support], inst.xc).beta
        s = sys.V1 @ (inst.xc - sys.Qc[:, support] @ beta)
    return SparseEstimate(support=support, coeffs=beta)


def omp_hd(sys: LiftedSystem, inst: LiftedInstance, kappa: int) -> SparseEstimate:
    """Lifted OMP with column-normalized correlation selection.

    Selection maximizes |Qbar_c[:, i]' s| over the complement, where Qbar_c
    is the column-normalized projector; atoms whose projector column norm
    is <= 1e-12 are skipped.  Stops early when ||s||_2 <= 1e-12.
    """
    return _omp_lifted(sys, inst, kappa, normalized=True)


def omp_ihd(sys: LiftedSystem, inst: LiftedInstance, kappa: int) -> SparseEstimate:
    """Lifted OMP selecting the largest-magnitude residual entry directly."""
    return _omp_lifted(sys, inst, kappa, normalized=False)
