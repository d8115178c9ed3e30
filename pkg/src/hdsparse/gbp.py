"""Greedy basis pursuit in the lifted solution space.

Each iteration fixes one more index (the largest-magnitude entry of the
current point s), then re-minimizes ||s0 + Wbar z||_1 where Wbar stacks the
null-space basis W with the negated projector columns of the indices fixed
so far.  Zeroing the objective means s0 + W z = Qbar[:, I] beta, i.e. the
support I carries an exact solution; the trailing block of z is then the
coefficient vector.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lp import LpSolveError, min_l1_affine
from .model import LiftedInstance, LiftedSystem, SparseEstimate

__all__ = ["GbpIterRecord", "GbpTrace", "alg_gbp"]

BREAK_TOL = 1e-12


@dataclass(frozen=True)
class GbpIterRecord:
    iteration: int
    index: int
    l1_value: float
    lp_status: str


@dataclass(frozen=True)
class GbpTrace:
    """Per-iteration telemetry; status is converged | exhausted | failed_numerical."""

    records: tuple = ()
    status: str = "exhausted"
    support: tuple = ()
    beta: tuple = ()
    # full solution of the last successful l1 program (null-space block first);
    # kept so the decomposition identity can be re-checked externally
    final_z: np.ndarray = None

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "support": list(self.support),
            "beta": list(self.beta),
            "iterations": [
                {"iteration": r.iteration, "index": r.index,
                 "l1_value": r.l1_value, "lp_status": r.lp_status}
                for r in self.records
            ],
        }


def alg_gbp(sys: LiftedSystem, inst: LiftedInstance, kappa: int,
            warm_start: bool = False) -> tuple:
    """Greedy l1 recovery; returns (SparseEstimate, GbpTrace).

    warm_start=True starts index selection from the l1-minimal point of the
    solution set (the basis-pursuit solution, computed in the lifted
    parameterization) instead of the minimum-l2-norm point s0.

    An LP failure at any iteration ends the run with trace status
    "failed_numerical" and the best estimate found so far.
    """
    s0, W = inst.s0, sys.W
    records = []
    support = []
    beta = np.zeros(0)
    final_z = None
    status = "exhausted"
    s = s0
    if warm_start:
        try:
            z0, _ = min_l1_affine(s0, W)
            s = s0 + W @ z0
        except LpSolveError:
            s = s0
    for k in range(1, kappa + 1):
        scores = np.abs(s)
        scores[support] = -1.0
        idx = int(np.argmax(scores))
        support.append(idx)
        Wbar = np.concatenate([W, -(sys.V1 @ sys.Qc[:, support])], axis=1)
        try:
            z, value = min_l1_affine(s0, Wbar)
        except LpSolveError as err:
            records.append(GbpIterRecord(k, idx, float("nan"), err.status))
            status = "failed_numerical"
            support.pop()
            break
        s = s0 + Wbar @ z
        final_z = z
        beta = z[W.shape[1]:]
        records.append(GbpIterRecord(k, idx, float(value), "optimal"))
        if value <= BREAK_TOL:
            status = "converged"
            break
    est = SparseEstimate(support=support, coeffs=beta)
    trace = GbpTrace(records=tuple(records), status=status,
                     support=tuple(support), beta=tuple(float(b) for b in beta),
                     final_z=final_z)
    return est, trace
