"""Dense least-squares fitting and the factored high-dimensional residual."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import LiftedInstance, LiftedSystem

__all__ = ["LsSolution", "least_squares", "residual_hd"]

LS_RCOND = 1e-10


@dataclass(frozen=True)
class LsSolution:
    beta: np.ndarray
    residual_norm_sq: float
    rank: int


def least_squares(A, b) -> LsSolution:
    """Minimum-norm minimizer of ||b - A @ beta||_2.

    Rank decided at 1e-10 relative to the largest singular value; a
    rank-deficient A still yields the unique minimum-norm beta.
    """
    A = np.asarray(A, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64).reshape(-1)
    if A.ndim != 2 or A.shape[0] != b.shape[0]:
        raise ValueError(f"shape mismatch: A {A.shape}, b {b.shape}")
    if A.shape[1] == 0:
        return LsSolution(beta=np.zeros(0), residual_norm_sq=float(b @ b), rank=0)
    beta, _, rank, _ = np.linalg.lstsq(A, b, rcond=LS_RCOND)
    r = b - A @ beta
    return LsSolution(beta=beta, residual_norm_sq=float(r @ r), rank=int(rank))


def residual_hd(sys: LiftedSystem, inst: LiftedInstance, support, beta) -> np.ndarray:
    """L-length residual s0 - Qbar[:, support] @ beta in factored form.

    Computed as V1 @ (xc - Qc[:, support] @ beta), which never forms the
    L x L projector.
    """
    support = list(support)
    beta = np.asarray(beta, dtype=np.float64).reshape(-1)
    if len(support) != beta.shape[0]:
        raise ValueError("support and beta lengths differ")
    if not support:
        return inst.s0.copy()
    return sys.V1 @ (inst.xc - sys.Qc[:, support] @ beta)
