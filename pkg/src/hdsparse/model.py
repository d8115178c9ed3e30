"""Problem and solution-set types shared by every recovery algorithm.

An underdetermined system x = Q s with unit-norm columns is lifted, via a
thin SVD of Q, into an explicit parameterization of its solution set:
s = s0 + W z, where s0 is the minimum-norm solution and the columns of W
span the null space of Q.  Greedy algorithms then operate on L-dimensional
residuals instead of N-dimensional ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

__all__ = [
    "RankDeficientError",
    "Problem",
    "LiftedSystem",
    "LiftedInstance",
    "SparseEstimate",
    "normalize_columns",
    "lift",
    "lift_instance",
    "top_indices",
    "densify",
]

UNIT_NORM_TOL = 1e-10
RANK_RTOL = 1e-12


class RankDeficientError(ValueError):
    """Raised when Q does not have full row rank within tolerance."""


def _as_readonly(a, dtype=np.float64):
    out = np.array(a, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Problem:
    """A sparse-recovery instance: measurement x, dictionary Q, target sparsity.

    Columns of Q must have unit l2 norm within 1e-10; use
    `normalize_columns` first for raw dictionaries.
    """

    Q: np.ndarray
    x: np.ndarray
    kappa: int

    def __post_init__(self):
        Q = _as_readonly(self.Q)
        x = _as_readonly(self.x).reshape(-1)
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "x", x)
        if Q.ndim != 2:
            raise ValueError("Q must be a 2-D matrix")
        n, l = Q.shape
        if not n < l:
            raise ValueError(f"need N < L, got N={n}, L={l}")
        if x.shape[0] != n:
            raise ValueError(f"x has length {x.shape[0]}, expected N={n}")
        # kappa = 0 is accepted so that sweep grids may include a trivial row.
        if not 0 <= int(self.kappa) <= n:
            raise ValueError(f"need 0 <= kappa <= N, got kappa={self.kappa}")
        object.__setattr__(self, "kappa", int(self.kappa))
        norms = np.linalg.norm(Q, axis=0)
        if np.any(np.abs(norms - 1.0) > UNIT_NORM_TOL):
            worst = float(np.max(np.abs(norms - 1.0)))
            raise ValueError(
                f"columns of Q must be unit-norm within {UNIT_NORM_TOL:g} "
                f"(worst deviation {worst:.3e}); call normalize_columns first"
            )

    @property
    def N(self) -> int:
        return self.Q.shape[0]

    @property
    def L(self) -> int:
        return self.Q.shape[1]


@dataclass(frozen=True)
class LiftedSystem:
    """SVD factors characterizing the solution set of x = Q s.

    V1 (L x N) holds the leading right singular vectors, W (L x (L-N)) the
    trailing ones (a null-space basis).  Wc = diag(1/sigma) @ U.T and
    Qc = V1.T give the compressed forms used for coefficient fitting:
    the row-space projector is Qbar = V1 @ V1.T and never needs to be
    formed in solver loops.
    """

    V1: np.ndarray
    W: np.ndarray
    Wc: np.ndarray
    Qc: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        for name in ("V1", "W", "Wc", "Qc", "sigma"):
            object.__setattr__(self, name, _as_readonly(getattr(self, name)))

    @property
    def N(self) -> int:
        return self.V1.shape[1]

    @property
    def L(self) -> int:
        return self.V1.shape[0]

    @cached_property
    def qbar_col_norms(self) -> np.ndarray:
        """l2 norms of the columns of Qbar = V1 @ V1.T (row norms of V1)."""
        out = np.linalg.norm(self.V1, axis=1)
        out.setflags(write=False)
        return out

    @cached_property
    def qbar(self) -> np.ndarray:
        """The dense L x L row-space projector, built on first use.

        Only the candidate-scoring stage of the CoSaMP-style method needs
        all columns at once; fitting/residual paths stay factored.
        """
        out = self.V1 @ self.V1.T
        out.setflags(write=False)
        return out


@dataclass(frozen=True)
class LiftedInstance:
    """Per-measurement lift: s0 = V1 @ xc is the minimum-norm solution."""

    s0: np.ndarray
    xc: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "s0", _as_readonly(self.s0).reshape(-1))
        object.__setattr__(self, "xc", _as_readonly(self.xc).reshape(-1))


@dataclass(frozen=True)
class SparseEstimate:
    """Support indices (0-based, insertion-ordered, unique) plus coefficients."""

    support: tuple = field(default=())
    coeffs: np.ndarray = field(default=())

    def __post_init__(self):
        sup = tuple(int(i) for i in self.support)
        if len(set(sup)) != len(sup):
            raise ValueError("support contains duplicate indices")
        co = _as_readonly(self.coeffs).reshape(-1)
        if co.shape[0] != len(sup):
            raise ValueError("coeffs length must match support length")
        object.__setattr__(self, "support", sup)
        object.__setattr__(self, "coeffs", co)

    def __len__(self) -> int:
        return len(self.support)


def normalize_columns(Q) -> np.ndarray:
    """Return Q with each column scaled to unit l2 norm.

    Raises ValueError on (near-)zero columns; normalization is never done
    silently by Problem.
    """
    Q = np.asarray(Q, dtype=np.float64)
    norms = np.linalg.norm(Q, axis=0)
    if np.any(norms <= 1e-300):
        raise ValueError("cannot normalize a zero column")
    return Q / norms


def lift(Q) -> LiftedSystem:
    """Thin-SVD factorization of Q exposing the solution-set geometry.

    Raises RankDeficientError if the smallest singular value is
    <= 1e-12 times the largest (Q must have full row rank).
    """
    Q = np.asarray(Q, dtype=np.float64)
    if Q.ndim != 2 or Q.shape[0] >= Q.shape[1]:
        raise ValueError("Q must be N x L with N < L")
    n = Q.shape[0]
    U, sigma, Vt = np.linalg.svd(Q, full_matrices=True)
    if sigma[-1] <= RANK_RTOL * sigma[0]:
        raise RankDeficientError(
            f"rank-deficient Q: sigma_min/sigma_max = {sigma[-1] / sigma[0]:.3e}"
        )
    V1 = Vt[:n].T
    W = Vt[n:].T
    Wc = (1.0 / sigma)[:, None] * U.T
    return LiftedSystem(V1=V1, W=W, Wc=Wc, Qc=V1.T, sigma=sigma)


def lift_instance(sys: LiftedSystem, x) -> LiftedInstance:
    """Compute xc = Wc @ x and the minimum-norm solution s0 = V1 @ xc."""
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    if x.shape[0] != sys.N:
        raise ValueError(f"x has length {x.shape[0]}, expected {sys.N}")
    xc = sys.Wc @ x
    return LiftedInstance(s0=sys.V1 @ xc, xc=xc)


def top_indices(v, m: int, mode: str = "largest") -> list:
    """Indices of the m largest (or smallest) entries of |v|, best first.

    Ties break toward the lower index. Returns min(m, len(v)) indices.
    """
    if mode not in ("largest", "smallest"):
        raise ValueError(f"mode must be 'largest' or 'smallest', got {mode!r}")
    if m < 0:
        raise ValueError("m must be >= 0")
    mag = np.abs(np.asarray(v, dtype=np.float64).reshape(-1))
    m = min(m, mag.shape[0])
    if m == 0:
        return []
    key = -mag if mode == "largest" else mag
    # stable sort keeps the lower index first among equal magnitudes
    order = np.argsort(key, kind="stable")
    return [int(i) for i in order[:m]]


def densify(est: SparseEstimate, L: int) -> np.ndarray:
    """Scatter an estimate's coefficients into a dense length-L vector."""
    out = np.zeros(int(L))
    for i, c in zip(est.support, est.coeffs):
        if not 0 <= i < L:
            raise IndexError(f"support index {i} out of range for L={L}")
        out[i] = c
    return out
