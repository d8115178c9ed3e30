"""Closed-form minimization of the scalar piecewise-linear map z -> ||v0 + z*v||_1.

The objective is convex and piecewise linear with kinks at the breakpoints
z_k = -v0(k)/v(k); a minimizer is always attained at a breakpoint.  With
positive weights, scanning the slope accumulators alpha_k = sum(v) -
2*sum_{i<k} v_i locates the weighted median of the breakpoints, which is
the minimizer.  This is the selection engine of the CoSaMP-style method.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "PiecewiseL1Instance",
    "piecewise_instance",
    "scalar_l1_min",
    "atom_l1_score",
    "atom_l1_scores",
]


@dataclass(frozen=True)
class PiecewiseL1Instance:
    """Sorted breakpoints, aligned positive weights, slope accumulators.

    alphas has K+1 entries: alphas[0] = sum(weights) is the slope to the
    left of every breakpoint (negated), alphas[K] = -alphas[0]; it is
    strictly decreasing since weights are strictly positive.
    """

    breakpoints: np.ndarray
    weights: np.ndarray
    alphas: np.ndarray

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=np.float64)
        w = np.asarray(self.weights, dtype=np.float64)
        if bp.shape != w.shape or bp.ndim != 1 or bp.size == 0:
            raise ValueError("breakpoints and weights must be equal-length 1-D, nonempty")
        if np.any(w <= 0):
            raise ValueError("weights must be strictly positive")
        if np.any(np.diff(bp) < 0):
            raise ValueError("breakpoints must be nondecreasing")
        a = np.asarray(self.alphas, dtype=np.float64)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "alphas", a)


def piecewise_instance(v0, v) -> PiecewiseL1Instance:
    """Normalize signs, drop zero weights, sort; requires some nonzero weight."""
    v0 = np.asarray(v0, dtype=np.float64).reshape(-1)
    v = np.asarray(v, dtype=np.float64).reshape(-1)
    nz = v != 0.0
    if not np.any(nz):
        raise ValueError("all weights are zero; the objective is constant")
    # |v0_k + z v_k| is unchanged when both entries flip sign
    sgn = np.sign(v[nz])
    w = v[nz] * sgn
    u0 = v0[nz] * sgn
    bp = -u0 / w
    order = np.argsort(bp, kind="stable")
    bp = bp[order]
    w = w[order]
    a1 = w.sum()
    alphas = np.concatenate(([a1], a1 - 2.0 * np.cumsum(w)))
    return PiecewiseL1Instance(breakpoints=bp, weights=w, alphas=alphas)


def scalar_l1_min(v0, v) -> tuple:
    """Return (zstar, fstar) minimizing f(z) = ||v0 + z*v||_1 over the reals.

    Entries of v may be negative (sign-normalized internally) or zero
    (their terms are constant in z).  When every weight is zero, any z is
    optimal and (0, ||v0||_1) is returned.  On a flat optimal segment the
    smallest optimal breakpoint is returned.
    """
    v0 = np.asarray(v0, dtype=np.float64).reshape(-1)
    v = np.asarray(v, dtype=np.float64).reshape(-1)
    if v0.shape != v.shape:
        raise ValueError("v0 and v must have the same length")
    nz = v != 0.0
    const = float(np.abs(v0[~nz]).sum())
    if not np.any(nz):
        return 0.0, const
    inst = piecewise_instance(v0, v)
    # first k with cumsum(w)[k] >= a1/2, i.e. alpha_{k+1} <= 0
    csum = np.cumsum(inst.weights)
    k = int(np.searchsorted(csum, inst.alphas[0] / 2.0, side="left"))
    zstar = float(inst.breakpoints[k])
    fstar = const + float(np.abs(v0[nz] + zstar * v[nz]).sum())
    return zstar, fstar


def atom_l1_score(s, q) -> float:
    """min over beta of ||s - beta*q||_1, via the closed-form scalar solve."""
    _, fstar = scalar_l1_min(s, -np.asarray(q, dtype=np.float64))
    return fstar


def atom_l1_scores(s, cols) -> np.ndarray:
    """Columnwise atom scores: out[j] = min_beta ||s - beta*cols[:, j]||_1.

    Vectorized weighted-median scan over all columns at once; exact, no
    approximation.  Agrees with atom_l1_score column by column.
    """
    s = np.asarray(s, dtype=np.float64).reshape(-1)
    V = np.asarray(cols, dtype=np.float64)
    if V.ndim != 2 or V.shape[0] != s.shape[0]:
        raise ValueError(f"cols must be {s.shape[0]} x C, got {V.shape}")
    if V.shape[1] == 0:
        return np.zeros(0)
    # per-term sign normalization against v = -V
    Vn = -V
    sgn = np.sign(Vn)
    W = Vn * sgn                      # |v|, zero where v == 0
    U0 = s[:, None] * sgn             # v0 sign-flipped in step with v
    zero = W == 0.0
    const = np.where(zero, np.abs(s)[:, None], 0.0).sum(axis=0)
    total = W.sum(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        bp = np.where(zero, np.inf, -U0 / W)   # inf rows sort last, weight 0
    order = np.argsort(bp, axis=0, kind="stable")
    bps = np.take_along_axis(bp, order, axis=0)
    ws = np.take_along_axis(np.where(zero, 0.0, W), order, axis=0)
    csum = np.cumsum(ws, axis=0)
    k = (csum >= total[None, :] / 2.0).argmax(axis=0)
    zstar = np.take_along_axis(bps, k[None, :], axis=0)[0]
    zstar = np.where(total > 0.0, zstar, 0.0)
    fs = np.where(zero, 0.0, np.abs(U0 + zstar[None, :] * W)).sum(axis=0)
    return fs + const
