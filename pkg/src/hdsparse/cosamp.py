"""CoSaMP-style recovery: the classical baseline and the lifted l1-scored variant.

The lifted variant admits lam candidate atoms per iteration, chosen by the
exact one-atom l1 fit score xi(l) = min_beta ||s - beta * Qbar[:, l]||_1
(closed form, computed for the whole complement at once), prunes the pooled
support back to kappa by least squares, and refits on the pruned support.
"""

from __future__ import annotations

import numpy as np

from .lstsq import least_squares
from .model import LiftedInstance, LiftedSystem, Problem, SparseEstimate, top_indices
from .scalar_l1 import atom_l1_scores

__all__ = ["cosamp_c", "alg_l2l1"]

STOP_TOL = 1e-12


def _ordered_union(base: list, extra) -> list:
    seen = set(base)
    out = list(base)
    for i in extra:
        if i not in seen:
            seen.add(i)
            out.append(int(i))
    return out


def _prune(candidates: list, beta: np.ndarray, kappa: int) -> list:
    # keep the kappa largest |beta|, preserving candidate order
    keep = sorted(top_indices(beta, kappa))
    return [candidates[p] for p in keep]


def _normalized_scores(s: np.ndarray, col_norms: np.ndarray) -> np.ndarray:
    # same degenerate-column guard as the normalized lifted-OMP rule
    deg = col_norms <= 1e-12
    out = np.full(s.shape[0], -1.0)
    np.divide(np.abs(s), col_norms, out=out, where=~deg)
    return out


def cosamp_c(prob: Problem, return_iterations: bool = False):
    """Classical CoSaMP on x = Q s with 2*kappa-wide candidate admission.

    Per iteration: proxy Q' r, admit the 2*kappa largest entries, pool with
    the current support, least-squares fit, prune to kappa, refit, update r.
    At most kappa iterations; stops early at ||r||_2 <= 1e-12.
    """
    Q, x, kappa = prob.Q, prob.x, prob.kappa
    support = []
    beta = np.zeros(0)
    r = x
    iterations = 0
    for _ in range(kappa):
        if np.linalg.norm(r) <= STOP_TOL:
            break
        iterations += 1
        proxy = Q.T @ r
        pooled = _ordered_union(support, top_indices(proxy, 2 * kappa))
        fit = least_squares(Q[:, pooled], x)
        support = _prune(pooled, fit.beta, kappa)
        beta = least_squares(Q[:, support], x).beta
        r = x - Q[:, support] @ beta
    est = SparseEstimate(support=support, coeffs=beta)
    return (est, iterations) if return_iterations else est


def alg_l2l1(sys: LiftedSystem, inst: LiftedInstance, kappa: int,
             lam: int = 2, n_ite: int = None, score: str = "l1") -> tuple:
    """Lifted CoSaMP admitting lam atoms per iteration by exact l1 scores.

    Returns (SparseEstimate, iterations).  n_ite defaults to kappa.  Breaks
    once ||s||_1 <= 1e-12, where s is the refit residual in the lifted
    space.

    score="l2" replaces the l1 atom score with the normalized-correlation
    rule everywhere (including the initial candidate pick); with lam=1 that
    reproduces the normalized lifted-OMP index sequence.  It exists for
    equivalence testing and is not the method's default.
    """
    if lam < 1:
        raise ValueError("lam must be >= 1")
    if score not in ("l1", "l2"):
        raise ValueError(f"score must be 'l1' or 'l2', got {score!r}")
    if n_ite is None:
        n_ite = kappa
    col_norms = sys.qbar_col_norms
    s = inst.s0
    if score == "l1":
        cand = top_indices(s, lam)
    else:
        cand = top_indices(_normalized_scores(s, col_norms), lam)
    support = []
    beta = np.zeros(0)
    iterations = 0
    for _ in range(n_ite):
        iterations += 1
        pooled = _ordered_union(support, cand)
        fit = least_squares(sys.Qc[:, pooled], inst.xc)
        support = _prune(pooled, fit.beta, kappa)
        beta = least_squares(sys.Qc[:, support], inst.xc).beta
        s = sys.V1 @ (inst.xc - sys.Qc[:, support] @ beta)
        if float(np.abs(s).sum()) <= STOP_TOL:
            break
        comp = np.setdiff1d(np.arange(sys.L), support, assume_unique=False)
        if score == "l1":
            xi = atom_l1_scores(s, sys.qbar[:, comp])
            picks = top_indices(xi, lam, mode="smallest")
        else:
            picks = top_indices(_normalized_scores(s[comp], col_norms[comp]), lam)
        cand = [int(comp[p]) for p in picks]
    est = SparseEstimate(support=support, coeffs=beta)
    return est, iterations
