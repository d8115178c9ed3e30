"""Dense LP solving, affine l1 minimization, and the basis-pursuit baseline.

The l1 subproblem min_z ||s0 + Wbar z||_1 is solved by default through its
dual (a box-constrained LP with equality constraints Wbar' u = 0), whose
equality multipliers are exactly the primal z; the answer is certified by
checking primal value == dual value and falls back to the direct
auxiliary-variable encoding on any mismatch.  Both encodings share one
simplex backend.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .lstsq import least_squares
from .model import Problem, SparseEstimate, top_indices

__all__ = [
    "LpProblem",
    "LpResult",
    "LpSolveError",
    "lp_solve",
    "min_l1_affine",
    "bp_classic",
]

FEAS_TOL = 1e-7

_STATUS = {0: "optimal", 1: "numerical_failure", 2: "infeasible", 3: "unbounded", 4: "numerical_failure"}


class LpSolveError(RuntimeError):
    """A linear program did not reach optimality."""

    def __init__(self, status: str, detail: str = ""):
        super().__init__(f"LP terminated with status {status!r} {detail}".rstrip())
        self.status = status


@dataclass(frozen=True)
class LpProblem:
    """min c @ y  s.t.  A_ub @ y <= b_ub,  A_eq @ y == b_eq,  lb <= y <= ub.

    Bounds default to the whole real line (note: not nonnegativity).
    Equality rows are optional; costs and constraint data must be finite.
    """

    c: np.ndarray
    A_ub: np.ndarray = None
    b_ub: np.ndarray = None
    lb: np.ndarray = None
    ub: np.ndarray = None
    A_eq: np.ndarray = None
    b_eq: np.ndarray = None

    def __post_init__(self):
        c = np.asarray(self.c, dtype=np.float64).reshape(-1)
        if c.size == 0:
            raise ValueError("LP needs at least one variable")
        n = c.size
        A_ub = self.A_ub
        b_ub = self.b_ub
        if A_ub is None:
            A_ub = np.zeros((0, n))
            b_ub = np.zeros(0)
        A_ub = np.asarray(A_ub, dtype=np.float64).reshape(-1, n)
        b_ub = np.asarray(b_ub, dtype=np.float64).reshape(-1)
        if A_ub.shape[0] != b_ub.shape[0]:
            raise ValueError("A_ub and b_ub row counts differ")
        A_eq = self.A_eq
        b_eq = self.b_eq
        if A_eq is None:
            A_eq = np.zeros((0, n))
            b_eq = np.zeros(0)
        A_eq = np.asarray(A_eq, dtype=np.float64).reshape(-1, n)
        b_eq = np.asarray(b_eq, dtype=np.float64).reshape(-1)
        if A_eq.shape[0] != b_eq.shape[0]:
            raise ValueError("A_eq and b_eq row counts differ")
        lb = np.full(n, -np.inf) if self.lb is None else np.broadcast_to(
            np.asarray(self.lb, dtype=np.float64), (n,)).copy()
        ub = np.full(n, np.inf) if self.ub is None else np.broadcast_to(
            np.asarray(self.ub, dtype=np.float64), (n,)).copy()
        for name, arr in (("c", c), ("A_ub", A_ub), ("b_ub", b_ub), ("A_eq", A_eq), ("b_eq", b_eq)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} must be finite")
        if np.any(lb > ub):
            raise ValueError("lb > ub for some variable")
        for name, arr in (("c", c), ("A_ub", A_ub), ("b_ub", b_ub), ("A_eq", A_eq),
                          ("b_eq", b_eq), ("lb", lb), ("ub", ub)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


@dataclass(frozen=True)
class LpResult:
    y: np.ndarray
    objective: float
    status: str
    iterations: int
    # multipliers of the inequality/equality rows when available (optimal only)
    ineq_marginals: np.ndarray = None
    eq_marginals: np.ndarray = None


def lp_solve(p: LpProblem) -> LpResult:
    """Solve an LpProblem with a deterministic dense dual-simplex backend.

    Never raises on a well-formed problem; infeasible/unbounded/numerical
    outcomes are reported through the status field.
    """
    lb = np.where(np.isneginf(p.lb), None, p.lb)
    ub = np.where(np.isposinf(p.ub), None, p.ub)
    bounds = list(zip(lb.tolist(), ub.tolist()))
    res = linprog(
        p.c,
        A_ub=p.A_ub if p.A_ub.shape[0] else None,
        b_ub=p.b_ub if p.b_ub.shape[0] else None,
        A_eq=p.A_eq if p.A_eq.shape[0] else None,
        b_eq=p.b_eq if p.b_eq.shape[0] else None,
        bounds=bounds,
        method="highs-ds",
    )
    status = _STATUS.get(res.status, "numerical_failure")
    y = res.x if res.x is not None else np.full(p.c.size, np.nan)
    obj = float(res.fun) if res.fun is not None else np.nan
    nit = int(getattr(res, "nit", 0) or 0)
    ineq = eq = None
    if status == "optimal":
        if p.A_ub.shape[0] and res.ineqlin is not None:
            ineq = np.asarray(res.ineqlin.marginals, dtype=np.float64)
        if p.A_eq.shape[0] and res.eqlin is not None:
            eq = np.asarray(res.eqlin.marginals, dtype=np.float64)
    return LpResult(y=np.asarray(y, dtype=np.float64), objective=obj,
                    status=status, iterations=nit, ineq_marginals=ineq, eq_marginals=eq)


def _l1_affine_primal(s0: np.ndarray, Wbar: np.ndarray) -> tuple:
    """Direct encoding: min 1't over (z, t) with -t <= s0 + Wbar z <= t."""
    L, m = Wbar.shape
    eye = np.eye(L)
    A_ub = np.block([[-Wbar, -eye], [Wbar, -eye]])
    b_ub = np.concatenate([s0, -s0])
    c = np.concatenate([np.zeros(m), np.ones(L)])
    res = lp_solve(LpProblem(c=c, A_ub=A_ub, b_ub=b_ub))
    if res.status != "optimal":
        raise LpSolveError(res.status, f"(l1 affine primal, L={L}, m={m})")
    z = res.y[:m]
    return z, float(np.abs(s0 + Wbar @ z).sum())


def _l1_affine_dual(s0: np.ndarray, Wbar: np.ndarray) -> tuple:
    """Dual encoding: max s0'u s.t. Wbar'u = 0, |u| <= 1; z from the multipliers."""
    L, m = Wbar.shape
    res = lp_solve(LpProblem(c=-s0, A_eq=Wbar.T, b_eq=np.zeros(m),
                             lb=np.full(L, -1.0), ub=np.full(L, 1.0)))
    if res.status != "optimal" or res.eq_marginals is None:
        raise LpSolveError(res.status, f"(l1 affine dual, L={L}, m={m})")
    z = res.eq_marginals
    value = float(np.abs(s0 + Wbar @ z).sum())
    dual_value = -res.objective
    # weak duality: the recovered z is optimal iff primal and dual values meet
    if abs(value - dual_value) > FEAS_TOL * (1.0 + abs(dual_value)):
        raise LpSolveError("numerical_failure",
                           f"(duality gap {abs(value - dual_value):.2e})")
    return z, value


def min_l1_affine(s0, Wbar, encoding: str = "dual") -> tuple:
    """Globally minimize ||s0 + Wbar @ z||_1; returns (z, value).

    encoding="dual" (default) solves the smaller dual LP and certifies the
    answer by the duality gap, falling back to the direct encoding on any
    failure; encoding="primal" forces the direct auxiliary-variable form.
    """
    s0 = np.asarray(s0, dtype=np.float64).reshape(-1)
    Wbar = np.asarray(Wbar, dtype=np.float64)
    if Wbar.ndim != 2 or Wbar.shape[0] != s0.shape[0]:
        raise ValueError(f"Wbar must be {s0.shape[0]} x m, got {Wbar.shape}")
    if Wbar.shape[1] == 0:
        return np.zeros(0), float(np.abs(s0).sum())
    if encoding == "primal":
        return _l1_affine_primal(s0, Wbar)
    if encoding != "dual":
        raise ValueError(f"unknown encoding {encoding!r}")
    try:
        return _l1_affine_dual(s0, Wbar)
    except LpSolveError:
        return _l1_affine_primal(s0, Wbar)


def bp_classic(prob: Problem, return_lp: bool = False):
    """Basis pursuit baseline: min ||s||_1 s.t. Q s = x, then keep kappa atoms.

    The equality-constrained program is solved in split form s = p - q with
    p, q >= 0 and the equality written as paired inequalities; the kappa
    largest-magnitude entries of the optimum are refit by least squares.
    """
    Q, x, kappa = prob.Q, prob.x, prob.kappa
    L = prob.L
    if float(np.abs(x).sum()) == 0.0 or kappa == 0:
        est = SparseEstimate()
        return (est, None) if return_lp else est
    A = np.block([[Q, -Q], [-Q, Q]])
    b = np.concatenate([x, -x])
    res = lp_solve(LpProblem(c=np.ones(2 * L), A_ub=A, b_ub=b,
                             lb=np.zeros(2 * L), ub=np.full(2 * L, np.inf)))
    if res.status != "optimal":
        raise LpSolveError(res.status, f"(basis pursuit, N={prob.N}, L={L})")
    s_star = res.y[:L] - res.y[L:]
    support = top_indices(s_star, kappa)
    fit = least_squares(Q[:, support], x)
    est = SparseEstimate(support=support, coeffs=fit.beta)
    return (est, res) if return_lp else est
