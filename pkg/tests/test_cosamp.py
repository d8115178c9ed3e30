"""CoSaMP baseline and the lifted l1-scored variant."""

import numpy as np
import pytest

from hdsparse.cosamp import alg_l2l1, cosamp_c
from hdsparse.greedy import omp_hd
from hdsparse.lstsq import residual_hd
from hdsparse.model import (
    Problem,
    densify,
    lift,
    lift_instance,
    normalize_columns,
)
from hdsparse.scalar_l1 import atom_l1_scores


def planted(seed, n=16, l=32, kappa=4):
    rng = np.random.default_rng(seed)
    Q = normalize_columns(rng.standard_normal((n, l)))
    sup = rng.choice(l, size=kappa, replace=False)
    s_true = np.zeros(l)
    s_true[sup] = rng.standard_normal(kappa)
    x = Q @ s_true
    return Q, s_true, x


def test_cosamp_single_atom():
    rng = np.random.default_rng(70)
    Q = normalize_columns(rng.standard_normal((8, 16)))
    x = 2.0 * Q[:, 7]
    est, iters = cosamp_c(Problem(Q=Q, x=x, kappa=1), return_iterations=True)
    assert est.support == (7,)
    assert abs(est.coeffs[0] - 2.0) <= 1e-9
    assert iters == 1


def test_cosamp_recovery_rate_small():
    hits = 0
    for t in range(50):
        Q, s_true, x = planted(3000 + t, n=16, l=32, kappa=4)
        est = cosamp_c(Problem(Q=Q, x=x, kappa=4))
        assert len(est.support) <= 4
        hits += set(est.support) == set(np.flatnonzero(s_true))
    assert hits >= 35  # sanity floor well below the reference ~90% regime


def test_cosamp_support_bound_and_refit():
    Q, s_true, x = planted(71, kappa=5)
    prob = Problem(Q=Q, x=x, kappa=5)
    est = cosamp_c(prob)
    assert len(est.support) <= 5
    A = Q[:, list(est.support)]
    r = x - A @ est.coeffs
    assert np.max(np.abs(A.T @ r)) <= 1e-8  # exact LS refit on the final support


def test_alg_l2l1_single_atom():
    rng = np.random.default_rng(72)
    Q = normalize_columns(rng.standard_normal((8, 16)))
    x = 2.0 * Q[:, 7]
    sys_ = lift(Q)
    inst = lift_instance(sys_, x)
    est, iters = alg_l2l1(sys_, inst, 1, lam=1)
    assert est.support == (7,)
    assert iters == 1
    assert abs(est.coeffs[0] - 2.0) <= 1e-9


def test_alg_l2l1_pruning_and_refit_each_iteration():
    """Stopping at n_ite = t exposes the state after iteration t."""
    Q, s_true, x = planted(73, kappa=5)
    sys_ = lift(Q)
    inst = lift_instance(sys_, x)
    for t in range(1, 6):
        est, iters = alg_l2l1(sys_, inst, 5, lam=2, n_ite=t)
        assert iters <= t
        assert len(est.support) <= 5
        A = sys_.Qc[:, list(est.support)]
        r = inst.xc - A @ est.coeffs
        assert np.max(np.abs(A.T @ r)) <= 1e-8


def test_alg_l2l1_recovers_planted():
    hits = 0
    for t in range(50):
        Q, s_true, x = planted(4000 + t, n=16, l=32, kappa=4)
        sys_ = lift(Q)
        inst = lift_instance(sys_, x)
        est, _ = alg_l2l1(sys_, inst, 4, lam=2)
        if set(est.support) == set(np.flatnonzero(s_true)):
            assert np.max(np.abs(densify(est, 32) - s_true)) <= 1e-8
            hits += 1
    assert hits >= 45


def test_xi_nonnegative_and_zero_iff_collinear():
    rng = np.random.default_rng(74)
    Q = normalize_columns(rng.standard_normal((8, 16)))
    sys_ = lift(Q)
    qbar = sys_.qbar
    s = 1.7 * qbar[:, 5]
    xi = atom_l1_scores(s, qbar)
    assert np.all(xi >= 0)
    assert xi[5] <= 1e-9
    others = np.delete(xi, 5)
    assert np.all(others > 1e-9)  # generic: no other column is collinear


def test_l2_mode_reproduces_omp_hd_sequence():
    """lam=1 with the normalized-correlation score mirrors omp_hd exactly."""
    rng = np.random.default_rng(75)
    for t in range(100):
        n, l = 12, 24
        kappa = int(rng.integers(2, 6))
        Q = normalize_columns(rng.standard_normal((n, l)))
        sup = rng.choice(l, size=kappa, replace=False)
        s_true = np.zeros(l)
        s_true[sup] = rng.standard_normal(kappa)
        x = Q @ s_true
        sys_ = lift(Q)
        inst = lift_instance(sys_, x)
        est_omp = omp_hd(sys_, inst, kappa)
        est_l2, _ = alg_l2l1(sys_, inst, kappa, lam=1, score="l2")
        assert list(est_l2.support) == list(est_omp.support)


def test_break_soundness():
    fired = 0
    for t in range(30):
        Q, s_true, x = planted(5000 + t, kappa=3)
        sys_ = lift(Q)
        inst = lift_instance(sys_, x)
        est, iters = alg_l2l1(sys_, inst, 3, lam=2)
        s = residual_hd(sys_, inst, est.support, est.coeffs)
        if np.abs(s).sum() <= 1e-12:
            assert np.max(np.abs(Q @ densify(est, 32) - x)) <= 1e-8
            fired += 1
    assert fired >= 25


def test_argument_validation():
    Q, s_true, x = planted(76)
    sys_ = lift(Q)
    inst = lift_instance(sys_, x)
    with pytest.raises(ValueError):
        alg_l2l1(sys_, inst, 3, lam=0)
    with pytest.raises(ValueError):
        alg_l2l1(sys_, inst, 3, score="l3")


def test_kappa_zero():
    Q, s_true, x = planted(77)
    est, iters = cosamp_c(Problem(Q=Q, x=x, kappa=0), return_iterations=True)
    assert len(est) == 0 and iters == 0
    sys_ = lift(Q)
    inst = lift_instance(sys_, x)
    est, iters = alg_l2l1(sys_, inst, 0, lam=2)
    assert len(est) == 0 and iters == 0
