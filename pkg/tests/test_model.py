"""Problem types, lifting, and support operators."""

import numpy as np
import pytest

from hdsparse.model import (
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


def projector_oracle(Q):
    """Row-space projector via the normal equations, independent of any SVD."""
    return Q.T @ np.linalg.solve(Q @ Q.T, Q)


def test_lift_projector_matches_normal_equations_2x3():
    Q = np.array([[1.0, 0.0, 1.0 / np.sqrt(2)], [0.0, 1.0, 1.0 / np.sqrt(2)]])
    sys_ = lift(Q)
    qbar = sys_.V1 @ sys_.V1.T
    # independent 2x2 inverse: QQ' = [[1.5, .5], [.5, 1.5]], det = 2
    qqt_inv = np.array([[1.5, -0.5], [-0.5, 1.5]]) / 2.0
    oracle = Q.T @ qqt_inv @ Q
    assert np.max(np.abs(qbar - oracle)) <= 1e-12
    assert np.max(np.abs(qbar - projector_oracle(Q))) <= 1e-12


def test_lift_orthonormal_rows_gives_unit_sigma():
    rng = np.random.default_rng(0)
    A = rng.standard_normal((4, 9))
    Q, _ = np.linalg.qr(A.T, mode="reduced")
    Q = Q.T  # 4x9 with orthonormal rows
    sys_ = lift(Q)
    assert np.allclose(sys_.sigma, 1.0, atol=1e-12)


def test_lift_rank_deficient_raises():
    rng = np.random.default_rng(1)
    Q = rng.standard_normal((2, 5))
    Q = np.vstack([Q, np.zeros(5)])
    with pytest.raises(RankDeficientError):
        lift(Q)


@pytest.mark.parametrize("n,l,seed", [(4, 8, 2), (16, 32, 3), (64, 128, 4), (128, 256, 5)])
def test_lifted_system_invariants(n, l, seed):
    rng = np.random.default_rng(seed)
    Q = normalize_columns(rng.standard_normal((n, l)))
    sys_ = lift(Q)
    assert sys_.V1.shape == (l, n) and sys_.W.shape == (l, l - n)
    assert np.max(np.abs(sys_.V1.T @ sys_.V1 - np.eye(n))) <= 1e-9
    assert np.max(np.abs(sys_.W.T @ sys_.W - np.eye(l - n))) <= 1e-9
    assert np.max(np.abs(sys_.V1.T @ sys_.W)) <= 1e-9
    qbar = sys_.V1 @ sys_.V1.T
    assert np.max(np.abs(qbar @ qbar - qbar)) <= 1e-9  # idempotent
    assert np.max(np.abs(Q @ qbar - Q)) <= 1e-9
    assert np.all(sys_.sigma > 0)
    # cached norms match the definition
    assert np.allclose(sys_.qbar_col_norms, np.linalg.norm(qbar, axis=0), atol=1e-12)
    assert np.max(np.abs(sys_.qbar - qbar)) == 0.0


def test_lift_instance_zero_and_single_column():
    rng = np.random.default_rng(6)
    Q = normalize_columns(rng.standard_normal((4, 8)))
    sys_ = lift(Q)
    inst0 = lift_instance(sys_, np.zeros(4))
    assert np.allclose(inst0.s0, 0) and np.allclose(inst0.xc, 0)
    qbar = projector_oracle(Q)
    for i in (0, 3, 7):
        inst = lift_instance(sys_, Q[:, i])
        assert np.max(np.abs(inst.s0 - qbar[:, i])) <= 1e-9


def test_lift_instance_scaled_third_column():
    rng = np.random.default_rng(7)
    Q = normalize_columns(rng.standard_normal((4, 8)))
    sys_ = lift(Q)
    inst = lift_instance(sys_, 2.5 * Q[:, 2])
    oracle = 2.5 * projector_oracle(Q)[:, 2]
    assert np.max(np.abs(inst.s0 - oracle)) <= 1e-9
    assert np.max(np.abs(inst.s0 - sys_.V1 @ inst.xc)) <= 1e-10
    assert np.max(np.abs(sys_.W.T @ inst.s0)) <= 1e-9


def test_lift_instance_invariants_random():
    rng = np.random.default_rng(8)
    Q = normalize_columns(rng.standard_normal((16, 32)))
    sys_ = lift(Q)
    x = rng.standard_normal(16)
    inst = lift_instance(sys_, x)
    assert np.max(np.abs(Q @ inst.s0 - x)) <= 1e-9
    # whole solution set satisfies the system; s0 is the min-norm element
    for _ in range(100):
        z = rng.standard_normal(16)
        s = inst.s0 + sys_.W @ z
        assert np.max(np.abs(Q @ s - x)) <= 1e-8
        assert np.linalg.norm(inst.s0) < np.linalg.norm(s)


def test_lift_rotation_ambiguity_invariants():
    rng = np.random.default_rng(9)
    Q = normalize_columns(rng.standard_normal((8, 16)))
    a = lift(Q)
    b = lift(np.asfortranarray(Q))  # may take a different LAPACK path
    x = rng.standard_normal(8)
    sa = lift_instance(a, x).s0
    sb = lift_instance(b, x).s0
    assert np.max(np.abs(sa - sb)) <= 1e-9
    assert np.max(np.abs(a.V1 @ a.V1.T - b.V1 @ b.V1.T)) <= 1e-9


def test_lift_instance_dimension_mismatch():
    rng = np.random.default_rng(10)
    sys_ = lift(normalize_columns(rng.standard_normal((4, 8))))
    with pytest.raises(ValueError):
        lift_instance(sys_, np.zeros(5))


def test_top_indices_examples():
    assert top_indices([3, -5, 1], 1) == [1]
    assert top_indices([2, -2], 1) == [0]  # tie -> lower index
    assert top_indices([0.1, 0.9, -0.5, 0.2], 2, mode="smallest") == [0, 3]


def test_top_indices_rank_order_and_limits():
    assert top_indices([1, 9, 5], 3) == [1, 2, 0]  # best first
    assert top_indices([1, 2], 5) == [1, 0]  # min(m, len)
    assert top_indices([1, 2], 0) == []
    with pytest.raises(ValueError):
        top_indices([1], 1, mode="weird")
    with pytest.raises(ValueError):
        top_indices([1], -1)


def test_densify_examples():
    assert np.array_equal(densify(SparseEstimate(support=[2], coeffs=[2.0]), 4),
                          [0, 0, 2, 0])
    assert np.array_equal(densify(SparseEstimate(), 3), [0, 0, 0])
    assert np.array_equal(densify(SparseEstimate(support=[0, 3], coeffs=[-1.0, 5.0]), 4),
                          [-1, 0, 0, 5])
    with pytest.raises(IndexError):
        densify(SparseEstimate(support=[4], coeffs=[1.0]), 4)


def test_sparse_estimate_validation():
    with pytest.raises(ValueError):
        SparseEstimate(support=[1, 1], coeffs=[1.0, 2.0])
    with pytest.raises(ValueError):
        SparseEstimate(support=[1], coeffs=[1.0, 2.0])
    est = SparseEstimate(support=[3, 1], coeffs=[0.5, -0.5])
    assert est.support == (3, 1) and len(est) == 2


def test_problem_validation():
    rng = np.random.default_rng(11)
    Q = normalize_columns(rng.standard_normal((4, 8)))
    x = rng.standard_normal(4)
    p = Problem(Q=Q, x=x, kappa=2)
    assert p.N == 4 and p.L == 8
    assert not p.Q.flags.writeable and not p.x.flags.writeable
    with pytest.raises(ValueError):
        Problem(Q=rng.standard_normal((4, 8)), x=x, kappa=2)  # not unit-norm
    with pytest.raises(ValueError):
        Problem(Q=Q, x=x, kappa=5)  # kappa > N
    with pytest.raises(ValueError):
        Problem(Q=Q, x=x, kappa=-1)
    with pytest.raises(ValueError):
        Problem(Q=normalize_columns(rng.standard_normal((8, 8))), x=rng.standard_normal(8), kappa=2)


def test_normalize_columns():
    rng = np.random.default_rng(12)
    Q = rng.standard_normal((4, 8)) * 3.0
    norms = np.linalg.norm(normalize_columns(Q), axis=0)
    assert np.max(np.abs(norms - 1.0)) <= 1e-12
    Z = Q.copy()
    Z[:, 2] = 0.0
    with pytest.raises(ValueError):
        normalize_columns(Z)


def test_lifted_system_is_shareable_immutable():
    rng = np.random.default_rng(13)
    sys_ = lift(normalize_columns(rng.standard_normal((4, 8))))
    for arr in (sys_.V1, sys_.W, sys_.Wc, sys_.Qc, sys_.sigma, sys_.qbar, sys_.qbar_col_norms):
        assert not arr.flags.writeable
    assert isinstance(sys_, LiftedSystem)
