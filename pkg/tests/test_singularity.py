import math

import numpy as np
import pytest

from singescape import (
    BenchmarkParams,
    NotSimpleSingularityError,
    first3_jacobian,
    pseudoinverse,
    singular_direction,
    singular_frame,
    singular_velocity,
    split_KL,
    svd_decompose,
)

# First 3x3 block at the singular branch with unit lengths: eigenvalues of
# its Gram matrix are 5, 1, 0, worked by hand from the diagonal form.
J_SINGULAR = np.array([[0.0, 2.0, 1.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])


def random_with_spectrum(rng, m, n, spectrum):
    """Controlled-conditioning test matrix from random orthogonal factors."""
    U, _ = np.linalg.qr(rng.standard_normal((m, m)))
    V, _ = np.linalg.qr(rng.standard_normal((n, n)))
    S = np.zeros((m, n))
    for i, s in enumerate(spectrum):
        S[i, i] = s
    return U @ S @ V.T


def penrose_residual(J, J_star):
    return max(
        np.abs(J @ J_star @ J - J).max(),
        np.abs(J_star @ J @ J_star - J_star).max(),
        np.abs((J @ J_star).T - J @ J_star).max(),
        np.abs((J_star @ J).T - J_star @ J).max(),
    )


def test_svd_identity():
    dec = svd_decompose(np.eye(3), 1e-8)
    np.testing.assert_allclose(dec.sigma, [1.0, 1.0, 1.0], atol=0)
    assert dec.rank == 3


def test_svd_singular_benchmark_block():
    dec = svd_decompose(J_SINGULAR, 1e-8)
    np.testing.assert_allclose(dec.sigma, [math.sqrt(5.0), 1.0, 0.0], atol=1e-15)
    assert dec.rank == 2


def test_svd_rank_uses_relative_tolerance():
    dec = svd_decompose(np.diag([1.0, 1e-12]), 1e-8)
    assert dec.rank == 1
    assert svd_decompose(np.diag([1.0, 1e-12]), 1e-13).rank == 2


def test_svd_rejects_bad_input():
    with pytest.raises(ValueError, match="non-finite"):
        svd_decompose(np.array([[1.0, math.nan]]), 1e-8)
    with pytest.raises(ValueError):
        svd_decompose(np.eye(2), 0.0)


def test_svd_zero_matrix_rank_zero():
    dec = svd_decompose(np.zeros((3, 4)), 1e-8)
    assert dec.rank == 0
    np.testing.assert_allclose(pseudoinverse(dec), np.zeros((4, 3)), atol=0)


def test_svd_reconstruction_and_orthonormality_random():
    rng = np.random.default_rng(23)
    for _ in range(1000):
        m = int(rng.integers(1, 9))
        n = int(rng.integers(1, 9))
        J = rng.standard_normal((m, n))
        dec = svd_decompose(J, 1e-8)
        scale = 1e-10 * max(1.0, dec.sigma[0])
        k = min(m, n)
        recon = dec.U[:, :k] @ np.diag(dec.sigma[:k]) @ dec.V[:, :k].T
        assert np.abs(recon - J).max() <= scale
        assert np.abs(dec.U.T @ dec.U - np.eye(m)).max() <= 1e-10
        assert np.abs(dec.V.T @ dec.V - np.eye(n)).max() <= 1e-10
        assert np.all(np.diff(dec.sigma) <= 0)
        assert np.all(dec.sigma >= 0)


def test_pseudoinverse_diagonal():
    dec = svd_decompose(np.diag([2.0, 0.0]), 1e-8)
    np.testing.assert_allclose(pseudoinverse(dec), np.diag([0.5, 0.0]), atol=1e-16)


def test_pseudoinverse_matches_inverse_when_invertible():
    rng = np.random.default_rng(29)
    for _ in range(50):
        J = random_with_spectrum(rng, 3, 3, [2.0, 1.0, 0.5])
        dec = svd_decompose(J, 1e-8)
        np.testing.assert_allclose(pseudoinverse(dec), np.linalg.inv(J), atol=1e-12)
        assert np.abs(pseudoinverse(dec) @ J - np.eye(3)).max() <= 1e-10


def test_pseudoinverse_penrose_including_rank_deficient():
    rng = np.random.default_rng(31)
    for _ in range(1000):
        m = int(rng.integers(1, 9))
        n = int(rng.integers(1, 9))
        full = min(m, n)
        rank = int(rng.integers(0, full + 1))
        spectrum = np.sort(rng.uniform(0.1, 10.0, rank))[::-1]
        J = random_with_spectrum(rng, m, n, spectrum)
        dec = svd_decompose(J, 1e-8)
        assert dec.rank == rank
        tol = 1e-10 * max(
            1.0, dec.sigma[0], 1.0 / dec.sigma[rank - 1] if rank else 1.0
        )
        assert penrose_residual(J, pseudoinverse(dec)) <= tol


def test_singular_direction_benchmark():
    dec = svd_decompose(J_SINGULAR, 1e-8)
    np.testing.assert_allclose(singular_direction(dec), [0.0, 0.0, 1.0], atol=1e-15)


def test_singular_direction_requires_single_rank_drop():
    with pytest.raises(NotSimpleSingularityError, match="not a simple singularity"):
        singular_direction(svd_decompose(np.eye(3), 1e-8))
    rank_one = np.outer([1.0, 2.0, 3.0], [1.0, 0.0, 0.0])
    with pytest.raises(NotSimpleSingularityError, match="not a simple singularity"):
        singular_direction(svd_decompose(rank_one, 1e-8))


def test_singular_direction_sign_is_deterministic():
    dec = svd_decompose(-J_SINGULAR, 1e-8)
    u = singular_direction(dec)
    assert u[np.argmax(np.abs(u))] > 0


def test_split_KL_benchmark():
    dec = svd_decompose(J_SINGULAR, 1e-8)
    K, L = split_KL(dec)
    np.testing.assert_allclose(K, [[0.0, 2.0, 1.0], [1.0, 0.0, 0.0]], atol=1e-15)
    np.testing.assert_allclose(L, [0.0, 0.0, 0.0], atol=1e-15)


def test_split_KL_identity():
    K, L = split_KL(svd_decompose(np.eye(3), 1e-8))
    np.testing.assert_allclose(K, np.eye(3)[:2], atol=0)
    np.testing.assert_allclose(L, [0.0, 0.0, 1.0], atol=0)


def test_split_KL_stacks_to_rotated_jacobian():
    rng = np.random.default_rng(37)
    for _ in range(200):
        J = rng.standard_normal((int(rng.integers(2, 7)), int(rng.integers(2, 7))))
        dec = svd_decompose(J, 1e-8)
        if dec.rank < dec.m - 1:
            continue
        K, L = split_KL(dec)
        np.testing.assert_array_equal(np.vstack([K, L]), dec.U.T @ dec.J)


def test_split_KL_near_singularity_small_L():
    # Just off the singular branch the last row's norm is the smallest
    # singular value, bounded by the third-row magnitude a2 |cos theta3|.
    p = BenchmarkParams(a2=1.0, d4=1.0)
    theta3 = math.pi / 2 - 0.01
    dec = svd_decompose(first3_jacobian(p, theta3), 1e-8)
    _, L = split_KL(dec)
    bound = p.a2 * abs(math.cos(theta3))
    assert 1e-4 < np.linalg.norm(L) <= bound + 1e-15
    assert np.linalg.norm(L) == pytest.approx(dec.sigma[-1], rel=1e-12)


def test_singular_velocity_projections():
    u = np.array([0.0, 0.0, 1.0])
    assert singular_velocity(u, [5.0, 7.0, 0.0]) == 0.0
    assert singular_velocity(u, [0.0, 0.0, -2.0]) == -2.0
    rng = np.random.default_rng(41)
    v = rng.standard_normal(5)
    v /= np.linalg.norm(v)
    assert singular_velocity(v, 3.0 * v) == pytest.approx(3.0, abs=1e-14)


def test_singular_velocity_validates_input():
    with pytest.raises(ValueError, match="dimension mismatch"):
        singular_velocity([0.0, 0.0, 1.0], [1.0, 2.0])
    with pytest.raises(ValueError, match="unit norm"):
        singular_velocity([0.0, 0.0, 2.0], [1.0, 2.0, 3.0])


def test_singular_frame_bundles_parts():
    dec = svd_decompose(J_SINGULAR, 1e-8)
    frame = singular_frame(dec, x_dot=[0.0, 0.0, -2.0])
    np.testing.assert_allclose(frame.u_m, [0.0, 0.0, 1.0], atol=1e-15)
    assert frame.d_dot == -2.0
    assert frame.K.shape == (2, 3)
    assert np.linalg.norm(frame.L) <= 1e-15


def test_benchmark_locus_sigma3():
    p = BenchmarkParams(a2=1.0, d4=1.0)
    for theta3 in (math.pi / 2, 3 * math.pi / 2):
        dec = svd_decompose(first3_jacobian(p, theta3), 1e-8)
        assert dec.sigma[-1] <= 1e-10
        assert dec.rank == 2
    for theta3 in (0.0, math.pi):
        dec = svd_decompose(first3_jacobian(p, theta3), 1e-8)
        assert dec.sigma[-1] > 0.3
        assert dec.rank == 3
