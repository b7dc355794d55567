"""SVD-based rank analysis of manipulator Jacobians.

Provides the factorization with a scale-aware numerical rank, the
pseudoinverse, the lost task direction at a simple singularity, and the
split of the rotated Jacobian into its non-singular and singular rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotSimpleSingularityError

DEFAULT_TOL_REL = 1e-8


@dataclass(frozen=True)
class SvdResult:
    """Factorization J = U diag(sigma) V^T with numerical rank.

    sigma has length m, sorted descending, zero-padded when m > n. Columns
    of U are sign-normalized so their largest-magnitude entry is positive,
    which makes downstream reports deterministic.
    """

    J: np.ndarray
    U: np.ndarray
    sigma: np.ndarray
    V: np.ndarray
    rank: int
    tol_rel: float

    @property
    def m(self) -> int:
        return self.U.shape[0]

    @property
    def n(self) -> int:
        return self.V.shape[0]


@dataclass(frozen=True)
class SingularFrame:
    """The singular direction u_m with the task-row split at one configuration.

    K holds the m-1 rows of U^T J paired with the surviving singular values,
    L the row paired with the smallest one; d_dot is the task velocity
    projected on u_m when one was supplied.
    """

    u_m: np.ndarray
    K: np.ndarray
    L: np.ndarray
    d_dot: float | None = None


def svd_decompose(J, tol_rel: float = DEFAULT_TOL_REL) -> SvdResult:
    """Factor J and count the singular values above tol_rel * sigma_1.

    Parameters
    ----------
    J : (m, n) array_like, finite
    tol_rel : relative cutoff in (0, 1); sigma_i <= tol_rel * sigma_1
        counts as vanished.
    """
    J = np.asarray(J, dtype=float)
    if J.ndim != 2:
        raise ValueError("J must be a matrix")
    if not np.all(np.isfinite(J)):
        raise ValueError("non-finite input")
    if not 0.0 < tol_rel < 1.0:
        raise ValueError("tol_rel must lie in (0, 1)")

    m, n = J.shape
    U, s, Vh = np.linalg.svd(J, full_matrices=True)
    sigma = np.zeros(m)
    sigma[: s.size] = s
    V = Vh.T.copy()

    for j in range(m):
        col = U[:, j]
        peak = int(np.argmax(np.abs(col)))
        if col[peak] < 0.0:
            U[:, j] = -col
            if j < min(m, n):
                V[:, j] = -V[:, j]

    if sigma[0] > 0.0:
        rank = int(np.count_nonzero(sigma > tol_rel * sigma[0]))
    else:
        rank = 0
    return SvdResult(J=J.copy(), U=U, sigma=sigma, V=V, rank=rank, tol_rel=float(tol_rel))


def pseudoinverse(dec: SvdResult) -> np.ndarray:
    """Moore-Penrose inverse from the factorization.

    Reciprocates the singular values counted by the numerical rank and zeroes
    the rest, so rank-deficient input is handled without blow-up.
    """
    m, n = dec.J.shape
    sigma_star = np.zeros((n, m))
    for i in range(dec.rank):
        sigma_star[i, i] = 1.0 / dec.sigma[i]
    return dec.V @ sigma_star @ dec.U.T


def singular_direction(dec: SvdResult) -> np.ndarray:
    """Unit task direction lost at a simple (single rank drop) singularity.

    Raises NotSimpleSingularityError unless exactly one singular value has
    vanished. The sign convention (largest-magnitude entry positive) keeps
    the reported direction deterministic.
    """
    if dec.rank != dec.m - 1:
        raise NotSimpleSingularityError(
            f"not a simple singularity: rank {dec.rank} with m = {dec.m}"
        )
    u = dec.U[:, -1].copy()
    peak = int(np.argmax(np.abs(u)))
    if u[peak] < 0.0:
        u = -u
    return u


def split_KL(dec: SvdResult) -> tuple[np.ndarray, np.ndarray]:
    """Split U^T J into the non-singular rows K and the singular row L.

    L is the row paired with the smallest singular value; at a simple
    singularity it vanishes to within tol_rel * sigma_1. Requires rank of
    at least m - 1.
    """
    if dec.rank < dec.m - 1:
        raise NotSimpleSingularityError(
            f"rank {dec.rank} is below m - 1 = {dec.m - 1}; split undefined"
        )
    rotated = dec.U.T @ dec.J
    return rotated[:-1].copy(), rotated[-1].copy()


def singular_velocity(u_m, x_dot) -> float:
    """Task velocity projected on the singular direction."""
    u_m = np.asarray(u_m, dtype=float)
    x_dot = np.asarray(x_dot, dtype=float)
    if u_m.shape != x_dot.shape:
        raise ValueError("dimension mismatch between u_m and x_dot")
    if abs(np.linalg.norm(u_m) - 1.0) > 1e-9:
        raise ValueError("u_m must have unit norm")
    return float(u_m @ x_dot)


def singular_frame(dec: SvdResult, x_dot=None) -> SingularFrame:
    """Bundle the singular direction and the K/L split, optionally with d_dot."""
    u_m = singular_direction(dec)
    K, L = split_KL(dec)
    d_dot = None if x_dot is None else singular_velocity(u_m, x_dot)
    return SingularFrame(u_m=u_m, K=K, L=L, d_dot=d_dot)
