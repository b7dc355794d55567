"""Feasible escape directions at a simple singularity.

Joint rates that keep the non-singular task rows quiet still produce an
acceleration along the lost direction; its sign is governed by a quadratic
form in the free rates. This module builds that form and classifies it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import PartitionError
from .kinematics import JacobianProvider

DEFAULT_FD_STEP = 1e-6
CONDITION_LIMIT = 1e8


class EscapeClass(enum.Enum):
    """Which motions along the singular direction remain reachable."""

    ESCAPE_ALONG_UM = "EscapeAlongUm"
    ESCAPE_OPPOSITE_UM = "EscapeOppositeUm"
    NO_FEASIBLE_PATH = "NoFeasiblePath"
    INDEFINITE_QUADRATIC = "IndefiniteQuadratic"


@dataclass(frozen=True)
class Partition:
    """Column split of K into an invertible block and the free remainder.

    M and N scatter back to joint order: qdot = M @ y_dot + N @ qs_dot, with
    K @ M = I and K @ N = 0. Columns p_indices of K form K_p; the free
    columns s_indices form K_s.
    """

    p_indices: tuple[int, ...]
    s_indices: tuple[int, ...]
    K_p: np.ndarray
    K_s: np.ndarray
    M: np.ndarray
    N: np.ndarray


@dataclass(frozen=True)
class EscapeCoefficients:
    """Quadratic form of the singular acceleration in the free joint rates.

    ddot_d = qs_dot^T A qs_dot + B qs_dot + C. A is symmetrized by
    construction; B and C vanish exactly when y_dot is zero.
    """

    H: np.ndarray
    A: np.ndarray
    B: np.ndarray
    C: float
    classification: EscapeClass
    classify_tol: float


def partition_columns(K, pinned_s=None, cond_limit: float = CONDITION_LIMIT) -> Partition:
    """Choose an invertible column block of K and build the reduction maps.

    With `pinned_s`, those columns become the free set and the rest must be
    invertible. Otherwise QR column pivoting picks a well-conditioned block.
    Raises PartitionError for rank-deficient K or a singular pinned block.
    """
    K = np.asarray(K, dtype=float)
    if K.ndim != 2:
        raise PartitionError("K must be a matrix")
    m1, n = K.shape
    if n < m1:
        raise PartitionError(f"K has too few columns: {n} < {m1}")

    sv = np.linalg.svd(K, compute_uv=False)
    if sv[0] == 0.0 or sv[m1 - 1] <= 1e-10 * sv[0]:
        raise PartitionError("rank-deficient K")

    if pinned_s is not None:
        s_idx = tuple(int(i) for i in np.atleast_1d(pinned_s))
        if len(set(s_idx)) != len(s_idx) or any(i < 0 or i >= n for i in s_idx):
            raise PartitionError(f"invalid pinned column set {s_idx}")
        if len(s_idx) != n - m1:
            raise PartitionError(
                f"pinned column set must have {n - m1} entries, got {len(s_idx)}"
            )
        p_idx = tuple(i for i in range(n) if i not in s_idx)
    else:
        _, _, piv = scipy.linalg.qr(K, pivoting=True)
        p_idx = tuple(sorted(int(i) for i in piv[:m1]))
        s_idx = tuple(i for i in range(n) if i not in p_idx)

    K_p = K[:, p_idx]
    K_s = K[:, s_idx]
    sv_p = np.linalg.svd(K_p, compute_uv=False)
    cond = np.inf if sv_p[-1] == 0.0 else sv_p[0] / sv_p[-1]
    if cond > cond_limit:
        raise PartitionError(
            f"selected columns {p_idx} give a singular or ill-conditioned block"
        )

    K_p_inv = np.linalg.inv(K_p)
    M = np.zeros((n, m1))
    M[list(p_idx), :] = K_p_inv
    N = np.zeros((n, n - m1))
    N[list(p_idx), :] = -K_p_inv @ K_s
    if n > m1:
        N[list(s_idx), :] = np.eye(n - m1)

    # Guard against a silently bad inverse; tests pin the tight bounds.
    scale = max(1.0, float(np.abs(K).max()))
    guard = max(1e-10, 1e3 * np.finfo(float).eps * cond) * scale
    if np.abs(K @ M - np.eye(m1)).max() > guard:
        raise PartitionError("reduction map failed: K @ M != I")
    if n > m1 and np.abs(K @ N).max() > guard:
        raise PartitionError("reduction map failed: K @ N != 0")

    return Partition(p_indices=p_idx, s_indices=s_idx, K_p=K_p, K_s=K_s, M=M, N=N)


def hessian_of_L(
    provider: JacobianProvider, q0, u_m_frozen, step: float = DEFAULT_FD_STEP
) -> np.ndarray:
    """Central-difference derivatives of the singular row L(q) = u_m^T J(q).

    u_m stays frozen at the analysis configuration; differentiating the SVD
    factor itself is ill-conditioned at the rank drop. Entry (i, j) holds
    the derivative of L_j with respect to q_i. The step is scaled per
    coordinate by max(1, |q_i|).
    """
    q0 = np.asarray(q0, dtype=float)
    u = np.asarray(u_m_frozen, dtype=float)
    if step <= 0.0:
        raise ValueError("step must be positive")
    if abs(np.linalg.norm(u) - 1.0) > 1e-9:
        raise ValueError("u_m must have unit norm")

    n = q0.size
    H = np.empty((n, n))
    for i in range(n):
        h = step * max(1.0, abs(q0[i]))
        q_plus = q0.copy()
        q_plus[i] += h
        q_minus = q0.copy()
        q_minus[i] -= h
        J_plus = np.asarray(provider(q_plus), dtype=float)
        J_minus = np.asarray(provider(q_minus), dtype=float)
        if J_plus.shape != (u.size, n) or J_minus.shape != (u.size, n):
            raise ValueError(
                f"provider returned shape {J_plus.shape}, expected {(u.size, n)}"
            )
        H[i, :] = (u @ J_plus - u @ J_minus) / (2.0 * h)
    if not np.all(np.isfinite(H)):
        raise ValueError("non-finite differences")
    return H


def classification_tolerance(H) -> float:
    """Scale-aware near-zero threshold for the quadratic form."""
    return 1e-9 * (1.0 + float(np.linalg.norm(H)))


def classify(A, tol: float) -> EscapeClass:
    """Sign-classify the quadratic form.

    Scalar case: positive means the end point accelerates along the singular
    direction, negative means opposite, near-zero means no feasible path.
    Matrix case (redundant free rates): definiteness decides; mixed spectra
    are reported as indefinite (both directions reachable).
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.shape[0] != A.shape[1]:
        raise ValueError("A must be square")
    if A.size == 0:
        # No free rates at all, so no escape motion exists.
        return EscapeClass.NO_FEASIBLE_PATH
    if np.abs(A - A.T).max() > 1e-10 * max(1.0, float(np.abs(A).max())):
        raise ValueError("A must be symmetric")
    if A.shape == (1, 1):
        a = A[0, 0]
        if a > tol:
            return EscapeClass.ESCAPE_ALONG_UM
        if a < -tol:
            return EscapeClass.ESCAPE_OPPOSITE_UM
        return EscapeClass.NO_FEASIBLE_PATH
    eigenvalues = np.linalg.eigvalsh(A)
    if np.all(eigenvalues > tol):
        return EscapeClass.ESCAPE_ALONG_UM
    if np.all(eigenvalues < -tol):
        return EscapeClass.ESCAPE_OPPOSITE_UM
    if np.all(np.abs(eigenvalues) <= tol):
        return EscapeClass.NO_FEASIBLE_PATH
    return EscapeClass.INDEFINITE_QUADRATIC


def coefficients(H, part: Partition, y_dot) -> EscapeCoefficients:
    """Reduce qdot^T H qdot through the partition maps.

    A = sym(N^T H N), B = y_dot^T M^T (H + H^T) N, C = y_dot^T M^T H M y_dot:
    the expansion of the form under qdot = M y_dot + N qs_dot.
    """
    H = np.asarray(H, dtype=float)
    n = part.M.shape[0]
    if H.shape != (n, n):
        raise ValueError(f"H must be {n} x {n}, got {H.shape}")
    y = np.asarray(y_dot, dtype=float).reshape(-1)
    if y.size != part.M.shape[1]:
        raise ValueError(
            f"y_dot must have length {part.M.shape[1]}, got {y.size}"
        )
    N = part.N
    M = part.M
    A_raw = N.T @ H @ N
    A = 0.5 * (A_raw + A_raw.T)
    B = (y @ M.T) @ (H + H.T) @ N
    C = float((y @ M.T) @ H @ (M @ y))
    tol = classification_tolerance(H)
    return EscapeCoefficients(
        H=H, A=A, B=B, C=C, classification=classify(A, tol), classify_tol=tol
    )


def singular_acceleration(coef: EscapeCoefficients, qs_dot) -> float:
    """Acceleration along the frozen singular direction for free rates qs_dot."""
    qs = np.atleast_1d(np.asarray(qs_dot, dtype=float))
    if qs.shape != (coef.A.shape[0],):
        raise ValueError(
            f"qs_dot must have length {coef.A.shape[0]}, got {qs.shape}"
        )
    return float(qs @ coef.A @ qs + coef.B @ qs + coef.C)
