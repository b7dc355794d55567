"""Closed-form analysis of the six-DOF benchmark robot.

The benchmark has one vertical prismatic joint and five revolute joints;
its Jacobian splits into decoupled 3x3 blocks, which gives analytic
singular values and an analytic escape coefficient. These closed forms are
the independent oracle the generic numeric pipeline is checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .escape_analysis import EscapeClass
from .kinematics import JacobianProvider


@dataclass(frozen=True)
class BenchmarkParams:
    """The two geometry parameters the analysis depends on."""

    a2: float
    d4: float

    def __post_init__(self):
        for label, value in (("a2", self.a2), ("d4", self.d4)):
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"{label} must be positive and finite")


@dataclass(frozen=True)
class EpsilonBranch:
    """Selects which singular configuration theta3 = k*pi + pi/2 is analyzed."""

    k: int

    @property
    def epsilon(self) -> int:
        """sin(theta3) at the branch: +1 for even k, -1 for odd k."""
        return 1 if self.k % 2 == 0 else -1

    @property
    def theta3(self) -> float:
        return self.k * math.pi + 0.5 * math.pi

    @classmethod
    def from_epsilon(cls, epsilon: int) -> "EpsilonBranch":
        if epsilon not in (1, -1):
            raise ValueError("epsilon must be +1 or -1")
        return cls(k=0 if epsilon == 1 else 1)


class EscapeClosedForm(NamedTuple):
    A: float
    h: float
    classification: EscapeClass


def closed_form_jacobian(p: BenchmarkParams, q) -> np.ndarray:
    """Analytic 6x6 Jacobian; the upper-right block is identically zero."""
    q = np.asarray(q, dtype=float)
    if q.shape != (6,):
        raise ValueError(f"q must have 6 entries, got {q.shape}")
    s3, c3 = math.sin(q[2]), math.cos(q[2])
    s4, c4 = math.sin(q[3]), math.cos(q[3])
    s5, c5 = math.sin(q[4]), math.cos(q[4])
    J = np.zeros((6, 6))
    J[:3, :3] = [
        [0.0, p.d4 + p.a2 * s3, p.d4],
        [1.0, 0.0, 0.0],
        [0.0, -p.a2 * c3, 0.0],
    ]
    J[3:, :3] = [
        [0.0, 0.0, 0.0],
        [0.0, 1.0, 1.0],
        [0.0, 0.0, 0.0],
    ]
    J[3:, 3:] = [
        [0.0, -s4, c4 * s5],
        [0.0, c4, s4 * s5],
        [1.0, 0.0, c5],
    ]
    return J


def first3_jacobian(p: BenchmarkParams, q3: float) -> np.ndarray:
    """The decoupled 3x3 block governing the first three joints."""
    s3, c3 = math.sin(q3), math.cos(q3)
    return np.array(
        [
            [0.0, p.d4 + p.a2 * s3, p.d4],
            [1.0, 0.0, 0.0],
            [0.0, -p.a2 * c3, 0.0],
        ]
    )


def closed_form_provider(p: BenchmarkParams) -> JacobianProvider:
    """Full 6x6 closed-form Jacobian as a provider."""

    def provider(q):
        return closed_form_jacobian(p, q)

    return provider


def first3_provider(p: BenchmarkParams) -> JacobianProvider:
    """3x3 closed-form block as a provider over (q1, q2, q3)."""

    def provider(q):
        q = np.asarray(q, dtype=float)
        if q.shape != (3,):
            raise ValueError(f"q must have 3 entries, got {q.shape}")
        return first3_jacobian(p, q[2])

    return provider


def singular_values_first3(p: BenchmarkParams, theta3: float) -> tuple[float, float, float]:
    """Analytic singular values of the first 3x3 block.

    The middle value is exactly 1; the outer pair are the square roots of
    the eigenvalues of the remaining 2x2 Gram block, whose determinant
    (a2 d4 cos theta3)^2 vanishes exactly on the singular locus. The triple
    is reported in this fixed labeling, not re-sorted.
    """
    s3, c3 = math.sin(theta3), math.cos(theta3)
    w = p.d4 + p.a2 * s3
    trace = w * w + p.d4 * p.d4 + (p.a2 * c3) ** 2
    det = (p.a2 * p.d4 * c3) ** 2
    disc = math.sqrt(max(trace * trace - 4.0 * det, 0.0))
    lam_hi = 0.5 * (trace + disc)
    lam_lo = max(0.5 * (trace - disc), 0.0)
    return math.sqrt(lam_hi), 1.0, math.sqrt(lam_lo)


def singular_J11(p: BenchmarkParams, eps: EpsilonBranch) -> np.ndarray:
    """The first block evaluated on the singular locus (third row vanishes)."""
    return np.array(
        [
            [0.0, p.d4 + p.a2 * eps.epsilon, p.d4],
            [1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0],
        ]
    )


def closed_form_thetaL(p: BenchmarkParams, theta3: float) -> np.ndarray:
    """Analytic derivative matrix of the singular row for the first block.

    The only nonzero entry is a2 sin(theta3): the derivative with respect
    to q3 (row 2) of the singular row's q2 component (column 1).
    """
    H = np.zeros((3, 3))
    H[2, 1] = p.a2 * math.sin(theta3)
    return H


def closed_form_escape(
    p: BenchmarkParams, eps: EpsilonBranch, tol: float = 1e-9
) -> EscapeClosedForm:
    """Analytic escape coefficient and sign indicator at the chosen branch.

    h = -(d4 + a2 eps) / (a2 d4 eps) and A = (a2 eps)^2 h. A positive sign
    means escape is possible along the singular direction, negative means
    opposite; A vanishes (no feasible path) exactly when d4 = a2 with
    eps = -1.
    """
    e = float(eps.epsilon)
    h = -(p.d4 + p.a2 * e) / (p.a2 * p.d4 * e)
    A = (p.a2 * e) ** 2 * h
    if abs(A) <= tol:
        classification = EscapeClass.NO_FEASIBLE_PATH
    elif h > 0.0:
        classification = EscapeClass.ESCAPE_ALONG_UM
    else:
        classification = EscapeClass.ESCAPE_OPPOSITE_UM
    return EscapeClosedForm(A=A, h=h, classification=classification)
