"""Forward kinematics and geometric Jacobians for any RobotModel.

Functions here are pure; the per-model DH parameter arrays are memoized on
the (immutable, hashable) model.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _backend
from .robot_model import DHJoint, JointKind, RobotModel


@dataclass(frozen=True)
class Pose:
    """Rigid transform: 3x3 orthonormal rotation plus translation (meters)."""

    rotation: np.ndarray
    translation: np.ndarray


# Base-to-frame poses, one per joint plus the end effector (length n + 1).
FrameChain = list[Pose]

# Maps a joint configuration q (length n) to an m x n Jacobian.
JacobianProvider = Callable[[np.ndarray], np.ndarray]


@functools.lru_cache(maxsize=256)
def _dh_arrays(model: RobotModel):
    alpha = np.array([j.alpha for j in model.joints])
    a = np.array([j.a for j in model.joints])
    d = np.array([j.d for j in model.joints])
    theta0 = np.array([j.theta_offset for j in model.joints])
    prismatic = np.array(
        [j.kind is JointKind.PRISMATIC for j in model.joints], dtype=np.uint8
    )
    return alpha, a, d, theta0, prismatic


def _check_q(model: RobotModel, q) -> np.ndarray:
    q = np.ascontiguousarray(q, dtype=float)
    if q.shape != (model.n,):
        raise ValueError(f"dimension mismatch: expected {model.n} joint values, got {q.shape}")
    if not np.all(np.isfinite(q)):
        raise ValueError("joint values must be finite")
    return q


def dh_transform(joint: DHJoint, q_i: float) -> Pose:
    """Transform across one joint at variable value q_i."""
    if not np.isfinite(q_i):
        raise ValueError("joint value must be finite")
    if joint.kind is JointKind.PRISMATIC:
        theta, d = joint.theta_offset, joint.d + q_i
    else:
        theta, d = joint.theta_offset + q_i, joint.d
    T = _backend.link_transform(joint.alpha, joint.a, d, theta)
    return Pose(rotation=T[:3, :3].copy(), translation=T[:3, 3].copy())


def forward_kinematics(model: RobotModel, q) -> FrameChain:
    """Cumulative poses from base to each joint frame and the end effector."""
    q = _check_q(model, q)
    mats = _backend.fk_chain(*_dh_arrays(model), q)
    return [
        Pose(rotation=mats[i, :3, :3].copy(), translation=mats[i, :3, 3].copy())
        for i in range(model.n + 1)
    ]


def numeric_jacobian(model: RobotModel, q) -> np.ndarray:
    """Geometric Jacobian (m x n) at configuration q.

    For m = 3 only the linear-velocity block is returned; angular rows of
    prismatic joints are zero by construction.
    """
    q = _check_q(model, q)
    return _backend.dh_jacobian(*_dh_arrays(model), q, model.m)


def jacobian_provider(model: RobotModel) -> JacobianProvider:
    """Bind a model into the provider contract used by the analysis pipeline."""

    def provider(q):
        return numeric_jacobian(model, q)

    return provider
