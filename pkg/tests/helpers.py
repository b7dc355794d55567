"""Shared test helpers: random models and independent finite-difference checks."""

import math

import numpy as np

from singescape import DHJoint, JointKind, RobotModel, forward_kinematics


def random_model(rng, n=None, m=6):
    n = n if n is not None else int(rng.integers(1, 7))
    joints = tuple(
        DHJoint(
            kind=JointKind.PRISMATIC if rng.random() < 0.3 else JointKind.REVOLUTE,
            alpha=rng.uniform(-math.pi, math.pi),
            a=rng.uniform(-1.0, 1.0),
            d=rng.uniform(-1.0, 1.0),
            theta_offset=rng.uniform(-math.pi, math.pi),
        )
        for _ in range(n)
    )
    return RobotModel(name="rand", joints=joints, m=m)


def fd_linear_jacobian(model, q, h=1e-6):
    """Independent check: central differences of end-effector position."""
    n = model.n
    out = np.zeros((3, n))
    for i in range(n):
        qp = np.array(q, dtype=float)
        qm = qp.copy()
        qp[i] += h
        qm[i] -= h
        pp = forward_kinematics(model, qp)[-1].translation
        pm = forward_kinematics(model, qm)[-1].translation
        out[:, i] = (pp - pm) / (2.0 * h)
    return out
