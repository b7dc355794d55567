"""NumPy kinematics kernels.

Fallback used when the compiled extension is unavailable; same signatures
as `_fastkin`.
"""

import math

import numpy as np


def link_transform(alpha, a, d, theta):
    """Homogeneous transform for one link: rot-z(theta), trans-z(d), trans-x(a), rot-x(alpha)."""
    ct, st = math.cos(theta), math.sin(theta)
    ca, sa = math.cos(alpha), math.sin(alpha)
    return np.array(
        [
            [ct, -st * ca, st * sa, a * ct],
            [st, ct * ca, -ct * sa, a * st],
            [0.0, sa, ca, d],
            [0.0, 0.0, 0.0, 1.0],
        ]
    )


def fk_chain(alpha, a, d, theta0, prismatic, q):
    """Cumulative base-to-frame transforms, shape (n+1, 4, 4)."""
    n = alpha.shape[0]
    out = np.empty((n + 1, 4, 4))
    out[0] = np.eye(4)
    for i in range(n):
        if prismatic[i]:
            theta_i, d_i = theta0[i], d[i] + q[i]
        else:
            theta_i, d_i = theta0[i] + q[i], d[i]
        out[i + 1] = out[i] @ link_transform(alpha[i], a[i], d_i, theta_i)
    return out


def dh_jacobian(alpha, a, d, theta0, prismatic, q, task_dim):
    """Geometric Jacobian from the frame chain, shape (task_dim, n).

    Revolute column: (z_i x (p_e - p_i); z_i). Prismatic column: (z_i; 0).
    task_dim 3 keeps the linear block only.
    """
    n = alpha.shape[0]
    chain = fk_chain(alpha, a, d, theta0, prismatic, q)
    p_end = chain[-1, :3, 3]
    jac = np.zeros((6, n))
    for i in range(n):
        z = chain[i, :3, 2]
        if prismatic[i]:
            jac[:3, i] = z
        else:
            jac[:3, i] = np.cross(z, p_end - chain[i, :3, 3])
            jac[3:, i] = z
    return jac[:3].copy() if task_dim == 3 else jac
