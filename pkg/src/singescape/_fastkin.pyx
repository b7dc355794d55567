# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kinematics kernels: DH transform chains and geometric Jacobians."""

from libc.math cimport cos, sin

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef inline void _fill_link(double alpha, double a, double d, double theta,
                            double[4][4] T) nogil:
    cdef double ct = cos(theta)
    cdef double st = sin(theta)
    cdef double ca = cos(alpha)
    cdef double sa = sin(alpha)
    T[0][0] = ct; T[0][1] = -st * ca; T[0][2] = st * sa;  T[0][3] = a * ct
    T[1][0] = st; T[1][1] = ct * ca;  T[1][2] = -ct * sa; T[1][3] = a * st
    T[2][0] = 0.0; T[2][1] = sa;      T[2][2] = ca;       T[2][3] = d
    T[3][0] = 0.0; T[3][1] = 0.0;     T[3][2] = 0.0;      T[3][3] = 1.0


cdef void _chain_into(double[::1] alpha, double[::1] a, double[::1] d,
                      double[::1] theta0, unsigned char[::1] prismatic,
                      double[::1] q, double[:, :, ::1] out) nogil:
    cdef Py_ssize_t n = alpha.shape[0]
    cdef Py_ssize_t i, r, c, k
    cdef double T[4][4]
    cdef double theta_i, d_i, acc
    for r in range(4):
        for c in range(4):
            out[0, r, c] = 1.0 if r == c else 0.0
    for i in range(n):
        if prismatic[i]:
            theta_i = theta0[i]
            d_i = d[i] + q[i]
        else:
            theta_i = theta0[i] + q[i]
            d_i = d[i]
        _fill_link(alpha[i], a[i], d_i, theta_i, T)
        for r in range(4):
            for c in range(4):
                acc = 0.0
                for k in range(4):
                    acc += out[i, r, k] * T[k][c]
                out[i + 1, r, c] = acc


def link_transform(double alpha, double a, double d, double theta):
    """Homogeneous transform for one link: rot-z(theta), trans-z(d), trans-x(a), rot-x(alpha)."""
    cdef double T[4][4]
    _fill_link(alpha, a, d, theta, T)
    out = np.empty((4, 4))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t r, c
    for r in range(4):
        for c in range(4):
            o[r, c] = T[r][c]
    return out


def fk_chain(double[::1] alpha, double[::1] a, double[::1] d,
             double[::1] theta0, unsigned char[::1] prismatic, double[::1] q):
    """Cumulative base-to-frame transforms, shape (n+1, 4, 4)."""
    cdef Py_ssize_t n = alpha.shape[0]
    out = np.empty((n + 1, 4, 4))
    cdef double[:, :, ::1] o = out
    _chain_into(alpha, a, d, theta0, prismatic, q, o)
    return out


def dh_jacobian(double[::1] alpha, double[::1] a, double[::1] d,
                double[::1] theta0, unsigned char[::1] prismatic,
                double[::1] q, int task_dim):
    """Geometric Jacobian from the frame chain, shape (task_dim, n).

    Revolute column: (z_i x (p_e - p_i); z_i). Prismatic column: (z_i; 0).
    task_dim 3 keeps the linear block only.
    """
    cdef Py_ssize_t n = alpha.shape[0]
    chain = np.empty((n + 1, 4, 4))
    cdef double[:, :, ::1] ch = chain
    _chain_into(alpha, a, d, theta0, prismatic, q, ch)

    jac = np.zeros((6, n))
    cdef double[:, ::1] J = jac
    cdef Py_ssize_t i
    cdef double zx, zy, zz, rx, ry, rz
    cdef double pex = ch[n, 0, 3]
    cdef double pey = ch[n, 1, 3]
    cdef double pez = ch[n, 2, 3]
    for i in range(n):
        zx = ch[i, 0, 2]
        zy = ch[i, 1, 2]
        zz = ch[i, 2, 2]
        if prismatic[i]:
            J[0, i] = zx
            J[1, i] = zy
            J[2, i] = zz
        else:
            rx = pex - ch[i, 0, 3]
            ry = pey - ch[i, 1, 3]
            rz = pez - ch[i, 2, 3]
            J[0, i] = zy * rz - zz * ry
            J[1, i] = zz * rx - zx * rz
            J[2, i] = zx * ry - zy * rx
            J[3, i] = zx
            J[4, i] = zy
            J[5, i] = zz
    if task_dim == 3:
        return jac[:3].copy()
    return jac
