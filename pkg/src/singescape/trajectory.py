"""Constant-rate joint trajectories: singularity monitoring and escape maneuvers.

Joint paths are exactly linear, q(t) = q0 + qdot * t, so finite-difference
checks of the predicted singular acceleration are clean. Traces are plain
lists of immutable samples; independent trajectories can be simulated
concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .escape_analysis import (
    EscapeClass,
    EscapeCoefficients,
    coefficients,
    hessian_of_L,
    partition_columns,
    singular_acceleration,
)
from .kinematics import JacobianProvider
from .singularity import singular_direction, split_KL, svd_decompose


@dataclass(frozen=True)
class SimulationConfig:
    dt: float
    t_end: float
    sigma_tol: float = 1e-8
    qs_magnitude: float = 1.0

    def __post_init__(self):
        if not (self.dt > 0.0 and math.isfinite(self.dt)):
            raise ValueError("dt must be positive")
        if not (self.t_end >= 0.0 and math.isfinite(self.t_end)):
            raise ValueError("t_end must be non-negative")
        if self.t_end > 0.0 and self.dt > self.t_end:
            raise ValueError("dt must not exceed t_end")
        if not 0.0 < self.sigma_tol < 1.0:
            raise ValueError("sigma_tol must lie in (0, 1)")
        if not self.qs_magnitude > 0.0:
            raise ValueError("qs_magnitude must be positive")


@dataclass(frozen=True)
class TrajectorySample:
    """State at one sample: joint state, task twist, and rank monitors.

    d_dot projects the twist on a singular direction frozen at the start of
    the trace; sigma_min/sigma_max track the Jacobian's spectrum.
    """

    t: float
    q: np.ndarray
    qdot: np.ndarray
    x_dot: np.ndarray
    d_dot: float
    sigma_min: float
    sigma_max: float


@dataclass(frozen=True)
class EscapePlan:
    """Joint rates leaving a singularity, with the predicted outcome."""

    qdot: np.ndarray
    classification: EscapeClass
    ddot_sign: int
    coefficients: EscapeCoefficients
    u_m: np.ndarray
    warning: str | None = None


def _reference_direction(provider: JacobianProvider, q0, sigma_tol: float) -> np.ndarray:
    dec = svd_decompose(provider(q0), sigma_tol)
    u = dec.U[:, -1].copy()
    peak = int(np.argmax(np.abs(u)))
    if u[peak] < 0.0:
        u = -u
    return u


def integrate_constant_rate(
    provider: JacobianProvider, q0, qdot, cfg: SimulationConfig, u_ref=None
) -> list[TrajectorySample]:
    """Sample the exactly-linear path q0 + qdot * t at t = 0, dt, ..., t_end.

    d_dot is projected on `u_ref` when given (the frozen direction of a
    declared singularity), otherwise on the smallest-singular-value left
    direction at q0.
    """
    q0 = np.asarray(q0, dtype=float)
    qdot = np.asarray(qdot, dtype=float)
    if q0.shape != qdot.shape:
        raise ValueError("q0 and qdot must have equal length")
    if u_ref is None:
        u_ref = _reference_direction(provider, q0, cfg.sigma_tol)
    else:
        u_ref = np.asarray(u_ref, dtype=float)

    steps = 1 if cfg.t_end == 0.0 else int(math.floor(cfg.t_end / cfg.dt + 1e-9)) + 1
    samples = []
    for k in range(steps):
        t = k * cfg.dt
        q = q0 + qdot * t
        J = np.asarray(provider(q), dtype=float)
        x_dot = J @ qdot
        s = np.linalg.svd(J, compute_uv=False)
        m, n = J.shape
        sigma_min = 0.0 if m > n else float(s[-1])
        samples.append(
            TrajectorySample(
                t=t,
                q=q,
                qdot=qdot.copy(),
                x_dot=x_dot,
                d_dot=float(u_ref @ x_dot),
                sigma_min=sigma_min,
                sigma_max=float(s[0]),
            )
        )
    return samples


def detect_singularities(trace: list[TrajectorySample], sigma_tol: float) -> list[int]:
    """Indices of local minima of sigma_min below sigma_tol times the trace's largest sigma.

    Plateaus count once, at their first sample.
    """
    if not trace:
        return []
    s = [sample.sigma_min for sample in trace]
    threshold = sigma_tol * max(sample.sigma_max for sample in trace)
    hits = []
    for i, value in enumerate(s):
        if value > threshold:
            continue
        left = s[i - 1] if i > 0 else math.inf
        right = s[i + 1] if i + 1 < len(s) else math.inf
        if value < left and value <= right:
            hits.append(i)
    return hits


def escape_plan(
    provider: JacobianProvider, q_singular, cfg: SimulationConfig, pinned_s=None
) -> EscapePlan:
    """Plan joint rates that leave a simple singularity.

    The analysis assumes the robot starts at rest in the non-singular task
    rows (their velocity is zero), so the acceleration along the lost
    direction reduces to the pure quadratic term. For NoFeasiblePath the
    returned rates are zero and a warning is set instead of raising.
    """
    q0 = np.asarray(q_singular, dtype=float)
    J = np.asarray(provider(q0), dtype=float)
    dec = svd_decompose(J, cfg.sigma_tol)
    u_m = singular_direction(dec)
    K, _ = split_KL(dec)
    part = partition_columns(K, pinned_s=pinned_s)
    H = hessian_of_L(provider, q0, u_m)
    coef = coefficients(H, part, np.zeros(dec.m - 1))

    n = q0.size
    if coef.classification is EscapeClass.NO_FEASIBLE_PATH:
        return EscapePlan(
            qdot=np.zeros(n),
            classification=coef.classification,
            ddot_sign=0,
            coefficients=coef,
            u_m=u_m,
            warning="no feasible escape path; joint rates set to zero",
        )

    n_s = part.N.shape[1]
    if n_s == 1:
        qs = np.array([cfg.qs_magnitude])
    else:
        eigenvalues, eigenvectors = np.linalg.eigh(coef.A)
        dominant = int(np.argmax(np.abs(eigenvalues)))
        qs = eigenvectors[:, dominant] * cfg.qs_magnitude
    ddot = singular_acceleration(coef, qs)
    sign = 0 if abs(ddot) <= coef.classify_tol else (1 if ddot > 0.0 else -1)
    return EscapePlan(
        qdot=part.N @ qs,
        classification=coef.classification,
        ddot_sign=sign,
        coefficients=coef,
        u_m=u_m,
    )


def emit_csv(trace: list[TrajectorySample]) -> str:
    """Deterministic CSV: t, per-joint q and qdot, d_dot, sigma_min.

    Values carry 17 significant digits so a parse reproduces them exactly.
    An empty trace emits the joint-free header only.
    """
    n = len(trace[0].q) if trace else 0
    columns = (
        ["t"]
        + [f"q{i + 1}" for i in range(n)]
        + [f"qd{i + 1}" for i in range(n)]
        + ["ddot", "sigma_min"]
    )
    lines = [",".join(columns)]
    for sample in trace:
        values = (
            [sample.t]
            + list(sample.q)
            + list(sample.qdot)
            + [sample.d_dot, sample.sigma_min]
        )
        lines.append(",".join(f"{v:.17g}" for v in values))
    return "\n".join(lines) + "\n"
