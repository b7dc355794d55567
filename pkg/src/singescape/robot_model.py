"""Manipulator descriptions: DH joint chains, validation, and the JSON file format.

Models are frozen dataclasses; everything here is pure and safe to share
between threads.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import RobotDescriptionError

_TOP_LEVEL_KEYS = {"name", "task_dim", "joints"}
_JOINT_KEYS = {"kind", "alpha_deg", "a", "d", "theta_offset_deg"}


class JointKind(enum.Enum):
    REVOLUTE = "revolute"
    PRISMATIC = "prismatic"


@dataclass(frozen=True)
class DHJoint:
    """One Denavit-Hartenberg link.

    Angles (`alpha`, `theta_offset`) are radians, lengths (`a`, `d`) meters.
    A revolute joint adds its variable to theta, a prismatic one to d.
    """

    kind: JointKind
    alpha: float
    a: float
    d: float
    theta_offset: float = 0.0


@dataclass(frozen=True)
class RobotModel:
    """A serial chain of DH joints with an m-dimensional task space."""

    name: str
    joints: tuple[DHJoint, ...]
    m: int = 6

    @property
    def n(self) -> int:
        """Number of joints."""
        return len(self.joints)


@dataclass(frozen=True)
class JointState:
    """Joint positions and rates, stored immutably."""

    q: tuple[float, ...]
    qdot: tuple[float, ...]

    def __post_init__(self):
        if len(self.q) != len(self.qdot):
            raise ValueError("q and qdot must have the same length")
        if not all(math.isfinite(v) for v in self.q + self.qdot):
            raise ValueError("joint state entries must be finite")

    def q_array(self) -> np.ndarray:
        return np.asarray(self.q, dtype=float)

    def qdot_array(self) -> np.ndarray:
        return np.asarray(self.qdot, dtype=float)


def _require_number(value, locus: str) -> float:
    if isinstance(value, bool):
        raise RobotDescriptionError(f"{locus}: must be a number")
    if isinstance(value, str):
        try:
            value = float(value)
        except ValueError:
            raise RobotDescriptionError(f"{locus}: must be a number") from None
    if not isinstance(value, (int, float)):
        raise RobotDescriptionError(f"{locus}: must be a number")
    value = float(value)
    if not math.isfinite(value):
        raise RobotDescriptionError(f"{locus}: non-finite field")
    return value


def parse_robot_description(text: str) -> RobotModel:
    """Parse the JSON robot description format into a validated RobotModel.

    The document must carry exactly the fields `name`, `task_dim`, `joints`;
    each joint exactly `kind`, `alpha_deg`, `a`, `d`, `theta_offset_deg`.
    Unknown fields are rejected. Angles are converted to radians.

    Raises RobotDescriptionError with a line/field locus on bad input.
    """
    try:
        # Non-finite literals (NaN, Infinity) still parse; the per-field
        # finiteness check below rejects them with a field locus.
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RobotDescriptionError(
            f"syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None

    if not isinstance(doc, dict):
        raise RobotDescriptionError("top level must be an object")
    unknown = set(doc) - _TOP_LEVEL_KEYS
    if unknown:
        raise RobotDescriptionError(f"unknown field {sorted(unknown)[0]!r}")
    missing = _TOP_LEVEL_KEYS - set(doc)
    if missing:
        raise RobotDescriptionError(f"missing field {sorted(missing)[0]!r}")

    name = doc["name"]
    if not isinstance(name, str) or not name:
        raise RobotDescriptionError("name: must be a non-empty string")

    task_dim = doc["task_dim"]
    if isinstance(task_dim, bool) or not isinstance(task_dim, int):
        raise RobotDescriptionError("task_dim: must be an integer")

    raw_joints = doc["joints"]
    if not isinstance(raw_joints, list):
        raise RobotDescriptionError("joints: must be an array")
    if not raw_joints:
        raise RobotDescriptionError("empty joint list")

    joints = []
    for i, obj in enumerate(raw_joints):
        locus = f"joint {i}"
        if not isinstance(obj, dict):
            raise RobotDescriptionError(f"{locus}: must be an object")
        unknown = set(obj) - _JOINT_KEYS
        if unknown:
            raise RobotDescriptionError(f"{locus}: unknown field {sorted(unknown)[0]!r}")
        missing = _JOINT_KEYS - set(obj)
        if missing:
            raise RobotDescriptionError(f"{locus}: missing field {sorted(missing)[0]!r}")
        kind_text = obj["kind"]
        if kind_text not in ("revolute", "prismatic"):
            raise RobotDescriptionError(f"{locus}: unknown joint kind {kind_text!r}")
        joints.append(
            DHJoint(
                kind=JointKind(kind_text),
                alpha=math.radians(_require_number(obj["alpha_deg"], f"{locus} alpha_deg")),
                a=_require_number(obj["a"], f"{locus} a"),
                d=_require_number(obj["d"], f"{locus} d"),
                theta_offset=math.radians(
                    _require_number(obj["theta_offset_deg"], f"{locus} theta_offset_deg")
                ),
            )
        )

    model = RobotModel(name=name, joints=tuple(joints), m=task_dim)
    violations = validate_model(model)
    if violations:
        raise RobotDescriptionError("; ".join(violations))
    return model


def _exact_degrees(rad: float) -> float:
    # Degrees are the file unit. Prefer the representable degree value whose
    # radian image is bit-exact so that parse(emit(model)) round-trips.
    deg = math.degrees(rad)
    if math.radians(deg) == rad:
        return deg
    for direction in (math.inf, -math.inf):
        candidate = deg
        for _ in range(4):
            candidate = math.nextafter(candidate, direction)
            if math.radians(candidate) == rad:
                return candidate
    return deg


def emit_robot_description(model: RobotModel) -> str:
    """Serialize a RobotModel to the JSON file format (degrees for angles)."""
    doc = {
        "name": model.name,
        "task_dim": model.m,
        "joints": [
            {
                "kind": j.kind.value,
                "alpha_deg": _exact_degrees(j.alpha),
                "a": j.a,
                "d": j.d,
                "theta_offset_deg": _exact_degrees(j.theta_offset),
            }
            for j in model.joints
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def validate_model(model: RobotModel, check_escape_ready: bool = False) -> list[str]:
    """Return invariant violations as messages (empty list when valid).

    With `check_escape_ready`, additionally require a square system (n = m),
    which the scalar escape analysis assumes.
    """
    violations = []
    if model.n < 1:
        violations.append("empty joint list")
    if model.m not in (3, 6):
        violations.append("m must be 3 or 6")
    for i, joint in enumerate(model.joints):
        if not isinstance(joint.kind, JointKind):
            violations.append(f"joint {i}: unknown joint kind")
        for field_name in ("alpha", "a", "d", "theta_offset"):
            if not math.isfinite(getattr(joint, field_name)):
                violations.append(f"joint {i}: non-finite {field_name}")
    if check_escape_ready and model.n != model.m:
        violations.append("escape analysis requires n = m")
    return violations


def benchmark_model(a2: float, d4: float, name: str = "benchmark") -> RobotModel:
    """Six-joint test robot: one vertical prismatic joint and five revolute.

    Only `a2` and `d4` shape the analysis; the first joint's constant offsets
    are zero. Twist angles are (0, 0, 90, -90, 90, 0) degrees.
    """
    if not (math.isfinite(a2) and a2 > 0 and math.isfinite(d4) and d4 > 0):
        raise ValueError("a2 and d4 must be positive and finite")
    right = math.radians(90.0)
    joints = (
        DHJoint(kind=JointKind.PRISMATIC, alpha=0.0, a=0.0, d=0.0),
        DHJoint(kind=JointKind.REVOLUTE, alpha=0.0, a=a2, d=0.0),
        DHJoint(kind=JointKind.REVOLUTE, alpha=right, a=0.0, d=0.0),
        DHJoint(kind=JointKind.REVOLUTE, alpha=-right, a=0.0, d=d4),
        DHJoint(kind=JointKind.REVOLUTE, alpha=right, a=0.0, d=0.0),
        DHJoint(kind=JointKind.REVOLUTE, alpha=0.0, a=0.0, d=0.0),
    )
    return RobotModel(name=name, joints=joints, m=6)


def benchmark_parameters(model: RobotModel) -> tuple[float, float] | None:
    """Return (a2, d4) when the model matches the benchmark structure, else None.

    The first joint's a/d offsets may take any value; they do not enter the
    closed-form analysis.
    """
    if model.n != 6 or model.m != 6:
        return None
    kinds = tuple(j.kind for j in model.joints)
    if kinds != (JointKind.PRISMATIC,) + (JointKind.REVOLUTE,) * 5:
        return None
    right = math.radians(90.0)
    alphas = (0.0, 0.0, right, -right, right, 0.0)
    tol = 1e-12
    for j, alpha in zip(model.joints, alphas):
        if abs(j.alpha - alpha) > tol or abs(j.theta_offset) > tol:
            return None
    a = [j.a for j in model.joints]
    d = [j.d for j in model.joints]
    if any(abs(v) > tol for v in a[2:]) or any(abs(v) > tol for v in (d[1], d[2], d[4], d[5])):
        return None
    a2, d4 = a[1], d[3]
    if a2 <= 0 or d4 <= 0:
        return None
    return a2, d4
