"""Singularity analysis and escape-direction classification for serial manipulators.

The package factors a manipulator Jacobian, detects simple (single rank
drop) singularities, and classifies which motions along the lost task
direction remain reachable through the sign of a reduced quadratic
acceleration form. A closed-form six-DOF benchmark serves as the oracle
for the generic numeric pipeline.
"""

from ._backend import BACKEND
from .benchmark_robot import (
    BenchmarkParams,
    EpsilonBranch,
    EscapeClosedForm,
    closed_form_escape,
    closed_form_jacobian,
    closed_form_provider,
    closed_form_thetaL,
    first3_jacobian,
    first3_provider,
    singular_J11,
    singular_values_first3,
)
from .errors import (
    NotSimpleSingularityError,
    PartitionError,
    RobotDescriptionError,
    SingescapeError,
)
from .escape_analysis import (
    EscapeClass,
    EscapeCoefficients,
    Partition,
    classify,
    coefficients,
    hessian_of_L,
    partition_columns,
    singular_acceleration,
)
from .kinematics import (
    FrameChain,
    JacobianProvider,
    Pose,
    dh_transform,
    forward_kinematics,
    jacobian_provider,
    numeric_jacobian,
)
from .robot_model import (
    DHJoint,
    JointKind,
    JointState,
    RobotModel,
    benchmark_model,
    benchmark_parameters,
    emit_robot_description,
    parse_robot_description,
    validate_model,
)
from .singularity import (
    SingularFrame,
    SvdResult,
    pseudoinverse,
    singular_direction,
    singular_frame,
    singular_velocity,
    split_KL,
    svd_decompose,
)
from .trajectory import (
    EscapePlan,
    SimulationConfig,
    TrajectorySample,
    detect_singularities,
    emit_csv,
    escape_plan,
    integrate_constant_rate,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BenchmarkParams",
    "DHJoint",
    "EpsilonBranch",
    "EscapeClass",
    "EscapeClosedForm",
    "EscapeCoefficients",
    "EscapePlan",
    "FrameChain",
    "JacobianProvider",
    "JointKind",
    "JointState",
    "NotSimpleSingularityError",
    "Partition",
    "PartitionError",
    "Pose",
    "RobotDescriptionError",
    "RobotModel",
    "SimulationConfig",
    "SingescapeError",
    "SingularFrame",
    "SvdResult",
    "TrajectorySample",
    "benchmark_model",
    "benchmark_parameters",
    "classify",
    "closed_form_escape",
    "closed_form_jacobian",
    "closed_form_provider",
    "closed_form_thetaL",
    "coefficients",
    "detect_singularities",
    "dh_transform",
    "emit_csv",
    "emit_robot_description",
    "escape_plan",
    "first3_jacobian",
    "first3_provider",
    "forward_kinematics",
    "hessian_of_L",
    "integrate_constant_rate",
    "jacobian_provider",
    "numeric_jacobian",
    "parse_robot_description",
    "partition_columns",
    "pseudoinverse",
    "singular_J11",
    "singular_acceleration",
    "singular_direction",
    "singular_frame",
    "singular_values_first3",
    "singular_velocity",
    "split_KL",
    "svd_decompose",
    "validate_model",
]
