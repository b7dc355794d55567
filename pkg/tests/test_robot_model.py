import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from singescape import (
    DHJoint,
    JointKind,
    JointState,
    RobotModel,
    RobotDescriptionError,
    benchmark_model,
    benchmark_parameters,
    emit_robot_description,
    parse_robot_description,
    validate_model,
)

VALID_DOC = {
    "name": "benchmark",
    "task_dim": 6,
    "joints": [
        {"kind": "prismatic", "alpha_deg": 0, "a": 0, "d": 0, "theta_offset_deg": 0},
        {"kind": "revolute", "alpha_deg": 0, "a": 1, "d": 0, "theta_offset_deg": 0},
        {"kind": "revolute", "alpha_deg": 90, "a": 0, "d": 0, "theta_offset_deg": 0},
        {"kind": "revolute", "alpha_deg": -90, "a": 0, "d": 1, "theta_offset_deg": 0},
        {"kind": "revolute", "alpha_deg": 90, "a": 0, "d": 0, "theta_offset_deg": 0},
        {"kind": "revolute", "alpha_deg": 0, "a": 0, "d": 0, "theta_offset_deg": 0},
    ],
}


def test_parse_benchmark_description():
    model = parse_robot_description(json.dumps(VALID_DOC))
    assert model.n == 6
    assert model.m == 6
    assert model.joints[0].kind is JointKind.PRISMATIC
    assert all(j.kind is JointKind.REVOLUTE for j in model.joints[1:])
    assert model.joints[1].a == 1.0
    assert model.joints[3].d == 1.0
    assert model.joints[2].alpha == pytest.approx(math.pi / 2)


def test_parse_rejects_empty_joint_list():
    doc = dict(VALID_DOC, joints=[])
    with pytest.raises(RobotDescriptionError, match="empty joint list"):
        parse_robot_description(json.dumps(doc))


def test_parse_rejects_non_finite_field():
    doc = json.loads(json.dumps(VALID_DOC))
    doc["joints"][0]["alpha_deg"] = "NaN"
    with pytest.raises(RobotDescriptionError, match="non-finite field"):
        parse_robot_description(json.dumps(doc))


def test_parse_rejects_bare_nan_literal():
    text = json.dumps(VALID_DOC).replace('"alpha_deg": 90', '"alpha_deg": NaN', 1)
    with pytest.raises(RobotDescriptionError, match="non-finite"):
        parse_robot_description(text)


def test_parse_rejects_unknown_fields():
    doc = dict(VALID_DOC, mass=3.0)
    with pytest.raises(RobotDescriptionError, match="unknown field 'mass'"):
        parse_robot_description(json.dumps(doc))
    doc = json.loads(json.dumps(VALID_DOC))
    doc["joints"][2]["limit"] = 1.0
    with pytest.raises(RobotDescriptionError, match="joint 2: unknown field"):
        parse_robot_description(json.dumps(doc))


def test_parse_rejects_unknown_joint_kind():
    doc = json.loads(json.dumps(VALID_DOC))
    doc["joints"][1]["kind"] = "helical"
    with pytest.raises(RobotDescriptionError, match="unknown joint kind 'helical'"):
        parse_robot_description(json.dumps(doc))


def test_parse_reports_syntax_error_locus():
    with pytest.raises(RobotDescriptionError, match=r"syntax error at line \d+"):
        parse_robot_description('{\n  "name": "x",,\n}')


def test_validate_benchmark_is_clean():
    assert validate_model(benchmark_model(1.0, 1.0)) == []


def test_validate_flags_bad_task_dim():
    model = RobotModel(name="x", joints=benchmark_model(1, 1).joints, m=4)
    assert validate_model(model) == ["m must be 3 or 6"]


def test_validate_flags_non_square_for_escape():
    model = RobotModel(name="x", joints=benchmark_model(1, 1).joints[:5], m=6)
    violations = validate_model(model, check_escape_ready=True)
    assert "escape analysis requires n = m" in violations
    assert validate_model(model) == []


def test_validate_names_joint_and_field():
    joints = benchmark_model(1, 1).joints[:2] + (
        DHJoint(kind=JointKind.REVOLUTE, alpha=math.nan, a=0.0, d=0.0),
    )
    model = RobotModel(name="x", joints=joints, m=3)
    assert validate_model(model) == ["joint 2: non-finite alpha"]


def test_benchmark_model_geometry():
    model = benchmark_model(1.0, 1.0)
    assert model.joints[2].alpha == pytest.approx(math.pi / 2)
    assert benchmark_model(1.0, 2.0).joints[3].d == 2.0
    assert [j.theta_offset for j in model.joints] == [0.0] * 6


@pytest.mark.parametrize("a2,d4", [(0.0, 1.0), (1.0, 0.0), (-1.0, 1.0), (math.inf, 1.0)])
def test_benchmark_model_rejects_bad_lengths(a2, d4):
    with pytest.raises(ValueError):
        benchmark_model(a2, d4)


def test_roundtrip_benchmark():
    model = benchmark_model(1.25, 0.75)
    again = parse_robot_description(emit_robot_description(model))
    assert again == model


@given(
    task_dim=st.sampled_from([3, 6]),
    joints=st.lists(
        st.tuples(
            st.sampled_from(list(JointKind)),
            st.floats(-360, 360),
            st.floats(-10, 10),
            st.floats(-10, 10),
            st.floats(-360, 360),
        ),
        min_size=1,
        max_size=8,
    ),
)
def test_roundtrip_random_models(task_dim, joints):
    # Angles originate in degrees, as the file format stores them.
    model = RobotModel(
        name="rand",
        joints=tuple(
            DHJoint(
                kind=k,
                alpha=math.radians(alpha_deg),
                a=a,
                d=d,
                theta_offset=math.radians(off_deg),
            )
            for k, alpha_deg, a, d, off_deg in joints
        ),
        m=task_dim,
    )
    assert parse_robot_description(emit_robot_description(model)) == model


def test_benchmark_parameters_roundtrip():
    assert benchmark_parameters(benchmark_model(1.5, 0.5)) == (1.5, 0.5)


def test_benchmark_parameters_rejects_other_models():
    model = benchmark_model(1.0, 1.0)
    twisted = RobotModel(
        name=model.name,
        joints=model.joints[:2]
        + (DHJoint(kind=JointKind.REVOLUTE, alpha=0.3, a=0.0, d=0.0),)
        + model.joints[3:],
        m=6,
    )
    assert benchmark_parameters(twisted) is None
    assert benchmark_parameters(RobotModel("m", model.joints[:3], m=3)) is None


def test_joint_state_validation():
    state = JointState(q=(0.0, 1.0), qdot=(0.5, -0.5))
    assert state.q_array().shape == (2,)
    with pytest.raises(ValueError):
        JointState(q=(0.0,), qdot=(0.0, 0.0))
    with pytest.raises(ValueError):
        JointState(q=(math.nan,), qdot=(0.0,))
