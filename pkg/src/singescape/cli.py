"""Command-line front end: analyze, sweep, simulate, verify.

Reports go to standard output (JSON for analyze, CSV for sweep/simulate,
a plain summary for verify); diagnostics go to standard error. Exit codes:
0 success, 1 input error, 2 singularity-precondition failure, 3 oracle
tolerance violation.
"""

from __future__ import annotations

import dataclasses
import json
import math
import sys
from dataclasses import dataclass

import click
import numpy as np

from . import benchmark_robot
from .benchmark_robot import BenchmarkParams, EpsilonBranch
from .errors import NotSimpleSingularityError, PartitionError, SingescapeError
from .escape_analysis import coefficients, hessian_of_L, partition_columns
from .kinematics import JacobianProvider, jacobian_provider
from .robot_model import RobotModel, benchmark_parameters, parse_robot_description
from .singularity import DEFAULT_TOL_REL, singular_direction, split_KL, svd_decompose
from .trajectory import SimulationConfig, emit_csv, escape_plan, integrate_constant_rate

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NOT_SINGULAR = 2
EXIT_VERIFY = 3

PAPER_PINNED_JOINT = 2  # free joint q2 in the benchmark partition


@dataclass(frozen=True)
class AnalysisReport:
    """Machine-readable result of one configuration analysis.

    Escape fields are None when the configuration is not a simple
    singularity; `h` is filled only for closed-form benchmark runs on the
    arm's singular locus. A is a scalar for square robots.
    """

    robot: str
    q: tuple[float, ...]
    singular_values: tuple[float, ...]
    rank: int
    tolerances: dict
    provider: str
    simple_singularity: bool
    u_m: tuple[float, ...] | None = None
    classification: str | None = None
    A: float | tuple | None = None
    B: tuple[float, ...] | None = None
    C: float | None = None
    h: float | None = None

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "AnalysisReport":
        doc = json.loads(text)

        def tup(value):
            if isinstance(value, list):
                return tuple(tup(v) for v in value)
            return value

        return cls(**{key: tup(value) for key, value in doc.items()})


def _fail(code: int, message: str) -> int:
    click.echo(f"error: {message}", err=True)
    return code


def _parse_angle(token: str) -> float:
    token = token.strip()
    if token.startswith("deg:"):
        return math.radians(float(token[4:]))
    return float(token)


def _parse_q(text: str, n: int) -> np.ndarray:
    values = [_parse_angle(tok) for tok in text.split(",") if tok.strip() != ""]
    if len(values) != n:
        raise ValueError(f"expected {n} joint values, got {len(values)}")
    q = np.array(values)
    if not np.all(np.isfinite(q)):
        raise ValueError("joint values must be finite")
    return q


def _parse_float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip() != ""]


def _load_model(path: str) -> RobotModel:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_robot_description(fh.read())


def _select_provider(
    model: RobotModel, force_numeric: bool
) -> tuple[JacobianProvider, str, BenchmarkParams | None]:
    """Provider plus its name and the benchmark parameters when the model matches."""
    params = benchmark_parameters(model)
    bench = BenchmarkParams(*params) if params is not None else None
    if bench is not None and not force_numeric:
        return benchmark_robot.closed_form_provider(bench), "closed-form-benchmark", bench
    return jacobian_provider(model), "numeric-dh", bench


def _default_pin(model: RobotModel, bench: BenchmarkParams | None) -> tuple[int, ...] | None:
    if bench is not None and model.n == model.m:
        return (PAPER_PINNED_JOINT - 1,)
    return None


def run_analyze(
    robot_path: str,
    q_text: str,
    tol_rel: float = DEFAULT_TOL_REL,
    pin_qs: str | None = None,
    require_singular: bool = False,
    numeric: bool = False,
) -> int:
    try:
        model = _load_model(robot_path)
    except OSError as exc:
        return _fail(EXIT_INPUT, f"cannot read robot file: {exc}")
    except SingescapeError as exc:
        return _fail(EXIT_INPUT, str(exc))

    try:
        q = _parse_q(q_text, model.n)
    except ValueError as exc:
        return _fail(EXIT_INPUT, str(exc))

    provider, provider_name, bench = _select_provider(model, numeric)
    if pin_qs is not None:
        try:
            pinned = tuple(int(tok) - 1 for tok in pin_qs.split(","))
        except ValueError:
            return _fail(EXIT_INPUT, f"invalid --pin-qs value {pin_qs!r}")
    else:
        pinned = _default_pin(model, bench)

    dec = svd_decompose(provider(q), tol_rel)
    simple = dec.rank == dec.m - 1
    report_fields = dict(
        robot=model.name,
        q=tuple(float(v) for v in q),
        singular_values=tuple(float(s) for s in dec.sigma),
        rank=dec.rank,
        tolerances={"tol_rel": tol_rel},
        provider=provider_name,
        simple_singularity=simple,
    )

    if not simple:
        if require_singular:
            return _fail(
                EXIT_NOT_SINGULAR,
                f"not a simple singularity: rank {dec.rank} with m = {dec.m}",
            )
        click.echo(AnalysisReport(**report_fields).to_json())
        return EXIT_OK

    try:
        u_m = singular_direction(dec)
        K, _ = split_KL(dec)
        part = partition_columns(K, pinned_s=pinned)
        H = hessian_of_L(provider, q, u_m)
        coef = coefficients(H, part, np.zeros(dec.m - 1))
    except (NotSimpleSingularityError, PartitionError) as exc:
        return _fail(EXIT_NOT_SINGULAR, str(exc))

    h = None
    if bench is not None and abs(math.cos(q[2])) <= tol_rel:
        eps = EpsilonBranch.from_epsilon(1 if math.sin(q[2]) > 0 else -1)
        h = benchmark_robot.closed_form_escape(bench, eps).h

    A = coef.A
    report_fields.update(
        tolerances={"tol_rel": tol_rel, "classify_tol": coef.classify_tol},
        u_m=tuple(float(v) for v in u_m),
        classification=coef.classification.value,
        A=float(A[0, 0]) if A.shape == (1, 1) else tuple(map(tuple, A.tolist())),
        B=tuple(float(v) for v in coef.B),
        C=coef.C,
        h=h,
    )
    click.echo(AnalysisReport(**report_fields).to_json())
    return EXIT_OK


def run_sweep(
    robot_path: str | None = None,
    a2_text: str = "0.5,1,2",
    d4_text: str = "0.5,1,2",
    eps_text: str = "-1,1",
    joint: int | None = None,
    joint_range: str | None = None,
    q_text: str | None = None,
    tol_rel: float = DEFAULT_TOL_REL,
) -> int:
    if robot_path is not None:
        return _run_joint_sweep(robot_path, joint, joint_range, q_text, tol_rel)
    try:
        a2_values = _parse_float_list(a2_text)
        d4_values = _parse_float_list(d4_text)
        eps_values = [int(v) for v in _parse_float_list(eps_text)]
        if any(e not in (1, -1) for e in eps_values):
            raise ValueError("epsilon entries must be +1 or -1")
    except ValueError as exc:
        return _fail(EXIT_INPUT, f"invalid range: {exc}")

    click.echo("a2,d4,epsilon,A,h,classification")
    for a2 in a2_values:
        for d4 in d4_values:
            for eps_value in eps_values:
                try:
                    p = BenchmarkParams(a2=a2, d4=d4)
                except ValueError as exc:
                    return _fail(EXIT_INPUT, f"invalid range: {exc}")
                result = benchmark_robot.closed_form_escape(
                    p, EpsilonBranch.from_epsilon(eps_value)
                )
                click.echo(
                    f"{a2:.17g},{d4:.17g},{eps_value},"
                    f"{result.A:.17g},{result.h:.17g},{result.classification.value}"
                )
    return EXIT_OK


def _run_joint_sweep(
    robot_path: str,
    joint: int | None,
    joint_range: str | None,
    q_text: str | None,
    tol_rel: float,
) -> int:
    if joint is None or joint_range is None or q_text is None:
        return _fail(EXIT_INPUT, "joint sweep requires --joint, --joint-range, and --q")
    try:
        model = _load_model(robot_path)
    except OSError as exc:
        return _fail(EXIT_INPUT, f"cannot read robot file: {exc}")
    except SingescapeError as exc:
        return _fail(EXIT_INPUT, str(exc))
    try:
        q0 = _parse_q(q_text, model.n)
        lo_text, hi_text, count_text = joint_range.split(":")
        lo, hi, count = _parse_angle(lo_text), _parse_angle(hi_text), int(count_text)
        if count < 0 or not 1 <= joint <= model.n:
            raise ValueError("joint index or sample count out of range")
    except ValueError as exc:
        return _fail(EXIT_INPUT, f"invalid range: {exc}")

    provider, _, _ = _select_provider(model, force_numeric=False)
    click.echo(f"q{joint},sigma_min,rank")
    for value in np.linspace(lo, hi, count):
        q = q0.copy()
        q[joint - 1] = value
        dec = svd_decompose(provider(q), tol_rel)
        click.echo(f"{value:.17g},{dec.sigma[-1]:.17g},{dec.rank}")
    return EXIT_OK


def run_simulate(
    robot_path: str,
    q0_text: str,
    qdot_text: str | None = None,
    escape: bool = False,
    dt: float = 0.005,
    t_end: float = 0.1,
    tol_rel: float = DEFAULT_TOL_REL,
    qs_magnitude: float = 1.0,
    numeric: bool = False,
) -> int:
    if escape == (qdot_text is not None):
        return _fail(EXIT_INPUT, "provide exactly one of --qdot or --escape")
    try:
        model = _load_model(robot_path)
    except OSError as exc:
        return _fail(EXIT_INPUT, f"cannot read robot file: {exc}")
    except SingescapeError as exc:
        return _fail(EXIT_INPUT, str(exc))
    try:
        q0 = _parse_q(q0_text, model.n)
        cfg = SimulationConfig(
            dt=dt, t_end=t_end, sigma_tol=tol_rel, qs_magnitude=qs_magnitude
        )
    except ValueError as exc:
        return _fail(EXIT_INPUT, str(exc))

    provider, _, bench = _select_provider(model, numeric)
    u_ref = None
    if escape:
        try:
            plan = escape_plan(
                provider, q0, cfg, pinned_s=_default_pin(model, bench)
            )
        except (NotSimpleSingularityError, PartitionError) as exc:
            return _fail(EXIT_NOT_SINGULAR, str(exc))
        if plan.warning:
            click.echo(f"warning: {plan.warning}", err=True)
        qdot = plan.qdot
        u_ref = plan.u_m
    else:
        try:
            qdot = _parse_q(qdot_text, model.n)
        except ValueError as exc:
            return _fail(EXIT_INPUT, str(exc))

    trace = integrate_constant_rate(provider, q0, qdot, cfg, u_ref=u_ref)
    click.echo(emit_csv(trace), nl=False)
    return EXIT_OK


def _parse_grid(grid_text: str | None):
    a2_values = list(np.linspace(0.5, 2.0, 11))
    d4_values = list(np.linspace(0.5, 2.0, 11))
    eps_values = [-1, 1]
    if grid_text:
        for part in grid_text.split(";"):
            key, _, value = part.partition("=")
            key = key.strip()
            if key == "a2":
                a2_values = _parse_float_list(value)
            elif key == "d4":
                d4_values = _parse_float_list(value)
            elif key == "eps":
                eps_values = [int(v) for v in _parse_float_list(value)]
            else:
                raise ValueError(f"unknown grid variable {key!r}")
        if any(e not in (1, -1) for e in eps_values):
            raise ValueError("epsilon entries must be +1 or -1")
    return a2_values, d4_values, eps_values


def run_verify(
    grid_text: str | None = None, theta_points: int = 25, perturb_H: bool = False
) -> int:
    """Cross-check the closed forms against the numeric pipeline; exit 3 on any violation."""
    try:
        a2_values, d4_values, eps_values = _parse_grid(grid_text)
    except ValueError as exc:
        return _fail(EXIT_INPUT, str(exc))

    rng = np.random.default_rng(20240117)
    failures: list[str] = []

    # Analytic singular values against the numeric SVD of the closed-form block.
    sigma_tol, sigma_dev = 1e-9, 0.0
    for a2 in a2_values:
        for d4 in d4_values:
            p = BenchmarkParams(a2=a2, d4=d4)
            for theta3 in np.linspace(0.0, 2.0 * math.pi, theta_points, endpoint=False):
                analytic = np.sort(benchmark_robot.singular_values_first3(p, theta3))[::-1]
                numeric = np.linalg.svd(
                    benchmark_robot.first3_jacobian(p, theta3), compute_uv=False
                )
                dev = float(np.abs(analytic - numeric).max())
                if dev > sigma_dev:
                    sigma_dev = dev
                if dev > sigma_tol:
                    failures.append(
                        f"singular values deviate {dev:.3e} at a2={a2:g} d4={d4:g} theta3={theta3:g}"
                    )

    # Pipeline escape coefficient against the closed form.
    a_tol, a_dev, dg_tol, dg_dev = 1e-6, 0.0, 1e-9, 0.0
    for a2 in a2_values:
        for d4 in d4_values:
            p = BenchmarkParams(a2=a2, d4=d4)
            provider = benchmark_robot.first3_provider(p)
            for eps_value in eps_values:
                eps = EpsilonBranch.from_epsilon(eps_value)
                q0 = np.array([0.0, rng.uniform(-math.pi, math.pi), eps.theta3])
                dec = svd_decompose(provider(q0), DEFAULT_TOL_REL)
                u_m = singular_direction(dec)
                K, _ = split_KL(dec)
                part = partition_columns(K, pinned_s=(1,))
                H = hessian_of_L(provider, q0, u_m)
                if perturb_H:
                    H = H.copy()
                    H[1, 1] += 1e-3
                coef = coefficients(H, part, np.zeros(2))
                a_num = float(coef.A[0, 0])
                a_cf = benchmark_robot.closed_form_escape(p, eps).A
                if abs(a_cf) <= 1e-9:
                    dev = abs(a_num)
                    if dev > dg_dev:
                        dg_dev = dev
                    if dev > dg_tol:
                        failures.append(
                            f"degenerate point has |A|={dev:.3e} at a2={a2:g} d4={d4:g} eps={eps_value:+d}"
                        )
                else:
                    dev = abs(a_num - a_cf) / abs(a_cf)
                    if dev > a_dev:
                        a_dev = dev
                    if dev > a_tol:
                        failures.append(
                            f"escape coefficient deviates {dev:.3e} (relative) at a2={a2:g} d4={d4:g} eps={eps_value:+d}"
                        )

    # Wrist block determinant identity and rank-loss locus.
    wrist_tol, wrist_dev = 1e-12, 0.0
    p = BenchmarkParams(a2=1.0, d4=1.0)
    q5_values = np.concatenate([rng.uniform(-math.pi, math.pi, 200), [0.0, math.pi]])
    for q5 in q5_values:
        q = np.array([0.0, 0.0, 0.0, rng.uniform(-math.pi, math.pi), q5, 0.0])
        J22 = benchmark_robot.closed_form_jacobian(p, q)[3:, 3:]
        dev = abs(float(np.linalg.det(J22)) + math.sin(q5))
        if dev > wrist_dev:
            wrist_dev = dev
        if dev > wrist_tol:
            failures.append(f"wrist determinant deviates {dev:.3e} at q5={q5:g}")

    # Decoupling block must vanish identically.
    block_dev = 0.0
    for _ in range(1000):
        q = rng.uniform(-math.pi, math.pi, 6)
        dev = float(np.abs(benchmark_robot.closed_form_jacobian(p, q)[:3, 3:]).max())
        if dev > block_dev:
            block_dev = dev
    if block_dev > 0.0:
        failures.append(f"upper-right block not zero: {block_dev:.3e}")

    def line(label, dev, tol, ok):
        click.echo(f"{label:<22} max dev {dev:.3e}  tol {tol:.1e}  {'PASS' if ok else 'FAIL'}")

    line("singular values", sigma_dev, sigma_tol, sigma_dev <= sigma_tol)
    line("escape coefficient", a_dev, a_tol, a_dev <= a_tol)
    line("degenerate |A|", dg_dev, dg_tol, dg_dev <= dg_tol)
    line("wrist determinant", wrist_dev, wrist_tol, wrist_dev <= wrist_tol)
    line("decoupled block", block_dev, 0.0, block_dev == 0.0)
    if failures:
        for failure in failures[:10]:
            click.echo(f"error: {failure}", err=True)
        click.echo("verify: FAIL")
        return EXIT_VERIFY
    click.echo("verify: PASS")
    return EXIT_OK


@click.group()
def main():
    """Singularity analysis and escape planning for serial manipulators."""


@main.command(name="analyze")
@click.option("--robot", "robot_path", required=True, help="Robot description JSON file.")
@click.option("--q", "q_text", required=True, help="Comma list of joint values; deg: prefix for degrees.")
@click.option("--tol-rel", default=DEFAULT_TOL_REL, show_default=True, help="Relative rank cutoff.")
@click.option("--pin-qs", default=None, help="1-based joint numbers kept as free rates (comma list).")
@click.option("--require-singular", is_flag=True, help="Fail unless the configuration is a simple singularity.")
@click.option("--numeric", is_flag=True, help="Force the generic DH Jacobian even for the benchmark robot.")
def analyze_command(robot_path, q_text, tol_rel, pin_qs, require_singular, numeric):
    """Analyze one configuration and print a JSON report."""
    sys.exit(run_analyze(robot_path, q_text, tol_rel, pin_qs, require_singular, numeric))


@main.command(name="sweep")
@click.option("--robot", "robot_path", default=None, help="Robot file; switches to a joint-grid sweep.")
@click.option("--a2", "a2_text", default="0.5,1,2", show_default=True)
@click.option("--d4", "d4_text", default="0.5,1,2", show_default=True)
@click.option("--eps", "eps_text", default="-1,1", show_default=True)
@click.option("--joint", type=int, default=None, help="1-based joint to sweep (joint-grid mode).")
@click.option("--joint-range", default=None, help="lo:hi:count (deg: prefix allowed on bounds).")
@click.option("--q", "q_text", default=None, help="Base configuration for the joint sweep.")
@click.option("--tol-rel", default=DEFAULT_TOL_REL, show_default=True)
def sweep_command(robot_path, a2_text, d4_text, eps_text, joint, joint_range, q_text, tol_rel):
    """Sweep benchmark parameters (or one joint) and print CSV."""
    sys.exit(
        run_sweep(robot_path, a2_text, d4_text, eps_text, joint, joint_range, q_text, tol_rel)
    )


@main.command(name="simulate")
@click.option("--robot", "robot_path", required=True)
@click.option("--q0", "q0_text", required=True, help="Start configuration.")
@click.option("--qdot", "qdot_text", default=None, help="Constant joint rates.")
@click.option("--escape", is_flag=True, help="Plan rates that leave the singularity at q0.")
@click.option("--dt", default=0.005, show_default=True)
@click.option("--t-end", default=0.1, show_default=True)
@click.option("--tol-rel", default=DEFAULT_TOL_REL, show_default=True)
@click.option("--qs-magnitude", default=1.0, show_default=True)
@click.option("--numeric", is_flag=True, help="Force the generic DH Jacobian.")
def simulate_command(robot_path, q0_text, qdot_text, escape, dt, t_end, tol_rel, qs_magnitude, numeric):
    """Integrate a constant-rate trajectory and print CSV."""
    sys.exit(
        run_simulate(robot_path, q0_text, qdot_text, escape, dt, t_end, tol_rel, qs_magnitude, numeric)
    )


@main.command(name="verify")
@click.option("--grid", "grid_text", default=None, help="Override grid, e.g. 'a2=1;d4=2;eps=-1,1'.")
@click.option("--theta-points", default=25, show_default=True)
@click.option("--perturb-h", "perturb_H", is_flag=True, help="Inject a derivative fault (self-test).")
def verify_command(grid_text, theta_points, perturb_H):
    """Cross-check the closed-form oracle against the numeric pipeline."""
    sys.exit(run_verify(grid_text, theta_points, perturb_H))


if __name__ == "__main__":
    main()
