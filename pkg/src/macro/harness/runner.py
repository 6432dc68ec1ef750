"""Scenario execution: wire mode + controller + simulator, write artifacts, run sweeps.

Exit-code contract: 0 converged, 2 did not converge (timeout or stopped
outside tolerance), 1 error (invalid scenario, physics or allocation error).
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..control import (LookaheadParams, LookaheadRegulator, PivotController, PoseGains, PosePDController,
                       PressRegulator, StanleyGains, StanleyTracker)
from ..control.laws import PiState
from ..control.planning import plan_car_approach, plan_reference
from ..errors import InsufficientExcitation, MacroError
from ..geometry import body_to_world, rotate, wrap_angle
from ..mechanics import LimitSurfaceModel
from ..modes import ContactForceSet, ContactMode, ModeKind, curvature_bound, tracking_point
from ..world import (Command, ObjectState, PressRegulation, SimConfig, TrajectoryLog, empirical_tracking_point,
                     pose_errors, run_episode)
from .plot import render_plot
from .scenario import PhaseSpec, Scenario, apply_overrides, parse_scenario_dict, phase_mode, resolve_seed

SUMMARY_SCHEMA = "macro-summary/1"
EXIT_CODES = {"converged": 0, "timeout": 2, "stopped": 2, "error": 1}
METRIC_KEYS = ("final_pos_error", "final_ang_error", "time_to_converge", "rms_path_error", "tracking_point_mean",
               "tracking_point_std", "min_cone_slack", "force_residual_x_min", "force_residual_x_max",
               "force_residual_y_min", "force_residual_y_max")
# reference polylines stored in the log for plotting are thinned to this many points
_PLOT_POINTS = 400


class IdleController:
    """Zero force forever; the episode can only time out."""

    def __init__(self, mode: ContactMode):
        self.forces = ContactForceSet(tuple())
        self.mode = mode

    def __call__(self, state, t):
        return Command(self.forces, tracking=(state.pose[0], state.pose[1]))


@dataclass
class PhasePlan:
    controller: object
    mode: ContactMode
    goal: tuple[float, float, float]
    tolerance: tuple[float, float]
    reference: np.ndarray  # (n, 2) world polyline of the tracking point
    # body-frame axis for the empirical tracking point, None when the mode has no such point
    axis_angle: float | None = None


@dataclass
class RunResult:
    scenario: Scenario
    seed: int
    log: TrajectoryLog
    summary: dict
    plans: list[PhasePlan] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return self.summary["exit_code"]


class _ResidualProbe:
    """Wraps a controller and records the allocator's force residual per command."""

    def __init__(self, inner):
        self.inner = inner
        self.rx: list[float] = []
        self.ry: list[float] = []

    def __call__(self, state, t):
        cmd = self.inner(state, t)
        res = cmd.forces.residual
        if res is not None and not cmd.done:
            self.rx.append(res.fx)
            self.ry.append(res.fy)
        return cmd


def _pivot_goal(pose, mode: ContactMode, pivot: str, angle: float):
    px, py = body_to_world(pose, mode.contact(pivot).position)
    cx, cy = rotate((pose[0] - px, pose[1] - py), angle)
    return (px + cx, py + cy, wrap_angle(pose[2] + angle))


def plan_phase(sc: Scenario, index: int, phase: PhaseSpec, model: LimitSurfaceModel, start, cfg: SimConfig,
               last: bool) -> PhasePlan:
    mode = phase_mode(phase)
    spec = phase.controller
    tol = sc.tolerance.pair
    goal = tuple(sc.goal) if last else (tuple(phase.goal) if phase.goal is not None else None)
    if spec.name == "pivot":
        # the pivot fixes its own goal: the start pose rotated about the pivot contact
        goal = _pivot_goal(start, mode, spec.pivot, math.radians(spec.angle_deg))
        ctl = PivotController(mode, model, goal[2], pivot=spec.pivot, k_ang=spec.k_ang, omega_max=spec.omega_max,
                              tol_ang=math.radians(spec.tol_ang_deg))
        pw = body_to_world(start, mode.contact(spec.pivot).position)
        tol = (tol[0], max(tol[1], math.radians(spec.tol_ang_deg)))
        return PhasePlan(ctl, mode, goal, tol, np.array([pw]))
    if goal is None:
        raise MacroError(f"phase {index}: intermediate phase needs a goal")
    if spec.name == "stanley":
        gains_dmax = math.radians(spec.delta_max_deg) if spec.delta_max_deg is not None else 0.95 * math.atan(model.mu)
        d = mode.params["d"] if mode.kind is ModeKind.REAR_PUSH_SINGLE else mode.params["d_x"]
        kappa_max = abs(curvature_bound(gains_dmax, d, model.c, model.r0))
        tp = tracking_point(mode, model).position
        s_pose = (*body_to_world(start, tp), start[2] + mode.frame_angle)
        g_pose = (*body_to_world(goal, tp), goal[2] + mode.frame_angle)
        path, goal_s = plan_car_approach(s_pose, g_pose, spec.kappa_fraction * kappa_max, lead_in=spec.lead_in,
                                         ds=spec.ds, max_length=spec.max_length)
        n_contacts = len(mode.contacts)
        v_nom = spec.v_nominal if spec.v_nominal is not None else model.alpha * spec.f_push * n_contacts
        gains = StanleyGains(spec.k, v_nom, gains_dmax)
        ctl = StanleyTracker(mode, model, path, gains, spec.f_push, sign=spec.sign, feedforward=spec.feedforward,
                             goal_s=goal_s)
        cut = int(np.searchsorted(path.s, goal_s)) + 1
        return PhasePlan(ctl, mode, goal, tol, np.column_stack([path.x[:cut], path.y[:cut]]), mode.frame_angle)
    if spec.name == "lookahead":
        length = sc.object.footprint[0]
        ell = spec.lookahead if spec.lookahead is not None else 1.5 * length
        near = spec.lookahead_near if spec.lookahead_near is not None else 0.3 * length
        params = LookaheadParams(spec.f_long, spec.k_lat, ell, tol[0], tol[1], near, spec.taper_distance)
        ctl = LookaheadRegulator(mode, model, goal, params, margin=spec.margin)
        a = ctl.tracking_pose(start)
        ref = plan_reference(a, ctl.target, mode.kind.value, samples=200, ds=1e-3)
        return PhasePlan(ctl, mode, goal, tol, np.column_stack([ref.x, ref.y]), ctl.axis)
    if spec.name == "pose_pd":
        gains = PoseGains(spec.kp_pos, spec.kp_ang, spec.kd_pos, spec.kd_ang, spec.f_max, spec.tau_max)
        ctl = PosePDController(mode, model, goal, gains, tol, f_bias=spec.f_bias, f_min=spec.f_min, dt=cfg.dt,
                               ramp=spec.ramp)
        ref = plan_reference(start, goal, mode.kind.value, samples=200)
        return PhasePlan(ctl, mode, goal, tol, np.column_stack([ref.x, ref.y]))
    ref = np.array([[start[0], start[1]], [goal[0], goal[1]]])
    return PhasePlan(IdleController(mode), mode, goal, tol, ref)


def _regulation(sc: Scenario) -> PressRegulation | None:
    if sc.regulation is None:
        return None
    r = sc.regulation
    reg = PressRegulator(PiState(kp=r.kp, ki=r.ki, windup_limit=r.windup_limit))
    return PressRegulation(reg.regulate)


def _thin(poly: np.ndarray, n: int = _PLOT_POINTS) -> list[list[float]]:
    if len(poly) > n:
        idx = np.unique(np.linspace(0, len(poly) - 1, n).round().astype(int))
        poly = poly[idx]
    return [[float(x), float(y)] for x, y in poly]


def execute(sc: Scenario, seed: int | None = None) -> RunResult:
    """Run every phase of a validated scenario in sequence on one log."""
    seed = sc.seed if seed is None else seed
    model = sc.limit_surface()
    cfg = SimConfig(dt=sc.sim.dt, integrator=sc.sim.integrator, noise_std=sc.sim.noise_std, seed=seed,
                    max_steps=sc.sim.max_steps, force_bias=sc.sim.force_bias)
    state = ObjectState(tuple(sc.start), model, tuple(sc.object.footprint))
    phases = sc.phase_list()
    trace = TrajectoryLog(meta={
        "scenario": sc.name, "seed": seed, "start_pose": list(state.pose), "goal_pose": list(sc.goal),
        "footprint": list(sc.object.footprint), "phases": [],
    })
    plans: list[PhasePlan] = []
    probes: list[_ResidualProbe] = []
    regulation = _regulation(sc)
    budget = cfg.max_steps
    t = 0.0
    for i, phase in enumerate(phases):
        try:
            plan = plan_phase(sc, i, phase, model, state.pose, cfg, last=i == len(phases) - 1)
        except MacroError as exc:
            trace.status, trace.error = "error", exc.to_dict()
            break
        plans.append(plan)
        probe = _ResidualProbe(plan.controller)
        probes.append(probe)
        trace.meta["phases"].append({
            "mode": plan.mode.kind.value, "controller": phase.controller.name,
            "contacts": [[c.name, list(c.position)] for c in plan.mode.contacts],
            "goal": list(plan.goal), "frame_angle": plan.mode.frame_angle,
            "reference": _thin(plan.reference),
        })
        n_before = len(trace.records)
        state, trace = run_episode(state, plan.mode, probe, cfg, plan.goal, plan.tolerance, regulation=regulation,
                                   log=trace, t0=t, phase=i, max_steps=budget)
        budget -= len(trace.records) - n_before
        t = trace.records[-1].t if trace.records else t
        trace.meta["phases"][-1]["status"] = trace.status
        trace.meta["phases"][-1]["steps"] = len(trace.records) - n_before
        if trace.status != "converged":
            break
        if i < len(phases) - 1 and budget <= 0:
            trace.status = "timeout"
            break
    if phases and plans:
        trace.meta["frame_angle"] = plans[0].mode.frame_angle
    summary = summarize(sc, seed, trace, plans, probes)
    return RunResult(sc, seed, trace, summary, plans)


def _rms_path_error(trace: TrajectoryLog, plans: list[PhasePlan]) -> float | None:
    sq, n = 0.0, 0
    for i, plan in enumerate(plans):
        pts = np.array([r.tracking for r in trace.records if r.phase == i and r.tracking is not None], dtype=float)
        if len(pts) == 0:
            continue
        ref = plan.reference
        for lo in range(0, len(pts), 2048):
            chunk = pts[lo:lo + 2048]
            d2 = ((chunk[:, None, :] - ref[None, :, :]) ** 2).sum(axis=2).min(axis=1)
            sq += float(d2.sum())
            n += len(chunk)
    return math.sqrt(sq / n) if n else None


def _tracking_stats(trace: TrajectoryLog, plans: list[PhasePlan]):
    for i, plan in enumerate(plans):
        if plan.axis_angle is None:
            continue
        sub = TrajectoryLog(records=[r for r in trace.records if r.phase == i])
        try:
            tp = empirical_tracking_point(sub, axis_angle=plan.axis_angle, omega_min=1e-4)
        except InsufficientExcitation:
            return None, None
        return tp.mean, tp.std
    return None, None


def summarize(sc: Scenario, seed: int, trace: TrajectoryLog, plans, probes) -> dict:
    status = trace.status
    out = {
        "schema": SUMMARY_SCHEMA, "scenario": sc.name, "seed": seed, "status": status,
        "exit_code": EXIT_CODES.get(status, 1), "steps": len(trace.records),
        "sim_time": trace.records[-1].t if trace.records else 0.0,
        "phases": [{"mode": p["mode"], "controller": p["controller"], "status": p.get("status"),
                    "steps": p.get("steps", 0)} for p in trace.meta.get("phases", [])],
        "error": trace.error,
    }
    for key in METRIC_KEYS:
        out[key] = None
    if status == "error":
        return out
    final = trace.final_pose
    err_p, err_a = pose_errors(final, sc.goal)
    out["final_pos_error"], out["final_ang_error"] = err_p, err_a
    if status == "converged":
        out["time_to_converge"] = out["sim_time"]
    out["rms_path_error"] = _rms_path_error(trace, plans)
    out["tracking_point_mean"], out["tracking_point_std"] = _tracking_stats(trace, plans)
    if trace.records:
        out["min_cone_slack"] = min(r.slack_min for r in trace.records)
        if not math.isfinite(out["min_cone_slack"]):
            out["min_cone_slack"] = None
    rx = [v for p in probes for v in p.rx]
    ry = [v for p in probes for v in p.ry]
    if rx:
        out["force_residual_x_min"], out["force_residual_x_max"] = min(rx), max(rx)
        out["force_residual_y_min"], out["force_residual_y_max"] = min(ry), max(ry)
    return out


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def write_artifacts(result: RunResult, out_dir) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "log.csv").write_text(result.log.to_csv(), encoding="utf-8")
    (out / "log.json").write_text(result.log.to_json(), encoding="utf-8")
    (out / "summary.json").write_text(_dump(result.summary), encoding="utf-8")
    (out / "trajectory.svg").write_text(render_plot(result.log), encoding="utf-8")
    if result.log.error is not None:
        (out / "error.json").write_text(_dump(result.log.error), encoding="utf-8")


def write_error(out_dir, error: dict) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "error.json").write_text(_dump(error), encoding="utf-8")


def prepare(data: dict, overrides=(), seed: int | None = None, env_seed: str | None = None) -> tuple[Scenario, int]:
    """Apply overrides, validate, and resolve the seed (CLI > env > file)."""
    sc = parse_scenario_dict(apply_overrides(data, overrides) if overrides else data)
    return sc, resolve_seed(sc.seed, env_seed, seed)


def run(data: dict, out_dir, overrides=(), seed: int | None = None, env_seed: str | None = None) -> RunResult:
    sc, seed = prepare(data, overrides, seed, env_seed)
    result = execute(sc, seed)
    write_artifacts(result, out_dir)
    return result


# --------------------------------------------------------------------------
# sweeps


def _value_label(value) -> str:
    text = json.dumps(value)
    return "".join(ch if ch.isalnum() or ch in "-_." else "_" for ch in text)


def _sweep_one(args) -> dict:
    index, data, param, value, overrides, out_dir, seed, env_seed = args
    run_dir = Path(out_dir) / f"{index:03d}_{param}={_value_label(value)}"
    row = {"index": index, "param": param, "value": value}
    try:
        sc, seed_used = prepare(data, [*overrides, f"{param}={json.dumps(value)}"], seed, env_seed)
        result = execute(sc, seed_used)
        write_artifacts(result, run_dir)
        row.update(result.summary)
    except MacroError as exc:
        err = exc.to_dict()
        write_error(run_dir, err)
        row.update({"status": "error", "exit_code": 1, "error": err})
    return row


SWEEP_COLUMNS = ("index", "param", "value", "status", "exit_code", *METRIC_KEYS, "steps", "error_code")


def sweep(data: dict, param: str, values, out_dir, overrides=(), seed: int | None = None,
          env_seed: str | None = None, jobs: int | None = None) -> list[dict]:
    """One independent run per value, in a bounded process pool; rows keep input order."""
    jobs = jobs or min(len(values), os.cpu_count() or 1)
    tasks = [(i, data, param, v, list(overrides), str(out_dir), seed, env_seed) for i, v in enumerate(values)]
    if jobs <= 1 or len(tasks) == 1:
        rows = [_sweep_one(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_one, tasks))
    Path(out_dir).mkdir(parents=True, exist_ok=True)
    (Path(out_dir) / "sweep.csv").write_text(sweep_csv(rows), encoding="utf-8")
    return rows


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return str(v)


def sweep_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        err = row.get("error") or {}
        writer.writerow([_cell(row.get(k)) if k != "error_code" else _cell(err.get("code")) for k in SWEEP_COLUMNS])
    return buf.getvalue()
