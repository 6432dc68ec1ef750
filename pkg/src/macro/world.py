"""Deterministic quasi-static SE(2) simulator.

The object pose is advanced with the limit-surface mobility map: contact forces
are summed into a wrench about the current center of pressure, mapped to a
twist, and integrated over one timestep. There is no momentum state; the pose
increment of a step depends only on the forces of that step.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Protocol

import numpy as np

from .errors import ConeViolation, ContactLost, InsufficientExcitation, InvalidParameter, MacroError
from .geometry import body_to_world, rotate, se2_exp_step, wrap_angle
from .mechanics import (LimitSurfaceModel, NormalContact, Twist, Wrench, compute_cop, normality_residual,
                        rescale_mobility, transport_twist, wrench_to_twist)
from .modes import CONE_TOL, ContactForceSet, ContactMode

LOG_SCHEMA = "macro-log/1"
INTEGRATORS = ("euler", "midpoint", "exp")


@dataclass(frozen=True)
class ObjectState:
    """Object pose (CoM frame, world) plus its unloaded limit surface.

    ``model.n_total`` is the object's own weight; contacts that press add to it
    at every step.
    """

    pose: tuple[float, float, float]
    model: LimitSurfaceModel
    footprint: tuple[float, float] = (0.1, 0.1)

    def __post_init__(self):
        x, y, th = (float(v) for v in self.pose)
        object.__setattr__(self, "pose", (x, y, wrap_angle(th)))


@dataclass(frozen=True)
class SimConfig:
    dt: float = 1e-3
    integrator: str = "exp"
    noise_std: float = 0.0
    seed: int = 0
    max_steps: int = 60_000
    # constant actuator offset on pressing forces; what the PI loop removes
    force_bias: float = 0.0
    mu_contact: float | None = None

    def __post_init__(self):
        if not self.dt > 0:
            raise InvalidParameter("dt > 0")
        if self.max_steps <= 0:
            raise InvalidParameter("max_steps > 0")
        if self.integrator not in INTEGRATORS:
            raise InvalidParameter(f"integrator in {INTEGRATORS}")
        if self.noise_std < 0:
            raise InvalidParameter("noise_std >= 0")


@dataclass(frozen=True)
class StepRecord:
    t: float
    pose: tuple[float, float, float]
    # (name, fx, fy, normal) per contact, body frame
    forces: tuple[tuple[str, float, float, float], ...]
    wrench: tuple[float, float, float]  # about the CoP
    twist: tuple[float, float, float]  # of the CoP frame
    cop: tuple[float, float]
    n_total: float
    slacks: tuple[float, ...]
    err_pos: float = math.nan
    err_ang: float = math.nan
    tracking: tuple[float, float] | None = None
    phase: int = 0

    @property
    def slack_min(self) -> float:
        return min(self.slacks, default=math.inf)


def _integrate(pose, twist, dt, scheme):
    vx, vy, om = twist
    x, y, th = pose
    if scheme == "exp":
        return se2_exp_step(pose, twist, dt)
    if scheme == "euler":
        wx, wy = rotate((vx, vy), th)
        return (x + dt * wx, y + dt * wy, wrap_angle(th + dt * om))
    # explicit midpoint (RK2); body twist is constant over the step
    wx, wy = rotate((vx, vy), th + 0.5 * dt * om)
    return (x + dt * wx, y + dt * wy, wrap_angle(th + dt * om))


def step(state: ObjectState, forces: ContactForceSet, mode: ContactMode | None, cfg: SimConfig,
         t: float = 0.0) -> tuple[ObjectState, StepRecord]:
    """Advance the object by one timestep under the given contact forces."""
    mu = cfg.mu_contact if cfg.mu_contact is not None else state.model.mu
    presses = []
    slacks = []
    for force in forces:
        if mode is not None:
            placed = mode.contact(force.name).position
            if abs(placed[0] - force.point[0]) > 1e-9 or abs(placed[1] - force.point[1]) > 1e-9:
                raise InvalidParameter("contacts fixed in body frame",
                                       f"contact {force.name} applied at {force.point}, placed at {placed}")
        if force.normal < -CONE_TOL:
            raise ContactLost(force.name, force.normal)
        slack = force.slack(mu)
        if slack < -CONE_TOL:
            raise ConeViolation(force.name, slack)
        slacks.append(slack)
        if force.inward_normal is None and force.press > 0:
            presses.append(NormalContact(force.point, force.press))

    weight = state.model.n_total
    cop = compute_cop(NormalContact((0.0, 0.0), weight), presses)
    model = rescale_mobility(state.model, cop.n_total)
    cx, cy = cop.cop
    fx = fy = tau = 0.0
    for force in forces:
        px, py = force.point[0] - cx, force.point[1] - cy
        fx += force.force[0]
        fy += force.force[1]
        tau += px * force.force[1] - py * force.force[0]
    wrench = Wrench(fx, fy, tau)
    nu = wrench_to_twist(wrench, model)
    nu_com = transport_twist(nu, cop.cop, (0.0, 0.0))
    pose = _integrate(state.pose, (nu_com.vx, nu_com.vy, nu_com.omega), cfg.dt, cfg.integrator)
    record = StepRecord(
        t=t + cfg.dt,
        pose=pose,
        forces=tuple((f.name, f.force[0], f.force[1], f.normal) for f in forces),
        wrench=(fx, fy, tau),
        twist=(nu.vx, nu.vy, nu.omega),
        cop=cop.cop,
        n_total=cop.n_total,
        slacks=tuple(slacks),
    )
    return replace(state, pose=pose), record


def measure_normal(true_force: float, cfg: SimConfig, rng: np.random.Generator) -> float:
    """Force-sensor reading: truth plus zero-mean Gaussian noise from the seeded generator."""
    if cfg.noise_std == 0:
        return float(true_force)
    return float(true_force + rng.normal(0.0, cfg.noise_std))


# --------------------------------------------------------------------------
# episodes


@dataclass
class Command:
    forces: ContactForceSet
    done: bool = False
    tracking: tuple[float, float] | None = None


class Controller(Protocol):
    def __call__(self, state: ObjectState, t: float) -> Command: ...


@dataclass
class TrajectoryLog:
    records: list[StepRecord] = field(default_factory=list)
    status: str = "running"
    meta: dict = field(default_factory=dict)
    error: dict | None = None

    @property
    def final_pose(self):
        if self.records:
            return self.records[-1].pose
        return tuple(self.meta.get("start_pose", (0.0, 0.0, 0.0)))

    def contact_names(self) -> list[str]:
        names: list[str] = []
        for rec in self.records:
            for f in rec.forces:
                if f[0] not in names:
                    names.append(f[0])
        return names

    def csv_header(self) -> list[str]:
        cols = ["t", "x", "y", "theta"]
        for name in self.contact_names():
            cols += [f"{name}_fx", f"{name}_fy", f"{name}_fn"]
        cols += ["Wx", "Wy", "Wtau", "vx", "vy", "omega", "slack_min", "err_pos", "err_ang",
                 "cop_x", "cop_y", "n_total", "phase"]
        return cols

    def to_csv(self) -> str:
        names = self.contact_names()
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.csv_header())
        for rec in self.records:
            by_name = {f[0]: f for f in rec.forces}
            row = [rec.t, *rec.pose]
            for name in names:
                f = by_name.get(name)
                row += list(f[1:]) if f else [0.0, 0.0, 0.0]
            row += [*rec.wrench, *rec.twist, rec.slack_min, rec.err_pos, rec.err_ang, *rec.cop, rec.n_total,
                    rec.phase]
            writer.writerow([repr(float(v)) if not isinstance(v, int) else str(v) for v in row])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "schema": LOG_SCHEMA,
            "status": self.status,
            "error": self.error,
            "meta": self.meta,
            "records": [
                {
                    "t": r.t, "pose": list(r.pose),
                    "forces": [list(f) for f in r.forces],
                    "wrench": list(r.wrench), "twist": list(r.twist), "cop": list(r.cop),
                    "n_total": r.n_total, "slacks": list(r.slacks),
                    "err_pos": _json_float(r.err_pos), "err_ang": _json_float(r.err_ang),
                    "tracking": list(r.tracking) if r.tracking is not None else None,
                    "phase": r.phase,
                }
                for r in self.records
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> "TrajectoryLog":
        if data.get("schema") != LOG_SCHEMA:
            raise InvalidParameter(f"schema == {LOG_SCHEMA}")
        records = [
            StepRecord(
                t=r["t"], pose=tuple(r["pose"]), forces=tuple(tuple(f) for f in r["forces"]),
                wrench=tuple(r["wrench"]), twist=tuple(r["twist"]), cop=tuple(r["cop"]),
                n_total=r["n_total"], slacks=tuple(r["slacks"]),
                err_pos=_from_json_float(r["err_pos"]), err_ang=_from_json_float(r["err_ang"]),
                tracking=tuple(r["tracking"]) if r["tracking"] is not None else None, phase=r["phase"],
            )
            for r in data["records"]
        ]
        return cls(records=records, status=data["status"], meta=data["meta"], error=data["error"])

    @classmethod
    def from_json(cls, text: str) -> "TrajectoryLog":
        return cls.from_dict(json.loads(text))


def _json_float(v: float):
    return None if math.isnan(v) else v


def _from_json_float(v):
    return math.nan if v is None else v


@dataclass(frozen=True)
class PressRegulation:
    """Normal-force regulation hook; ``regulate(name, f_cmd, f_meas, dt)`` -> force to apply."""

    regulate: Callable[[str, float, float, float], float]


def pose_errors(pose, goal) -> tuple[float, float]:
    return math.hypot(pose[0] - goal[0], pose[1] - goal[1]), abs(wrap_angle(pose[2] - goal[2]))


def run_episode(state: ObjectState, mode: ContactMode, controller: Controller, cfg: SimConfig, goal,
                tolerance: tuple[float, float], *, regulation: PressRegulation | None = None,
                log: TrajectoryLog | None = None, t0: float = 0.0, phase: int = 0,
                max_steps: int | None = None) -> tuple[ObjectState, TrajectoryLog]:
    """Controller -> (regulation) -> step loop until the controller is done or steps run out.

    Status is ``converged`` when the controller stops inside ``tolerance`` of
    ``goal``, ``stopped`` when it gives up outside it, ``timeout`` when the
    step budget runs out and ``error`` on a physics or allocation error.
    """
    log = log if log is not None else TrajectoryLog(meta={"start_pose": list(state.pose)})
    rng = np.random.default_rng(cfg.seed)
    applied: dict[str, float] = {}
    t = t0
    steps = max_steps if max_steps is not None else cfg.max_steps
    eps_pos, eps_ang = tolerance
    try:
        for _ in range(steps):
            cmd = controller(state, t)
            if cmd.done:
                err_p, err_a = pose_errors(state.pose, goal)
                log.status = "converged" if err_p <= eps_pos and err_a <= eps_ang else "stopped"
                return state, log
            forces = cmd.forces
            if regulation is not None or cfg.force_bias:
                forces = _regulate_presses(forces, regulation, cfg, rng, applied)
            state, rec = step(state, forces, mode, cfg, t)
            err_p, err_a = pose_errors(state.pose, goal)
            rec = replace(rec, err_pos=err_p, err_ang=err_a, tracking=cmd.tracking, phase=phase)
            log.records.append(rec)
            t = rec.t
        log.status = "timeout"
    except MacroError as exc:
        log.status = "error"
        log.error = exc.to_dict()
    return state, log


def _regulate_presses(forces, regulation, cfg, rng, applied):
    out = []
    for f in forces:
        if f.inward_normal is None and f.press > 0:
            # sensor reads what was applied last step (no algebraic loop)
            measured = measure_normal(applied.get(f.name, f.press), cfg, rng)
            reg = regulation.regulate(f.name, f.press, measured, cfg.dt) if regulation else f.press
            realized = max(reg + cfg.force_bias, 0.0)
            applied[f.name] = realized
            f = replace(f, press=realized)
        out.append(f)
    return ContactForceSet(tuple(out), mu=forces.mu, bias=forces.bias, residual=forces.residual, cop=forces.cop)


# --------------------------------------------------------------------------
# post-processing


@dataclass(frozen=True)
class EmpiricalTrackingPoint:
    distances: np.ndarray  # signed zero-slip coordinate along the axis, from the CoP
    mean: float
    std: float
    position: tuple[float, float]  # body frame, at the mean
    by_sign: dict


def empirical_tracking_point(log: TrajectoryLog, axis_angle: float | None = None,
                             omega_min: float = 1e-6) -> EmpiricalTrackingPoint:
    """Per-step zero-lateral-slip coordinate -v_perp / omega along the mode axis.

    The axis passes through the CoP with body angle ``axis_angle`` (default:
    ``log.meta['frame_angle']``). Steps with |omega| <= omega_min are skipped.
    """
    phi = log.meta.get("frame_angle", 0.0) if axis_angle is None else axis_angle
    ux, uy = math.cos(phi), math.sin(phi)
    dist, signs, cops = [], [], []
    for rec in log.records:
        vx, vy, om = rec.twist
        if abs(om) <= omega_min:
            continue
        v_perp = -uy * vx + ux * vy
        dist.append(-v_perp / om)
        signs.append(1 if om > 0 else -1)
        cops.append(rec.cop)
    if len(dist) < 2:
        raise InsufficientExcitation(f"only {len(dist)} steps with |omega| > {omega_min:g} rad/s")
    arr = np.asarray(dist)
    sign_arr = np.asarray(signs)
    mean = float(arr.mean())
    cop = np.mean(np.asarray(cops), axis=0)
    by_sign = {s: float(arr[sign_arr == s].mean()) for s in (-1, 1) if np.any(sign_arr == s)}
    return EmpiricalTrackingPoint(arr, mean, float(arr.std()),
                                  (float(cop[0] + mean * ux), float(cop[1] + mean * uy)), by_sign)


def max_normality_residual(log: TrajectoryLog, model: LimitSurfaceModel) -> float:
    """Largest normality-rule violation over the logged (wrench, twist) pairs."""
    worst = 0.0
    for rec in log.records:
        m = rescale_mobility(model, rec.n_total)
        worst = max(worst, normality_residual(Wrench(*rec.wrench), Twist(*rec.twist), m))
    return worst


def contact_world_positions(pose, mode: ContactMode) -> list[tuple[float, float]]:
    return [body_to_world(pose, c.position) for c in mode.contacts]
