"""Closed-form feedback laws: RWS Stanley, look-ahead unicycle, SE(2) PD, PI force."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

from ..errors import InvalidParameter
from ..geometry import rotate, wrap_angle
from ..mechanics import Wrench


@dataclass(frozen=True)
class StanleyGains:
    k: float
    v_nominal: float
    delta_max: float

    def __post_init__(self):
        if self.k <= 0:
            raise InvalidParameter("k > 0")
        if self.delta_max <= 0:
            raise InvalidParameter("delta_max > 0")

    def check_cone(self, mu: float):
        if self.delta_max > math.atan(mu) + 1e-12:
            raise InvalidParameter("delta_max <= arctan(mu)")


class SteeringCommand(NamedTuple):
    delta: float
    raw: float
    clamped: bool


def stanley_rws(theta_e: float, e_vfa: float, v_x: float, gains: StanleyGains) -> SteeringCommand:
    """delta = -theta_e - atan(k e_vfa / v_x), clamped to +-delta_max.

    theta_e is path heading minus body heading and e_vfa is positive when the
    VFA sits to the right of the path, so delta < 0 (a left turn) corrects both.
    """
    if v_x <= 0:
        raise InvalidParameter("v_x > 0", "Stanley law undefined at rest")
    raw = -theta_e - math.atan(gains.k * e_vfa / v_x)
    delta = min(max(raw, -gains.delta_max), gains.delta_max)
    return SteeringCommand(delta, raw, delta != raw)


@dataclass(frozen=True)
class LookaheadParams:
    f_long: float
    k_lat: float
    lookahead: float
    eps_pos: float = 0.005
    eps_ang: float = math.radians(1.0)
    # the look-ahead shrinks linearly to this value inside taper_distance of the goal
    lookahead_near: float | None = None
    taper_distance: float = 0.2

    def __post_init__(self):
        for name in ("f_long", "k_lat", "lookahead", "eps_pos", "eps_ang", "taper_distance"):
            if getattr(self, name) <= 0:
                raise InvalidParameter(f"{name} > 0")

    def lookahead_at(self, distance: float) -> float:
        if self.lookahead_near is None:
            return self.lookahead
        frac = min(distance / self.taper_distance, 1.0)
        return self.lookahead_near + (self.lookahead - self.lookahead_near) * frac


class LookaheadCommand(NamedTuple):
    f_long: float
    f_lat: float
    done: bool
    lookahead: float
    target: tuple[float, float]


def lookahead_unicycle(tp_pose, target_pose, params: LookaheadParams, f_limit: float,
                       stop_errors: tuple[float, float] | None = None) -> LookaheadCommand:
    """Force command for a unicycle point chasing a target projected past the goal.

    ``tp_pose`` is the world pose of the tracking point (heading along the
    mode axis) and ``target_pose`` the pose it should reach. The virtual target
    rides on the goal line (through the goal along its heading), ``lookahead``
    ahead of the tracking point's projection onto that line, so near the goal it
    sits beyond the desired pose. Output forces are in the tracking frame:
    constant drive plus lateral force proportional to the virtual target's
    lateral offset, the latter clipped so the pair stays inside a friction
    circle of radius ``f_limit``.
    """
    if stop_errors is None:
        stop_errors = (math.hypot(tp_pose[0] - target_pose[0], tp_pose[1] - target_pose[1]),
                       abs(wrap_angle(tp_pose[2] - target_pose[2])))
    dist = math.hypot(tp_pose[0] - target_pose[0], tp_pose[1] - target_pose[1])
    ell = params.lookahead_at(dist)
    ux, uy = math.cos(target_pose[2]), math.sin(target_pose[2])
    along = (tp_pose[0] - target_pose[0]) * ux + (tp_pose[1] - target_pose[1]) * uy
    tx = target_pose[0] + (along + ell) * ux
    ty = target_pose[1] + (along + ell) * uy
    if stop_errors[0] <= params.eps_pos and stop_errors[1] <= params.eps_ang:
        return LookaheadCommand(0.0, 0.0, True, ell, (tx, ty))
    _, y_t = rotate((tx - tp_pose[0], ty - tp_pose[1]), -tp_pose[2])
    f_long = min(params.f_long, f_limit)
    lat_cap = math.sqrt(max(f_limit ** 2 - f_long ** 2, 0.0))
    f_lat = min(max(params.k_lat * y_t, -lat_cap), lat_cap)
    return LookaheadCommand(f_long, f_lat, False, ell, (tx, ty))


@dataclass(frozen=True)
class PoseGains:
    kp_pos: float
    kp_ang: float
    kd_pos: float = 0.0
    kd_ang: float = 0.0
    f_max: float = math.inf
    tau_max: float = math.inf

    def __post_init__(self):
        if self.kp_pos <= 0 or self.kp_ang <= 0:
            raise InvalidParameter("kp_pos > 0 and kp_ang > 0")
        if self.kd_pos < 0 or self.kd_ang < 0:
            raise InvalidParameter("kd_pos >= 0 and kd_ang >= 0")


def pose_pd_wrench(pose, pose_ref, gains: PoseGains, twist=(0.0, 0.0, 0.0)) -> Wrench:
    """Body-frame PD wrench about the point whose world pose is ``pose``.

    ``twist`` is that point's body-frame velocity. Force magnitude and torque
    are saturated at ``f_max`` / ``tau_max``.
    """
    ex, ey = rotate((pose_ref[0] - pose[0], pose_ref[1] - pose[1]), -pose[2])
    eth = wrap_angle(pose_ref[2] - pose[2])
    fx = gains.kp_pos * ex - gains.kd_pos * twist[0]
    fy = gains.kp_pos * ey - gains.kd_pos * twist[1]
    tau = gains.kp_ang * eth - gains.kd_ang * twist[2]
    norm = math.hypot(fx, fy)
    if norm > gains.f_max:
        fx, fy = fx * gains.f_max / norm, fy * gains.f_max / norm
    tau = min(max(tau, -gains.tau_max), gains.tau_max)
    return Wrench(fx, fy, tau)


@dataclass(frozen=True)
class PiState:
    kp: float = 0.5
    ki: float = 2.0
    integral: float = 0.0
    windup_limit: float = 5.0

    def __post_init__(self):
        if self.windup_limit < 0:
            raise InvalidParameter("windup_limit >= 0")
        if abs(self.integral) > self.windup_limit:
            raise InvalidParameter("|integral| <= windup_limit")


def pi_normal_force(f_cmd: float, f_meas: float, pi_state: PiState, dt: float) -> tuple[float, PiState]:
    """f_reg = f_cmd + kp e + ki int(e), e = f_cmd - f_meas; integral clamped, output >= 0."""
    if dt <= 0:
        raise InvalidParameter("dt > 0")
    e = f_cmd - f_meas
    lim = pi_state.windup_limit
    integral = min(max(pi_state.integral + e * dt, -lim), lim)
    out = f_cmd + pi_state.kp * e + pi_state.ki * integral
    return max(out, 0.0), replace(pi_state, integral=integral)


class PressRegulator:
    """Per-contact PI loops, advanced once per simulator step."""

    def __init__(self, template: PiState):
        self.template = template
        self.states: dict[str, PiState] = {}

    def regulate(self, name: str, f_cmd: float, f_meas: float, dt: float) -> float:
        state = self.states.get(name, self.template)
        out, self.states[name] = pi_normal_force(f_cmd, f_meas, state, dt)
        return out
