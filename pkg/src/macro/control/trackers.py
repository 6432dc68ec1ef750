"""Episode controllers: state-carrying callables ``(ObjectState, t) -> Command``.

Each owns its per-episode memory (projection hint, previous pose) and is
used by exactly one episode.
"""

from __future__ import annotations

import math

from ..errors import InvalidParameter
from ..geometry import body_to_world, cross2, rotate, wrap_angle
from ..mechanics import LimitSurfaceModel, NormalContact, Wrench, compute_cop, rescale_mobility
from ..modes import (ContactForce, ContactForceSet, ContactMode, ModeKind, dual_top_allocate,
                     minimal_orthogonal_bias, orthogonal_allocate, tracking_point)
from ..world import Command, ObjectState, pose_errors
from .laws import LookaheadParams, PoseGains, StanleyGains, lookahead_unicycle, pose_pd_wrench, stanley_rws
from .planning import ReferencePath

_CAR_KINDS = (ModeKind.REAR_PUSH_SINGLE, ModeKind.DUAL_REAR_BICYCLE)


def _idle(names_points) -> ContactForceSet:
    return ContactForceSet(tuple(ContactForce(n, p, (0.0, 0.0)) for n, p in names_points))


class StanleyTracker:
    """Rear-wheel-steering Stanley law anchored at the virtual front axle.

    The pusher applies a fixed normal force ``f_push`` per contact; its
    tangential part follows from the steering angle, so the command stays in
    the friction cone whenever ``delta_max <= atan(mu)``. A curvature
    feedforward ``-atan(kappa_ref x_vfa)`` is added to the feedback term when
    ``feedforward`` is set. The episode ends once the VFA's projection reaches
    arc length ``goal_s`` (default: end of the path).
    """

    def __init__(self, mode: ContactMode, model: LimitSurfaceModel, path: ReferencePath, gains: StanleyGains,
                 f_push: float, *, sign: int = 1, feedforward: bool = True, goal_s: float | None = None,
                 window: int = 500):
        if mode.kind not in _CAR_KINDS:
            raise InvalidParameter("car-like mode", f"Stanley tracking needs a rear-push mode, got {mode.kind.value}")
        if f_push <= 0:
            raise InvalidParameter("f_push > 0")
        if sign not in (1, -1):
            raise InvalidParameter("sign in {+1, -1}")
        gains.check_cone(model.mu)
        self.mode, self.path, self.gains = mode, path, gains
        self.f_push, self.sign, self.feedforward = float(f_push), sign, feedforward
        self.tp = tracking_point(mode, model).position
        self.x_vfa = math.hypot(*self.tp)
        self.goal_s = path.length if goal_s is None else goal_s
        self.window = window
        self._hint = 0
        self.last_delta = 0.0

    def tracking_pose(self, pose):
        px, py = body_to_world(pose, self.tp)
        return px, py, pose[2] + self.mode.frame_angle

    def __call__(self, state: ObjectState, t: float) -> Command:
        px, py, heading = self.tracking_pose(state.pose)
        path = self.path
        i = path.project((px, py), self._hint, self.window)
        self._hint = i
        if path.s[i] >= self.goal_s:
            return Command(_idle((c.name, c.position) for c in self.mode.contacts), done=True, tracking=(px, py))
        th = float(path.theta[i])
        theta_e = wrap_angle(th - heading)
        # positive when the VFA is to the right of the path
        e_vfa = math.sin(th) * (px - path.x[i]) - math.cos(th) * (py - path.y[i])
        cmd = stanley_rws(theta_e, e_vfa, self.gains.v_nominal, self.gains)
        delta = self.sign * cmd.raw
        if self.feedforward:
            kappa = float(path.kappa[i])
            if math.isfinite(kappa):
                delta += -math.atan(kappa * self.x_vfa)
        dmax = self.gains.delta_max
        delta = min(max(delta, -dmax), dmax)
        self.last_delta = delta
        local = (self.f_push, self.f_push * math.tan(delta))
        body = rotate(local, self.mode.frame_angle)
        forces = tuple(ContactForce(c.name, c.position, body, inward_normal=c.inward_normal)
                       for c in self.mode.contacts)
        return Command(ContactForceSet(forces, mu=None), tracking=(px, py))


class LookaheadRegulator:
    """Single top press driving its virtual axle to a goal pose.

    The press is constant, so the CoP and the virtual axle are fixed body
    points; the axle follows unicycle kinematics with heading along the
    CoP-to-contact axis. Stop tolerances are checked on the CoM pose, and only
    once the CoM has crossed the goal along the goal heading, so the object is
    driven over the target rather than halted at the edge of the band.
    """

    def __init__(self, mode: ContactMode, model: LimitSurfaceModel, goal, params: LookaheadParams, *,
                 margin: float = 0.05):
        if mode.kind is not ModeKind.TOP_PRESS_SINGLE:
            raise InvalidParameter("top_press_single mode")
        if not 0 <= margin < 1:
            raise InvalidParameter("0 <= margin < 1")
        self.mode, self.params = mode, params
        contact = mode.contacts[0]
        self.contact = contact
        self.press = float(mode.params["press"])
        cop = compute_cop(NormalContact((0.0, 0.0), model.n_total), [NormalContact(contact.position, self.press)])
        self.cop = cop.cop
        self.tp = tracking_point(mode, model, cop.cop).position
        self.axis = math.atan2(contact.position[1] - cop.cop[1], contact.position[0] - cop.cop[0])
        self.f_limit = model.mu * self.press * (1 - margin)
        self.goal = tuple(float(v) for v in goal)
        gx, gy = body_to_world(self.goal, self.tp)
        self.target = (gx, gy, self.goal[2] + self.axis)

    def tracking_pose(self, pose):
        px, py = body_to_world(pose, self.tp)
        return px, py, pose[2] + self.axis

    def __call__(self, state: ObjectState, t: float) -> Command:
        tp = self.tracking_pose(state.pose)
        gx, gy, gth = self.goal
        along = (state.pose[0] - gx) * math.cos(gth) + (state.pose[1] - gy) * math.sin(gth)
        errors = pose_errors(state.pose, self.goal) if along >= 0 else (math.inf, math.inf)
        cmd = lookahead_unicycle(tp, self.target, self.params, self.f_limit, stop_errors=errors)
        body = rotate((cmd.f_long, cmd.f_lat), self.axis)
        force = ContactForce(self.contact.name, self.contact.position, body, press=self.press)
        return Command(ContactForceSet((force,)), done=cmd.done, tracking=(tp[0], tp[1]))


class PosePDController:
    """SE(2) PD on the CoM pose, allocated by the mode's closed-form allocator.

    Supports the orthogonal bimanual push (internal bias chosen per step,
    never below ``f_bias`` when that is given) and the dual top press. With
    ``ramp > 0`` the reference moves linearly from the first observed pose to
    the goal over ``ramp`` seconds and the stop test is armed only at its end;
    the orthogonal push cannot hold a pose against its own bias, so rotation
    and translation have to finish together.
    """

    def __init__(self, mode: ContactMode, model: LimitSurfaceModel, goal, gains: PoseGains,
                 tolerance: tuple[float, float], *, f_bias: float | None = None, f_min: float = 0.1,
                 dt: float | None = None, ramp: float = 0.0):
        if ramp < 0:
            raise InvalidParameter("ramp >= 0")
        if mode.kind not in (ModeKind.ORTHOGONAL_BIMANUAL, ModeKind.DUAL_TOP_PRESS):
            raise InvalidParameter("quasi-holonomic mode", f"pose PD needs a quasi-holonomic mode, got {mode.kind.value}")
        self.mode, self.model, self.gains = mode, model, gains
        self.goal = tuple(float(v) for v in goal)
        self.tolerance = tolerance
        self.f_bias, self.f_min = f_bias, f_min
        self.dt = dt
        self.ramp = ramp
        self._start = None
        self._prev = None
        self.last_residual: Wrench | None = None

    def reference(self, t: float):
        if self.ramp == 0 or self._start is None:
            return self.goal
        u = min(t / self.ramp, 1.0)
        s, g = self._start, self.goal
        return (s[0] + u * (g[0] - s[0]), s[1] + u * (g[1] - s[1]), s[2] + u * wrap_angle(g[2] - s[2]))

    def _twist(self, pose):
        if self._prev is None or self.dt is None:
            return (0.0, 0.0, 0.0)
        px, py, pth = self._prev
        vx, vy = rotate(((pose[0] - px) / self.dt, (pose[1] - py) / self.dt), -pose[2])
        return (vx, vy, wrap_angle(pose[2] - pth) / self.dt)

    def __call__(self, state: ObjectState, t: float) -> Command:
        if self._start is None:
            self._start = state.pose
            self._t0 = t
        t_rel = t - self._t0
        err_p, err_a = pose_errors(state.pose, self.goal)
        armed = t_rel >= self.ramp
        if armed and err_p <= self.tolerance[0] and err_a <= self.tolerance[1]:
            return Command(_idle((c.name, c.position) for c in self.mode.contacts), done=True)
        W = pose_pd_wrench(state.pose, self.reference(t_rel), self.gains, self._twist(state.pose))
        self._prev = state.pose
        mu = self.model.mu
        if self.mode.kind is ModeKind.ORTHOGONAL_BIMANUAL:
            d = self.mode.params["d"]
            bias = minimal_orthogonal_bias(W, d, mu, self.f_min)
            if self.f_bias is not None:
                bias = max(bias, self.f_bias)
            forces = orthogonal_allocate(W, d, bias, mu=mu, f_min=self.f_min)
        else:
            p = self.mode.params
            forces = dual_top_allocate(W, self.mode.contacts[0].position, self.mode.contacts[1].position, mu,
                                       self.model.n_total, p["n_budget"], p["margin"])
        self.last_residual = forces.residual
        return Command(forces, tracking=(state.pose[0], state.pose[1]))


class PivotController:
    """Dual top press pivoting about one pressed contact.

    The pivot contact takes the whole press budget; the other is released and
    pushes along its inward normal. The commanded twist keeps the pivot point
    stationary (ICR at p_pivot) and its rate is the heading error times
    ``k_ang``, capped by ``omega_max`` and by the pivot's friction circle.
    """

    def __init__(self, mode: ContactMode, model: LimitSurfaceModel, goal_theta: float, *, pivot: str = "L",
                 k_ang: float = 2.0, omega_max: float = 0.5, tol_ang: float = math.radians(0.2)):
        if mode.kind is not ModeKind.DUAL_TOP_PRESS:
            raise InvalidParameter("dual_top_press mode")
        if k_ang <= 0 or omega_max <= 0:
            raise InvalidParameter("k_ang > 0 and omega_max > 0")
        self.mode, self.pivot = mode, pivot
        other = "R" if pivot == "L" else "L"
        self.push_normal = mode.contact(other).inward_normal
        if self.push_normal is None:
            raise InvalidParameter("released contact has an inward normal",
                                   f"contact {other} must push on a side face while pivoting")
        self.p_L, self.p_R = mode.contact("L").position, mode.contact("R").position
        p_piv = mode.contact(pivot).position
        self.n_budget, self.margin = mode.params["n_budget"], mode.params["margin"]
        self.n_obj = model.n_total
        self.mu = model.mu
        self.goal_theta = goal_theta
        self.k_ang, self.omega_max, self.tol_ang = k_ang, omega_max, tol_ang
        self.cop = compute_cop(NormalContact((0.0, 0.0), model.n_total),
                               [NormalContact(p_piv, self.n_budget)]).cop
        loaded = rescale_mobility(model, model.n_total + self.n_budget)
        r = (p_piv[0] - self.cop[0], p_piv[1] - self.cop[1])
        # CoM wrench per unit rate that holds p_pivot still
        F = (r[1] / loaded.alpha, -r[0] / loaded.alpha)
        self._unit = Wrench(F[0], F[1], 1.0 / loaded.beta + cross2(self.cop, F))
        unit = self._allocate(1.0)
        f_piv = unit[pivot].force
        self._omega_cone = self.mu * (1 - self.margin) * self.n_budget / math.hypot(*f_piv)

    def _allocate(self, omega: float) -> ContactForceSet:
        W = Wrench(self._unit.fx * omega, self._unit.fy * omega, self._unit.tau * omega)
        return dual_top_allocate(W, self.p_L, self.p_R, self.mu, self.n_obj, self.n_budget, self.margin,
                                 pivot=self.pivot, push_normal=self.push_normal)

    def __call__(self, state: ObjectState, t: float) -> Command:
        e = wrap_angle(self.goal_theta - state.pose[2])
        if abs(e) <= self.tol_ang:
            return Command(_idle((c.name, c.position) for c in self.mode.contacts), done=True)
        cap = min(self.omega_max, self._omega_cone)
        omega = min(max(self.k_ang * e, -cap), cap)
        cop_w = body_to_world(state.pose, self.cop)
        return Command(self._allocate(omega), tracking=cop_w)
