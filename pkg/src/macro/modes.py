"""Contact-mode library: reduced-order twist maps, tracking points and allocators.

Five contact topologies (the dual rear push appears twice, once per
constrained sub-mode) are registered under string names for scenario files.
Torques are always 2-D cross products of signed body coordinates, so a
contact behind the reference (rear push) and one in front of it (top press)
share one code path.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, NamedTuple, Sequence

from .errors import (BiasTooSmall, BudgetExceeded, ConeViolation, InfeasibleAllocation,
                     InvalidParameter, PusherSeparating)
from .geometry import cross2, rotate
from .mechanics import (CopResult, LimitSurfaceModel, NormalContact, Twist, Wrench, compute_cop)

CONE_TOL = 1e-9
# a pressing contact commanded below this is released (pivot about the other one)
PIVOT_RELEASE = 1e-3


class ModeKind(str, enum.Enum):
    REAR_PUSH_SINGLE = "rear_push_single"
    TOP_PRESS_SINGLE = "top_press_single"
    DUAL_REAR_BICYCLE = "dual_rear_bicycle"
    DUAL_REAR_DIFFDRIVE = "dual_rear_diffdrive"
    ORTHOGONAL_BIMANUAL = "orthogonal_bimanual"
    DUAL_TOP_PRESS = "dual_top_press"


class TrackingKind(str, enum.Enum):
    VFA = "VFA"
    VIRTUAL_AXLE = "VirtualAxle"
    COM = "CoM"
    COP = "CoP"


@dataclass(frozen=True)
class TrackingPoint:
    kind: TrackingKind
    position: tuple[float, float]


@dataclass(frozen=True)
class ContactSpec:
    """Body-frame contact placement.

    ``inward_normal`` is set for edge (pushing) contacts and points into the
    object; top (pressing) contacts leave it ``None``.
    """

    name: str
    position: tuple[float, float]
    inward_normal: tuple[float, float] | None = None

    @property
    def is_edge(self) -> bool:
        return self.inward_normal is not None


@dataclass(frozen=True)
class ContactMode:
    kind: ModeKind
    contacts: tuple[ContactSpec, ...]
    params: Mapping[str, float] = field(default_factory=dict)
    # orientation of the reduced-order model's x-axis in the body frame
    frame_angle: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "params", MappingProxyType(dict(self.params)))

    def contact(self, name: str) -> ContactSpec:
        for spec in self.contacts:
            if spec.name == name:
                return spec
        raise KeyError(name)


@dataclass(frozen=True)
class ContactForce:
    """Force one end effector applies to the object, body frame.

    ``force`` is the in-plane force. For an edge contact its component along
    the inward normal is the normal force; for a top contact ``press`` is the
    downward normal force and the whole of ``force`` is friction.
    """

    name: str
    point: tuple[float, float]
    force: tuple[float, float]
    press: float = 0.0
    inward_normal: tuple[float, float] | None = None

    @property
    def normal(self) -> float:
        if self.inward_normal is None:
            return self.press
        return self.force[0] * self.inward_normal[0] + self.force[1] * self.inward_normal[1]

    @property
    def tangential(self) -> tuple[float, float]:
        if self.inward_normal is None:
            return self.force
        n = self.normal
        return (self.force[0] - n * self.inward_normal[0], self.force[1] - n * self.inward_normal[1])

    def slack(self, mu: float) -> float:
        """mu * normal - |tangential|; negative outside the cone."""
        tx, ty = self.tangential
        return mu * self.normal - math.hypot(tx, ty)


@dataclass(frozen=True)
class ContactForceSet:
    forces: tuple[ContactForce, ...]
    mu: float | None = None
    bias: float = 0.0
    # reconstructed minus desired wrench, when the allocator knows the target
    residual: Wrench | None = None
    cop: CopResult | None = None

    def __iter__(self):
        return iter(self.forces)

    def __len__(self):
        return len(self.forces)

    def __getitem__(self, item):
        if isinstance(item, str):
            for f in self.forces:
                if f.name == item:
                    return f
            raise KeyError(item)
        return self.forces[item]

    def slacks(self, mu: float | None = None) -> list[float]:
        mu = self.mu if mu is None else mu
        if mu is None:
            raise InvalidParameter("mu given", "friction coefficient needed for slack")
        return [f.slack(mu) for f in self.forces]

    def min_slack(self, mu: float | None = None) -> float:
        return min(self.slacks(mu), default=math.inf)


# --------------------------------------------------------------------------
# Case 1: single rear push


def vfa_rear_push(c: float, r0: float, d: float) -> TrackingPoint:
    if d <= 0:
        raise InvalidParameter("d > 0")
    return TrackingPoint(TrackingKind.VFA, ((c * r0) ** 2 / d, 0.0))


class SteeringAngle(NamedTuple):
    delta: float
    clamped: bool


def steering_angle(fx: float, fy: float, mu: float, clamp: bool = False) -> SteeringAngle:
    """Effective steering angle of a rear push; |fy| <= mu fx keeps the pusher sticking."""
    if fx <= 0:
        raise PusherSeparating(f"pusher separating (fx = {fx:.3g} N)")
    if abs(fy) > mu * fx + CONE_TOL:
        if not clamp:
            raise ConeViolation("pusher", mu * fx - abs(fy))
        return SteeringAngle(math.copysign(math.atan(mu), fy), True)
    return SteeringAngle(math.atan2(fy, fx), False)


def curvature_bound(delta: float, d: float, c: float, r0: float) -> float:
    """Signed path curvature (1/m) produced by steering angle delta."""
    if d <= 0:
        raise InvalidParameter("d > 0")
    return -(d / (c * r0) ** 2) * math.tan(delta)


def rear_push_twist(fx: float, fy: float, model: LimitSurfaceModel, d: float, y_c: float = 0.0) -> Twist:
    """Twist for a pusher at [-d, y_c] applying (fx, fy); y_c != 0 is the offset contact."""
    tau = cross2((-d, y_c), (fx, fy))
    return Twist(model.alpha * fx, model.alpha * fy, model.beta * tau)


# --------------------------------------------------------------------------
# Case 2: single top press


def virtual_axle_top(c: float, r0: float, d: float) -> TrackingPoint:
    """Zero-lateral-slip point for a press at +d from the CoP, measured from the CoP.

    Independent of the planar force applied at the contact.
    """
    if d == 0:
        raise InvalidParameter("d != 0", "contact at CoP: virtual axle undefined")
    return TrackingPoint(TrackingKind.VIRTUAL_AXLE, (-(c * r0) ** 2 / d, 0.0))


def top_press_twist(Fx: float, Fy: float, model: LimitSurfaceModel, d: float) -> Twist:
    return Twist(model.alpha * Fx, model.alpha * Fy, model.beta * cross2((d, 0.0), (Fx, Fy)))


# --------------------------------------------------------------------------
# Case 3: dual rear push


def dual_rear_bicycle_twist(fx: float, fy: float, model: LimitSurfaceModel, d_x: float) -> Twist:
    if abs(fy) > model.mu * fx + CONE_TOL:
        raise ConeViolation("rear pair", model.mu * fx - abs(fy))
    return Twist(model.alpha * 2 * fx, model.alpha * 2 * fy, -model.beta * d_x * 2 * fy)


def diff_drive_twist(fxL: float, fxR: float, model: LimitSurfaceModel, w: float) -> Twist:
    if fxL < 0 or fxR < 0:
        raise InvalidParameter("fxL, fxR >= 0", "differential drive pushes only")
    return Twist(model.alpha * (fxL + fxR), 0.0, model.beta * w * (fxR - fxL))


# --------------------------------------------------------------------------
# Case 4: orthogonal bimanual push (bottom at x = -d, left at y = d)


def orthogonal_wrench(f_xB: float, f_yB: float, f_xL: float, f_yL: float, d: float) -> Wrench:
    if f_xB < 0 or f_yL < 0:
        raise InvalidParameter("f_xB >= 0 and f_yL >= 0", "orthogonal pushers are unilateral")
    return Wrench(f_xB + f_xL, f_yB - f_yL, -d * (f_yB + f_xL))


def minimal_orthogonal_bias(W: Wrench, d: float, mu: float | None = None, f_min: float = 0.1) -> float:
    """Smallest bias giving both normals >= f_min and, when mu is given, both cones."""
    t = W.tau / (2 * d)
    need = [0.0, f_min - W.fx - t, f_min + W.fy + t]
    if mu is not None:
        need += [abs(t) / mu - W.fx - t, abs(t) / mu + W.fy + t]
    return max(need)


def orthogonal_allocate(W_des: Wrench, d: float, f_bias: float | None = None, *,
                        mu: float | None = None, f_min: float = 0.1,
                        precompensate: bool = False) -> ContactForceSet:
    """Closed-form split of a desired CoM wrench onto the bottom and left pushers.

    The torque is reconstructed exactly. The bias adds (+f_bias, -f_bias) to the
    net force; that residual is returned unless ``precompensate`` removes it
    from the target first.
    """
    if d <= 0:
        raise InvalidParameter("d > 0")
    if f_bias is None:
        f_bias = minimal_orthogonal_bias(W_des, d, mu, f_min)
    if f_bias < 0:
        raise InvalidParameter("f_bias >= 0")
    target = W_des
    if precompensate:
        target = Wrench(W_des.fx - f_bias, W_des.fy + f_bias, W_des.tau)
    t = target.tau / (2 * d)
    f_yB = f_xL = -t
    f_xB = target.fx + t + f_bias
    f_yL = -target.fy - t + f_bias
    if f_xB < 0 or f_yL < 0:
        if precompensate:
            raise InfeasibleAllocation("pre-compensated allocation needs a negative normal force")
        raise BiasTooSmall(minimal_orthogonal_bias(W_des, d, None, 0.0))
    forces = (
        ContactForce("B", (-d, 0.0), (f_xB, f_yB), inward_normal=(1.0, 0.0)),
        ContactForce("L", (0.0, d), (f_xL, -f_yL), inward_normal=(0.0, -1.0)),
    )
    built = orthogonal_wrench(f_xB, f_yB, f_xL, f_yL, d)
    result = ContactForceSet(forces, mu=mu, bias=f_bias,
                             residual=Wrench(built.fx - W_des.fx, built.fy - W_des.fy, built.tau - W_des.tau))
    if mu is not None:
        for force in forces:
            s = force.slack(mu)
            if s < -CONE_TOL:
                raise ConeViolation(force.name, s)
    return result


@dataclass(frozen=True)
class QuadrantRegion:
    """ICR locations in one quadrant with radius in [r_min, r_max]."""

    quadrant: int
    r_min: float
    r_max: float

    def contains(self, point) -> bool:
        x, y = point
        signs = {1: (1, 1), 2: (-1, 1), 3: (-1, -1), 4: (1, -1)}[self.quadrant]
        if x * signs[0] < 0 or y * signs[1] < 0:
            return False
        r = math.hypot(x, y)
        return self.r_min <= r <= self.r_max and r > 0


@dataclass(frozen=True)
class UnicycleRegions:
    k_base: float
    d_min: float
    d_max: float
    bicycle_point: float
    cw_region: QuadrantRegion
    ccw_region: QuadrantRegion
    contains_bicycle_point: bool


def unicycle_regions(mu: float, model: LimitSurfaceModel, d: float) -> UnicycleRegions:
    """Achievable unicycle (ICR) regions of the orthogonal push, distances from the CoM.

    Pushing moves the object towards +x / -y, so counter-clockwise ICRs land in
    the first quadrant and clockwise ones in the third.
    """
    if not 0 < mu < 1:
        raise InvalidParameter("0 < mu < 1")
    if d <= 0:
        raise InvalidParameter("d > 0")
    k = model.alpha / (model.beta * d)
    d_min = (1 - mu ** 2) / mu ** 2 * k
    d_max = (1 + mu ** 2) / mu ** 2 * k
    bike = k / mu
    return UnicycleRegions(
        k_base=k, d_min=d_min, d_max=d_max, bicycle_point=bike,
        cw_region=QuadrantRegion(3, d_min, d_max),
        ccw_region=QuadrantRegion(1, d_min, d_max),
        contains_bicycle_point=d_min <= bike <= d_max,
    )


# --------------------------------------------------------------------------
# Case 5: dual top press


def dual_top_wrench(forces: ContactForceSet | Sequence, p_L, p_R) -> Wrench:
    """Net wrench about the CoM (body origin) of two in-plane contact forces."""
    f_L = forces[0].force if isinstance(forces[0], ContactForce) else forces[0]
    f_R = forces[1].force if isinstance(forces[1], ContactForce) else forces[1]
    return Wrench(f_L[0] + f_R[0], f_L[1] + f_R[1], cross2(p_L, f_L) + cross2(p_R, f_R))


def _split_tangential(W: Wrench, p_L, p_R):
    dx, dy = p_R[0] - p_L[0], p_R[1] - p_L[1]
    span = math.hypot(dx, dy)
    if span < 1e-12:
        raise InvalidParameter("p_L != p_R")
    half = (W.fx / 2, W.fy / 2)
    mid = ((p_L[0] + p_R[0]) / 2, (p_L[1] + p_R[1]) / 2)
    tau_shared = cross2(mid, (W.fx, W.fy))
    f_c = (W.tau - tau_shared) / span
    # unit perpendicular to p_R - p_L; (p_R - p_L) x perp = span
    px, py = -dy / span, dx / span
    f_L = (half[0] - f_c * px, half[1] - f_c * py)
    f_R = (half[0] + f_c * px, half[1] + f_c * py)
    return f_L, f_R


def dual_top_allocate(W_des: Wrench, p_L, p_R, mu: float, n_obj: float, n_budget: float,
                      margin: float = 0.0, *, com=(0.0, 0.0), cop_target=None,
                      pivot: str | None = None, push_normal=None) -> ContactForceSet:
    """Allocate a desired CoM wrench to two pressing end effectors.

    Default strategy: equal halves of the net force plus the smallest couple
    perpendicular to p_R - p_L that makes up the torque, then the smallest
    normals meeting Coulomb with ``margin`` headroom. ``cop_target`` raises
    the normals to steer the CoP. ``pivot="L"`` (or ``"R"``) presses the pivot
    contact with the full budget and releases the other, which then pushes
    along ``push_normal`` like an edge contact.
    """
    if not 0 <= margin < 1:
        raise InvalidParameter("0 <= margin < 1")
    if n_budget <= 0:
        raise InvalidParameter("n_budget > 0")
    if mu <= 0:
        raise InvalidParameter("mu > 0")
    p_L = (float(p_L[0]) - com[0], float(p_L[1]) - com[1])
    p_R = (float(p_R[0]) - com[0], float(p_R[1]) - com[1])
    weight = NormalContact((0.0, 0.0), n_obj)
    if pivot is not None:
        return _pivot_allocate(W_des, p_L, p_R, mu, weight, n_budget, margin, pivot, push_normal, com)

    f_L, f_R = _split_tangential(W_des, p_L, p_R)
    cap = mu * (1 - margin)
    n_L = math.hypot(*f_L) / cap
    n_R = math.hypot(*f_R) / cap
    if cop_target is not None:
        n_L, n_R = _steer_cop(cop_target, com, p_L, p_R, n_obj, n_L, n_R)
    if n_L + n_R > n_budget * (1 + 1e-12):
        raise BudgetExceeded(n_L + n_R, n_budget)
    forces = (
        ContactForce("L", _shift(p_L, com), f_L, press=n_L),
        ContactForce("R", _shift(p_R, com), f_R, press=n_R),
    )
    cop = compute_cop(NormalContact(com, n_obj),
                      [NormalContact(forces[0].point, n_L), NormalContact(forces[1].point, n_R)])
    built = dual_top_wrench(forces, p_L, p_R)
    return ContactForceSet(forces, mu=mu, cop=cop,
                           residual=Wrench(built.fx - W_des.fx, built.fy - W_des.fy, built.tau - W_des.tau))


def _shift(p, com):
    return (p[0] + com[0], p[1] + com[1])


def _steer_cop(target, com, p_L, p_R, n_obj, min_L, min_R):
    tx, ty = target[0] - com[0], target[1] - com[1]
    # n_L (p_L - t) + n_R (p_R - t) = n_obj * t   (CoM at the origin)
    a11, a12 = p_L[0] - tx, p_R[0] - tx
    a21, a22 = p_L[1] - ty, p_R[1] - ty
    det = a11 * a22 - a12 * a21
    if abs(det) < 1e-15:
        raise InfeasibleAllocation("CoP target collinear with the contacts; steering undefined")
    b1, b2 = n_obj * tx, n_obj * ty
    n_L = (b1 * a22 - a12 * b2) / det
    n_R = (a11 * b2 - a21 * b1) / det
    if n_L < -1e-12 or n_R < -1e-12:
        raise InfeasibleAllocation("CoP target outside the reachable triangle")
    n_L, n_R = max(n_L, 0.0), max(n_R, 0.0)
    scale = 1.0
    if n_L < min_L:
        scale = max(scale, min_L / n_L) if n_L > 0 else math.inf
    if n_R < min_R:
        scale = max(scale, min_R / n_R) if n_R > 0 else math.inf
    if not math.isfinite(scale):
        raise InfeasibleAllocation("CoP target releases a contact that must carry shear")
    return n_L * scale, n_R * scale


def _pivot_allocate(W, p_L, p_R, mu, weight, n_budget, margin, pivot, push_normal, com):
    if pivot not in ("L", "R"):
        raise InvalidParameter("pivot in {L, R}")
    if push_normal is None:
        raise InfeasibleAllocation("a released contact carries no shear; pivoting needs it to push (push_normal)")
    nx, ny = push_normal
    norm = math.hypot(nx, ny)
    nx, ny = nx / norm, ny / norm
    p_piv, p_push = (p_L, p_R) if pivot == "L" else (p_R, p_L)
    lever = cross2((p_push[0] - p_piv[0], p_push[1] - p_piv[1]), (nx, ny))
    if abs(lever) < 1e-12:
        raise InfeasibleAllocation("push line passes through the pivot contact; no torque authority")
    s = (W.tau - cross2(p_piv, (W.fx, W.fy))) / lever
    if s < -CONE_TOL:
        raise InfeasibleAllocation(f"torque {W.tau:.3g} N m needs the released contact to pull ({s:.3g} N)")
    s = max(s, 0.0)
    f_piv = (W.fx - s * nx, W.fy - s * ny)
    n_piv = n_budget
    pivot_force = ContactForce(pivot, _shift(p_piv, com), f_piv, press=n_piv)
    slack = pivot_force.slack(mu * (1 - margin))
    if slack < -CONE_TOL:
        raise ConeViolation(pivot, slack)
    other = "R" if pivot == "L" else "L"
    push_force = ContactForce(other, _shift(p_push, com), (s * nx, s * ny), press=0.0, inward_normal=(nx, ny))
    forces = (pivot_force, push_force) if pivot == "L" else (push_force, pivot_force)
    cop = compute_cop(NormalContact(com, weight.force), [NormalContact(pivot_force.point, n_piv)])
    built = dual_top_wrench(forces, _minus(forces[0].point, com), _minus(forces[1].point, com))
    return ContactForceSet(forces, mu=mu, cop=cop,
                           residual=Wrench(built.fx - W.fx, built.fy - W.fy, built.tau - W.tau))


def _minus(p, com):
    return (p[0] - com[0], p[1] - com[1])


# --------------------------------------------------------------------------
# registry


@dataclass(frozen=True)
class ModeInfo:
    name: str
    rom: str
    tracking: TrackingKind
    cop_steering: bool
    arms: int
    needs_top_access: bool
    capabilities: frozenset[str]
    controllers: tuple[str, ...]


MODE_REGISTRY: Mapping[str, ModeInfo] = MappingProxyType({
    info.name: info for info in (
        ModeInfo("rear_push_single", "Dubins bicycle (rear-wheel steering)", TrackingKind.VFA, False, 1, False,
                 frozenset({"forward"}), ("stanley",)),
        ModeInfo("top_press_single", "Unicycle", TrackingKind.VIRTUAL_AXLE, True, 1, True,
                 frozenset({"forward", "tight_pivot"}), ("lookahead",)),
        ModeInfo("dual_rear_bicycle", "Dubins bicycle", TrackingKind.VFA, False, 2, False,
                 frozenset({"forward"}), ("stanley",)),
        ModeInfo("dual_rear_diffdrive", "Differential drive", TrackingKind.COM, False, 2, False,
                 frozenset({"forward"}), ()),
        ModeInfo("orthogonal_bimanual", "Quasi-holonomic", TrackingKind.COM, False, 2, False,
                 frozenset({"forward", "in_place_rotation"}), ("pose_pd",)),
        ModeInfo("dual_top_press", "Quasi-holonomic", TrackingKind.COP, True, 2, True,
                 frozenset({"forward", "in_place_rotation", "lateral_translation", "tight_pivot"}),
                 ("pose_pd", "pivot")),
    )
})


_FACE_ANGLE = {"rear": 0.0, "left": -math.pi / 2, "front": math.pi, "right": math.pi / 2}


def build_mode(name: str, geometry: Mapping) -> ContactMode:
    """Contact placements for a registered mode from scenario geometry (m)."""
    try:
        kind = ModeKind(name)
    except ValueError:
        raise InvalidParameter("mode name registered", f"unknown mode {name!r}") from None
    g = dict(geometry)
    if kind is ModeKind.REAR_PUSH_SINGLE:
        d, y_c = float(g["d"]), float(g.get("y_c", 0.0))
        if d <= 0:
            raise InvalidParameter("d > 0")
        face = g.get("face", "rear")
        phi = _FACE_ANGLE[face]
        pos = rotate((-d, y_c), phi)
        return ContactMode(kind, (ContactSpec("pusher", pos, rotate((1.0, 0.0), phi)),),
                           {"d": d, "y_c": y_c}, phi)
    if kind is ModeKind.TOP_PRESS_SINGLE:
        pos = tuple(float(v) for v in g["position"])
        return ContactMode(kind, (ContactSpec("press", pos),), {"press": float(g["press"])},
                           math.atan2(pos[1], pos[0]) if any(pos) else 0.0)
    if kind in (ModeKind.DUAL_REAR_BICYCLE, ModeKind.DUAL_REAR_DIFFDRIVE):
        d_x, w = float(g["d_x"]), float(g["w"])
        if d_x <= 0 or w <= 0:
            raise InvalidParameter("d_x > 0 and w > 0")
        return ContactMode(kind, (ContactSpec("L", (-d_x, w), (1.0, 0.0)),
                                  ContactSpec("R", (-d_x, -w), (1.0, 0.0))), {"d_x": d_x, "w": w})
    if kind is ModeKind.ORTHOGONAL_BIMANUAL:
        d = float(g["d"])
        if d <= 0:
            raise InvalidParameter("d > 0")
        return ContactMode(kind, (ContactSpec("B", (-d, 0.0), (1.0, 0.0)),
                                  ContactSpec("L", (0.0, d), (0.0, -1.0))), {"d": d})
    # dual top press
    p_L = tuple(float(v) for v in g["p_L"])
    p_R = tuple(float(v) for v in g["p_R"])
    if p_L == p_R:
        raise InvalidParameter("p_L != p_R")
    nL = g.get("push_normal_L")
    nR = g.get("push_normal_R")
    params = {"n_budget": float(g.get("n_budget", 100.0)), "margin": float(g.get("margin", 0.0))}
    return ContactMode(kind, (ContactSpec("L", p_L, tuple(nL) if nL else None),
                              ContactSpec("R", p_R, tuple(nR) if nR else None)), params)


def tracking_point(mode: ContactMode, model: LimitSurfaceModel, cop=(0.0, 0.0)) -> TrackingPoint:
    """Body-frame tracking point of a mode (Table I column)."""
    k2 = model.mobility_ratio
    if mode.kind in (ModeKind.REAR_PUSH_SINGLE, ModeKind.DUAL_REAR_BICYCLE):
        d = mode.params["d"] if mode.kind is ModeKind.REAR_PUSH_SINGLE else mode.params["d_x"]
        x = vfa_rear_push(model.c, model.r0, d).position[0]
        return TrackingPoint(TrackingKind.VFA, rotate((x, 0.0), mode.frame_angle))
    if mode.kind is ModeKind.TOP_PRESS_SINGLE:
        p = mode.contacts[0].position
        ux, uy = p[0] - cop[0], p[1] - cop[1]
        d = math.hypot(ux, uy)
        if d == 0:
            raise InvalidParameter("d != 0", "contact at CoP: virtual axle undefined")
        L = k2 / d
        return TrackingPoint(TrackingKind.VIRTUAL_AXLE, (cop[0] - L * ux / d, cop[1] - L * uy / d))
    if mode.kind is ModeKind.DUAL_TOP_PRESS:
        return TrackingPoint(TrackingKind.COP, (float(cop[0]), float(cop[1])))
    return TrackingPoint(TrackingKind.COM, (0.0, 0.0))
