"""Ellipsoidal limit surface, normality rule and center-of-pressure algebra.

Everything here is a pure function of immutable values. Wrenches and twists
are body-frame quantities; the limit-surface maps relate a wrench taken about
the center of pressure to the twist of the CoP-attached frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidParameter
from .geometry import cross2


def _finite(*values: float) -> bool:
    return all(math.isfinite(v) for v in values)


@dataclass(frozen=True)
class Wrench:
    """Planar force [fx, fy] (N) and torque tau (N m) about a reference point."""

    fx: float
    fy: float
    tau: float

    def __post_init__(self):
        if not _finite(self.fx, self.fy, self.tau):
            raise InvalidParameter("wrench components finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.fx, self.fy, self.tau])

    @classmethod
    def from_array(cls, arr: Sequence[float]) -> "Wrench":
        return cls(float(arr[0]), float(arr[1]), float(arr[2]))

    def __add__(self, other: "Wrench") -> "Wrench":
        return Wrench(self.fx + other.fx, self.fy + other.fy, self.tau + other.tau)


@dataclass(frozen=True)
class Twist:
    """Body-frame planar velocity [vx, vy] (m/s) and angular rate omega (rad/s)."""

    vx: float
    vy: float
    omega: float

    def __post_init__(self):
        if not _finite(self.vx, self.vy, self.omega):
            raise InvalidParameter("twist components finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.vx, self.vy, self.omega])

    @classmethod
    def from_array(cls, arr: Sequence[float]) -> "Twist":
        return cls(float(arr[0]), float(arr[1]), float(arr[2]))


@dataclass(frozen=True)
class LimitSurfaceModel:
    mu: float
    n_total: float
    c: float
    r0: float
    lambda_scale: float = 0.5
    a: float = field(init=False)
    b: float = field(init=False)
    alpha: float = field(init=False)
    beta: float = field(init=False)

    def __post_init__(self):
        _check_model_inputs(self.mu, self.n_total, self.c, self.r0, self.lambda_scale)
        a = 1.0 / (self.mu * self.n_total) ** 2
        b = 1.0 / (self.c * self.r0 * self.mu * self.n_total) ** 2
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "alpha", 2.0 * self.lambda_scale * a)
        object.__setattr__(self, "beta", 2.0 * self.lambda_scale * b)

    @property
    def shape_matrix(self) -> np.ndarray:
        return np.diag([self.a, self.a, self.b])

    @property
    def mobility_ratio(self) -> float:
        """alpha / beta, which equals (c r0)^2 (m^2)."""
        return (self.c * self.r0) ** 2


def _check_model_inputs(mu, n_total, c, r0, lambda_scale):
    for name, value in (("mu", mu), ("n_total", n_total), ("c", c), ("r0", r0), ("lambda_scale", lambda_scale)):
        if not isinstance(value, (int, float)) or not math.isfinite(value):
            raise InvalidParameter(f"{name} finite")
        if value <= 0:
            raise InvalidParameter(f"{name} > 0")
    if c > 1:
        raise InvalidParameter("c <= 1")


def build_limit_surface(mu: float, n_total: float, c: float, r0: float,
                        lambda_scale: float = 0.5) -> LimitSurfaceModel:
    return LimitSurfaceModel(float(mu), float(n_total), float(c), float(r0), float(lambda_scale))


def ls_value(W: Wrench, model: LimitSurfaceModel) -> float:
    """H(W) = W^T A W; 1 on the slip boundary."""
    return model.a * (W.fx ** 2 + W.fy ** 2) + model.b * W.tau ** 2


def wrench_to_twist(W: Wrench, model: LimitSurfaceModel) -> Twist:
    return Twist(model.alpha * W.fx, model.alpha * W.fy, model.beta * W.tau)


def twist_to_wrench(nu: Twist, model: LimitSurfaceModel) -> Wrench:
    return Wrench(nu.vx / model.alpha, nu.vy / model.alpha, nu.omega / model.beta)


def normality_residual(W: Wrench, nu: Twist, model: LimitSurfaceModel) -> float:
    """Sine of the angle between nu and the limit-surface normal 2 A W.

    Zero when the pair obeys the normality rule; 0 is also returned when
    either vector vanishes.
    """
    g = 2.0 * model.shape_matrix @ W.as_array()
    v = nu.as_array()
    ng, nv = np.linalg.norm(g), np.linalg.norm(v)
    if ng == 0.0 or nv == 0.0:
        return 0.0
    # scale-free: compare unit vectors
    return float(np.linalg.norm(np.cross(v / nv, g / ng)))


def transport_wrench(W: Wrench, from_point, to_point) -> Wrench:
    """Re-express a wrench about another point: tau' = tau - r x F, r = to - from."""
    r = (to_point[0] - from_point[0], to_point[1] - from_point[1])
    return Wrench(W.fx, W.fy, W.tau - cross2(r, (W.fx, W.fy)))


def transport_twist(nu: Twist, from_point, to_point) -> Twist:
    """Velocity of the frame at ``to_point`` given the twist of the frame at ``from_point``."""
    rx, ry = to_point[0] - from_point[0], to_point[1] - from_point[1]
    return Twist(nu.vx - nu.omega * ry, nu.vy + nu.omega * rx, nu.omega)


@dataclass(frozen=True)
class NormalContact:
    """A downward normal force (N) at a body-frame point (m)."""

    position: tuple[float, float]
    force: float

    def __post_init__(self):
        object.__setattr__(self, "position", (float(self.position[0]), float(self.position[1])))
        if not _finite(self.force, *self.position):
            raise InvalidParameter("normal contact finite")
        if self.force < 0:
            raise InvalidParameter("force >= 0")


@dataclass(frozen=True)
class CopResult:
    cop: tuple[float, float]
    n_total: float


def compute_cop(object_weight: NormalContact, contacts: Iterable[NormalContact] = ()) -> CopResult:
    if object_weight.force <= 0:
        raise InvalidParameter("object_weight.force > 0")
    n_total = object_weight.force
    sx = object_weight.position[0] * object_weight.force
    sy = object_weight.position[1] * object_weight.force
    for contact in contacts:
        n_total += contact.force
        sx += contact.position[0] * contact.force
        sy += contact.position[1] * contact.force
    if n_total <= 0:
        raise InvalidParameter("n_total > 0")
    return CopResult((sx / n_total, sy / n_total), n_total)


def rescale_mobility(model: LimitSurfaceModel, new_n_total: float) -> LimitSurfaceModel:
    """Same patch geometry under a new total normal load (a, b, alpha, beta ~ 1/N^2)."""
    if not math.isfinite(new_n_total) or new_n_total <= 0:
        raise InvalidParameter("new_n_total > 0")
    if new_n_total == model.n_total:
        return model
    return replace(model, n_total=float(new_n_total))
