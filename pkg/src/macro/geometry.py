"""Small SE(2) helpers shared by the simulator and the controllers."""

from __future__ import annotations

import math

import numpy as np


def wrap_angle(theta: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    wrapped = math.remainder(theta, 2.0 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    return wrapped


def rot(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def rotate(vec, theta: float) -> tuple[float, float]:
    c, s = math.cos(theta), math.sin(theta)
    return (c * vec[0] - s * vec[1], s * vec[0] + c * vec[1])


def cross2(a, b) -> float:
    return a[0] * b[1] - a[1] * b[0]


def body_to_world(pose, point) -> tuple[float, float]:
    """Map a body-frame point through pose = (x, y, theta)."""
    px, py = rotate(point, pose[2])
    return (pose[0] + px, pose[1] + py)


def world_to_body(pose, point) -> tuple[float, float]:
    dx, dy = point[0] - pose[0], point[1] - pose[1]
    return rotate((dx, dy), -pose[2])


def se2_exp_step(pose, twist, dt: float) -> tuple[float, float, float]:
    """Advance pose by a body twist held constant over dt (exact)."""
    vx, vy, omega = twist
    phi = omega * dt
    if abs(phi) < 1e-9:
        # series for sin(phi)/phi and (1 - cos(phi))/phi
        s = 1.0 - phi * phi / 6.0
        c = phi / 2.0 - phi ** 3 / 24.0
    else:
        s = math.sin(phi) / phi
        c = (1.0 - math.cos(phi)) / phi
    dx_body = (s * vx - c * vy) * dt
    dy_body = (c * vx + s * vy) * dt
    wx, wy = rotate((dx_body, dy_body), pose[2])
    return (pose[0] + wx, pose[1] + wy, wrap_angle(pose[2] + phi))
