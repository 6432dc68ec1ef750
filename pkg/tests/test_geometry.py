import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from macro.geometry import body_to_world, cross2, rotate, se2_exp_step, world_to_body, wrap_angle

angles = st.floats(-50.0, 50.0, allow_nan=False)
coords = st.floats(-10.0, 10.0, allow_nan=False)


@given(angles)
def test_wrap_angle_range(a):
    w = wrap_angle(a)
    assert -math.pi < w <= math.pi
    assert math.isclose(math.cos(w), math.cos(a), abs_tol=1e-9)
    assert math.isclose(math.sin(w), math.sin(a), abs_tol=1e-9)


def test_wrap_angle_pi_maps_to_pi():
    assert wrap_angle(math.pi) == math.pi
    assert wrap_angle(-math.pi) == math.pi


def test_cross2_sign():
    assert cross2((1.0, 0.0), (0.0, 1.0)) == 1.0
    assert cross2((0.0, 1.0), (1.0, 0.0)) == -1.0


@given(coords, coords, coords, coords, angles)
def test_body_world_round_trip(x, y, px, py, th):
    pose = (x, y, th)
    back = world_to_body(pose, body_to_world(pose, (px, py)))
    assert back == pytest.approx((px, py), abs=1e-9)


@given(coords, coords, angles)
def test_rotate_preserves_norm(x, y, th):
    assert math.hypot(*rotate((x, y), th)) == pytest.approx(math.hypot(x, y), abs=1e-9)


def _exp_oracle(pose, twist, dt, n=20000):
    # fine forward integration of the world-frame ODE as an independent check
    x, y, th = pose
    h = dt / n
    for _ in range(n):
        vx, vy = rotate(twist[:2], th + 0.5 * h * twist[2])
        x, y, th = x + h * vx, y + h * vy, th + h * twist[2]
    return x, y, th


@pytest.mark.parametrize("twist", [(0.3, -0.1, 2.0), (1.0, 0.0, 0.0), (0.0, 0.0, -1.5), (0.2, 0.4, 1e-9)])
def test_exponential_step_matches_fine_integration(twist):
    pose = (0.1, -0.2, 0.7)
    got = se2_exp_step(pose, twist, 0.5)
    want = _exp_oracle(pose, twist, 0.5)
    assert got[:2] == pytest.approx(want[:2], abs=1e-9)
    assert wrap_angle(got[2] - want[2]) == pytest.approx(0.0, abs=1e-9)


def test_exponential_pure_rotation_keeps_origin():
    got = se2_exp_step((1.0, 2.0, 0.3), (0.0, 0.0, 4.0), 0.25)
    assert got[:2] == (1.0, 2.0)
    assert got[2] == pytest.approx(wrap_angle(1.3))


@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-5, 5), st.floats(0.01, 1.0))
def test_exponential_composes(vx, vy, om, dt):
    # two half steps of a constant twist equal one full step
    pose = (0.0, 0.0, 0.2)
    half = se2_exp_step(se2_exp_step(pose, (vx, vy, om), dt / 2), (vx, vy, om), dt / 2)
    full = se2_exp_step(pose, (vx, vy, om), dt)
    assert np.allclose(half[:2], full[:2], atol=1e-9)
    assert abs(wrap_angle(half[2] - full[2])) < 1e-9
