import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from macro.errors import InvalidParameter
from macro.control import (LookaheadParams, PiState, PoseGains, PressRegulator, StanleyGains, lookahead_unicycle,
                           pi_normal_force, pose_pd_wrench, stanley_rws)
from macro.world import SimConfig, measure_normal

GAINS = StanleyGains(k=1.0, v_nominal=0.1, delta_max=math.atan(0.5))


# ---------------------------------------------------------------- Stanley


def test_stanley_examples():
    assert stanley_rws(0.0, 0.0, 0.3, GAINS).delta == 0.0
    cmd = stanley_rws(0.0, 0.1, 0.1, GAINS)
    assert cmd.raw == -math.pi / 4
    assert cmd.clamped and cmd.delta == -GAINS.delta_max
    # doubling v_x halves the arctan argument
    slow, fast = stanley_rws(0.0, 0.1, 0.1, GAINS), stanley_rws(0.0, 0.1, 0.2, GAINS)
    assert math.tan(-fast.raw) == pytest.approx(math.tan(-slow.raw) / 2, rel=1e-15)


def test_stanley_rejects_rest():
    with pytest.raises(InvalidParameter):
        stanley_rws(0.0, 0.1, 0.0, GAINS)


def test_stanley_gains_cone_check():
    with pytest.raises(InvalidParameter):
        StanleyGains(1.0, 0.1, 0.6).check_cone(0.5)
    with pytest.raises(InvalidParameter):
        StanleyGains(0.0, 0.1, 0.3)


@given(st.floats(-10, 10).filter(lambda e: e != 0), st.floats(1e-3, 5), st.floats(1e-3, 50))
def test_stanley_sign_opposes_cross_track(e, v, k):
    cmd = stanley_rws(0.0, e, v, StanleyGains(k, v, 0.4))
    assert math.copysign(1, cmd.raw) == -math.copysign(1, e)
    assert abs(cmd.delta) <= 0.4


@given(st.floats(-1, 1), st.floats(-1, 1), st.floats(1e-3, 5))
def test_stanley_equilibrium_only_on_path(theta_e, e, v):
    raw = stanley_rws(theta_e, e, v, GAINS).raw
    if theta_e == 0 and e == 0:
        assert raw == 0
    elif raw == 0:
        # the two terms cancel exactly only on the curve theta_e = -atan(k e / v)
        assert theta_e == pytest.approx(-math.atan(GAINS.k * e / v), abs=1e-12)


# ---------------------------------------------------------------- look-ahead

PARAMS = LookaheadParams(f_long=2.0, k_lat=20.0, lookahead=0.5, lookahead_near=0.18, taper_distance=0.2)


def test_lookahead_aligned_on_line_is_pure_drive():
    cmd = lookahead_unicycle((-0.5, 0.0, 0.0), (0.0, 0.0, 0.0), PARAMS, 4.0)
    assert cmd.f_lat == 0.0 and cmd.f_long == 2.0 and not cmd.done


@given(st.floats(0.001, 0.5), st.floats(-0.5, 0.5), st.floats(-1.0, -0.05))
def test_lookahead_mirror_symmetry(y, th, x):
    a = lookahead_unicycle((x, y, th), (0.0, 0.0, 0.0), PARAMS, 3.0)
    b = lookahead_unicycle((x, -y, -th), (0.0, 0.0, 0.0), PARAMS, 3.0)
    assert a.f_long == b.f_long
    assert a.f_lat == pytest.approx(-b.f_lat, abs=1e-12)


@given(st.floats(-1, 1), st.floats(-1, 1), st.floats(-math.pi, math.pi), st.floats(0.1, 5))
def test_lookahead_respects_friction_circle(x, y, th, limit):
    cmd = lookahead_unicycle((x, y, th), (0.0, 0.0, 0.3), PARAMS, limit)
    assert math.hypot(cmd.f_long, cmd.f_lat) <= limit * (1 + 1e-12)


@given(st.floats(0, 0.02), st.floats(0, 0.05))
def test_lookahead_stops_only_inside_both_tolerances(ep, ea):
    cmd = lookahead_unicycle((0.3, 0.1, 0.0), (0.0, 0.0, 0.0), PARAMS, 3.0, stop_errors=(ep, ea))
    inside = ep <= PARAMS.eps_pos and ea <= PARAMS.eps_ang
    assert cmd.done == inside
    if cmd.done:
        assert (cmd.f_long, cmd.f_lat) == (0.0, 0.0)
    else:
        assert cmd.f_long > 0


def test_lookahead_taper():
    assert PARAMS.lookahead_at(1.0) == 0.5
    assert PARAMS.lookahead_at(0.0) == 0.18
    assert PARAMS.lookahead_at(0.1) == pytest.approx(0.34)


def test_lookahead_target_beyond_goal_near_the_end():
    cmd = lookahead_unicycle((-0.01, 0.002, 0.0), (0.0, 0.0, 0.0), PARAMS, 3.0)
    assert cmd.target[0] > 0 and cmd.target[1] == 0.0


# ---------------------------------------------------------------- pose PD

PD = PoseGains(kp_pos=20.0, kp_ang=4.0, kd_pos=1.0, kd_ang=0.5, f_max=3.0, tau_max=0.5)


def test_pose_pd_zero_error_zero_wrench():
    assert pose_pd_wrench((0.1, 0.2, 0.3), (0.1, 0.2, 0.3), PD).as_array().tolist() == [0, 0, 0]


def test_pose_pd_heading_error_is_pure_torque():
    W = pose_pd_wrench((0, 0, 0), (0, 0, 0.05), PD)
    assert (W.fx, W.fy) == (0, 0) and W.tau == pytest.approx(0.2)


def test_pose_pd_body_frame_and_saturation():
    W = pose_pd_wrench((0, 0, math.pi / 2), (0.01, 0, 0), PD)
    assert (W.fx, W.fy) == pytest.approx((0.0, -0.2), abs=1e-15)
    big = pose_pd_wrench((0, 0, 0), (5, 5, 3), PD)
    assert math.hypot(big.fx, big.fy) == pytest.approx(3.0) and big.tau == 0.5


def test_pose_pd_damping_opposes_velocity():
    W = pose_pd_wrench((0, 0, 0), (0, 0, 0), PD, twist=(0.1, -0.2, 0.4))
    assert W.as_array() == pytest.approx([-0.1, 0.2, -0.2])


def test_pose_gains_validation():
    with pytest.raises(InvalidParameter):
        PoseGains(kp_pos=0.0, kp_ang=1.0)


# ---------------------------------------------------------------- PI


def test_pi_passthrough_when_tracking():
    st_ = PiState()
    for _ in range(100):
        out, st_ = pi_normal_force(4.0, 4.0, st_, 1e-3)
        assert out == 4.0 and st_.integral == 0.0


def test_pi_zero_gains_passthrough():
    out, _ = pi_normal_force(4.0, 1.0, PiState(kp=0.0, ki=0.0), 1e-3)
    assert out == 4.0


def test_pi_output_floored_at_zero():
    out, _ = pi_normal_force(0.5, 10.0, PiState(kp=1.0), 1e-3)
    assert out == 0.0


@given(st.lists(st.floats(-50, 50), min_size=1, max_size=200), st.floats(0.01, 2))
def test_pi_anti_windup(meas, lim):
    s = PiState(windup_limit=lim)
    for m in meas:
        _, s = pi_normal_force(3.0, m, s, 0.05)
        assert abs(s.integral) <= lim


@pytest.mark.parametrize("bias", [-0.8, 0.5, 1.5])
def test_pi_removes_constant_actuator_bias(bias):
    # plant: realized = regulated + bias; sensor reads the realized force with a little noise
    cfg, rng = SimConfig(noise_std=0.01, seed=5), np.random.default_rng(5)
    reg = PressRegulator(PiState(kp=0.5, ki=2.0, windup_limit=5.0))
    f_cmd, applied, meas = 8.0, 8.0, []
    for _ in range(8000):
        out = reg.regulate("press", f_cmd, measure_normal(applied, cfg, rng), cfg.dt)
        applied = max(out + bias, 0.0)
        meas.append(applied)
    settled = np.mean(meas[-1000:])
    assert abs(settled - f_cmd) <= 0.01 * f_cmd
    # without regulation the bias would stay in full
    assert abs(bias) > 0.01 * f_cmd


def test_pi_state_validation():
    with pytest.raises(InvalidParameter):
        PiState(integral=10.0, windup_limit=1.0)
    with pytest.raises(InvalidParameter):
        pi_normal_force(1.0, 1.0, PiState(), 0.0)
