import math

import numpy as np
import pytest

from macro.errors import InvalidParameter
from macro.geometry import body_to_world, wrap_angle
from macro.mechanics import build_limit_surface
from macro.modes import build_mode
from macro.control import (LookaheadParams, LookaheadRegulator, PivotController, PoseGains, PosePDController,
                           StanleyGains, StanleyTracker, plan_reference)
from macro.world import ObjectState, SimConfig, run_episode

G = 9.81
CUBE = build_limit_surface(0.5, 0.5 * G, 0.6, 0.06)


def _stanley(face="rear", sign=1):
    # straight 1 m reference for the VFA along the mode's forward axis
    mode = build_mode("rear_push_single", {"d": 0.075, "face": face})
    phi = mode.frame_angle
    path = plan_reference((0.0, 0.0, phi), (math.cos(phi), math.sin(phi), phi), "rear_push_single", 5.0)
    gains = StanleyGains(1.0, CUBE.alpha * 0.5, 0.95 * math.atan(CUBE.mu))
    return mode, StanleyTracker(mode, CUBE, path, gains, 0.5, sign=sign)


def test_stanley_on_path_pushes_straight():
    # the VFA starts ahead of the CoM, so put the object so that the VFA is on the path
    mode, tr = _stanley()
    x_vfa = tr.x_vfa
    cmd = tr(ObjectState((-x_vfa, 0.0, 0.0), CUBE), 0.0)
    f = cmd.forces["pusher"]
    assert f.force == pytest.approx((0.5, 0.0), abs=1e-12)
    assert cmd.tracking == pytest.approx((0.0, 0.0), abs=1e-15)


def test_stanley_left_face_rotates_push():
    mode, tr = _stanley(face="left")
    pose = (0.0, 0.0, 0.0)
    px, py, _ = tr.tracking_pose(pose)
    cmd = tr(ObjectState((-px, -py, 0.0), CUBE), 0.0)
    assert cmd.forces["pusher"].force == pytest.approx((0.0, -0.5), abs=1e-12)


def test_stanley_corrects_offset_and_stays_in_cone():
    mode, tr = _stanley()
    state = ObjectState((0.0, 0.03, 0.0), CUBE)  # 3 cm left of the path
    goal = (1.0 - tr.x_vfa, 0.0, 0.0)  # CoM pose when the VFA reaches the path end
    _, log = run_episode(state, mode, tr, SimConfig(max_steps=20000), goal, (0.015, math.radians(2)))
    assert log.status == "converged"
    assert min(r.slack_min for r in log.records) >= -1e-9
    assert abs(log.records[-1].pose[1]) < 0.005


def test_stanley_first_correction_turns_towards_path():
    mode, tr = _stanley()
    cmd = tr(ObjectState((0.0, 0.03, 0.0), CUBE), 0.0)
    # VFA left of the path: e_vfa < 0, so the RWS law steers with delta > 0 (clockwise, back towards the path)
    assert tr.last_delta > 0
    flipped = _stanley(sign=-1)[1]
    flipped(ObjectState((0.0, 0.03, 0.0), CUBE), 0.0)
    assert flipped.last_delta == pytest.approx(-tr.last_delta)


def test_stanley_rejects_wrong_mode():
    path = plan_reference((0, 0, 0), (1, 0, 0), "rear_push_single", 5.0)
    with pytest.raises(InvalidParameter):
        StanleyTracker(build_mode("orthogonal_bimanual", {"d": 0.1}), CUBE, path, StanleyGains(1, 0.1, 0.4), 0.5)


BOX = build_limit_surface(0.5, 0.3 * G, 0.6, math.sqrt(0.1))
PRESS = build_mode("top_press_single", {"position": [0.2, 0.0], "press": 8.0})
PARAMS = LookaheadParams(2.0, 20.0, 0.5, lookahead_near=0.18)


def test_lookahead_regulator_geometry():
    reg = LookaheadRegulator(PRESS, BOX, (1.2, 0.3, 0.2), PARAMS)
    assert 0.2 - reg.cop[0] == pytest.approx(0.0537, abs=1e-3)
    assert reg.cop[0] - reg.tp[0] == pytest.approx(0.667, abs=0.005)
    assert reg.axis == 0.0
    assert reg.f_limit == pytest.approx(0.5 * 8.0 * 0.95)


def test_lookahead_regulator_does_not_stop_before_crossing():
    goal = (1.0, 0.0, 0.0)
    reg = LookaheadRegulator(PRESS, BOX, goal, PARAMS)
    # 3 mm short of the goal and aligned: inside the band but not yet across the goal line
    cmd = reg(ObjectState((0.997, 0.0, 0.0), BOX), 0.0)
    assert not cmd.done
    cmd = reg(ObjectState((1.001, 0.0, 0.0), BOX), 0.0)
    assert cmd.done


def test_lookahead_regulator_commands_stay_in_circle():
    reg = LookaheadRegulator(PRESS, BOX, (1.2, 0.3, 0.2), PARAMS)
    rng = np.random.default_rng(1)
    for _ in range(200):
        pose = (rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-math.pi, math.pi))
        f = reg(ObjectState(pose, BOX), 0.0).forces["press"]
        assert f.slack(BOX.mu) >= 0.05 * BOX.mu * 8.0 - 1e-12


def test_pose_pd_dual_top_reaches_goal_exactly_allocated():
    model = build_limit_surface(0.5, 0.5 * G, 0.6, 0.08)
    mode = build_mode("dual_top_press", {"p_L": [-0.08, 0.0], "p_R": [0.08, 0.0], "n_budget": 80, "margin": 0.1})
    goal = (0.1, -0.05, 0.3)
    ctl = PosePDController(mode, model, goal, PoseGains(20.0, 5.0, f_max=3.0, tau_max=0.3), (0.005, math.radians(1)),
                           dt=1e-3)
    _, log = run_episode(ObjectState((0, 0, 0), model), mode, ctl, SimConfig(max_steps=20000), goal,
                         (0.005, math.radians(1)))
    assert log.status == "converged"
    assert max(abs(v) for v in ctl.last_residual.as_array()) <= 1e-12


def test_pose_pd_orthogonal_residual_is_bias():
    model = build_limit_surface(0.5, G, 0.6, 0.12)
    mode = build_mode("orthogonal_bimanual", {"d": 0.15})
    goal = (0.4, 0.1, math.pi / 2)
    ctl = PosePDController(mode, model, goal, PoseGains(40.0, 4.0, f_max=3.0, tau_max=0.5), (0.005, math.radians(1)),
                           f_bias=2.0, f_min=0.02, ramp=10.0)
    for k in range(50):
        cmd = ctl(ObjectState((0.0, 0.0, 0.0), model), k * 1e-3)
        assert cmd.forces.bias >= 2.0
        assert ctl.last_residual.fx == pytest.approx(cmd.forces.bias, rel=1e-12)
        assert ctl.last_residual.fy == pytest.approx(-cmd.forces.bias, rel=1e-12)


def test_pose_pd_ramp_reference():
    model = build_limit_surface(0.5, G, 0.6, 0.12)
    mode = build_mode("orthogonal_bimanual", {"d": 0.15})
    ctl = PosePDController(mode, model, (1.0, 0.0, 1.0), PoseGains(1.0, 1.0), (0.005, 0.01), ramp=2.0)
    ctl(ObjectState((0, 0, 0), model), 0.0)
    assert ctl.reference(1.0) == pytest.approx((0.5, 0.0, 0.5))
    assert ctl.reference(5.0) == pytest.approx((1.0, 0.0, 1.0))


def test_pose_pd_rejects_car_mode():
    with pytest.raises(InvalidParameter):
        PosePDController(build_mode("rear_push_single", {"d": 0.1}), CUBE, (0, 0, 0), PoseGains(1, 1), (0.01, 0.01))


def test_pivot_keeps_pivot_contact_fixed():
    model = build_limit_surface(0.5, 0.5 * G, 0.6, 0.08)
    mode = build_mode("dual_top_press", {"p_L": [-0.08, 0.0], "p_R": [0.1, -0.1], "push_normal_R": [0.0, 1.0],
                                         "n_budget": 80.0, "margin": 0.1})
    ctl = PivotController(mode, model, math.pi / 2, pivot="L")
    state, log = run_episode(ObjectState((0, 0, 0), model), mode, ctl, SimConfig(max_steps=20000),
                             (-0.08, 0.08, math.pi / 2), (0.005, math.radians(1)))
    assert log.status == "converged"
    assert abs(wrap_angle(state.pose[2] - math.pi / 2)) <= math.radians(0.2)
    p0 = body_to_world((0, 0, 0), (-0.08, 0.0))
    drift = max(math.dist(body_to_world(r.pose, (-0.08, 0.0)), p0) for r in log.records)
    assert drift < 1e-9
    weight = model.n_total
    for r in log.records:
        # no vertical load on the far contact: the CoP load is weight plus the pivot press alone
        assert r.n_total - weight - 80.0 == pytest.approx(0.0, abs=1e-9)
        assert math.dist(r.cop, (-0.08, 0.0)) < 0.01


def test_pivot_needs_push_normal():
    model = build_limit_surface(0.5, 0.5 * G, 0.6, 0.08)
    mode = build_mode("dual_top_press", {"p_L": [-0.08, 0.0], "p_R": [0.1, -0.1]})
    with pytest.raises(InvalidParameter):
        PivotController(mode, model, 1.0)
