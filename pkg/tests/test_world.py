import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from macro.errors import ConeViolation, ContactLost, InsufficientExcitation, InvalidParameter
from macro.geometry import body_to_world, se2_exp_step, wrap_angle
from macro.mechanics import NormalContact, compute_cop, rescale_mobility
from macro.modes import ContactForce, ContactForceSet, build_mode, virtual_axle_top
from macro.world import (Command, ObjectState, SimConfig, TrajectoryLog, contact_world_positions,
                         empirical_tracking_point, max_normality_residual, measure_normal, run_episode, step)


def _couple(tau, press):
    # equal presses at +-0.1 m keep the CoP on the CoM; the tangential pair is a pure couple
    f = tau / 0.2
    return ContactForceSet((ContactForce("L", (0.1, 0.0), (0.0, f), press=press),
                            ContactForce("R", (-0.1, 0.0), (0.0, -f), press=press)))


class Constant:
    def __init__(self, forces, steps=None):
        self.forces, self.steps, self.n = forces, steps, 0

    def __call__(self, state, t):
        self.n += 1
        done = self.steps is not None and self.n > self.steps
        return Command(self.forces, done=done)


class Wobble:
    """Top press at +0.2 m whose lateral force flips sign every ``period`` steps."""

    def __init__(self, press=8.0, period=150):
        self.press, self.period, self.n = press, period, 0

    def __call__(self, state, t):
        s = 1.0 if (self.n // self.period) % 2 == 0 else -1.0
        self.n += 1
        f = ContactForce("press", (0.2, 0.0), (1.0, 0.8 * s), press=self.press)
        return Command(ContactForceSet((f,)))


def test_zero_forces_leave_pose_unchanged(model):
    s0 = ObjectState((0.3, -0.2, 1.0), model)
    s1, rec = step(s0, ContactForceSet(()), None, SimConfig())
    assert s1.pose == s0.pose
    assert rec.twist == (0.0, 0.0, 0.0)


def test_pure_torque_rotates_about_cop(model):
    press, tau, n, cfg = 2.0, 0.05, 500, SimConfig(dt=1e-3, integrator="midpoint")
    state = ObjectState((0.1, 0.2, 0.3), model)
    for _ in range(n):
        state, rec = step(state, _couple(tau, press), None, cfg)
    beta = rescale_mobility(model, model.n_total + 2 * press).beta
    assert wrap_angle(state.pose[2] - 0.3) == pytest.approx(beta * tau * n * cfg.dt, rel=1e-12)
    assert state.pose[:2] == pytest.approx((0.1, 0.2), abs=1e-15)


def test_constant_force_moves_in_straight_line(model):
    cfg = SimConfig(dt=1e-3)
    f = ContactForceSet((ContactForce("c", (0.0, 0.0), (0.3, 0.4), press=1.0),))
    state = ObjectState((0.0, 0.0, 0.5), model)
    n = 400
    for _ in range(n):
        state, _ = step(state, f, None, cfg)
    alpha = rescale_mobility(model, model.n_total + 1.0).alpha
    assert math.hypot(*state.pose[:2]) == pytest.approx(alpha * 0.5 * n * cfg.dt, rel=1e-12)
    direction = math.atan2(state.pose[1], state.pose[0])
    assert direction == pytest.approx(0.5 + math.atan2(0.4, 0.3), rel=1e-12)
    assert state.pose[2] == 0.5


def test_cone_violation_is_an_error(model):
    bad = ContactForceSet((ContactForce("c", (0.0, 0.0), (1.0, 0.0), press=1.0),))
    with pytest.raises(ConeViolation) as exc:
        step(ObjectState((0, 0, 0), model), bad, None, SimConfig())
    assert exc.value.contact == "c"


def test_pulling_edge_contact_is_contact_lost(model):
    pull = ContactForceSet((ContactForce("B", (-0.1, 0.0), (-1.0, 0.0), inward_normal=(1.0, 0.0)),))
    with pytest.raises(ContactLost):
        step(ObjectState((0, 0, 0), model), pull, None, SimConfig())


def test_contact_must_match_mode_placement(model):
    mode = build_mode("rear_push_single", {"d": 0.1})
    wrong = ContactForceSet((ContactForce("pusher", (-0.2, 0.0), (1.0, 0.0), inward_normal=(1.0, 0.0)),))
    with pytest.raises(InvalidParameter):
        step(ObjectState((0, 0, 0), model), wrong, mode, SimConfig())


def test_episode_timeout_when_idle(model):
    cfg = SimConfig(max_steps=50)
    state, log = run_episode(ObjectState((0, 0, 0), model), None, Constant(ContactForceSet(())), cfg,
                             (1, 0, 0), (0.005, 0.01))
    assert log.status == "timeout"
    assert len(log.records) == 50
    assert all(r.pose == (0.0, 0.0, 0.0) for r in log.records)


def test_episode_records_physics_error(model):
    bad = ContactForceSet((ContactForce("c", (0.0, 0.0), (1.0, 0.0), press=1.0),))
    _, log = run_episode(ObjectState((0, 0, 0), model), None, Constant(bad), SimConfig(max_steps=5), (1, 0, 0),
                         (0.005, 0.01))
    assert log.status == "error"
    assert log.error["code"] == "slip_boundary_exceeded"


def test_episode_stopped_outside_tolerance(model):
    _, log = run_episode(ObjectState((0, 0, 0), model), None, Constant(ContactForceSet(()), steps=3),
                         SimConfig(), (1, 0, 0), (0.005, 0.01))
    assert log.status == "stopped"


def test_time_is_monotone_and_pose_angles_wrapped(v_b_model):
    _, log = run_episode(ObjectState((0, 0, 3.1), v_b_model), None, Wobble(), SimConfig(max_steps=600),
                         (5, 5, 0), (0.005, 0.01))
    ts = [r.t for r in log.records]
    assert all(b > a for a, b in zip(ts, ts[1:]))
    assert all(-math.pi < r.pose[2] <= math.pi for r in log.records)


def test_normality_holds_on_every_logged_step(v_b_model):
    _, log = run_episode(ObjectState((0, 0, 0), v_b_model), None, Wobble(), SimConfig(max_steps=1500),
                         (5, 5, 0), (0.005, 0.01))
    assert max_normality_residual(log, v_b_model) <= 1e-9


def _integrate_constant(model, forces, dt, total, scheme):
    state = ObjectState((0.0, 0.0, 0.0), model)
    cfg = SimConfig(dt=dt, integrator=scheme)
    for _ in range(int(round(total / dt))):
        state, rec = step(state, forces, None, cfg)
    return state.pose, rec.twist


@pytest.mark.parametrize("scheme, min_ratio", [("midpoint", 3.5), ("euler", 1.8)])
def test_integrator_order(model, scheme, min_ratio):
    forces = ContactForceSet((ContactForce("c", (0.05, 0.0), (0.5, 0.2), press=2.0),))
    total = 1.0
    errs = []
    for dt in (0.02, 0.01):
        pose, twist = _integrate_constant(model, forces, dt, total, scheme)
        exact, _ = _integrate_constant(model, forces, total, total, "exp")
        errs.append(math.hypot(pose[0] - exact[0], pose[1] - exact[1]))
    assert errs[0] / errs[1] >= min_ratio


def test_exp_integrator_is_exact_for_constant_twist(model):
    forces = ContactForceSet((ContactForce("c", (0.05, 0.0), (0.5, 0.2), press=2.0),))
    fine, _ = _integrate_constant(model, forces, 1e-3, 1.0, "exp")
    coarse, _ = _integrate_constant(model, forces, 1.0, 1.0, "exp")
    assert fine[:2] == pytest.approx(coarse[:2], abs=1e-12)


def test_quasi_static_step_has_no_memory(v_b_model):
    # the same step from the same pose gives the same result, whatever happened before
    f = ContactForceSet((ContactForce("press", (0.2, 0.0), (1.0, -0.5), press=8.0),))
    warm = ObjectState((0, 0, 0), v_b_model)
    for _ in range(100):
        warm, _ = step(warm, Wobble()(warm, 0).forces, None, SimConfig())
    cold = ObjectState(warm.pose, v_b_model)
    assert step(warm, f, None, SimConfig())[0].pose == step(cold, f, None, SimConfig())[0].pose


def test_identical_seeds_give_identical_logs(v_b_model):
    cfg = SimConfig(max_steps=800, noise_std=0.05, seed=11)
    runs = []
    for _ in range(2):
        _, log = run_episode(ObjectState((0, 0, 0), v_b_model), None, Wobble(), cfg, (5, 5, 0), (0.005, 0.01),
                             regulation=None)
        runs.append((log.to_json(), log.to_csv()))
    assert runs[0] == runs[1]


def test_measure_normal_passthrough_and_statistics():
    rng = np.random.default_rng(0)
    assert measure_normal(3.25, SimConfig(), rng) == 3.25
    cfg = SimConfig(noise_std=0.2)
    n = 100_000
    draws = np.array([measure_normal(5.0, cfg, rng) for _ in range(n)])
    assert abs(draws.mean() - 5.0) <= 3 * 0.2 / math.sqrt(n)
    a = [measure_normal(1.0, cfg, np.random.default_rng(4)) for _ in range(3)]
    b = [measure_normal(1.0, cfg, np.random.default_rng(4)) for _ in range(3)]
    assert a == b


def test_empirical_tracking_point_matches_virtual_axle(v_b_model):
    _, log = run_episode(ObjectState((0, 0, 0), v_b_model), None, Wobble(), SimConfig(max_steps=1200),
                         (5, 5, 0), (0.005, 0.01))
    tp = empirical_tracking_point(log, axis_angle=0.0)
    cop = compute_cop(NormalContact((0, 0), v_b_model.n_total), [NormalContact((0.2, 0.0), 8.0)]).cop
    want = virtual_axle_top(v_b_model.c, v_b_model.r0, 0.2 - cop[0]).position[0]
    assert tp.mean == pytest.approx(want, abs=1e-6)
    assert abs(tp.mean) == pytest.approx(0.667, abs=0.005)
    # both rotation directions give the same point
    assert set(tp.by_sign) == {-1, 1}
    assert tp.by_sign[1] == pytest.approx(tp.by_sign[-1], abs=1e-9)


def test_empirical_tracking_point_needs_rotation(model):
    f = ContactForceSet((ContactForce("c", (0.0, 0.0), (0.3, 0.0), press=1.0),))
    _, log = run_episode(ObjectState((0, 0, 0), model), None, Constant(f), SimConfig(max_steps=100), (5, 0, 0),
                         (0.005, 0.01))
    with pytest.raises(InsufficientExcitation):
        empirical_tracking_point(log)


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-math.pi, math.pi))
def test_rigid_transport(x, y, th):
    mode = build_mode("dual_top_press", {"p_L": [-0.08, 0.01], "p_R": [0.1, -0.1]})
    got = contact_world_positions((x, y, th), mode)
    for (gx, gy), c in zip(got, mode.contacts):
        dx, dy = gx - x, gy - y
        assert math.hypot(dx, dy) == pytest.approx(math.hypot(*c.position), abs=1e-12)
        assert (gx, gy) == body_to_world((x, y, th), c.position)


def test_log_json_round_trip(v_b_model):
    _, log = run_episode(ObjectState((0, 0, 0), v_b_model), None, Wobble(), SimConfig(max_steps=20), (5, 5, 0),
                         (0.005, 0.01))
    again = TrajectoryLog.from_json(log.to_json())
    assert again.to_json() == log.to_json()
    assert log.to_csv().splitlines()[0].startswith("t,x,y,theta,press_fx,press_fy,press_fn,Wx,Wy,Wtau")


def test_sim_config_validation():
    for kwargs in ({"dt": 0}, {"max_steps": 0}, {"integrator": "rk4"}, {"noise_std": -1}):
        with pytest.raises(InvalidParameter):
            SimConfig(**kwargs)


def test_exp_step_matches_geometry_helper(model):
    f = ContactForceSet((ContactForce("c", (0.0, 0.0), (0.2, 0.1), press=0.5),))
    _, rec = step(ObjectState((0, 0, 0.2), model), f, None, SimConfig(dt=0.01))
    assert rec.pose == se2_exp_step((0, 0, 0.2), rec.twist, 0.01)
