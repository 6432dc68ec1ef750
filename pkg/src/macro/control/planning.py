"""Reference paths in reduced-order-model state space.

Car-like modes get the shortest bounded-curvature (Dubins) path, unicycle-like
modes turn-drive-turn, quasi-holonomic modes a straight pose interpolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidParameter, PlanningError
from ..geometry import wrap_angle

TWO_PI = 2.0 * math.pi
WORDS = ("LSL", "RSR", "LSR", "RSL", "RLR", "LRL")
CAR_MODES = ("rear_push_single", "dual_rear_bicycle")
UNICYCLE_MODES = ("top_press_single", "dual_rear_diffdrive")
HOLONOMIC_MODES = ("orthogonal_bimanual", "dual_top_press")
MIN_SEGMENT = 1e-12


def _mod2pi(a: float) -> float:
    return a - TWO_PI * math.floor(a / TWO_PI)


def _word_lengths(word: str, alpha: float, beta: float, d: float):
    """Normalized segment lengths (t, p, q) of one Dubins word, or None."""
    sa, sb, ca, cb = math.sin(alpha), math.sin(beta), math.cos(alpha), math.cos(beta)
    c_ab = math.cos(alpha - beta)
    d2 = d * d
    if word == "LSL":
        p2 = 2 + d2 - 2 * c_ab + 2 * d * (sa - sb)
        if p2 < 0:
            return None
        tmp = math.atan2(cb - ca, d + sa - sb)
        return _mod2pi(tmp - alpha), math.sqrt(p2), _mod2pi(beta - tmp)
    if word == "RSR":
        p2 = 2 + d2 - 2 * c_ab + 2 * d * (sb - sa)
        if p2 < 0:
            return None
        tmp = math.atan2(ca - cb, d - sa + sb)
        return _mod2pi(alpha - tmp), math.sqrt(p2), _mod2pi(tmp - beta)
    if word == "LSR":
        p2 = -2 + d2 + 2 * c_ab + 2 * d * (sa + sb)
        if p2 < 0:
            return None
        p = math.sqrt(p2)
        tmp = math.atan2(-ca - cb, d + sa + sb) - math.atan2(-2.0, p)
        return _mod2pi(tmp - alpha), p, _mod2pi(tmp - beta)
    if word == "RSL":
        p2 = -2 + d2 + 2 * c_ab - 2 * d * (sa + sb)
        if p2 < 0:
            return None
        p = math.sqrt(p2)
        tmp = math.atan2(ca + cb, d - sa - sb) - math.atan2(2.0, p)
        return _mod2pi(alpha - tmp), p, _mod2pi(beta - tmp)
    if word == "RLR":
        tmp0 = (6 - d2 + 2 * c_ab + 2 * d * (sa - sb)) / 8
        if abs(tmp0) > 1:
            return None
        phi = math.atan2(ca - cb, d - sa + sb)
        p = _mod2pi(TWO_PI - math.acos(tmp0))
        t = _mod2pi(alpha - phi + p / 2)
        return t, p, _mod2pi(alpha - beta - t + p)
    if word == "LRL":
        tmp0 = (6 - d2 + 2 * c_ab + 2 * d * (sb - sa)) / 8
        if abs(tmp0) > 1:
            return None
        phi = math.atan2(ca - cb, d + sa - sb)
        p = _mod2pi(TWO_PI - math.acos(tmp0))
        t = _mod2pi(-alpha - phi + p / 2)
        return t, p, _mod2pi(beta - alpha - t + p)
    raise ValueError(word)


@dataclass(frozen=True)
class DubinsPath:
    start: tuple[float, float, float]
    radius: float
    word: str
    lengths: tuple[float, float, float]  # metres

    @property
    def length(self) -> float:
        return sum(self.lengths)

    def segments(self):
        """(curvature, length) per segment."""
        k = 1.0 / self.radius
        sign = {"L": k, "R": -k, "S": 0.0}
        return [(sign[ch], ln) for ch, ln in zip(self.word, self.lengths)]


def dubins_candidates(start, goal, radius: float) -> list[DubinsPath]:
    """Every admissible word between two poses, unsorted."""
    if radius <= 0:
        raise InvalidParameter("turning radius > 0")
    dx, dy = goal[0] - start[0], goal[1] - start[1]
    dist = math.hypot(dx, dy)
    theta = _mod2pi(math.atan2(dy, dx)) if dist > 0 else 0.0
    alpha = _mod2pi(start[2] - theta)
    beta = _mod2pi(goal[2] - theta)
    out = []
    for word in WORDS:
        res = _word_lengths(word, alpha, beta, dist / radius)
        if res is not None:
            out.append(DubinsPath(tuple(start), radius, word, tuple(v * radius for v in res)))
    return out


def dubins_shortest(start, goal, radius: float) -> DubinsPath:
    cands = dubins_candidates(start, goal, radius)
    if not cands:
        raise PlanningError("no Dubins word connects the poses")
    return min(cands, key=lambda p: (p.length, WORDS.index(p.word)))


def integrate_segments(start, segments, ds: float):
    """Sample poses along constant-curvature segments (exact arcs)."""
    xs, ys, ths, ss, ks = [start[0]], [start[1]], [start[2]], [0.0], []
    x, y, th, s = float(start[0]), float(start[1]), float(start[2]), 0.0
    # segments shorter than MIN_SEGMENT are round-off from the word solver; sampling them would repeat s
    segments = [(kappa, length) for kappa, length in segments if length > MIN_SEGMENT]
    ks.append(segments[0][0] if segments else 0.0)
    for kappa, length in segments:
        n = max(1, int(math.ceil(length / ds)))
        h = length / n
        for _ in range(n):
            if kappa == 0.0:
                x += h * math.cos(th)
                y += h * math.sin(th)
            else:
                nth = th + kappa * h
                x += (math.sin(nth) - math.sin(th)) / kappa
                y += (math.cos(th) - math.cos(nth)) / kappa
                th = nth
            s += h
            xs.append(x)
            ys.append(y)
            ths.append(th)
            ss.append(s)
            ks.append(kappa)
    return np.array(xs), np.array(ys), np.array(ths), np.array(ss), np.array(ks)


@dataclass
class ReferencePath:
    """Sampled reference poses with arc length and signed curvature.

    In-place rotation samples (turn-drive-turn) carry ``nan`` curvature.
    """

    x: np.ndarray
    y: np.ndarray
    theta: np.ndarray
    s: np.ndarray
    kappa: np.ndarray
    kappa_max: float = math.inf
    kind: str = "dubins"
    word: str = ""

    @property
    def length(self) -> float:
        return float(self.s[-1])

    def poses(self) -> np.ndarray:
        return np.column_stack([self.x, self.y, self.theta])

    def project(self, point, hint: int = 0, window: int | None = None) -> int:
        """Index of the closest sample; searches ``window`` samples from ``hint`` when given."""
        if window is None:
            lo, hi = 0, len(self.x)
        else:
            lo, hi = max(0, hint - window // 4), min(len(self.x), hint + window)
        dx = self.x[lo:hi] - point[0]
        dy = self.y[lo:hi] - point[1]
        return lo + int(np.argmin(dx * dx + dy * dy))

    def extended(self, length: float, ds: float) -> "ReferencePath":
        """Append a straight continuation from the last pose."""
        end = (float(self.x[-1]), float(self.y[-1]), float(self.theta[-1]))
        x, y, th, s, k = integrate_segments(end, [(0.0, length)], ds)
        return ReferencePath(np.concatenate([self.x, x[1:]]), np.concatenate([self.y, y[1:]]),
                             np.concatenate([self.theta, th[1:]]), np.concatenate([self.s, self.s[-1] + s[1:]]),
                             np.concatenate([self.kappa, k[1:]]), self.kappa_max, self.kind, self.word)


def plan_reference(start_pose, goal_pose, mode: str, kappa_max: float | None = None, *,
                   ds: float = 1e-3, max_length: float | None = None, samples: int = 200) -> ReferencePath:
    """Reference path respecting the constraint set of ``mode``.

    Raises PlanningError when the shortest admissible path exceeds
    ``max_length`` (the workspace budget).
    """
    start = tuple(float(v) for v in start_pose)
    goal = tuple(float(v) for v in goal_pose)
    if mode in CAR_MODES:
        if kappa_max is None or kappa_max <= 0:
            raise InvalidParameter("kappa_max > 0")
        path = dubins_shortest(start, goal, 1.0 / kappa_max)
        _check_budget(path.length, max_length)
        x, y, th, s, k = integrate_segments(start, path.segments(), ds)
        return ReferencePath(x, y, th, s, k, kappa_max, "dubins", path.word)
    if mode in UNICYCLE_MODES:
        dx, dy = goal[0] - start[0], goal[1] - start[1]
        dist = math.hypot(dx, dy)
        _check_budget(dist, max_length)
        heading = math.atan2(dy, dx) if dist > 0 else start[2]
        turn1 = wrap_angle(heading - start[2])
        turn2 = wrap_angle(goal[2] - heading)
        n_turn = max(2, samples // 4)
        th1 = start[2] + np.linspace(0.0, turn1, n_turn)
        x, y, th, s, _ = integrate_segments((start[0], start[1], heading), [(0.0, dist)], ds)
        th2 = heading + np.linspace(0.0, turn2, n_turn)
        xs = np.concatenate([np.full(n_turn, start[0]), x[1:], np.full(n_turn, goal[0])])
        ys = np.concatenate([np.full(n_turn, start[1]), y[1:], np.full(n_turn, goal[1])])
        ths = np.concatenate([th1, th[1:], th2])
        ss = np.concatenate([np.zeros(n_turn), s[1:], np.full(n_turn, dist)])
        ks = np.concatenate([np.full(n_turn, np.nan), np.zeros(len(s) - 1), np.full(n_turn, np.nan)])
        return ReferencePath(xs, ys, ths, ss, ks, math.inf, "turn_drive_turn")
    if mode in HOLONOMIC_MODES:
        dist = math.hypot(goal[0] - start[0], goal[1] - start[1])
        _check_budget(dist, max_length)
        u = np.linspace(0.0, 1.0, samples)
        dth = wrap_angle(goal[2] - start[2])
        return ReferencePath(start[0] + u * (goal[0] - start[0]), start[1] + u * (goal[1] - start[1]),
                             start[2] + u * dth, u * dist, np.full(samples, np.nan), math.inf, "linear")
    raise InvalidParameter("mode registered", f"no planner for mode {mode!r}")


def _check_budget(length: float, max_length: float | None):
    if max_length is not None and length > max_length:
        raise PlanningError(f"shortest admissible path {length:.4g} m exceeds the workspace budget {max_length:.4g} m")


def plan_car_approach(start_pose, goal_pose, kappa: float, *, lead_in: float = 0.0, tail: float = 0.3,
                      ds: float = 1e-3, max_length: float | None = None) -> tuple[ReferencePath, float]:
    """Dubins path ending in a straight ``lead_in`` onto the goal, plus a straight ``tail`` past it.

    Returns the path and the arc length of the goal on it. The lead-in lets
    the steering feedback settle before the goal; the tail keeps the
    closest-point projection well defined while the tracker stops.
    """
    if kappa <= 0:
        raise InvalidParameter("kappa_max > 0")
    if lead_in < 0 or tail < 0:
        raise InvalidParameter("lead_in >= 0 and tail >= 0")
    gx, gy, gth = (float(v) for v in goal_pose)
    pre = (gx - lead_in * math.cos(gth), gy - lead_in * math.sin(gth), gth)
    path = dubins_shortest(tuple(float(v) for v in start_pose), pre, 1.0 / kappa)
    goal_s = path.length + lead_in
    _check_budget(goal_s, max_length)
    x, y, th, s, k = integrate_segments(start_pose, path.segments() + [(0.0, lead_in), (0.0, tail)], ds)
    return ReferencePath(x, y, th, s, k, kappa, "dubins", path.word), goal_s
