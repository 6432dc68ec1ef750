"""Identification of the pressure-distribution constant from a logged episode."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import InvalidParameter
from ..world import TrajectoryLog, empirical_tracking_point


@dataclass(frozen=True)
class PressureEstimate:
    c: float
    stderr: float
    tracking_distance: float  # mean |zero-slip point - CoP| (m)
    samples: int


def estimate_pressure_constant(log: TrajectoryLog, lever: float, r0: float, *,
                               axis_angle: float | None = None, omega_min: float = 1e-4) -> PressureEstimate:
    """c = sqrt(d |x_tp|) / r0 from the empirical virtual-axle distance.

    ``lever`` is the contact-to-CoP distance d. The standard error propagates
    the sample scatter of the per-step axle coordinate.
    """
    if lever <= 0 or r0 <= 0:
        raise InvalidParameter("lever > 0 and r0 > 0")
    tp = empirical_tracking_point(log, axis_angle=axis_angle, omega_min=omega_min)
    x = abs(tp.mean)
    c = math.sqrt(lever * x) / r0
    n = len(tp.distances)
    stderr = c / (2 * x) * tp.std / math.sqrt(n) if x > 0 else math.inf
    return PressureEstimate(c, stderr, x, n)
