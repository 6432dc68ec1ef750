"""Feedback laws, reference planning, episode controllers and mode selection."""

from .estimation import PressureEstimate, estimate_pressure_constant
from .laws import (LookaheadCommand, LookaheadParams, PiState, PoseGains, PressRegulator, StanleyGains,
                   SteeringCommand, lookahead_unicycle, pi_normal_force, pose_pd_wrench, stanley_rws)
from .planning import DubinsPath, ReferencePath, dubins_candidates, dubins_shortest, plan_reference
from .selection import ModeSelection, select_mode
from .trackers import LookaheadRegulator, PivotController, PosePDController, StanleyTracker

__all__ = [
    "DubinsPath", "LookaheadCommand", "LookaheadParams", "LookaheadRegulator", "ModeSelection", "PiState",
    "PivotController", "PoseGains", "PosePDController", "PressRegulator", "PressureEstimate", "ReferencePath",
    "StanleyGains", "StanleyTracker", "SteeringCommand", "dubins_candidates", "dubins_shortest",
    "estimate_pressure_constant", "lookahead_unicycle", "pi_normal_force", "plan_reference", "pose_pd_wrench",
    "select_mode", "stanley_rws",
]
