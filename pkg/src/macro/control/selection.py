"""Contact-mode selection: capability filtering, then shortest planned path."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from ..errors import ModeSelectionError, PlanningError
from ..modes import MODE_REGISTRY, ModeInfo, TrackingKind
from .planning import CAR_MODES, plan_reference

QUASI_HOLONOMIC_NEEDS = frozenset({"lateral_translation", "in_place_rotation"})
CAPABILITY_KEYS = ("lateral_translation", "in_place_rotation", "tight_pivot")


@dataclass(frozen=True)
class ModeSelection:
    name: str
    tracking: TrackingKind
    info: ModeInfo
    path_lengths: dict = field(default_factory=dict)
    rejected: dict = field(default_factory=dict)


def _failures(info: ModeInfo, task: Mapping, needs: set[str]) -> list[str]:
    out = []
    arms = int(task.get("arms", 0))
    if arms < info.arms:
        out.append(f"arms >= {info.arms}")
    if info.needs_top_access and not task.get("top_access", False):
        out.append("top access")
    out += sorted(needs - info.capabilities)
    return out


def _path_length(name: str, task: Mapping, obj: Mapping) -> float:
    start, goal = task.get("start"), task.get("goal")
    if start is None or goal is None:
        return 0.0
    kappa = None
    if name in CAR_MODES:
        # VFA distance (c r0)^2 / d sets the curvature bound mu / x_vfa
        d = obj.get("d", obj.get("r0", 0.1))
        kappa = obj.get("mu", 0.5) * d / (obj.get("c", 0.6) * obj.get("r0", 0.1)) ** 2
    try:
        return plan_reference(start, goal, name, kappa, ds=5e-3).length
    except PlanningError:
        return math.inf


def select_mode(task_spec: Mapping, object_spec: Mapping | None = None,
                mode_library: Mapping[str, ModeInfo] = MODE_REGISTRY) -> ModeSelection:
    """Deterministic mode choice.

    Two-arm tasks needing lateral translation or in-place rotation go to
    quasi-holonomic modes; a single arm with top access presses, a single arm
    without it pushes; remaining ties go to the shortest planned path, then
    registry order.
    """
    obj = object_spec or {}
    needs = {key for key in CAPABILITY_KEYS if task_spec.get(key)}
    arms = int(task_spec.get("arms", 0))
    rejected = {}
    feasible = []
    for name, info in mode_library.items():
        fails = _failures(info, task_spec, needs)
        if fails:
            rejected[name] = fails
        else:
            feasible.append(info)
    if arms >= 2 and needs & QUASI_HOLONOMIC_NEEDS:
        for info in list(feasible):
            if info.rom != "Quasi-holonomic":
                feasible.remove(info)
                rejected[info.name] = ["quasi-holonomic model"]
    elif arms == 1:
        preferred = "top_press_single" if task_spec.get("top_access") else "rear_push_single"
        if any(info.name == preferred for info in feasible):
            feasible = [info for info in feasible if info.name == preferred]
    if not feasible:
        raise ModeSelectionError(rejected)
    order = list(mode_library)
    lengths = {info.name: _path_length(info.name, task_spec, obj) for info in feasible}
    best = min(feasible, key=lambda info: (lengths[info.name], order.index(info.name)))
    return ModeSelection(best.name, best.tracking, best, lengths, rejected)
