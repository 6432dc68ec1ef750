"""Scenario files: strict JSON schema "macro-scenario/1".

A scenario describes the object, its start and goal poses, simulator settings
and either a single (mode, controller) pair or an ordered list of phases.
Unknown fields are rejected; schema errors carry the JSON path of the first
offending field and physics violations name the broken invariant.
"""

from __future__ import annotations

import copy
import json
import math
from typing import Annotated, Any, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..errors import InvalidParameter, MacroError, ScenarioError
from ..mechanics import LimitSurfaceModel, build_limit_surface
from ..modes import MODE_REGISTRY, ContactMode, build_mode

SCENARIO_SCHEMA = "macro-scenario/1"
GRAVITY = 9.81

Pose = tuple[float, float, float]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class ObjectSpec(_Strict):
    mass: float = Field(description="kg")
    footprint: tuple[float, float] = Field(description="length along body x, width along body y (m)")
    height: float = 0.1
    mu: float
    c: float = 0.6
    r0: float = Field(description="effective contact radius (m)")
    lambda_scale: float = 0.5

    @property
    def weight(self) -> float:
        return self.mass * GRAVITY


class ModeSpec(_Strict):
    name: str
    geometry: dict[str, Any] = Field(default_factory=dict)


class StanleySpec(_Strict):
    name: Literal["stanley"]
    f_push: float = 0.5
    k: float = 1.0
    v_nominal: Optional[float] = None  # default: alpha * f_push
    delta_max_deg: Optional[float] = None  # default: 95 % of atan(mu)
    sign: Literal[1, -1] = 1
    feedforward: bool = True
    kappa_fraction: float = Field(0.6, gt=0, le=1)
    lead_in: float = Field(0.1, ge=0)
    ds: float = Field(1e-3, gt=0)
    max_length: Optional[float] = None


class LookaheadSpec(_Strict):
    name: Literal["lookahead"]
    f_long: float = 2.0
    k_lat: float = 20.0
    lookahead: Optional[float] = None  # default: 1.5 x object length
    lookahead_near: Optional[float] = None  # default: 0.3 x object length
    taper_distance: float = 0.2
    margin: float = 0.05


class PosePDSpec(_Strict):
    name: Literal["pose_pd"]
    kp_pos: float = 20.0
    kp_ang: float = 4.0
    kd_pos: float = 0.0
    kd_ang: float = 0.0
    f_max: float = 3.0
    tau_max: float = 0.5
    f_bias: Optional[float] = None
    f_min: float = 0.1
    ramp: float = 0.0


class PivotSpec(_Strict):
    name: Literal["pivot"]
    pivot: Literal["L", "R"] = "L"
    angle_deg: float = 90.0
    k_ang: float = 2.0
    omega_max: float = 0.5
    tol_ang_deg: float = 0.2


class IdleSpec(_Strict):
    """Commands zero force forever (timeout check)."""

    name: Literal["idle"]


ControllerSpec = Annotated[Union[StanleySpec, LookaheadSpec, PosePDSpec, PivotSpec, IdleSpec],
                           Field(discriminator="name")]


class PhaseSpec(_Strict):
    mode: ModeSpec
    controller: ControllerSpec
    # intermediate goal; the pivot controller derives its own, the last phase uses the scenario goal
    goal: Optional[Pose] = None


class Tolerance(_Strict):
    pos: float = 0.005
    ang_deg: float = 1.0

    @property
    def pair(self) -> tuple[float, float]:
        return (self.pos, math.radians(self.ang_deg))


class SimSpec(_Strict):
    dt: float = 1e-3
    integrator: Literal["euler", "midpoint", "exp"] = "exp"
    noise_std: float = 0.0
    max_steps: int = 60_000
    force_bias: float = 0.0


class RegulationSpec(_Strict):
    kp: float = 0.5
    ki: float = 2.0
    windup_limit: float = 5.0


class Scenario(_Strict):
    schema_: Literal["macro-scenario/1"] = Field(alias="schema")
    name: str
    description: str = ""
    seed: int = 0
    object: ObjectSpec
    start: Pose
    goal: Pose
    tolerance: Tolerance = Tolerance()
    sim: SimSpec = SimSpec()
    regulation: Optional[RegulationSpec] = None
    mode: Optional[ModeSpec] = None
    controller: Optional[ControllerSpec] = None
    phases: Optional[list[PhaseSpec]] = None

    model_config = ConfigDict(extra="forbid", frozen=True, populate_by_name=True)

    @model_validator(mode="after")
    def _one_form(self):
        single = self.mode is not None or self.controller is not None
        if single and self.phases is not None:
            raise ValueError("give either mode + controller or phases, not both")
        if self.phases is None and (self.mode is None or self.controller is None):
            raise ValueError("mode and controller are required when phases is absent")
        if self.phases is not None and not self.phases:
            raise ValueError("phases must not be empty")
        return self

    def phase_list(self) -> list[PhaseSpec]:
        if self.phases is not None:
            return list(self.phases)
        return [PhaseSpec(mode=self.mode, controller=self.controller)]

    def limit_surface(self) -> LimitSurfaceModel:
        o = self.object
        return build_limit_surface(o.mu, o.weight, o.c, o.r0, o.lambda_scale)

    def to_dict(self) -> dict:
        return self.model_dump(mode="json", by_alias=True, exclude_none=True)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def _json_path(loc) -> str:
    path = "$"
    for part in loc:
        # discriminated unions add the tag name as a location segment
        if isinstance(part, int):
            path += f"[{part}]"
        elif part in ("stanley", "lookahead", "pose_pd", "pivot", "idle"):
            continue
        else:
            path += f".{'schema' if part == 'schema_' else part}"
    return path


def _check_physics(sc: Scenario):
    o = sc.object
    if not (o.mass > 0 and math.isfinite(o.mass)):
        raise InvalidParameter("mass > 0")
    if not all(v > 0 for v in o.footprint):
        raise InvalidParameter("footprint > 0")
    sc.limit_surface()  # raises with the named invariant (mu > 0, c <= 1, ...)
    if sc.sim.dt <= 0:
        raise InvalidParameter("dt > 0")
    if sc.sim.max_steps <= 0:
        raise InvalidParameter("max_steps > 0")
    if sc.sim.noise_std < 0:
        raise InvalidParameter("noise_std >= 0")
    if sc.tolerance.pos <= 0 or sc.tolerance.ang_deg <= 0:
        raise InvalidParameter("tolerance > 0")
    for i, phase in enumerate(sc.phase_list()):
        info = MODE_REGISTRY.get(phase.mode.name)
        if info is None:
            raise InvalidParameter("mode name registered", f"phases[{i}]: unknown mode {phase.mode.name!r}")
        ctrl = phase.controller.name
        if ctrl != "idle" and ctrl not in info.controllers:
            raise InvalidParameter("controller fits mode",
                                   f"phases[{i}]: controller {ctrl!r} not available for mode {info.name!r} "
                                   f"(choices: {', '.join(info.controllers) or 'none'})")
        try:
            build_mode(phase.mode.name, phase.mode.geometry)
        except KeyError as exc:
            raise ScenarioError(f"$.phases[{i}].mode.geometry", f"missing field {exc.args[0]!r}") from None


def parse_scenario_dict(data: Any) -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioError("$", "scenario must be a JSON object")
    try:
        sc = Scenario.model_validate(data)
    except ValidationError as exc:
        err = exc.errors()[0]
        raise ScenarioError(_json_path(err["loc"]), err["msg"]) from None
    _check_physics(sc)
    return sc


def parse_scenario(text: str) -> Scenario:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError("$", f"malformed JSON: {exc}") from None
    return parse_scenario_dict(data)


def load_scenario(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read())


def _coerce(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_overrides(data: dict, overrides) -> dict:
    """Return a copy of ``data`` with ``key.path=value`` overrides applied.

    Path segments that are integers index lists; values are parsed as JSON
    when possible, otherwise kept as strings.
    """
    out = copy.deepcopy(data)
    for item in overrides:
        if "=" not in item:
            raise ScenarioError("$", f"override {item!r} is not key=value")
        key, raw = item.split("=", 1)
        parts = key.strip().split(".")
        node = out
        for j, part in enumerate(parts[:-1]):
            node = _descend(node, part, parts[: j + 1])
        last = parts[-1]
        if isinstance(node, list):
            node[_index(last, parts)] = _coerce(raw)
        else:
            node[last] = _coerce(raw)
    return out


def _index(part: str, parts) -> int:
    try:
        return int(part)
    except ValueError:
        raise ScenarioError("$." + ".".join(parts), "list index expected") from None


def _descend(node, part, parts):
    if isinstance(node, list):
        idx = _index(part, parts)
        if not -len(node) <= idx < len(node):
            raise ScenarioError("$." + ".".join(parts), "index out of range")
        return node[idx]
    if not isinstance(node, dict):
        raise ScenarioError("$." + ".".join(parts), "cannot descend into a scalar")
    return node.setdefault(part, {})


def resolve_seed(file_seed: int, env: Optional[str] = None, cli: Optional[int] = None) -> int:
    """CLI flag > MACRO_SEED environment variable > scenario file."""
    if cli is not None:
        return int(cli)
    if env not in (None, ""):
        try:
            return int(env)
        except ValueError:
            raise ScenarioError("$env.MACRO_SEED", f"integer expected, got {env!r}") from None
    return int(file_seed)


def phase_mode(phase: PhaseSpec) -> ContactMode:
    return build_mode(phase.mode.name, phase.mode.geometry)


__all__ = [
    "GRAVITY", "SCENARIO_SCHEMA", "ObjectSpec", "PhaseSpec", "Scenario", "apply_overrides", "load_scenario",
    "parse_scenario", "parse_scenario_dict", "phase_mode", "resolve_seed", "MacroError",
]
