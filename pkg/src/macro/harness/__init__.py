"""Scenario files, episode runner, sweeps, SVG plots and the ``macro`` CLI."""

from .plot import render_plot
from .runner import RunResult, execute, run, sweep
from .scenario import Scenario, apply_overrides, load_scenario, parse_scenario, parse_scenario_dict, resolve_seed

__all__ = ["RunResult", "Scenario", "apply_overrides", "execute", "load_scenario", "parse_scenario",
           "parse_scenario_dict", "render_plot", "resolve_seed", "run", "sweep"]
