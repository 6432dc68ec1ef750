"""Command line: ``macro run | sweep | modes list | validate``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from importlib import resources
from pathlib import Path

from ..errors import MacroError
from ..modes import MODE_REGISTRY
from . import runner
from .scenario import parse_scenario_dict

log = logging.getLogger("macro")


def bundled_scenarios() -> dict[str, Path]:
    root = resources.files("macro.harness") / "scenarios"
    return {p.name[:-5]: Path(str(p)) for p in sorted(root.iterdir(), key=lambda p: p.name)
            if p.name.endswith(".json")}


def _resolve(path: str) -> Path:
    p = Path(path)
    if p.exists():
        return p
    bundled = bundled_scenarios()
    name = p.name[:-5] if p.name.endswith(".json") else p.name
    if name in bundled:
        return bundled[name]
    raise MacroError(f"scenario file not found: {path}")


def _load(path: str) -> dict:
    text = _resolve(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        from ..errors import ScenarioError
        raise ScenarioError("$", f"malformed JSON: {exc}") from None


def _emit_error(exc: MacroError) -> int:
    print(json.dumps({"status": "error", "error": exc.to_dict()}, sort_keys=True), file=sys.stderr)
    return 1


def _parse_values(text: str) -> list:
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            out.append(json.loads(item))
        except json.JSONDecodeError:
            out.append(item)
    return out


def cmd_run(args) -> int:
    try:
        data = _load(args.scenario)
        t0 = time.perf_counter()
        result = runner.run(data, args.out, args.set, args.seed, os.environ.get("MACRO_SEED"))
    except MacroError as exc:
        if args.out:
            runner.write_error(args.out, exc.to_dict())
        return _emit_error(exc)
    s = result.summary
    log.info("%s: %s after %d steps (%.2f s wall)", s["scenario"], s["status"], s["steps"], time.perf_counter() - t0)
    if s["status"] == "error":
        print(json.dumps({"status": "error", "error": s["error"]}, sort_keys=True), file=sys.stderr)
    else:
        print(f"{s['scenario']}: {s['status']}  pos {s['final_pos_error']:.4g} m  "
              f"ang {s['final_ang_error']:.4g} rad  t {s['sim_time']:.3f} s")
    return result.exit_code


def cmd_sweep(args) -> int:
    try:
        data = _load(args.scenario)
        values = _parse_values(args.values)
        if not values:
            raise MacroError("--values is empty")
        rows = runner.sweep(data, args.param, values, args.out, args.set, args.seed, os.environ.get("MACRO_SEED"),
                            args.jobs)
    except MacroError as exc:
        return _emit_error(exc)
    for row in rows:
        print(f"{args.param}={json.dumps(row['value'])}: {row['status']}")
    codes = {row["exit_code"] for row in rows}
    return 1 if 1 in codes else (2 if 2 in codes else 0)


def cmd_modes(args) -> int:
    if args.json:
        payload = [{"name": i.name, "model": i.rom, "tracking_point": i.tracking.value, "cop_steering": i.cop_steering,
                    "arms": i.arms, "top_access": i.needs_top_access, "capabilities": sorted(i.capabilities),
                    "controllers": list(i.controllers)} for i in MODE_REGISTRY.values()]
        print(json.dumps(payload, indent=2))
        return 0
    print(f"{'mode':<22}{'model':<38}{'tracking':<13}{'arms':<6}controllers")
    for i in MODE_REGISTRY.values():
        print(f"{i.name:<22}{i.rom:<38}{i.tracking.value:<13}{i.arms:<6}{', '.join(i.controllers) or '-'}")
    return 0


def cmd_validate(args) -> int:
    try:
        sc = parse_scenario_dict(_load(args.scenario))
    except MacroError as exc:
        return _emit_error(exc)
    print(f"{sc.name}: valid ({len(sc.phase_list())} phase(s))")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="macro", description="Quasi-static planar contact manipulation simulator")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run one scenario")
    r.add_argument("scenario", help="scenario JSON path or bundled scenario name")
    r.add_argument("--out", required=True, help="output directory")
    r.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override a scenario field by dotted path (repeatable)")
    r.add_argument("--seed", type=int, default=None, help="seed (beats MACRO_SEED and the file)")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("sweep", help="run a scenario once per parameter value")
    s.add_argument("scenario")
    s.add_argument("--param", required=True, help="dotted path of a scalar scenario field")
    s.add_argument("--values", required=True, help="comma-separated values")
    s.add_argument("--out", required=True)
    s.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--jobs", type=int, default=None, help="worker processes (default: min(values, CPUs))")
    s.set_defaults(func=cmd_sweep)

    m = sub.add_parser("modes", help="contact-mode registry")
    msub = m.add_subparsers(dest="modes_command", required=True)
    ml = msub.add_parser("list", help="list registered modes")
    ml.add_argument("--json", action="store_true")
    ml.set_defaults(func=cmd_modes)

    v = sub.add_parser("validate", help="check a scenario file against the schema")
    v.add_argument("scenario")
    v.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
