"""Deterministic SVG 1.1 trajectory plots.

Coordinates are printed with a fixed number of decimals, so the same log
always renders to the same bytes.
"""

from __future__ import annotations

import math
from typing import Mapping

from ..geometry import body_to_world
from ..world import TrajectoryLog

DEFAULT_STYLE = {
    "width": 800,
    "height": 600,
    "margin": 40,
    "keyframes": 8,
    "path_points": 1500,
    "footprint": "#4c72b0",
    "com_path": "#222222",
    "reference": "#dd8452",
    "tracking": "#55a868",
    "contact": "#c44e52",
}


def _fmt(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def _corners(pose, footprint):
    hx, hy = footprint[0] / 2, footprint[1] / 2
    return [body_to_world(pose, p) for p in ((hx, hy), (-hx, hy), (-hx, -hy), (hx, -hy))]


def _decimate(points, n):
    if len(points) <= n:
        return list(points)
    step = (len(points) - 1) / (n - 1)
    return [points[round(i * step)] for i in range(n)]


def render_plot(log: TrajectoryLog, style: Mapping | None = None) -> str:
    """SVG with footprint keyframes, CoM path, reference path(s), contacts and tracking-point trace."""
    st = {**DEFAULT_STYLE, **(style or {})}
    meta = log.meta
    footprint = meta.get("footprint", (0.1, 0.1))
    phases = meta.get("phases", [])
    start = tuple(meta.get("start_pose", (0.0, 0.0, 0.0)))
    records = log.records

    poses = [start] + [r.pose for r in records]
    # keyframes: start, evenly spaced interior samples, final pose; motionless logs draw the start only
    moved = any(p != start for p in poses)
    if moved:
        k = max(2, int(st["keyframes"]))
        frames = [(poses[round(i * (len(poses) - 1) / (k - 1))], _phase_of(records, round(i * (len(poses) - 1) / (k - 1))))
                  for i in range(k)]
    else:
        frames = [(start, 0)]
    com = [(p[0], p[1]) for p in _decimate(poses, st["path_points"])]
    tracking = [r.tracking for r in records if r.tracking is not None]
    tracking = _decimate(tracking, st["path_points"])
    refs = [[tuple(p) for p in ph.get("reference", [])] for ph in phases]

    pts = [c for pose, _ in frames for c in _corners(pose, footprint)] + com + tracking
    for ref in refs:
        pts += ref
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, 1e-9)
    w, h, m = st["width"], st["height"], st["margin"]
    scale = min((w - 2 * m) / max(x1 - x0, span * 1e-3), (h - 2 * m) / max(y1 - y0, span * 1e-3))
    cx, cy = (x0 + x1) / 2, (y0 + y1) / 2

    def sx(x):
        return w / 2 + (x - cx) * scale

    def sy(y):
        return h / 2 - (y - cy) * scale

    def poly(points):
        return " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in points)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<title>{_escape(str(meta.get("scenario", "trajectory")))} ({_escape(log.status)})</title>',
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="#ffffff"/>',
    ]
    for i, ref in enumerate(refs):
        if len(ref) == 1:
            x, y = ref[0]
            out.append(f'<circle class="reference" cx="{_fmt(sx(x))}" cy="{_fmt(sy(y))}" r="5" fill="none" '
                       f'stroke="{st["reference"]}" stroke-width="1.5"/>')
        elif ref:
            out.append(f'<polyline class="reference" data-phase="{i}" points="{poly(ref)}" fill="none" '
                       f'stroke="{st["reference"]}" stroke-width="1.5" stroke-dasharray="6,4"/>')
    for pose, phase in frames:
        out.append(f'<polygon class="footprint" points="{poly(_corners(pose, footprint))}" fill="none" '
                   f'stroke="{st["footprint"]}" stroke-width="1"/>')
        contacts = phases[phase]["contacts"] if phase < len(phases) else []
        for _, pos in contacts:
            x, y = body_to_world(pose, pos)
            out.append(f'<circle class="contact" cx="{_fmt(sx(x))}" cy="{_fmt(sy(y))}" r="3" '
                       f'fill="{st["contact"]}"/>')
    if len(com) > 1:
        out.append(f'<polyline class="com" points="{poly(com)}" fill="none" stroke="{st["com_path"]}" '
                   f'stroke-width="1.5"/>')
    if tracking:
        out.append(f'<polyline class="tracking" points="{poly(tracking)}" fill="none" stroke="{st["tracking"]}" '
                   f'stroke-width="1" stroke-dasharray="2,2"/>')
    goal = meta.get("goal_pose")
    if goal is not None:
        gx, gy, gth = goal
        tip = (gx + 0.05 * math.cos(gth), gy + 0.05 * math.sin(gth))
        out.append(f'<line class="goal" x1="{_fmt(sx(gx))}" y1="{_fmt(sy(gy))}" x2="{_fmt(sx(tip[0]))}" '
                   f'y2="{_fmt(sy(tip[1]))}" stroke="#000000" stroke-width="2"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _phase_of(records, pose_index: int) -> int:
    if pose_index == 0 or not records:
        return 0
    return records[pose_index - 1].phase


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
