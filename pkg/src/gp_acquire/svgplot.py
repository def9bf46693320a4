"""Hand-rolled SVG output: stage panels with a band, lines, and markers.

Only a handful of primitives are needed (polyline, polygon, circle, text),
so pages are assembled as strings; no plotting library is involved.
Coordinates are formatted with fixed precision so output is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

__all__ = ["StagePanel", "render_panels"]

_PANEL_W = 320
_PANEL_H = 240
_MARGIN = 42
_COLS = 2


@dataclass
class StagePanel:
    """Data for one panel: a posterior band and mean over the realized path."""

    title: str
    query_times: Sequence[float]
    mean: Sequence[float]
    lo: Sequence[float]
    hi: Sequence[float]
    path_times: Sequence[float] = field(default_factory=list)
    path_values: Sequence[float] = field(default_factory=list)
    marker_times: Sequence[float] = field(default_factory=list)
    marker_values: Sequence[float] = field(default_factory=list)


def _fmt(x: float) -> str:
    return format(x, ".2f")


def _limits(panels: Sequence[StagePanel]) -> tuple[float, float, float, float]:
    xs: list[float] = []
    ys: list[float] = []
    for p in panels:
        xs.extend(p.query_times)
        xs.extend(p.path_times)
        ys.extend(p.lo)
        ys.extend(p.hi)
        ys.extend(p.path_values)
        ys.extend(p.marker_values)
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0
    pad = 0.05 * (y1 - y0)
    return x0, x1, y0 - pad, y1 + pad


class _Frame:
    def __init__(self, ox: float, oy: float, lims: tuple[float, float, float, float]):
        self.ox, self.oy = ox, oy
        self.x0, self.x1, self.y0, self.y1 = lims
        self.iw = _PANEL_W - 2 * _MARGIN
        self.ih = _PANEL_H - 2 * _MARGIN

    def x(self, t: float) -> float:
        return self.ox + _MARGIN + (t - self.x0) / (self.x1 - self.x0) * self.iw

    def y(self, v: float) -> float:
        return self.oy + _MARGIN + (self.y1 - v) / (self.y1 - self.y0) * self.ih

    def points(self, ts: Sequence[float], vs: Sequence[float]) -> str:
        return " ".join(f"{_fmt(self.x(t))},{_fmt(self.y(v))}" for t, v in zip(ts, vs))


def _panel_svg(panel: StagePanel, frame: _Frame) -> list[str]:
    out = []
    left, top = frame.ox + _MARGIN, frame.oy + _MARGIN
    right, bottom = frame.ox + _PANEL_W - _MARGIN, frame.oy + _PANEL_H - _MARGIN
    out.append(
        f'<rect x="{_fmt(left)}" y="{_fmt(top)}" width="{_fmt(right - left)}" '
        f'height="{_fmt(bottom - top)}" fill="none" stroke="#444" stroke-width="1"/>'
    )
    if len(panel.query_times) > 1:
        band = frame.points(panel.query_times, panel.hi) + " " + frame.points(
            list(reversed(panel.query_times)), list(reversed(panel.lo))
        )
        out.append(f'<polygon points="{band}" fill="#c8d8ea" stroke="none"/>')
        out.append(
            f'<polyline points="{frame.points(panel.query_times, panel.mean)}" '
            'fill="none" stroke="#1a476f" stroke-width="1.5"/>'
        )
    if len(panel.path_times) > 1:
        out.append(
            f'<polyline points="{frame.points(panel.path_times, panel.path_values)}" '
            'fill="none" stroke="#b2452c" stroke-width="1.2"/>'
        )
    for t, v in zip(panel.marker_times, panel.marker_values):
        out.append(f'<circle cx="{_fmt(frame.x(t))}" cy="{_fmt(frame.y(v))}" r="3" fill="#111"/>')
    out.append(
        f'<text x="{_fmt(frame.ox + _PANEL_W / 2)}" y="{_fmt(frame.oy + _MARGIN - 8)}" '
        f'text-anchor="middle" font-size="12" font-family="sans-serif">{panel.title}</text>'
    )
    for t in (frame.x0, frame.x1):
        out.append(
            f'<text x="{_fmt(frame.x(t))}" y="{_fmt(bottom + 14)}" text-anchor="middle" '
            f'font-size="10" font-family="sans-serif">{format(t, ".3g")}</text>'
        )
    for v in (frame.y0, frame.y1):
        out.append(
            f'<text x="{_fmt(left - 4)}" y="{_fmt(frame.y(v) + 3)}" text-anchor="end" '
            f'font-size="10" font-family="sans-serif">{format(v, ".3g")}</text>'
        )
    return out


def render_panels(panels: Sequence[StagePanel]) -> str:
    """Lay panels on a fixed grid (two per row) sharing one set of axes limits."""
    if not panels:
        raise ValueError("need at least one panel")
    lims = _limits(panels)
    cols = min(_COLS, len(panels))
    rows = (len(panels) + cols - 1) // cols
    width, height = cols * _PANEL_W, rows * _PANEL_H
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]
    for i, panel in enumerate(panels):
        frame = _Frame((i % cols) * _PANEL_W, (i // cols) * _PANEL_H, lims)
        parts.extend(_panel_svg(panel, frame))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
