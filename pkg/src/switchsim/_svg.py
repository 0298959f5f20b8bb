"""Minimal static SVG line plots: axes, ticks, polylines and markers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 640, 440
LEFT, RIGHT, TOP, BOTTOM = 70, 170, 30, 50
MARGIN = 0.05
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f")

# x and y transforms per scale
SCALES = {
    "loglog": (np.log10, np.log10),
    "loglin": (lambda x: x, np.log10),
    "logneglog": (np.log10, lambda p: np.log10(-np.log(p))),
}
Y_LABELS = {"loglog": "probability (log)", "loglin": "probability (log)", "logneglog": "log10(-log p)"}


@dataclass(frozen=True)
class Series:
    label: str
    x: Sequence[float]
    y: Sequence[float]
    markers: bool = False  # markers for estimates, a line for curves


def _transformed(series: Series, scale: str):
    fx, fy = SCALES[scale]
    x = np.asarray(series.x, dtype=float)
    y = np.asarray(series.y, dtype=float)
    keep = np.isfinite(x) & np.isfinite(y) & (y > 0) & (x > 0)
    if scale == "logneglog":
        keep &= y < 1
    with np.errstate(all="ignore"):
        tx, ty = fx(x[keep]), fy(y[keep])
    ok = np.isfinite(tx) & np.isfinite(ty)
    return tx[ok], ty[ok]


def padded_range(values: np.ndarray, margin: float = MARGIN):
    """Data extent widened by ``margin`` of its span on each side."""
    lo, hi = float(np.min(values)), float(np.max(values))
    span = hi - lo if hi > lo else max(abs(lo), 1.0)
    return lo - margin * span, hi + margin * span


def _ticks(lo: float, hi: float, n: int = 5):
    step = (hi - lo) / (n - 1)
    return [lo + k * step for k in range(n)]


def _tick_label(t: float, is_log: bool) -> str:
    return f"{10.0 ** t:.3g}" if is_log else f"{t:.3g}"


def render(series: List[Series], scale: str, title: str = "", x_label: str = "u") -> str:
    if scale not in SCALES:
        raise ValueError(f"unknown plot scale {scale!r}")
    data = [(s, *_transformed(s, scale)) for s in series]
    xs = np.concatenate([tx for _, tx, _ in data] or [np.zeros(0)])
    ys = np.concatenate([ty for _, _, ty in data] or [np.zeros(0)])
    if xs.size == 0:
        xs, ys = np.array([0.0, 1.0]), np.array([0.0, 1.0])
    x0, x1 = padded_range(xs)
    y0, y1 = padded_range(ys)
    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM

    def px(x):
        return LEFT + (x - x0) / (x1 - x0) * pw

    def py(y):
        return TOP + (y1 - y) / (y1 - y0) * ph

    x_log = scale != "loglin"
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
           f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
           f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>']
    if title:
        out.append(f'<text x="{LEFT + pw / 2:.1f}" y="{TOP - 10}" text-anchor="middle" '
                   f'font-size="13">{escape(title)}</text>')
    for t in _ticks(x0, x1):
        x = px(t)
        out.append(f'<line x1="{x:.1f}" y1="{TOP + ph}" x2="{x:.1f}" y2="{TOP + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{x:.1f}" y="{TOP + ph + 18}" text-anchor="middle">{_tick_label(t, x_log)}</text>')
    for t in _ticks(y0, y1):
        y = py(t)
        label = f"{t:.3g}" if scale == "logneglog" else _tick_label(t, True)
        out.append(f'<line x1="{LEFT - 5}" y1="{y:.1f}" x2="{LEFT}" y2="{y:.1f}" stroke="black"/>')
        out.append(f'<text x="{LEFT - 8}" y="{y + 4:.1f}" text-anchor="end">{label}</text>')
    out.append(f'<text x="{LEFT + pw / 2:.1f}" y="{HEIGHT - 12}" text-anchor="middle">{escape(x_label)}</text>')
    out.append(f'<text x="16" y="{TOP + ph / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 16 {TOP + ph / 2:.1f})">{Y_LABELS[scale]}</text>')
    for k, (s, tx, ty) in enumerate(data):
        color = COLORS[k % len(COLORS)]
        if s.markers:
            for x, y in zip(tx, ty):
                out.append(f'<circle cx="{px(x):.1f}" cy="{py(y):.1f}" r="3" fill="{color}"/>')
        elif tx.size:
            pts = " ".join(f"{px(x):.1f},{py(y):.1f}" for x, y in zip(tx, ty))
            out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        ly = TOP + 14 + 16 * k
        lx = LEFT + pw + 12
        if s.markers:
            out.append(f'<circle cx="{lx + 10}" cy="{ly - 4}" r="3" fill="{color}"/>')
        else:
            out.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 20}" y2="{ly - 4}" stroke="{color}" '
                       f'stroke-width="1.5"/>')
        out.append(f'<text x="{lx + 26}" y="{ly}">{escape(s.label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def axis_limits(series: List[Series], scale: str):
    """Transformed ``(x0, x1, y0, y1)`` that :func:`render` would use."""
    data = [_transformed(s, scale) for s in series]
    xs = np.concatenate([d[0] for d in data])
    ys = np.concatenate([d[1] for d in data])
    return (*padded_range(xs), *padded_range(ys))
