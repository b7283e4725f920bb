"""A small self-contained SVG line-chart writer (linear or log axes)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence, Tuple
from xml.sax.saxutils import escape

from .numerics import DomainError

__all__ = ["Series", "line_chart", "write_chart"]

WIDTH, HEIGHT = 720, 480
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 80, 200, 30, 60
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
           "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")
DASHES = ("", "6,3", "2,3", "8,3,2,3")


@dataclass(frozen=True)
class Series:
    label: str
    x: Tuple[float, ...]
    y: Tuple[float, ...]


def _usable(v, log):
    return math.isfinite(v) and (v > 0 or not log)


def _ticks(lo, hi, log) -> List[float]:
    if log:
        a, b = math.floor(math.log10(lo)), math.ceil(math.log10(hi))
        step = max(1, math.ceil((b - a) / 8))
        return [10.0 ** e for e in range(a, b + 1, step)]
    span = hi - lo
    raw = span / 6 if span > 0 else 1.0
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=mag)
    start = math.ceil(lo / step) * step
    return [start + i * step for i in range(int((hi - start) / step + 1e-9) + 1)]


def _range(values, log):
    lo, hi = min(values), max(values)
    if log:
        lo, hi = 10 ** math.floor(math.log10(lo)), 10 ** math.ceil(math.log10(hi))
        if lo == hi:
            lo, hi = lo / 10, hi * 10
    elif lo == hi:
        lo, hi = lo - 1, hi + 1
    return lo, hi


def _label(v):
    return f"{v:g}"


def line_chart(series: Sequence[Series], x_log=True, y_log=True, x_label="", y_label="",
               title="") -> str:
    """SVG document text for the given curves.

    Points that are non-finite, or nonpositive on a log axis, are dropped.
    """
    pts = [[(x, y) for x, y in zip(s.x, s.y) if _usable(x, x_log) and _usable(y, y_log)]
           for s in series]
    xs = [p[0] for ps in pts for p in ps]
    ys = [p[1] for ps in pts for p in ps]
    if not xs:
        raise DomainError("nothing to plot")
    x0, x1 = _range(xs, x_log)
    y0, y1 = _range(ys, y_log)
    pw, ph = WIDTH - MARGIN_L - MARGIN_R, HEIGHT - MARGIN_T - MARGIN_B

    def tx(v):
        f = (math.log10(v) - math.log10(x0)) / (math.log10(x1) - math.log10(x0)) if x_log \
            else (v - x0) / (x1 - x0)
        return MARGIN_L + f * pw

    def ty(v):
        f = (math.log10(v) - math.log10(y0)) / (math.log10(y1) - math.log10(y0)) if y_log \
            else (v - y0) / (y1 - y0)
        return MARGIN_T + (1 - f) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
           f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
           f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
           f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>']
    for v in _ticks(x0, x1, x_log):
        if x0 <= v <= x1 * (1 + 1e-12):
            X = tx(v)
            out.append(f'<line x1="{X:.2f}" y1="{MARGIN_T}" x2="{X:.2f}" y2="{MARGIN_T + ph}" stroke="#ddd"/>')
            out.append(f'<text x="{X:.2f}" y="{MARGIN_T + ph + 16}" text-anchor="middle">{_label(v)}</text>')
    for v in _ticks(y0, y1, y_log):
        if y0 <= v <= y1 * (1 + 1e-12):
            Y = ty(v)
            out.append(f'<line x1="{MARGIN_L}" y1="{Y:.2f}" x2="{MARGIN_L + pw}" y2="{Y:.2f}" stroke="#ddd"/>')
            out.append(f'<text x="{MARGIN_L - 6}" y="{Y + 4:.2f}" text-anchor="end">{_label(v)}</text>')
    out.append(f'<text x="{MARGIN_L + pw / 2}" y="{HEIGHT - 15}" text-anchor="middle">{escape(x_label)}</text>')
    out.append(f'<text x="18" y="{MARGIN_T + ph / 2}" text-anchor="middle" '
               f'transform="rotate(-90 18 {MARGIN_T + ph / 2})">{escape(y_label)}</text>')
    if title:
        out.append(f'<text x="{MARGIN_L + pw / 2}" y="{MARGIN_T - 10}" text-anchor="middle">{escape(title)}</text>')
    for i, (s, ps) in enumerate(zip(series, pts)):
        color = PALETTE[i % len(PALETTE)]
        dash = DASHES[(i // len(PALETTE)) % len(DASHES)]
        style = f' stroke-dasharray="{dash}"' if dash else ""
        if ps:
            coords = " ".join(f"{tx(x):.2f},{ty(y):.2f}" for x, y in ps)
            out.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"{style}/>')
        ly = MARGIN_T + 14 + 18 * i
        lx = MARGIN_L + pw + 12
        out.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 24}" y2="{ly - 4}" stroke="{color}" stroke-width="1.5"{style}/>')
        out.append(f'<text x="{lx + 30}" y="{ly}">{escape(s.label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_chart(path, series: Sequence[Series], **kwargs) -> None:
    with open(Path(path), "w", newline="\n") as fh:
        fh.write(line_chart(series, **kwargs))
