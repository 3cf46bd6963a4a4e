"""Minimal static SVG line charts (axes, ticks, legend); no dependencies."""

from __future__ import annotations

import math

_PALETTE = ["#000000", "#555555", "#1f77b4", "#d62728", "#2ca02c",
            "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"]


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    step = (hi - lo) / (count - 1)
    return [lo + i * step for i in range(count)]


def line_chart(x, series: dict, title: str = "", xlabel: str = "",
               ylabel: str = "", width: int = 720, height: int = 480) -> str:
    """Render named y-series over a common x grid; returns SVG text."""
    x = [float(v) for v in x]
    ys = [float(v) for vals in series.values() for v in vals
          if not math.isnan(float(v))]
    x_lo, x_hi = min(x), max(x)
    y_lo, y_hi = (min(ys), max(ys)) if ys else (0.0, 1.0)
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    ml, mr, mt, mb = 64, 150, 36, 48
    pw, ph = width - ml - mr, height - mt - mb

    def sx(v):
        return ml + (v - x_lo) / (x_hi - x_lo or 1.0) * pw

    def sy(v):
        return mt + ph - (v - y_lo) / (y_hi - y_lo) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
           f'height="{height}" viewBox="0 0 {width} {height}">',
           '<rect width="100%" height="100%" fill="white"/>']
    if title:
        out.append(f'<text x="{ml + pw / 2}" y="20" text-anchor="middle" '
                   f'font-size="14">{title}</text>')
    out.append(f'<line x1="{ml}" y1="{mt + ph}" x2="{ml + pw}" y2="{mt + ph}" '
               'stroke="black"/>')
    out.append(f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{mt + ph}" stroke="black"/>')
    for tv in _ticks(x_lo, x_hi):
        px = sx(tv)
        out.append(f'<line x1="{px}" y1="{mt + ph}" x2="{px}" y2="{mt + ph + 5}" '
                   'stroke="black"/>')
        out.append(f'<text x="{px}" y="{mt + ph + 18}" text-anchor="middle" '
                   f'font-size="11">{tv:.3g}</text>')
    for tv in _ticks(y_lo, y_hi):
        py = sy(tv)
        out.append(f'<line x1="{ml - 5}" y1="{py}" x2="{ml}" y2="{py}" stroke="black"/>')
        out.append(f'<text x="{ml - 8}" y="{py + 4}" text-anchor="end" '
                   f'font-size="11">{tv:.3g}</text>')
    if xlabel:
        out.append(f'<text x="{ml + pw / 2}" y="{height - 10}" text-anchor="middle" '
                   f'font-size="12">{xlabel}</text>')
    if ylabel:
        out.append(f'<text x="16" y="{mt + ph / 2}" text-anchor="middle" '
                   f'font-size="12" transform="rotate(-90 16 {mt + ph / 2})">{ylabel}</text>')

    for idx, (name, vals) in enumerate(series.items()):
        color = _PALETTE[idx % len(_PALETTE)]
        pts = " ".join(f"{sx(xv):.2f},{sy(float(yv)):.2f}"
                       for xv, yv in zip(x, vals)
                       if not math.isnan(float(yv)))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                   f'points="{pts}"/>')
        ly = mt + 16 * idx
        out.append(f'<line x1="{ml + pw + 10}" y1="{ly}" x2="{ml + pw + 30}" '
                   f'y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{ml + pw + 35}" y="{ly + 4}" font-size="11">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
