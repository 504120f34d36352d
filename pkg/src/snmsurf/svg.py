"""Minimal deterministic SVG polyline writer."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf")


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def polyline_svg(series, width: int = 480, height: int = 360, margin: int = 30,
                 title: str = "", xlabel: str = "", ylabel: str = "") -> str:
    """One panel with a polyline per ``(label, xs, ys)`` series, all sharing axes."""
    pts = [(x, y) for _, xs, ys in series for x, y in zip(xs, ys)
           if math.isfinite(x) and math.isfinite(y)]
    if not pts:
        raise ValueError("nothing to plot")
    x0, x1 = min(p[0] for p in pts), max(p[0] for p in pts)
    y0, y1 = min(p[1] for p in pts), max(p[1] for p in pts)
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    if y1 == y0:
        y0, y1 = y0 - 1, y1 + 1
    sx = (width - 2 * margin) / (x1 - x0)
    sy = (height - 2 * margin) / (y1 - y0)

    def px(x):
        return margin + (x - x0) * sx

    def py(y):
        return height - margin - (y - y0) * sy

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">',
           f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
           f'<rect x="{margin}" y="{margin}" width="{width - 2 * margin}" '
           f'height="{height - 2 * margin}" fill="none" stroke="#999"/>']
    if title:
        out.append(f'<text x="{width / 2:.1f}" y="{margin / 2 + 5:.1f}" text-anchor="middle" '
                   f'font-size="12">{escape(title)}</text>')
    if xlabel:
        out.append(f'<text x="{width / 2:.1f}" y="{height - 8}" text-anchor="middle" '
                   f'font-size="11">{escape(xlabel)}</text>')
    if ylabel:
        out.append(f'<text x="10" y="{height / 2:.1f}" font-size="11" '
                   f'transform="rotate(-90 10 {height / 2:.1f})">{escape(ylabel)}</text>')
    for k, (label, xs, ys) in enumerate(series):
        coords = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in zip(xs, ys)
                          if math.isfinite(x) and math.isfinite(y))
        color = COLORS[k % len(COLORS)]
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                   f'points="{coords}"><title>{escape(str(label))}</title></polyline>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
