"""Static factor maps as plain SVG 1.1."""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

from .errors import NotEnoughAxes
from .tables import Decomposition

WIDTH, HEIGHT, MARGIN = 640, 640, 60
ROW_COLOR, COL_COLOR = "#1f4e9c", "#b8322a"


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _scale(lo, hi, a, b):
    if hi - lo <= 0:
        lo, hi = lo - 1.0, hi + 1.0
    return lambda x: a + (x - lo) * (b - a) / (hi - lo)


def render_map(d: Decomposition, axes=(1, 2)) -> str:
    """SVG scatter of row points (f) and column points (g).

    ``axes`` is a 1-based pair, or a single axis for a strip plot.
    """
    axes = tuple(int(a) for a in np.atleast_1d(axes))
    if len(axes) not in (1, 2) or min(axes) < 1:
        raise ValueError(f"axes must be one or two 1-based indices, got {axes}")
    if max(axes) > len(d.axes):
        raise NotEnoughAxes(
            f"map needs axis {max(axes)} but the decomposition has {len(d.axes)}"
        )
    F, G = d.row_coordinates, d.col_coordinates
    pct = d.percentages()
    t = d.source
    points = [(lab, F[i], ROW_COLOR) for i, lab in enumerate(t.row_labels)]
    points += [(lab, G[j], COL_COLOR) for j, lab in enumerate(t.col_labels)]

    ax = [a - 1 for a in axes]
    xs = np.array([p[1][ax[0]] for p in points])
    if len(ax) == 2:
        ys = np.array([p[1][ax[1]] for p in points])
    else:
        ys = np.zeros_like(xs)
    # equal aspect ratio around the origin
    span = max(np.abs(xs).max(), np.abs(ys).max(), 1e-300) * 1.1
    sx = _scale(-span, span, MARGIN, WIDTH - MARGIN)
    sy = _scale(-span, span, HEIGHT - MARGIN, MARGIN)

    title = {"svd": "dispersion", "taxicab": "taxicab dispersion"}[d.method]
    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<line x1="{MARGIN}" y1="{_fmt(sy(0))}" x2="{WIDTH - MARGIN}" y2="{_fmt(sy(0))}" '
        'stroke="#888" stroke-dasharray="4,3"/>',
    ]
    if len(ax) == 2:
        out.append(
            f'<line x1="{_fmt(sx(0))}" y1="{MARGIN}" x2="{_fmt(sx(0))}" y2="{HEIGHT - MARGIN}" '
            'stroke="#888" stroke-dasharray="4,3"/>'
        )
    out.append(
        f'<text x="{WIDTH // 2}" y="{HEIGHT - 15}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">Axis {axes[0]} '
        f'({_fmt(pct[ax[0]])}% {title})</text>'
    )
    if len(ax) == 2:
        out.append(
            f'<text x="20" y="{HEIGHT // 2}" text-anchor="middle" font-family="sans-serif" '
            f'font-size="14" transform="rotate(-90 20 {HEIGHT // 2})">Axis {axes[1]} '
            f'({_fmt(pct[ax[1]])}% {title})</text>'
        )
    for (label, _, color), x, y in zip(points, xs, ys):
        px, py = _fmt(sx(x)), _fmt(sy(y))
        marker = "circle" if color == ROW_COLOR else "rect"
        if marker == "circle":
            out.append(f'<circle cx="{px}" cy="{py}" r="3" fill="{color}"/>')
        else:
            out.append(
                f'<rect x="{_fmt(sx(x) - 3)}" y="{_fmt(sy(y) - 3)}" width="6" height="6" '
                f'fill="{color}"/>'
            )
        out.append(
            f'<text x="{_fmt(sx(x) + 5)}" y="{_fmt(sy(y) - 5)}" font-family="sans-serif" '
            f'font-size="11" fill="{color}">{escape(label)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_map(d: Decomposition, axes, path) -> None:
    svg = render_map(d, axes)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(svg)
