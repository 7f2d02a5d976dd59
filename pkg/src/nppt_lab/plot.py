"""Minimal SVG 1.1 line plots for scan CSVs (no plotting library needed)."""

from __future__ import annotations

from xml.sax.saxutils import escape

WIDTH, HEIGHT = 640, 420
LEFT, RIGHT, TOP, BOTTOM = 70, 20, 20, 60
COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"]


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi == lo:
        return [lo]
    return [lo + (hi - lo) * k / (count - 1) for k in range(count)]


def _span(values: list[float]) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    if lo == hi:
        pad = abs(lo) * 0.1 or 1.0
        return lo - pad, hi + pad
    return lo, hi


def render_svg(x_label: str, xs: list[float], series: dict[str, list[tuple[float, float]]]) -> str:
    """Render one polyline per series; a series with a single point becomes a marker."""
    all_x = [p[0] for pts in series.values() for p in pts] or list(xs) or [0.0]
    all_y = [p[1] for pts in series.values() for p in pts] or [0.0]
    x0, x1 = _span(all_x)
    y0, y1 = _span(all_y)
    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM

    def sx(x):
        return LEFT + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return TOP + (1 - (y - y0) / (y1 - y0)) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        '<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN" '
        '"http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<line x1="{LEFT}" y1="{TOP + ph}" x2="{LEFT + pw}" y2="{TOP + ph}" stroke="black"/>',
        f'<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{TOP + ph}" stroke="black"/>',
    ]
    for t in _ticks(x0, x1):
        out.append(
            f'<text x="{sx(t):.2f}" y="{TOP + ph + 18}" font-size="11" '
            f'text-anchor="middle">{t:.4g}</text>'
        )
    for t in _ticks(y0, y1):
        out.append(
            f'<text x="{LEFT - 6}" y="{sy(t) + 4:.2f}" font-size="11" '
            f'text-anchor="end">{t:.4g}</text>'
        )
    if y0 < 0 < y1:
        out.append(
            f'<line x1="{LEFT}" y1="{sy(0):.2f}" x2="{LEFT + pw}" y2="{sy(0):.2f}" '
            'stroke="gray" stroke-dasharray="4,3"/>'
        )
    out.append(
        f'<text x="{LEFT + pw / 2:.2f}" y="{HEIGHT - 15}" font-size="13" '
        f'text-anchor="middle">{escape(x_label)}</text>'
    )
    y_label = ", ".join(series)
    out.append(
        f'<text x="16" y="{TOP + ph / 2:.2f}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 16 {TOP + ph / 2:.2f})">{escape(y_label)}</text>'
    )
    for k, (name, pts) in enumerate(series.items()):
        color = COLORS[k % len(COLORS)]
        if len(pts) == 1:
            x, y = pts[0]
            out.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="4" fill="{color}"/>')
        elif pts:
            coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
            out.append(
                f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>'
            )
        out.append(
            f'<text x="{LEFT + pw - 4}" y="{TOP + 14 + 14 * k}" font-size="11" '
            f'text-anchor="end" fill="{color}">{escape(name)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
