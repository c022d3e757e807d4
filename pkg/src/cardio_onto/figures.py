"""Grouped bar charts as plain SVG text (one chart per metric)."""
from __future__ import annotations

from xml.sax.saxutils import escape

WIDTH = 720
HEIGHT = 400
MARGIN_LEFT = 60
MARGIN_RIGHT = 20
MARGIN_TOP = 50
MARGIN_BOTTOM = 70
COLORS = ("#4472c4", "#ed7d31", "#a5a5a5", "#70ad47")
TITLES = {"accuracy": "Accuracy", "precision": "Precision", "recall": "Recall", "f_measure": "F-Measure"}


def _num(x: float) -> str:
    return f"{x:.2f}"


def bar_chart_svg(metric: str, groups, series, values, comments=()) -> str:
    """Render ``values[g][s]`` (floats in [0, 1], or None) as grouped bars.

    ``groups`` label the x axis, ``series`` the bars inside a group.
    """
    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    base_y = MARGIN_TOP + plot_h
    title = TITLES.get(metric, metric)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
    ]
    if comments:
        out.append("<metadata>")
        out.extend(escape(c) for c in comments)
        out.append("</metadata>")
    out.append(f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>')
    out.append(f'<text x="{WIDTH / 2:.2f}" y="28" text-anchor="middle" font-family="sans-serif" '
               f'font-size="18">Comparison results of {escape(title.lower())}</text>')
    for tick in range(0, 11, 2):
        y = base_y - plot_h * tick / 10
        out.append(f'<line x1="{MARGIN_LEFT}" y1="{_num(y)}" x2="{WIDTH - MARGIN_RIGHT}" '
                   f'y2="{_num(y)}" stroke="#dddddd"/>')
        out.append(f'<text x="{MARGIN_LEFT - 6}" y="{_num(y + 4)}" text-anchor="end" '
                   f'font-family="sans-serif" font-size="11">{tick / 10:.1f}</text>')
    n = max(len(groups), 1)
    group_w = plot_w / n
    bar_w = group_w * 0.8 / max(len(series), 1)
    for g, label in enumerate(groups):
        x0 = MARGIN_LEFT + g * group_w + group_w * 0.1
        for s, _ in enumerate(series):
            v = values[g][s]
            if v is None:
                continue
            h = plot_h * v
            x = x0 + s * bar_w
            out.append(f'<rect class="bar" x="{_num(x)}" y="{_num(base_y - h)}" width="{_num(bar_w)}" '
                       f'height="{_num(h)}" fill="{COLORS[s % len(COLORS)]}"/>')
            out.append(f'<text x="{_num(x + bar_w / 2)}" y="{_num(base_y - h - 3)}" '
                       f'text-anchor="middle" font-family="sans-serif" font-size="9">{v:.3f}</text>')
        out.append(f'<text class="group" x="{_num(x0 + group_w * 0.4)}" y="{base_y + 16}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="12">{escape(label)}</text>')
    out.append(f'<line x1="{MARGIN_LEFT}" y1="{base_y}" x2="{WIDTH - MARGIN_RIGHT}" y2="{base_y}" '
               f'stroke="#000000"/>')
    for s, name in enumerate(series):
        x = MARGIN_LEFT + s * 140
        y = HEIGHT - 22
        out.append(f'<rect x="{x}" y="{y - 10}" width="12" height="12" fill="{COLORS[s % len(COLORS)]}"/>')
        out.append(f'<text x="{x + 18}" y="{y}" font-family="sans-serif" font-size="12">'
                   f'{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def charts_from_table(header, rows, comments=()) -> dict:
    """SVG text per metric from the cells of a comparison table."""
    from .metrics import METRICS, pretty_protocol

    charts = {}
    groups = [r[0] for r in rows]
    for metric in METRICS:
        cols = [(i, h[len(metric) + 1:]) for i, h in enumerate(header)
                if h.startswith(metric + "_") and h[len(metric) + 1:].startswith(("folds", "split"))]
        series = [pretty_protocol(p) for _, p in cols]
        values = []
        for r in rows:
            vals = []
            for i, _ in cols:
                cell = r[i]
                vals.append(float(cell) if cell not in ("", "undefined") else None)
            values.append(vals)
        charts[metric] = bar_chart_svg(metric, groups, series, values, comments)
    return charts
