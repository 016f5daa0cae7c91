"""Hand-rolled static SVG line charts; no plotting dependency.

Charts are for human inspection, so the tests only assert structure (element
counts and point counts), never pixels.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"]


def _escape(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
            .replace('"', "&quot;"))


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi == lo:
        hi = lo + 1.0
    return list(np.linspace(lo, hi, count))


def _polyline(xs, ys, color: str, width: float = 1.5) -> str:
    points = " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(xs, ys))
    return f'<polyline fill="none" stroke="{color}" stroke-width="{width}" points="{points}"/>'


def line_chart(series: list[tuple[str, np.ndarray]], title: str, path,
               x_values=None, width: int = 900, height: int = 420) -> Path:
    """One panel, one polyline per (label, values) pair, axes and legend."""
    if not series:
        raise ValueError("nothing to plot")
    margin_l, margin_r, margin_t, margin_b = 70, 160, 50, 50
    plot_w = width - margin_l - margin_r
    plot_h = height - margin_t - margin_b
    ys_all = np.concatenate([np.asarray(v, dtype=float) for _, v in series])
    y_lo, y_hi = float(ys_all.min()), float(ys_all.max())
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    n = max(len(v) for _, v in series)
    xs = np.asarray(x_values, dtype=float) if x_values is not None else np.arange(n, dtype=float)
    x_lo = float(xs.min())
    x_hi = float(xs.max())
    if x_hi == x_lo:
        x_hi = x_lo + 1.0

    def px(x):
        return margin_l + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y):
        return margin_t + (y_hi - y) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.0f}" y="24" text-anchor="middle" font-size="16">{_escape(title)}</text>',
        f'<line x1="{margin_l}" y1="{margin_t}" x2="{margin_l}" y2="{margin_t + plot_h}" stroke="black"/>',
        f'<line x1="{margin_l}" y1="{margin_t + plot_h}" x2="{margin_l + plot_w}" '
        f'y2="{margin_t + plot_h}" stroke="black"/>',
    ]
    for tick in _ticks(y_lo, y_hi):
        parts.append(f'<text x="{margin_l - 8}" y="{py(tick) + 4:.1f}" text-anchor="end" '
                     f'font-size="11">{tick:.4g}</text>')
        parts.append(f'<line x1="{margin_l - 4}" y1="{py(tick):.1f}" x2="{margin_l}" '
                     f'y2="{py(tick):.1f}" stroke="black"/>')
    for tick in _ticks(x_lo, x_hi):
        parts.append(f'<text x="{px(tick):.1f}" y="{margin_t + plot_h + 18}" text-anchor="middle" '
                     f'font-size="11">{tick:.4g}</text>')
        parts.append(f'<line x1="{px(tick):.1f}" y1="{margin_t + plot_h}" x2="{px(tick):.1f}" '
                     f'y2="{margin_t + plot_h + 4}" stroke="black"/>')
    for i, (label, values) in enumerate(series):
        values = np.asarray(values, dtype=float)
        color = PALETTE[i % len(PALETTE)]
        sub_x = xs[:len(values)]
        parts.append(_polyline([px(x) for x in sub_x], [py(v) for v in values], color))
        legend_y = margin_t + 16 * i + 10
        parts.append(f'<line x1="{margin_l + plot_w + 10}" y1="{legend_y}" '
                     f'x2="{margin_l + plot_w + 30}" y2="{legend_y}" stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{margin_l + plot_w + 36}" y="{legend_y + 4}" '
                     f'font-size="12">{_escape(label)}</text>')
    parts.append("</svg>")
    out = Path(path)
    out.write_text("\n".join(parts), encoding="utf-8")
    return out


def panel_chart(rows: list[tuple[str, np.ndarray]], title: str, path,
                width: int = 900, panel_height: int = 110) -> Path:
    """Stacked mini-panels, one per row; the usual decomposition layout."""
    if not rows:
        raise ValueError("nothing to plot")
    margin_l, margin_r, margin_t, gap = 70, 30, 50, 14
    plot_w = width - margin_l - margin_r
    height = margin_t + len(rows) * (panel_height + gap) + 30
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.0f}" y="24" text-anchor="middle" font-size="16">{_escape(title)}</text>',
    ]
    for i, (label, values) in enumerate(rows):
        values = np.asarray(values, dtype=float)
        top = margin_t + i * (panel_height + gap)
        lo, hi = float(values.min()), float(values.max())
        if hi == lo:
            hi = lo + 1.0
        xs = margin_l + np.arange(values.size) / max(values.size - 1, 1) * plot_w
        ys = top + (hi - values) / (hi - lo) * panel_height
        color = PALETTE[i % len(PALETTE)]
        parts.append(f'<rect x="{margin_l}" y="{top}" width="{plot_w}" height="{panel_height}" '
                     f'fill="none" stroke="#cccccc"/>')
        parts.append(_polyline(xs, ys, color, width=1.2))
        parts.append(f'<text x="{margin_l - 8}" y="{top + panel_height / 2:.0f}" text-anchor="end" '
                     f'font-size="12">{_escape(label)}</text>')
    parts.append("</svg>")
    out = Path(path)
    out.write_text("\n".join(parts), encoding="utf-8")
    return out
