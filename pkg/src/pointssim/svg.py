"""Minimal SVG scatter and histogram panels, written as plain text."""
from __future__ import annotations

import math
from html import escape

import numpy as np

PANEL_W = 260
PANEL_H = 220
_PAD_L, _PAD_R, _PAD_T, _PAD_B = 44, 12, 26, 34
COLORS = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b")


def _fmt(v: float) -> str:
    if v == 0:
        return "0"
    if abs(v) >= 1e4 or abs(v) < 1e-3:
        return f"{v:.2g}"
    return f"{v:.3g}"


def _bounds(lo: float, hi: float) -> tuple[float, float]:
    if not (math.isfinite(lo) and math.isfinite(hi)):
        return 0.0, 1.0
    if hi <= lo:
        pad = abs(lo) * 0.05 or 0.5
        return lo - pad, hi + pad
    pad = (hi - lo) * 0.05
    return lo - pad, hi + pad


class _Axes:
    def __init__(self, x0, y0, xlim, ylim):
        self.x0, self.y0 = x0, y0
        self.xlim, self.ylim = xlim, ylim
        self.w = PANEL_W - _PAD_L - _PAD_R
        self.h = PANEL_H - _PAD_T - _PAD_B

    def px(self, x):
        lo, hi = self.xlim
        return self.x0 + _PAD_L + (x - lo) / (hi - lo) * self.w

    def py(self, y):
        lo, hi = self.ylim
        return self.y0 + _PAD_T + self.h - (y - lo) / (hi - lo) * self.h

    def frame(self, title, xlabel, ylabel):
        x, y = self.x0 + _PAD_L, self.y0 + _PAD_T
        out = [f'<rect x="{x:.1f}" y="{y:.1f}" width="{self.w}" height="{self.h}" '
               f'fill="none" stroke="#444"/>',
               f'<text x="{self.x0 + PANEL_W / 2:.1f}" y="{self.y0 + 16:.1f}" '
               f'text-anchor="middle" font-size="11">{escape(title)}</text>',
               f'<text x="{x + self.w / 2:.1f}" y="{self.y0 + PANEL_H - 4:.1f}" '
               f'text-anchor="middle" font-size="10">{escape(xlabel)}</text>',
               f'<text x="{self.x0 + 10:.1f}" y="{y + self.h / 2:.1f}" font-size="10" '
               f'text-anchor="middle" transform="rotate(-90 {self.x0 + 10:.1f} {y + self.h / 2:.1f})">'
               f'{escape(ylabel)}</text>']
        for v in self.xlim:
            out.append(f'<text x="{self.px(v):.1f}" y="{y + self.h + 12:.1f}" font-size="8" '
                       f'text-anchor="middle">{_fmt(v)}</text>')
        for v in self.ylim:
            out.append(f'<text x="{x - 3:.1f}" y="{self.py(v) + 3:.1f}" font-size="8" '
                       f'text-anchor="end">{_fmt(v)}</text>')
        return out


def scatter_panel(x0, y0, xs, ys, title="", xlabel="", ylabel="", identity=False, color=COLORS[0]):
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    both = np.concatenate([xs, ys]) if identity else None
    if identity and both.size:
        lim = _bounds(float(both.min()), float(both.max()))
        xlim = ylim = lim
    else:
        xlim = _bounds(float(xs.min()), float(xs.max())) if xs.size else (0.0, 1.0)
        ylim = _bounds(float(ys.min()), float(ys.max())) if ys.size else (0.0, 1.0)
    ax = _Axes(x0, y0, xlim, ylim)
    out = ax.frame(title, xlabel, ylabel)
    if identity:
        lo, hi = xlim
        out.append(f'<line x1="{ax.px(lo):.1f}" y1="{ax.py(lo):.1f}" x2="{ax.px(hi):.1f}" '
                   f'y2="{ax.py(hi):.1f}" stroke="#999" stroke-dasharray="4 3"/>')
    for x, y in zip(xs, ys):
        out.append(f'<circle cx="{ax.px(x):.1f}" cy="{ax.py(y):.1f}" r="2.5" '
                   f'fill="{color}" fill-opacity="0.7"/>')
    return out


def histogram_panel(x0, y0, values, bins=20, title="", xlabel="", color=COLORS[0], note=None):
    values = np.asarray(values, dtype=float)
    values = values[np.isfinite(values)]
    if values.size:
        lo, hi = float(values.min()), float(values.max())
        if hi <= lo:
            lo, hi = _bounds(lo, hi)
        counts, edges = np.histogram(values, bins=bins, range=(lo, hi))
    else:
        counts, edges = np.zeros(bins, dtype=int), np.linspace(0.0, 1.0, bins + 1)
    ax = _Axes(x0, y0, (float(edges[0]), float(edges[-1])), (0.0, float(max(counts.max(), 1))))
    out = ax.frame(title, xlabel, "count")
    for c, a, b in zip(counts, edges[:-1], edges[1:]):
        if c == 0:
            continue
        top = ax.py(c)
        out.append(f'<rect x="{ax.px(a):.1f}" y="{top:.1f}" width="{max(ax.px(b) - ax.px(a) - 0.5, 0.5):.1f}" '
                   f'height="{ax.py(0) - top:.1f}" fill="{color}"/>')
    if note:
        out.append(f'<text x="{ax.x0 + PANEL_W - _PAD_R - 2:.1f}" y="{ax.y0 + _PAD_T + 10:.1f}" '
                   f'font-size="8" text-anchor="end">{escape(note)}</text>')
    return out


def text_panel(x0, y0, title, message):
    return [f'<text x="{x0 + PANEL_W / 2:.1f}" y="{y0 + 16:.1f}" text-anchor="middle" '
            f'font-size="11">{escape(title)}</text>',
            f'<text x="{x0 + PANEL_W / 2:.1f}" y="{y0 + PANEL_H / 2:.1f}" text-anchor="middle" '
            f'font-size="12" fill="#888">{escape(message)}</text>']


def document(panels, ncols: int) -> str:
    """Lay out panel builders on a grid.

    ``panels`` is a list of callables ``f(x0, y0) -> list[str]``.
    """
    ncols = max(1, ncols)
    nrows = max(1, math.ceil(len(panels) / ncols))
    width, height = ncols * PANEL_W, nrows * PANEL_H
    body = []
    for k, make in enumerate(panels):
        body.extend(make((k % ncols) * PANEL_W, (k // ncols) * PANEL_H))
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}" font-family="sans-serif">\n'
            f'<rect width="100%" height="100%" fill="white"/>\n'
            + "\n".join(body) + "\n</svg>\n")
