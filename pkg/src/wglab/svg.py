"""Minimal self-contained SVG plots (one figure per file, inline styling)."""

from __future__ import annotations

import math
from html import escape
from typing import Sequence

W, H = 640, 420
LEFT, RIGHT, TOP, BOTTOM = 80, 20, 40, 60
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")


def _fmt(v: float) -> str:
    return f"{v:.4g}"


def _ticks(lo: float, hi: float, n: int = 5) -> list:
    if hi == lo:
        return [lo]
    return [lo + (hi - lo) * k / (n - 1) for k in range(n)]


class _Axes:
    def __init__(self, xs, ys, logx, logy):
        self.logx, self.logy = logx, logy
        tx = [self._tx(v) for v in xs]
        ty = [self._ty(v) for v in ys]
        tx = [v for v in tx if math.isfinite(v)] or [0.0, 1.0]
        ty = [v for v in ty if math.isfinite(v)] or [0.0, 1.0]
        self.x0, self.x1 = min(tx), max(tx)
        self.y0, self.y1 = min(ty), max(ty)
        if self.x1 == self.x0:
            self.x0, self.x1 = self.x0 - 0.5, self.x1 + 0.5
        if self.y1 == self.y0:
            self.y0, self.y1 = self.y0 - 0.5, self.y1 + 0.5
        pad = 0.05 * (self.y1 - self.y0)
        self.y0 -= pad
        self.y1 += pad

    def _tx(self, v):
        return math.log10(v) if self.logx and v > 0 else (v if not self.logx else math.nan)

    def _ty(self, v):
        return math.log10(v) if self.logy and v > 0 else (v if not self.logy else math.nan)

    def px(self, v):
        return LEFT + (self._tx(v) - self.x0) / (self.x1 - self.x0) * (W - LEFT - RIGHT)

    def py(self, v):
        return H - BOTTOM - (self._ty(v) - self.y0) / (self.y1 - self.y0) * (H - TOP - BOTTOM)

    def frame(self, xlabel, ylabel, title):
        out = [f'<rect x="{LEFT}" y="{TOP}" width="{W - LEFT - RIGHT}" height="{H - TOP - BOTTOM}" '
               'fill="none" stroke="#333" stroke-width="1"/>']
        for t in _ticks(self.x0, self.x1):
            x = LEFT + (t - self.x0) / (self.x1 - self.x0) * (W - LEFT - RIGHT)
            lab = _fmt(10 ** t) if self.logx else _fmt(t)
            out.append(f'<line x1="{x:.2f}" y1="{H - BOTTOM}" x2="{x:.2f}" y2="{H - BOTTOM + 5}" stroke="#333"/>')
            out.append(f'<text x="{x:.2f}" y="{H - BOTTOM + 18}" text-anchor="middle" '
                       f'font-size="11" font-family="sans-serif">{lab}</text>')
        for t in _ticks(self.y0, self.y1):
            y = H - BOTTOM - (t - self.y0) / (self.y1 - self.y0) * (H - TOP - BOTTOM)
            lab = _fmt(10 ** t) if self.logy else _fmt(t)
            out.append(f'<line x1="{LEFT - 5}" y1="{y:.2f}" x2="{LEFT}" y2="{y:.2f}" stroke="#333"/>')
            out.append(f'<text x="{LEFT - 8}" y="{y + 4:.2f}" text-anchor="end" '
                       f'font-size="11" font-family="sans-serif">{lab}</text>')
        out.append(f'<text x="{(LEFT + W - RIGHT) / 2}" y="{H - 15}" text-anchor="middle" '
                   f'font-size="13" font-family="sans-serif">{escape(xlabel)}</text>')
        out.append(f'<text x="18" y="{(TOP + H - BOTTOM) / 2}" text-anchor="middle" font-size="13" '
                   f'font-family="sans-serif" transform="rotate(-90 18 {(TOP + H - BOTTOM) / 2})">'
                   f'{escape(ylabel)}</text>')
        out.append(f'<text x="{W / 2}" y="24" text-anchor="middle" font-size="14" '
                   f'font-family="sans-serif">{escape(title)}</text>')
        return out


def _document(body: list) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
            f'viewBox="0 0 {W} {H}">\n<rect width="{W}" height="{H}" fill="white"/>\n')
    return head + "\n".join(body) + "\n</svg>\n"


def line_plot(x: Sequence[float], series: dict, *, xlabel: str, ylabel: str, title: str,
              logx: bool = False, logy: bool = False, hline: float = None) -> str:
    """Polyline per entry of ``series`` (label -> y values) with markers and a legend."""
    ys = [v for vals in series.values() for v in vals]
    if hline is not None:
        ys.append(hline)
    ax = _Axes(list(x), ys, logx, logy)
    body = ax.frame(xlabel, ylabel, title)
    if hline is not None and math.isfinite(ax._ty(hline)):
        y = ax.py(hline)
        body.append(f'<line x1="{LEFT}" y1="{y:.2f}" x2="{W - RIGHT}" y2="{y:.2f}" '
                    'stroke="#888" stroke-dasharray="4 3"/>')
    for k, (label, vals) in enumerate(series.items()):
        color = COLORS[k % len(COLORS)]
        pts = [(ax.px(a), ax.py(b)) for a, b in zip(x, vals)]
        pts = [(a, b) for a, b in pts if math.isfinite(a) and math.isfinite(b)]
        if len(pts) > 1:
            path = " ".join(f"{a:.2f},{b:.2f}" for a, b in pts)
            body.append(f'<polyline points="{path}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        for a, b in pts:
            body.append(f'<circle cx="{a:.2f}" cy="{b:.2f}" r="3" fill="{color}"/>')
        ly = TOP + 16 + 16 * k
        body.append(f'<rect x="{W - RIGHT - 150}" y="{ly - 9}" width="10" height="10" fill="{color}"/>')
        body.append(f'<text x="{W - RIGHT - 135}" y="{ly}" font-size="11" '
                    f'font-family="sans-serif">{escape(label)}</text>')
    return _document(body)


def heatmap(x: Sequence[float], y: Sequence[float], z: Sequence[Sequence[float]], *,
            xlabel: str, ylabel: str, title: str) -> str:
    """Cells coloured blue (negative) to red (positive); ``z[i][j]`` belongs to ``(x[i], y[j])``."""
    ax = _Axes(list(range(len(x))) + [len(x) - 0.5, -0.5], list(range(len(y))) + [len(y) - 0.5, -0.5],
               False, False)
    ax.y0, ax.y1 = -0.5, len(y) - 0.5
    body = [f'<rect x="{LEFT}" y="{TOP}" width="{W - LEFT - RIGHT}" height="{H - TOP - BOTTOM}" '
            'fill="none" stroke="#333"/>']
    flat = [v for row in z for v in row if v is not None and math.isfinite(v)]
    scale = max((abs(v) for v in flat), default=1.0) or 1.0
    cw = (W - LEFT - RIGHT) / len(x)
    ch = (H - TOP - BOTTOM) / len(y)
    for i, row in enumerate(z):
        for j, v in enumerate(row):
            if v is None or not math.isfinite(v):
                fill = "#cccccc"
            else:
                t = v / scale
                r, b = (255, int(255 * (1 - t))) if t > 0 else (int(255 * (1 + t)), 255)
                g = int(255 * (1 - abs(t)))
                fill = f"#{r:02x}{g:02x}{b:02x}"
            body.append(f'<rect x="{LEFT + i * cw:.2f}" y="{H - BOTTOM - (j + 1) * ch:.2f}" '
                        f'width="{cw:.2f}" height="{ch:.2f}" fill="{fill}"/>')
    for i, v in enumerate(x):
        body.append(f'<text x="{LEFT + (i + 0.5) * cw:.2f}" y="{H - BOTTOM + 18}" text-anchor="middle" '
                    f'font-size="10" font-family="sans-serif">{_fmt(v)}</text>')
    for j, v in enumerate(y):
        body.append(f'<text x="{LEFT - 8}" y="{H - BOTTOM - (j + 0.5) * ch + 4:.2f}" text-anchor="end" '
                    f'font-size="10" font-family="sans-serif">{_fmt(v)}</text>')
    body.append(f'<text x="{(LEFT + W - RIGHT) / 2}" y="{H - 15}" text-anchor="middle" '
                f'font-size="13" font-family="sans-serif">{escape(xlabel)}</text>')
    body.append(f'<text x="18" y="{(TOP + H - BOTTOM) / 2}" text-anchor="middle" font-size="13" '
                f'font-family="sans-serif" transform="rotate(-90 18 {(TOP + H - BOTTOM) / 2})">'
                f'{escape(ylabel)}</text>')
    body.append(f'<text x="{W / 2}" y="24" text-anchor="middle" font-size="14" '
                f'font-family="sans-serif">{escape(title)} (colour scale +-{_fmt(scale)})</text>')
    return _document(body)
