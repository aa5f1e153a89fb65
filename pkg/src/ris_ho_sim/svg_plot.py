"""Minimal static SVG rendering for experiment artifacts.

Hand-rolled on purpose: charts must be byte-reproducible pure functions of
the CSV data they visualize, so nothing here depends on fonts, locales,
timestamps, or an external plotting stack. Coordinates are formatted with a
fixed precision.
"""

from __future__ import annotations

import math

_WIDTH = 800
_HEIGHT = 480
_MARGIN_L = 70
_MARGIN_R = 20
_MARGIN_T = 36
_MARGIN_B = 52

_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
            "#8c564b", "#17becf", "#7f7f7f"]


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _nice_ticks(lo: float, hi: float, n: int = 5):
    if hi <= lo:
        hi = lo + 1.0
    span = hi - lo
    raw = span / max(n, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-12 * span:
        ticks.append(0.0 if abs(t) < 1e-12 * span else t)
        t += step
    return ticks


def _tick_label(v: float) -> str:
    if v == 0:
        return "0"
    if abs(v) >= 1e4 or abs(v) < 1e-3:
        return f"{v:.1e}"
    return f"{v:g}"


class _Axes:
    def __init__(self, x_lo, x_hi, y_lo, y_hi, log_x=False, log_y=False):
        self.log_x, self.log_y = log_x, log_y
        self.x_lo = math.log10(x_lo) if log_x else x_lo
        self.x_hi = math.log10(x_hi) if log_x else x_hi
        self.y_lo = math.log10(y_lo) if log_y else y_lo
        self.y_hi = math.log10(y_hi) if log_y else y_hi
        if self.x_hi == self.x_lo:
            self.x_hi += 1.0
        if self.y_hi == self.y_lo:
            self.y_hi += 1.0

    def px(self, x):
        if self.log_x:
            x = math.log10(max(x, 1e-300))
        frac = (x - self.x_lo) / (self.x_hi - self.x_lo)
        return _MARGIN_L + frac * (_WIDTH - _MARGIN_L - _MARGIN_R)

    def py(self, y):
        if self.log_y:
            y = math.log10(max(y, 1e-300))
        frac = (y - self.y_lo) / (self.y_hi - self.y_lo)
        return _HEIGHT - _MARGIN_B - frac * (_HEIGHT - _MARGIN_T - _MARGIN_B)

    def x_ticks(self):
        if self.log_x:
            return [10.0 ** e for e in
                    range(math.ceil(self.x_lo), math.floor(self.x_hi) + 1)]
        return _nice_ticks(self.x_lo, self.x_hi)

    def y_ticks(self):
        if self.log_y:
            return [10.0 ** e for e in
                    range(math.ceil(self.y_lo), math.floor(self.y_hi) + 1)]
        return _nice_ticks(self.y_lo, self.y_hi)


def _frame(ax: _Axes, title: str, x_label: str, y_label: str):
    parts = [
        f'<rect x="{_MARGIN_L}" y="{_MARGIN_T}" '
        f'width="{_WIDTH - _MARGIN_L - _MARGIN_R}" '
        f'height="{_HEIGHT - _MARGIN_T - _MARGIN_B}" '
        'fill="none" stroke="#333333" stroke-width="1"/>',
        f'<text x="{_WIDTH // 2}" y="{_MARGIN_T - 12}" text-anchor="middle" '
        f'font-size="15" fill="#111111">{title}</text>',
        f'<text x="{_WIDTH // 2}" y="{_HEIGHT - 10}" text-anchor="middle" '
        f'font-size="13" fill="#111111">{x_label}</text>',
        f'<text x="16" y="{_HEIGHT // 2}" text-anchor="middle" font-size="13" '
        f'fill="#111111" transform="rotate(-90 16 {_HEIGHT // 2})">{y_label}</text>',
    ]
    for t in ax.x_ticks():
        x = ax.px(t)
        if x < _MARGIN_L - 0.5 or x > _WIDTH - _MARGIN_R + 0.5:
            continue
        parts.append(f'<line x1="{_fmt(x)}" y1="{_HEIGHT - _MARGIN_B}" '
                     f'x2="{_fmt(x)}" y2="{_HEIGHT - _MARGIN_B + 5}" '
                     'stroke="#333333"/>')
        parts.append(f'<text x="{_fmt(x)}" y="{_HEIGHT - _MARGIN_B + 20}" '
                     f'text-anchor="middle" font-size="11" fill="#111111">'
                     f'{_tick_label(t)}</text>')
    for t in ax.y_ticks():
        y = ax.py(t)
        if y < _MARGIN_T - 0.5 or y > _HEIGHT - _MARGIN_B + 0.5:
            continue
        parts.append(f'<line x1="{_MARGIN_L - 5}" y1="{_fmt(y)}" '
                     f'x2="{_MARGIN_L}" y2="{_fmt(y)}" stroke="#333333"/>')
        parts.append(f'<text x="{_MARGIN_L - 8}" y="{_fmt(y + 4)}" '
                     f'text-anchor="end" font-size="11" fill="#111111">'
                     f'{_tick_label(t)}</text>')
    return parts


def line_chart(series: list[dict], title: str, x_label: str, y_label: str,
               log_x: bool = False, log_y: bool = False) -> str:
    """Render polyline series: each entry has ``label``, ``x``, ``y``."""
    xs = [v for s in series for v in s["x"]]
    ys = [v for s in series for v in s["y"]]
    if log_y:
        ys = [v for v in ys if v > 0]
    if log_x:
        xs = [v for v in xs if v > 0]
    if not xs or not ys:
        xs, ys = [0.0, 1.0], [0.0, 1.0]
    pad = lambda lo, hi: (lo, hi) if hi > lo else (lo - 0.5, hi + 0.5)
    x_lo, x_hi = pad(min(xs), max(xs))
    y_lo, y_hi = pad(min(ys), max(ys))
    if not log_y:
        margin = 0.05 * (y_hi - y_lo)
        y_lo, y_hi = y_lo - margin, y_hi + margin
    ax = _Axes(x_lo, x_hi, y_lo, y_hi, log_x, log_y)
    parts = _frame(ax, title, x_label, y_label)
    for i, s in enumerate(series):
        color = _PALETTE[i % len(_PALETTE)]
        pts = []
        for x, y in zip(s["x"], s["y"]):
            if (log_y and y <= 0) or (log_x and x <= 0):
                continue
            pts.append(f"{_fmt(ax.px(x))},{_fmt(ax.py(y))}")
        if pts:
            parts.append(f'<polyline points="{" ".join(pts)}" fill="none" '
                         f'stroke="{color}" stroke-width="1.8"/>')
        ly = _MARGIN_T + 16 + 16 * i
        lx = _WIDTH - _MARGIN_R - 160
        parts.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 24}" '
                     f'y2="{ly - 4}" stroke="{color}" stroke-width="1.8"/>')
        parts.append(f'<text x="{lx + 30}" y="{ly}" font-size="11" '
                     f'fill="#111111">{s["label"]}</text>')
    return _document(parts)


def _viridis(frac: float) -> str:
    # compact 9-stop approximation, linearly interpolated
    stops = [(68, 1, 84), (72, 40, 120), (62, 74, 137), (49, 104, 142),
             (38, 130, 142), (31, 158, 137), (53, 183, 121), (109, 205, 89),
             (253, 231, 37)]
    f = min(max(frac, 0.0), 1.0) * (len(stops) - 1)
    i = min(int(f), len(stops) - 2)
    t = f - i
    rgb = [round(stops[i][k] + t * (stops[i + 1][k] - stops[i][k]))
           for k in range(3)]
    return f"#{rgb[0]:02x}{rgb[1]:02x}{rgb[2]:02x}"


def heatmap_chart(x_vals, z_vals, values_db, title: str, x_label: str,
                  y_label: str, floor_db: float = -40.0) -> str:
    """Render a power map (dB, peak at 0) as colored cells."""
    nx, nz = len(x_vals), len(z_vals)
    ax = _Axes(min(x_vals), max(x_vals), min(z_vals), max(z_vals))
    parts = []
    cw = (_WIDTH - _MARGIN_L - _MARGIN_R) / max(nx, 1)
    ch = (_HEIGHT - _MARGIN_T - _MARGIN_B) / max(nz, 1)
    for iz in range(nz):
        for ix in range(nx):
            v = values_db[iz][ix]
            frac = (max(v, floor_db) - floor_db) / (-floor_db)
            x = ax.px(x_vals[ix]) - cw / 2
            y = ax.py(z_vals[iz]) - ch / 2
            parts.append(f'<rect x="{_fmt(x)}" y="{_fmt(y)}" '
                         f'width="{_fmt(cw + 0.5)}" height="{_fmt(ch + 0.5)}" '
                         f'fill="{_viridis(frac)}"/>')
    parts.extend(_frame(ax, title, x_label, y_label))
    return _document(parts)


def _document(parts: list[str]) -> str:
    body = "\n".join(parts)
    return ('<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" '
            f'height="{_HEIGHT}" viewBox="0 0 {_WIDTH} {_HEIGHT}">\n'
            f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="#ffffff"/>\n'
            f'{body}\n</svg>\n')
