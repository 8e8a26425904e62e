"""Standalone SVG 1.1 chart emitters.

Charts are plain generated text — no plotting library — so identical
inputs yield byte-identical files, which the golden-file tests rely on.
Every coordinate is formatted with two decimals to keep the output stable
across platforms.

Four styles cover all report figures: bars with optional CI whiskers,
a stem plot for autocorrelations, grouped/single bar charts, and
multi-series line charts.
"""

from __future__ import annotations

import math
from typing import Sequence

__all__ = ["bar_chart", "stem_chart", "line_chart", "PALETTE"]

WIDTH = 640.0
HEIGHT = 400.0
LEFT, RIGHT, TOP, BOTTOM = 72.0, 24.0, 48.0, 56.0
PLOT_W = WIDTH - LEFT - RIGHT
PLOT_H = HEIGHT - TOP - BOTTOM

PALETTE = ["#4472c4", "#ed7d31", "#70ad47", "#7030a0", "#c00000", "#808080"]
AXIS = "#404040"
GRID = "#d9d9d9"


def _f(v: float) -> str:
    return f"{v:.2f}"


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _text(x, y, s, size=12.0, anchor="start", rotate=None, fill="#202020") -> str:
    transform = f' transform="rotate({_f(rotate)} {_f(x)} {_f(y)})"' if rotate is not None else ""
    return (
        f'<text x="{_f(x)}" y="{_f(y)}" font-family="sans-serif" font-size="{_f(size)}"'
        f' text-anchor="{anchor}" fill="{fill}"{transform}>{_esc(s)}</text>'
    )


def _line(x1, y1, x2, y2, stroke=AXIS, width=1.0, dash=None) -> str:
    d = f' stroke-dasharray="{dash}"' if dash else ""
    return (
        f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}"'
        f' stroke="{stroke}" stroke-width="{_f(width)}"{d}/>'
    )


def _rect(x, y, w, h, fill) -> str:
    return f'<rect x="{_f(x)}" y="{_f(y)}" width="{_f(w)}" height="{_f(h)}" fill="{fill}"/>'


def _ticks(vmax: float, n: int = 5) -> list[float]:
    """0-based tick positions with a 1/2/2.5/5 step, covering vmax."""
    if vmax <= 0.0:
        return [0.0, 1.0]
    raw = vmax / n
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        step = mag * mult
        if step >= raw:
            break
    top = step * math.ceil(vmax / step - 1e-9)
    count = int(round(top / step))
    return [step * i for i in range(count + 1)]


def _tick_label(v: float) -> str:
    if v == int(v):
        return str(int(v))
    return f"{v:g}"


def _frame(title: str, ylabel: str) -> list[str]:
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_f(WIDTH)}"'
        f' height="{_f(HEIGHT)}" viewBox="0 0 {_f(WIDTH)} {_f(HEIGHT)}">',
        _rect(0, 0, WIDTH, HEIGHT, "#ffffff"),
        _text(WIDTH / 2, TOP - 20, title, size=15, anchor="middle"),
        _text(16, TOP + PLOT_H / 2, ylabel, size=12, anchor="middle", rotate=-90.0),
    ]
    return parts


def _y_axis(parts: list[str], ticks: Sequence[float], ymax: float) -> None:
    for t in ticks:
        y = TOP + PLOT_H * (1.0 - t / ymax)
        parts.append(_line(LEFT, y, LEFT + PLOT_W, y, stroke=GRID, width=0.5))
        parts.append(_text(LEFT - 6, y + 4, _tick_label(t), size=11, anchor="end"))
    parts.append(_line(LEFT, TOP, LEFT, TOP + PLOT_H))
    parts.append(_line(LEFT, TOP + PLOT_H, LEFT + PLOT_W, TOP + PLOT_H))


def bar_chart(
    title: str,
    ylabel: str,
    labels: Sequence[str],
    values: Sequence[float],
    lower: Sequence[float] | None = None,
    upper: Sequence[float] | None = None,
    colors: Sequence[str] | None = None,
) -> str:
    """Vertical bars, optionally with CI whiskers from lower to upper."""
    n = len(values)
    if n == 0 or len(labels) != n:
        raise ValueError("labels and values must be equal-length and nonempty")
    peak = max(values)
    if upper is not None:
        peak = max(peak, max(upper))
    ticks = _ticks(peak)
    ymax = ticks[-1] if ticks[-1] > 0 else 1.0

    parts = _frame(title, ylabel)
    _y_axis(parts, ticks, ymax)

    slot = PLOT_W / n
    bar_w = slot * 0.6
    for i, v in enumerate(values):
        cx = LEFT + slot * (i + 0.5)
        h = PLOT_H * v / ymax
        color = colors[i] if colors is not None else PALETTE[0]
        parts.append(_rect(cx - bar_w / 2, TOP + PLOT_H - h, bar_w, h, color))
        if lower is not None and upper is not None:
            ylo = TOP + PLOT_H * (1.0 - lower[i] / ymax)
            yhi = TOP + PLOT_H * (1.0 - upper[i] / ymax)
            cap = bar_w / 4
            parts.append(_line(cx, ylo, cx, yhi, stroke="#202020", width=1.5))
            parts.append(_line(cx - cap, ylo, cx + cap, ylo, stroke="#202020", width=1.5))
            parts.append(_line(cx - cap, yhi, cx + cap, yhi, stroke="#202020", width=1.5))
        parts.append(_text(cx, TOP + PLOT_H + 18, labels[i], size=11, anchor="middle"))

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def stem_chart(
    title: str,
    ylabel: str,
    lags: Sequence[int],
    values: Sequence[float],
    bound: float,
) -> str:
    """Autocorrelation stems with dashed significance bounds at +/- bound."""
    if len(lags) != len(values) or not lags:
        raise ValueError("lags and values must be equal-length and nonempty")
    peak = max(max(abs(v) for v in values), bound * 1.5, 0.1)
    ticks = _ticks(peak, n=3)
    ymax = ticks[-1]

    def ypix(v: float) -> float:
        return TOP + PLOT_H * (1.0 - (v + ymax) / (2.0 * ymax))

    parts = _frame(title, ylabel)
    for t in ticks[1:]:
        for s in (t, -t):
            parts.append(_line(LEFT, ypix(s), LEFT + PLOT_W, ypix(s), stroke=GRID, width=0.5))
            parts.append(_text(LEFT - 6, ypix(s) + 4, _tick_label(s), size=11, anchor="end"))
    parts.append(_text(LEFT - 6, ypix(0.0) + 4, "0", size=11, anchor="end"))
    parts.append(_line(LEFT, TOP, LEFT, TOP + PLOT_H))
    parts.append(_line(LEFT, ypix(0.0), LEFT + PLOT_W, ypix(0.0)))
    for s in (bound, -bound):
        parts.append(_line(LEFT, ypix(s), LEFT + PLOT_W, ypix(s),
                           stroke="#c00000", width=1.0, dash="4 3"))

    span = max(lags) - min(lags)
    scale = PLOT_W / (span + 1) if span >= 0 else PLOT_W

    def xpix(lag: int) -> float:
        return LEFT + scale * (lag - min(lags) + 0.5)

    for lag, v in zip(lags, values):
        parts.append(_line(xpix(lag), ypix(0.0), xpix(lag), ypix(v),
                           stroke=PALETTE[0], width=1.2))
    label_step = max(1, (span + 1) // 10)
    if label_step > 5:
        label_step = 10 * max(1, round(label_step / 10))
    for lag in lags:
        if (lag - min(lags)) % label_step == 0:
            parts.append(_text(xpix(lag), TOP + PLOT_H + 18, str(lag), size=11, anchor="middle"))

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def line_chart(
    title: str,
    ylabel: str,
    x_values: Sequence[float],
    series: Sequence[tuple[str, Sequence[float]]],
    x_label_every: int = 1,
) -> str:
    """One polyline per (name, values) series, with a small legend."""
    if not series or not x_values:
        raise ValueError("need at least one series and one x value")
    peak = max(max(vals) for _, vals in series)
    ticks = _ticks(peak)
    ymax = ticks[-1] if ticks[-1] > 0 else 1.0

    parts = _frame(title, ylabel)
    _y_axis(parts, ticks, ymax)

    x0, x1 = min(x_values), max(x_values)
    span = (x1 - x0) or 1.0

    def xpix(x: float) -> float:
        return LEFT + PLOT_W * (x - x0) / span

    for k, (name, vals) in enumerate(series):
        if len(vals) != len(x_values):
            raise ValueError(f"series {name!r} length does not match x values")
        color = PALETTE[k % len(PALETTE)]
        points = " ".join(f"{_f(xpix(x))},{_f(TOP + PLOT_H * (1.0 - v / ymax))}"
                          for x, v in zip(x_values, vals))
        parts.append(f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="2.0"/>')
        ly = TOP + 14 + 16 * k
        parts.append(_rect(LEFT + PLOT_W - 150, ly - 8, 12, 8, color))
        parts.append(_text(LEFT + PLOT_W - 134, ly, name, size=11))

    for i, x in enumerate(x_values):
        if i % x_label_every == 0:
            parts.append(_text(xpix(x), TOP + PLOT_H + 18, _tick_label(float(x)),
                               size=11, anchor="middle"))

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
