"""Deterministic SVG assembly: one fixed canvas, scales, element builders.

Figures must be byte-for-byte functions of their inputs, so every pixel
coordinate is formatted to two decimals, attributes are emitted in call
order, and there are no timestamps, ids, or environment-dependent
styles.  Data values ride along as data-* attributes holding the exact
CSV cell strings; pixel geometry is presentation only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape, quoteattr

WIDTH = 560.0
HEIGHT = 360.0
#: plot rectangle as (x0, y0, x1, y1) in pixel coordinates
PLOT = (64.0, 28.0, 544.0, 316.0)

PALETTE = ["#1f6fb4", "#b4451f", "#3f8f3f", "#7a4fb4", "#98751c", "#1f8f96"]

_AXIS = "#444444"
_GRIDLINE = "#dddddd"


def px(v: float) -> str:
    return f"{v:.2f}"


def el(tag: str, attrs: dict, body: str | None = None) -> str:
    parts = [tag] + [f"{k}={quoteattr(str(v))}" for k, v in attrs.items()]
    head = " ".join(parts)
    if body is None:
        return f"<{head}/>"
    return f"<{head}>{body}</{tag}>"


def text(x: float, y: float, s: str, anchor: str = "middle", size: int = 11) -> str:
    attrs = {
        "x": px(x),
        "y": px(y),
        "text-anchor": anchor,
        "font-family": "sans-serif",
        "font-size": str(size),
        "fill": "#222222",
    }
    return el("text", attrs, escape(s))


@dataclass(frozen=True)
class Scale:
    """Maps data values to pixels, linearly or in log10.

    Values outside [lo, hi] (in particular nonpositive ones on a log
    axis) clamp to the nearest edge; clamping affects geometry only,
    never the data attributes.
    """

    lo: float
    hi: float
    px_lo: float
    px_hi: float
    log: bool = False

    def __call__(self, v: float) -> float:
        lo, hi = self.lo, self.hi
        if self.log:
            v = math.log10(v) if v > 0 else -math.inf
            lo, hi = math.log10(self.lo), math.log10(self.hi)
        t = 0.0 if hi == lo else (v - lo) / (hi - lo)
        t = min(max(t, 0.0), 1.0)
        return self.px_lo + t * (self.px_hi - self.px_lo)


def log_range(values) -> tuple[float, float]:
    """Decade-aligned [lo, hi] covering the positive entries of values."""
    pos = [v for v in values if v > 0]
    if not pos:
        return 0.1, 1.0
    lo = 10.0 ** math.floor(math.log10(min(pos)))
    hi = 10.0 ** math.ceil(math.log10(max(pos)))
    if lo == hi:
        hi = lo * 10.0
    return lo, hi


def linear_range(values) -> tuple[float, float]:
    """[lo, hi] with a 5% pad, degenerate inputs widened to a unit span."""
    vals = list(values)
    if not vals:
        return 0.0, 1.0
    lo, hi = min(vals), max(vals)
    if lo == hi:
        return lo - 0.5, hi + 0.5
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def _nice_step(span: float) -> float:
    raw = span / 5.0
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0):
        if raw <= mult * mag:
            return mult * mag
    return 10.0 * mag


def linear_ticks(lo: float, hi: float) -> list:
    step = _nice_step(hi - lo)
    first = math.ceil(lo / step) * step
    ticks = []
    v = first
    while v <= hi + 1e-12 * step:
        ticks.append(0.0 if abs(v) < 1e-12 * step else v)
        v += step
    return ticks


def log_ticks(lo: float, hi: float) -> list:
    k0 = math.ceil(math.log10(lo) - 1e-9)
    k1 = math.floor(math.log10(hi) + 1e-9)
    return [10.0**k for k in range(k0, k1 + 1)]


def _tick_label(v: float, log: bool) -> str:
    if log:
        return f"1e{int(round(math.log10(v)))}"
    return f"{v:g}"


def axes(xs: Scale, ys: Scale, x_label: str, y_label: str, title: str) -> list:
    """Frame, gridlines, ticks, and labels for one plot rectangle."""
    x0, y0, x1, y1 = PLOT
    out = [
        el("rect", {
            "x": px(x0), "y": px(y0), "width": px(x1 - x0), "height": px(y1 - y0),
            "fill": "none", "stroke": _AXIS, "stroke-width": "1",
        }),
        text(8.0, 16.0, title, anchor="start", size=13),
    ]
    xticks = log_ticks(xs.lo, xs.hi) if xs.log else linear_ticks(xs.lo, xs.hi)
    for v in xticks:
        cx = xs(v)
        out.append(el("line", {
            "x1": px(cx), "y1": px(y0), "x2": px(cx), "y2": px(y1),
            "stroke": _GRIDLINE, "stroke-width": "1",
        }))
        out.append(text(cx, y1 + 16.0, _tick_label(v, xs.log)))
    yticks = log_ticks(ys.lo, ys.hi) if ys.log else linear_ticks(ys.lo, ys.hi)
    for v in yticks:
        cy = ys(v)
        out.append(el("line", {
            "x1": px(x0), "y1": px(cy), "x2": px(x1), "y2": px(cy),
            "stroke": _GRIDLINE, "stroke-width": "1",
        }))
        out.append(text(x0 - 6.0, cy + 4.0, _tick_label(v, ys.log), anchor="end"))
    out.append(text((x0 + x1) / 2.0, HEIGHT - 8.0, x_label))
    out.append(el(
        "g",
        {"transform": f"translate(14,{px((y0 + y1) / 2.0)}) rotate(-90)"},
        text(0.0, 0.0, y_label),
    ))
    return out


def document(body: list) -> str:
    head = el(
        "rect",
        {"x": "0", "y": "0", "width": px(WIDTH), "height": px(HEIGHT), "fill": "#ffffff"},
    )
    content = "\n".join([head] + body)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{px(WIDTH)}" '
        f'height="{px(HEIGHT)}" viewBox="0 0 {px(WIDTH)} {px(HEIGHT)}">\n'
        f"{content}\n</svg>\n"
    )
