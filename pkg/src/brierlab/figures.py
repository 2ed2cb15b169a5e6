"""Self-contained SVG renderings of simulation results.

Two chart kinds cover all report figures: violin plots (a mirrored Gaussian
kernel density outline with median and 5%/95% tick marks per group) and bar
charts. The SVG text is assembled with fixed numeric formatting and holds no
timestamps, so identical inputs produce identical bytes. Kernel bandwidths
(Silverman's rule) are recorded in the SVG metadata block.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np
from scipy.stats import gaussian_kde

__all__ = ["violin_svg", "bar_svg"]

_PLOT_TOP = 48.0
_PLOT_HEIGHT = 300.0
_SLOT_WIDTH = 96.0
_MARGIN_LEFT = 72.0
_MARGIN_RIGHT = 24.0
_LABEL_SPACE = 150.0
_HALF_VIOLIN = 34.0


def _px(value: float) -> str:
    return f"{value:.2f}"


def _kde_outline(samples: np.ndarray, points: int = 81):
    """Density curve for one violin, or None when the samples are degenerate.

    Returns (grid, density, bandwidth). A sample set with zero spread has no
    density estimate and is drawn as a flat bar instead.
    """
    sd = float(np.std(samples, ddof=1)) if samples.size > 1 else 0.0
    if sd == 0.0:
        return None
    kde = gaussian_kde(samples, bw_method="silverman")
    bandwidth = float(kde.factor) * sd
    lo = float(np.min(samples)) - 2.0 * bandwidth
    hi = float(np.max(samples)) + 2.0 * bandwidth
    grid = np.linspace(lo, hi, points)
    return grid, kde(grid), bandwidth


def _axis_ticks(lo: float, hi: float, count: int = 6) -> list[float]:
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def _svg_header(width: float, height: float, title: str, metadata: str) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_px(width)}" '
        f'height="{_px(height)}" viewBox="0 0 {_px(width)} {_px(height)}">',
        f"<metadata>{escape(metadata)}</metadata>",
        f'<rect x="0" y="0" width="{_px(width)}" height="{_px(height)}" fill="white"/>',
        f'<text x="{_px(width / 2)}" y="24" font-family="sans-serif" font-size="15" '
        f'text-anchor="middle">{escape(title)}</text>',
    ]


def _y_axis(parts: list[str], lo: float, hi: float, ylabel: str, plot_right: float) -> None:
    span = hi - lo

    def y_of(value: float) -> float:
        return _PLOT_TOP + _PLOT_HEIGHT * (1.0 - (value - lo) / span)

    parts.append(
        f'<line x1="{_px(_MARGIN_LEFT)}" y1="{_px(_PLOT_TOP)}" x2="{_px(_MARGIN_LEFT)}" '
        f'y2="{_px(_PLOT_TOP + _PLOT_HEIGHT)}" stroke="black" stroke-width="1"/>'
    )
    for tick in _axis_ticks(lo, hi):
        y = y_of(tick)
        parts.append(
            f'<line x1="{_px(_MARGIN_LEFT - 4)}" y1="{_px(y)}" x2="{_px(plot_right)}" '
            f'y2="{_px(y)}" stroke="#cccccc" stroke-width="0.5"/>'
        )
        parts.append(
            f'<text x="{_px(_MARGIN_LEFT - 8)}" y="{_px(y + 3)}" font-family="sans-serif" '
            f'font-size="10" text-anchor="end">{tick:.3g}</text>'
        )
    parts.append(
        f'<text x="14" y="{_px(_PLOT_TOP + _PLOT_HEIGHT / 2)}" font-family="sans-serif" '
        f'font-size="12" text-anchor="middle" '
        f'transform="rotate(-90 14 {_px(_PLOT_TOP + _PLOT_HEIGHT / 2)})">{escape(ylabel)}</text>'
    )


def _x_label(parts: list[str], x: float, label: str) -> None:
    y = _PLOT_TOP + _PLOT_HEIGHT + 14
    parts.append(
        f'<text x="{_px(x)}" y="{_px(y)}" font-family="sans-serif" font-size="10" '
        f'text-anchor="end" transform="rotate(-55 {_px(x)} {_px(y)})">{escape(label)}</text>'
    )


def violin_svg(groups: list[tuple[str, np.ndarray]], title: str, ylabel: str) -> str:
    """Render one violin per (label, samples) group.

    Each violin is a mirrored kernel density outline with a wide median tick
    and narrower 5% and 95% quantile ticks; degenerate groups (zero spread)
    are drawn as a flat bar at their value.
    """
    if not groups:
        raise ValueError("violin_svg needs at least one group")
    prepared = []
    bandwidths = []
    lo = np.inf
    hi = -np.inf
    for label, samples in groups:
        samples = np.asarray(samples, dtype=float)
        outline = _kde_outline(samples)
        q05, median, q95 = np.quantile(samples, [0.05, 0.5, 0.95])
        prepared.append((label, samples, outline, float(q05), float(median), float(q95)))
        bandwidths.append((label, 0.0 if outline is None else outline[2]))
        if outline is None:
            lo = min(lo, float(np.min(samples)))
            hi = max(hi, float(np.max(samples)))
        else:
            lo = min(lo, float(outline[0][0]))
            hi = max(hi, float(outline[0][-1]))
    if hi <= lo:
        lo, hi = lo - 0.05, hi + 0.05
    pad = 0.02 * (hi - lo)
    lo -= pad
    hi += pad

    width = _MARGIN_LEFT + _SLOT_WIDTH * len(groups) + _MARGIN_RIGHT
    height = _PLOT_TOP + _PLOT_HEIGHT + _LABEL_SPACE
    metadata = "silverman bandwidths: " + "; ".join(
        f"{label}={bw!r}" for label, bw in bandwidths
    )
    parts = _svg_header(width, height, title, metadata)
    _y_axis(parts, lo, hi, ylabel, width - _MARGIN_RIGHT)

    span = hi - lo

    def y_of(value: float) -> float:
        return _PLOT_TOP + _PLOT_HEIGHT * (1.0 - (value - lo) / span)

    for index, (label, samples, outline, q05, median, q95) in enumerate(prepared):
        cx = _MARGIN_LEFT + _SLOT_WIDTH * (index + 0.5)
        if outline is None:
            value = float(samples[0])
            y = y_of(value)
            parts.append(
                f'<rect x="{_px(cx - _HALF_VIOLIN)}" y="{_px(y - 1.5)}" '
                f'width="{_px(2 * _HALF_VIOLIN)}" height="3" fill="#4878a8"/>'
            )
        else:
            grid, density, _ = outline
            peak = float(np.max(density))
            scale = _HALF_VIOLIN / peak if peak > 0 else 0.0
            right = [(cx + d * scale, y_of(v)) for v, d in zip(grid, density)]
            left = [(cx - d * scale, y_of(v)) for v, d in zip(reversed(grid), reversed(density))]
            points = " ".join(f"{_px(x)},{_px(y)}" for x, y in right + left)
            parts.append(
                f'<polygon points="{points}" fill="#a8c4e0" stroke="#4878a8" stroke-width="1"/>'
            )
        for value, half in ((q05, 12.0), (median, 20.0), (q95, 12.0)):
            y = y_of(value)
            parts.append(
                f'<line x1="{_px(cx - half)}" y1="{_px(y)}" x2="{_px(cx + half)}" '
                f'y2="{_px(y)}" stroke="#222222" stroke-width="1.5"/>'
            )
        _x_label(parts, cx, label)
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def bar_svg(items: list[tuple[str, float]], title: str, ylabel: str) -> str:
    """Render one labeled bar per (label, value) item, value printed on top."""
    if not items:
        raise ValueError("bar_svg needs at least one item")
    values = [float(v) for _, v in items]
    lo = min(0.0, min(values))
    hi = max(max(values), 1e-9)
    pad = 0.05 * (hi - lo)
    hi += pad

    width = _MARGIN_LEFT + _SLOT_WIDTH * len(items) + _MARGIN_RIGHT
    height = _PLOT_TOP + _PLOT_HEIGHT + _LABEL_SPACE
    parts = _svg_header(width, height, title, f"values: {len(items)} bars")
    _y_axis(parts, lo, hi, ylabel, width - _MARGIN_RIGHT)

    span = hi - lo

    def y_of(value: float) -> float:
        return _PLOT_TOP + _PLOT_HEIGHT * (1.0 - (value - lo) / span)

    base_y = y_of(0.0)
    for index, (label, value) in enumerate(items):
        cx = _MARGIN_LEFT + _SLOT_WIDTH * (index + 0.5)
        top = y_of(float(value))
        bar_height = max(base_y - top, 0.0)
        parts.append(
            f'<rect x="{_px(cx - 28)}" y="{_px(top)}" width="56" '
            f'height="{_px(bar_height)}" fill="#a8c4e0" stroke="#4878a8" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_px(cx)}" y="{_px(top - 4)}" font-family="sans-serif" font-size="10" '
            f'text-anchor="middle">{float(value):.4f}</text>'
        )
        _x_label(parts, cx, label)
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
