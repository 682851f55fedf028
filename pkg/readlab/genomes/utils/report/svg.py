from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from readlab.utils.errors import DataError

COLORS = [
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#ff7f0e",
    "#9467bd",
    "#8c564b",
    "#e377c2",
    "#7f7f7f",
]

WIDTH = 1024
HEIGHT = 640
MARGIN_LEFT = 90
MARGIN_RIGHT = 260
MARGIN_TOP = 70
MARGIN_BOTTOM = 100
TICKS = 6
# heatmap ramp, low -> high
RAMP_LOW = (255, 247, 236)
RAMP_HIGH = (127, 0, 0)


class ChartKind(str, Enum):
    LINE = "line"
    MULTILINE = "multiline"
    HEATMAP = "heatmap"
    DENSITY = "density"


@dataclass(frozen=True)
class Series:
    name: str
    x: Tuple[float, ...]
    y: Tuple[float, ...]


@dataclass(frozen=True)
class ChartSpec:
    """
    What to draw. Line-like kinds use `series`; a heatmap uses `matrix` with
    rows along `row_values` (y axis) and columns along `column_values` (x axis).
    A density chart with no series renders as a blank panel.
    """

    kind: ChartKind
    title: str
    x_label: str
    y_label: str
    series: Tuple[Series, ...] = ()
    matrix: Optional[Tuple[Tuple[float, ...], ...]] = None
    row_values: Tuple[float, ...] = ()
    column_values: Tuple[float, ...] = ()
    output_path: str = ""

    def validate(self) -> None:
        kind = ChartKind(self.kind)
        if kind == ChartKind.HEATMAP:
            if not self.matrix or not self.matrix[0]:
                raise DataError(f"{self.title}: heatmap matrix is empty")
            widths = {len(row) for row in self.matrix}
            if len(widths) != 1:
                raise DataError(f"{self.title}: heatmap matrix is not rectangular")
            if len(self.row_values) != len(self.matrix) or len(self.column_values) != widths.pop():
                raise DataError(f"{self.title}: heatmap axis values do not match the matrix")
            return
        if kind != ChartKind.DENSITY and not self.series:
            raise DataError(f"{self.title}: no series to plot")
        for s in self.series:
            if len(s.x) != len(s.y) or not s.x:
                raise DataError(f"{self.title}: series {s.name!r} is empty or ragged")


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
        .replace("'", "&#39;")
    )


def _format_tick(value: float) -> str:
    if abs(value) >= 100:
        return f"{value:.0f}"
    if abs(value) >= 10:
        return f"{value:.1f}"
    return f"{value:.2f}"


def _color(t: float) -> str:
    t = min(max(t, 0.0), 1.0)
    r, g, b = (round(lo + (hi - lo) * t) for lo, hi in zip(RAMP_LOW, RAMP_HIGH))
    return f"#{r:02x}{g:02x}{b:02x}"


class _Canvas:
    def __init__(self, spec: ChartSpec):
        self.spec = spec
        self.left = MARGIN_LEFT
        self.right = WIDTH - MARGIN_RIGHT
        self.top = MARGIN_TOP
        self.bottom = HEIGHT - MARGIN_BOTTOM
        self.lines: List[str] = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
            '<rect x="0" y="0" width="100%" height="100%" fill="#ffffff"/>',
            f'<text x="{WIDTH / 2:.1f}" y="36" text-anchor="middle" font-size="24" font-family="Arial">{_escape(spec.title)}</text>',
        ]

    def frame(self) -> None:
        self.lines.append(
            f'<line x1="{self.left}" y1="{self.bottom}" x2="{self.right}" y2="{self.bottom}" stroke="#000000" stroke-width="2"/>'
        )
        self.lines.append(
            f'<line x1="{self.left}" y1="{self.top}" x2="{self.left}" y2="{self.bottom}" stroke="#000000" stroke-width="2"/>'
        )
        mid_x = (self.left + self.right) / 2
        mid_y = (self.top + self.bottom) / 2
        self.lines.append(
            f'<text x="{mid_x:.1f}" y="{HEIGHT - 25}" text-anchor="middle" font-size="16" font-family="Arial">{_escape(self.spec.x_label)}</text>'
        )
        self.lines.append(
            f'<text x="28" y="{mid_y:.1f}" text-anchor="middle" font-size="16" font-family="Arial" transform="rotate(-90 28 {mid_y:.1f})">{_escape(self.spec.y_label)}</text>'
        )

    def finish(self) -> str:
        self.lines.append("</svg>")
        return "\n".join(self.lines) + "\n"


def _axis_range(values: Sequence[float], zero_floor: bool) -> Tuple[float, float]:
    lo, hi = min(values), max(values)
    if zero_floor and lo > 0:
        lo = 0.0
    if hi <= lo:
        lo, hi = lo - 1.0, hi + 1.0
    return lo, hi


def _render_lines(spec: ChartSpec) -> str:
    canvas = _Canvas(spec)
    if not spec.series:
        # blank panel
        canvas.frame()
        return canvas.finish()
    xs = [x for s in spec.series for x in s.x]
    ys = [y for s in spec.series for y in s.y]
    x_min, x_max = _axis_range(xs, zero_floor=False)
    y_min, y_max = _axis_range(ys, zero_floor=True)
    y_max = y_min + (y_max - y_min) * 1.10
    width = canvas.right - canvas.left
    height = canvas.bottom - canvas.top

    def px(x: float) -> float:
        return canvas.left + (x - x_min) / (x_max - x_min) * width

    def py(y: float) -> float:
        return canvas.bottom - (y - y_min) / (y_max - y_min) * height

    for i in range(TICKS + 1):
        value = y_min + (y_max - y_min) * i / TICKS
        y = py(value)
        canvas.lines.append(
            f'<line x1="{canvas.left}" y1="{y:.2f}" x2="{canvas.right}" y2="{y:.2f}" stroke="#d9d9d9" stroke-width="1"/>'
        )
        canvas.lines.append(
            f'<text x="{canvas.left - 10}" y="{y + 5:.2f}" text-anchor="end" font-size="13" font-family="Arial">{_format_tick(value)}</text>'
        )
        value = x_min + (x_max - x_min) * i / TICKS
        x = px(value)
        canvas.lines.append(
            f'<line x1="{x:.2f}" y1="{canvas.bottom}" x2="{x:.2f}" y2="{canvas.bottom + 6}" stroke="#000000" stroke-width="1"/>'
        )
        canvas.lines.append(
            f'<text x="{x:.2f}" y="{canvas.bottom + 28}" text-anchor="middle" font-size="13" font-family="Arial">{_format_tick(value)}</text>'
        )
    canvas.frame()

    markers = ChartKind(spec.kind) != ChartKind.DENSITY
    for idx, s in enumerate(spec.series):
        color = COLORS[idx % len(COLORS)]
        pairs = sorted(zip(s.x, s.y), key=lambda pair: pair[0])
        points = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in pairs)
        canvas.lines.append(f'<polyline fill="none" stroke="{color}" stroke-width="3" points="{points}"/>')
        if markers:
            for x, y in pairs:
                canvas.lines.append(f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" r="4" fill="{color}"/>')
        ly = canvas.top + 22 + idx * 28
        lx = canvas.right + 22
        canvas.lines.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 26}" y2="{ly}" stroke="{color}" stroke-width="3"/>')
        canvas.lines.append(
            f'<text x="{lx + 34}" y="{ly + 5}" text-anchor="start" font-size="14" font-family="Arial">{_escape(s.name)}</text>'
        )
    return canvas.finish()


def _render_heatmap(spec: ChartSpec) -> str:
    canvas = _Canvas(spec)
    matrix = np.asarray(spec.matrix, dtype=np.float64)
    n_rows, n_cols = matrix.shape
    lo, hi = float(np.nanmin(matrix)), float(np.nanmax(matrix))
    span = hi - lo if hi > lo else 1.0
    cell_w = (canvas.right - canvas.left) / n_cols
    cell_h = (canvas.bottom - canvas.top) / n_rows
    for i in range(n_rows):
        # first row at the bottom
        y = canvas.bottom - (i + 1) * cell_h
        for j in range(n_cols):
            x = canvas.left + j * cell_w
            value = matrix[i, j]
            fill = "#ffffff" if np.isnan(value) else _color((value - lo) / span)
            canvas.lines.append(
                f'<rect x="{x:.2f}" y="{y:.2f}" width="{cell_w:.2f}" height="{cell_h:.2f}" fill="{fill}" stroke="#ffffff" stroke-width="1"/>'
            )
        canvas.lines.append(
            f'<text x="{canvas.left - 10}" y="{y + cell_h / 2 + 5:.2f}" text-anchor="end" font-size="13" font-family="Arial">{_format_tick(spec.row_values[i])}</text>'
        )
    for j in range(n_cols):
        x = canvas.left + (j + 0.5) * cell_w
        canvas.lines.append(
            f'<text x="{x:.2f}" y="{canvas.bottom + 28}" text-anchor="middle" font-size="13" font-family="Arial">{_format_tick(spec.column_values[j])}</text>'
        )
    canvas.frame()

    # color bar
    lx = canvas.right + 40
    steps = 10
    bar_h = (canvas.bottom - canvas.top) / steps
    for k in range(steps):
        t = k / (steps - 1)
        y = canvas.bottom - (k + 1) * bar_h
        canvas.lines.append(
            f'<rect x="{lx}" y="{y:.2f}" width="24" height="{bar_h:.2f}" fill="{_color(t)}"/>'
        )
    canvas.lines.append(
        f'<text x="{lx + 32}" y="{canvas.bottom:.2f}" font-size="13" font-family="Arial">{_format_tick(lo)}</text>'
    )
    canvas.lines.append(
        f'<text x="{lx + 32}" y="{canvas.top + 13:.2f}" font-size="13" font-family="Arial">{_format_tick(hi)}</text>'
    )
    return canvas.finish()


def render_chart(spec: ChartSpec) -> str:
    """Self-contained SVG document; identical specs give identical bytes."""
    spec.validate()
    if ChartKind(spec.kind) == ChartKind.HEATMAP:
        return _render_heatmap(spec)
    return _render_lines(spec)
