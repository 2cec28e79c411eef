"""Deterministic SVG rendering for the four plot kinds.

Every artifact is a standalone 640x480 SVG document assigned to one slot of a
canvas grid. Output is pure string assembly with fixed two-decimal coordinate
formatting: the same data always yields byte-identical markup. Marker
counts are part of the contract (scatter draws one circle per point, heatmap
one cell rectangle per matrix entry, line exactly one polyline).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ArityMismatchError, CanvasOverflowError, EmptyVectorError
from .methods import median, percentile

WIDTH = 640.0
HEIGHT = 480.0
MARGIN = 48.0


@dataclass
class CanvasState:
    """Mutable slot allocator for one canvas: plots fill the grid row-major."""

    name: str
    rows: int
    cols: int
    used: int = 0

    def take_slot(self) -> tuple[int, int]:
        if self.used >= self.rows * self.cols:
            raise CanvasOverflowError(
                f"canvas {self.name!r} has only {self.rows * self.cols} slot(s)"
            )
        slot = divmod(self.used, self.cols)
        self.used += 1
        return slot


@dataclass(frozen=True)
class PlotArtifact:
    kind: str
    canvas: str
    row: int
    col: int
    svg: str

    @property
    def filename(self) -> str:
        return f"{self.canvas}_r{self.row}c{self.col}_{self.kind}.svg"


def _fmt(v: float) -> str:
    return f"{float(v):.2f}"


def _span(values) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    if lo == hi:  # degenerate: center the points
        lo, hi = lo - 1.0, hi + 1.0
    return float(lo), float(hi)


def _scale(values, lo: float, hi: float, out_lo: float, out_hi: float):
    return [out_lo + (float(v) - lo) / (hi - lo) * (out_hi - out_lo) for v in values]


def _document(body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{int(WIDTH)}" height="{int(HEIGHT)}" '
        f'viewBox="0 0 {int(WIDTH)} {int(HEIGHT)}">'
    )
    frame = (
        f'<rect x="{_fmt(MARGIN)}" y="{_fmt(MARGIN)}" width="{_fmt(WIDTH - 2 * MARGIN)}" '
        f'height="{_fmt(HEIGHT - 2 * MARGIN)}" fill="none" stroke="#444444" stroke-width="1"/>'
    )
    return "\n".join([head, frame, *body, "</svg>"]) + "\n"


def _render_scatter(data) -> list[str]:
    xs, ys = data
    if len(xs) != len(ys):
        raise ArityMismatchError(f"scatter needs equal vectors, got {len(xs)} and {len(ys)}")
    if len(xs) == 0:
        raise EmptyVectorError("scatter of zero points")
    x_lo, x_hi = _span(xs)
    y_lo, y_hi = _span(ys)
    px = _scale(xs, x_lo, x_hi, MARGIN, WIDTH - MARGIN)
    py = _scale(ys, y_lo, y_hi, HEIGHT - MARGIN, MARGIN)
    return [
        f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="3" fill="#1f6fa8"/>'
        for x, y in zip(px, py)
    ]


def _render_line(data) -> list[str]:
    xs, ys = data
    if len(xs) != len(ys):
        raise ArityMismatchError(f"line needs equal vectors, got {len(xs)} and {len(ys)}")
    if len(xs) == 0:
        raise EmptyVectorError("line of zero points")
    order = sorted(range(len(xs)), key=lambda i: (float(xs[i]), i))
    x_lo, x_hi = _span(xs)
    y_lo, y_hi = _span(ys)
    px = _scale([xs[i] for i in order], x_lo, x_hi, MARGIN, WIDTH - MARGIN)
    py = _scale([ys[i] for i in order], y_lo, y_hi, HEIGHT - MARGIN, MARGIN)
    points = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in zip(px, py))
    return [f'<polyline points="{points}" fill="none" stroke="#1f6fa8" stroke-width="2"/>']


def _render_boxplot(values) -> list[str]:
    if len(values) == 0:
        raise EmptyVectorError("box plot of zero values")
    data = [float(v) for v in values]
    low, high = min(data), max(data)
    q1 = percentile(data, 25.0)
    q2 = median(data)
    q3 = percentile(data, 75.0)
    y_lo, y_hi = _span(data)
    ys = _scale([low, q1, q2, q3, high], y_lo, y_hi, HEIGHT - MARGIN, MARGIN)
    p_low, p_q1, p_q2, p_q3, p_high = ys
    mid = WIDTH / 2.0
    half = 80.0
    line = lambda x1, y1, x2, y2: (
        f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
        f'stroke="#1f6fa8" stroke-width="2"/>'
    )
    return [
        line(mid, p_low, mid, p_q1),                      # lower whisker
        line(mid - half / 2, p_low, mid + half / 2, p_low),
        f'<rect x="{_fmt(mid - half)}" y="{_fmt(p_q3)}" width="{_fmt(2 * half)}" '
        f'height="{_fmt(p_q1 - p_q3)}" fill="none" stroke="#1f6fa8" stroke-width="2"/>',
        line(mid - half, p_q2, mid + half, p_q2),         # median
        line(mid, p_q3, mid, p_high),                     # upper whisker
        line(mid - half / 2, p_high, mid + half / 2, p_high),
    ]


def _render_heatmap(rows) -> list[str]:
    if len(rows) == 0 or len(rows[0]) == 0:
        raise EmptyVectorError("heatmap of an empty matrix")
    flat = [float(v) for row in rows for v in row]
    lo, hi = min(flat), max(flat)
    n_rows, n_cols = len(rows), len(rows[0])
    cell_w = (WIDTH - 2 * MARGIN) / n_cols
    cell_h = (HEIGHT - 2 * MARGIN) / n_rows
    out = []
    for r, row in enumerate(rows):
        if len(row) != n_cols:
            raise ArityMismatchError("heatmap needs a rectangular matrix")
        for c, v in enumerate(row):
            # Linear grayscale; a constant matrix renders mid-gray.
            level = 128 if hi == lo else round((float(v) - lo) / (hi - lo) * 255)
            color = f"#{level:02x}{level:02x}{level:02x}"
            out.append(
                f'<rect x="{_fmt(MARGIN + c * cell_w)}" y="{_fmt(MARGIN + r * cell_h)}" '
                f'width="{_fmt(cell_w)}" height="{_fmt(cell_h)}" fill="{color}"/>'
            )
    return out


def render_plot(kind: str, data, canvas: CanvasState) -> PlotArtifact:
    """Draw one plot into the canvas's next free slot.

    `data` is (x, y) vectors for scatter/line, a vector for boxplot, and a
    row-major matrix for heatmap.
    """
    if kind == "scatter":
        body = _render_scatter(data)
    elif kind == "line":
        body = _render_line(data)
    elif kind == "boxplot":
        body = _render_boxplot(data)
    elif kind == "heatmap":
        body = _render_heatmap(data)
    else:
        raise ValueError(f"unknown plot kind {kind!r}")
    row, col = canvas.take_slot()
    return PlotArtifact(kind=kind, canvas=canvas.name, row=row, col=col, svg=_document(body))
