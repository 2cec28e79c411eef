"""SVG rendering: element counts, slot assignment, byte determinism."""

import xml.etree.ElementTree as ET

import pytest

from kgflow.errors import ArityMismatchError, CanvasOverflowError, EmptyVectorError
from kgflow.plotting import CanvasState, render_plot

SVG_NS = "{http://www.w3.org/2000/svg}"


def _canvas(rows=1, cols=1, name="canvas"):
    return CanvasState(name=name, rows=rows, cols=cols)


def _elements(svg: str, tag: str):
    return ET.fromstring(svg).findall(f".//{SVG_NS}{tag}")


def test_scatter_draws_one_circle_per_point():
    xs = [0.0, 1.0, 2.0, 3.0]
    ys = [5.0, 2.0, 8.0, 1.0]
    artifact = render_plot("scatter", (xs, ys), _canvas())
    assert len(_elements(artifact.svg, "circle")) == 4
    assert artifact.kind == "scatter"


def test_line_is_a_single_polyline_sorted_by_x():
    artifact = render_plot("line", ([2.0, 0.0, 1.0], [4.0, 0.0, 2.0]), _canvas())
    (polyline,) = _elements(artifact.svg, "polyline")
    points = polyline.get("points").split(" ")
    assert len(points) == 3
    xs = [float(p.split(",")[0]) for p in points]
    assert xs == sorted(xs)


def test_boxplot_has_box_median_and_whiskers():
    artifact = render_plot("boxplot", [1.0, 2.0, 3.0, 4.0, 10.0], _canvas())
    # frame + box, five strokes (two whiskers, two caps, the median)
    assert len(_elements(artifact.svg, "rect")) == 2
    assert len(_elements(artifact.svg, "line")) == 5


def test_heatmap_draws_one_cell_per_entry():
    rows = [[0.0, 1.0, 2.0], [3.0, 4.0, 5.0]]
    artifact = render_plot("heatmap", rows, _canvas())
    cells = [r for r in _elements(artifact.svg, "rect") if r.get("fill") != "none"]
    assert len(cells) == 6
    shades = {c.get("fill") for c in cells}
    assert "#000000" in shades and "#ffffff" in shades


def test_constant_heatmap_is_mid_gray():
    artifact = render_plot("heatmap", [[3.0, 3.0]], _canvas())
    cells = [r for r in _elements(artifact.svg, "rect") if r.get("fill") != "none"]
    assert {c.get("fill") for c in cells} == {"#808080"}


def test_rendering_is_byte_deterministic():
    data = ([0.1, 0.2, 0.35], [4.0, 5.0, 6.0])
    one = render_plot("scatter", data, _canvas())
    two = render_plot("scatter", data, _canvas())
    assert one.svg == two.svg


def test_coordinates_use_two_decimals():
    artifact = render_plot("scatter", ([0.123456, 1.0], [2.0, 3.987654]), _canvas())
    for circle in _elements(artifact.svg, "circle"):
        for attr in ("cx", "cy"):
            whole, frac = circle.get(attr).split(".")
            assert len(frac) == 2


def test_degenerate_span_still_renders():
    artifact = render_plot("scatter", ([5.0, 5.0], [1.0, 1.0]), _canvas())
    circles = _elements(artifact.svg, "circle")
    # both points map to the same centered position
    assert circles[0].get("cx") == circles[1].get("cx") == "320.00"
    assert circles[0].get("cy") == circles[1].get("cy") == "240.00"


def test_slots_fill_row_major():
    canvas = _canvas(rows=2, cols=2, name="grid")
    slots = [render_plot("boxplot", [1.0, 2.0], canvas) for _ in range(4)]
    assert [(a.row, a.col) for a in slots] == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert slots[2].filename == "grid_r1c0_boxplot.svg"
    with pytest.raises(CanvasOverflowError):
        render_plot("boxplot", [1.0, 2.0], canvas)


def test_plot_rejections():
    with pytest.raises(ArityMismatchError):
        render_plot("scatter", ([1.0], [1.0, 2.0]), _canvas())
    with pytest.raises(EmptyVectorError):
        render_plot("line", ([], []), _canvas())
    with pytest.raises(EmptyVectorError):
        render_plot("boxplot", [], _canvas())
    with pytest.raises(EmptyVectorError):
        render_plot("heatmap", [], _canvas())
    with pytest.raises(ArityMismatchError):
        render_plot("heatmap", [[1.0, 2.0], [3.0]], _canvas())
    with pytest.raises(ValueError):
        render_plot("violin", [1.0], _canvas())


def test_rejected_plot_does_not_consume_a_slot():
    canvas = _canvas(rows=1, cols=1)
    with pytest.raises(EmptyVectorError):
        render_plot("boxplot", [], canvas)
    assert canvas.used == 0
    render_plot("boxplot", [1.0, 2.0], canvas)
    assert canvas.used == 1


def test_every_svg_is_well_formed_xml():
    artifacts = [
        render_plot("scatter", ([1.0, 2.0], [3.0, 4.0]), _canvas()),
        render_plot("line", ([1.0, 2.0], [3.0, 4.0]), _canvas()),
        render_plot("boxplot", [1.0, 2.0, 3.0], _canvas()),
        render_plot("heatmap", [[1.0, 2.0]], _canvas()),
    ]
    for artifact in artifacts:
        root = ET.fromstring(artifact.svg)
        assert root.tag == f"{SVG_NS}svg"
        assert root.get("width") == "640"
        assert root.get("height") == "480"
        assert artifact.svg.endswith("</svg>\n")
