"""Ready-made synthetic datasets and pipeline fixtures.

These are the graphs the test suite, the narrative scripts, and the editor's
integration tests all share: a two-cluster classification pipeline, a
noiseless-line regression pipeline, and a schema-only neural fixture that
exists to carry a batch-size literal.
"""

from __future__ import annotations

import csv
from pathlib import Path

from . import namespaces as ns
from .builder import PipelineBuilder
from .schema import SchemaSet


def write_classification_csv(path) -> None:
    """40 points in two well-separated clusters of 20, labels "A" and "B".

    Cluster diameter is 5 and inter-cluster distance exceeds 9, so any
    nearest-neighbor vote over either cluster is unanimous regardless of how
    the rows are split.
    """
    rows = []
    for i in range(20):
        rows.append((float(i % 5), float(i // 5), "A"))
    for i in range(20):
        rows.append((10.0 + i % 5, 10.0 + i // 5, "B"))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y", "label"])
        for x, y, label in rows:
            writer.writerow([x, y, label])


def write_regression_csv(path) -> None:
    """20 noiseless points on y = 2x + 1."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "yval"])
        for i in range(20):
            writer.writerow([float(i), 2.0 * i + 1.0])


def build_classification_pipeline(schema: SchemaSet, csv_path: str, name: str = "classdemo") -> PipelineBuilder:
    """Split, k-nearest-neighbor classification, accuracy, scatter plot."""
    b = PipelineBuilder(name, csv_path, schema)
    x = b.add_data_entity("x", "x", ns.DS + "Numerical", ns.DS + "Vector")
    y = b.add_data_entity("y", "y", ns.DS + "Numerical", ns.DS + "Vector")
    label = b.add_data_entity("label", "label", ns.DS + "Categorical", ns.DS + "Vector")
    split = b.add_task(
        ns.ML + "DataSplitting", ns.ML + "TrainTestSplitMethod",
        [x, y, label], {"ratio": 0.75, "seed": 7},
    )
    classify = b.add_task(
        ns.ML + "Classification", ns.ML + "KNNMethod",
        [split.output("train_features"), split.output("train_labels"), split.output("test_features")],
        {"k": 3},
    )
    b.add_task(
        ns.ML + "PerformanceCalculation", ns.ML + "AccuracyMethod",
        [classify.output("predictions"), split.output("test_labels")],
    )
    b.add_task(ns.VISU + "CanvasTask", ns.VISU + "CanvasMethod", [], {"name": "results"})
    b.add_task(ns.VISU + "ScatterPlot", ns.VISU + "ScatterMethod", [split.output("test_features")])
    return b


def build_regression_pipeline(schema: SchemaSet, csv_path: str, name: str = "regdemo") -> PipelineBuilder:
    """Split, train a linear model, apply it, score with relative error."""
    b = PipelineBuilder(name, csv_path, schema)
    x = b.add_data_entity("x", "x", ns.DS + "Numerical", ns.DS + "Vector")
    yval = b.add_data_entity("yval", "yval", ns.DS + "Numerical", ns.DS + "Vector")
    split = b.add_task(
        ns.ML + "DataSplitting", ns.ML + "TrainTestSplitMethod",
        [x, yval], {"ratio": 0.75, "seed": 7},
    )
    train = b.add_task(
        ns.ML + "Train", ns.ML + "LinearRegressionMethod",
        [split.output("train_features"), split.output("train_labels")],
    )
    test = b.add_task(
        ns.ML + "Test", ns.ML + "LinearRegressionMethod",
        [train.output("model"), split.output("test_features")],
    )
    b.add_task(
        ns.ML + "PerformanceCalculation", ns.ML + "MAPEMethod",
        [test.output("predictions"), split.output("test_labels")],
    )
    return b


def build_mlp_pipeline(schema: SchemaSet, csv_path: str, name: str = "mlpdemo") -> PipelineBuilder:
    """Conforming fixture whose trained method carries a batch-size literal.

    There is no runnable neural implementation behind it; the fixture exists
    for validation scenarios only.
    """
    b = PipelineBuilder(name, csv_path, schema)
    x = b.add_data_entity("x", "x", ns.DS + "Numerical", ns.DS + "Vector")
    yval = b.add_data_entity("yval", "yval", ns.DS + "Numerical", ns.DS + "Vector")
    split = b.add_task(
        ns.ML + "DataSplitting", ns.ML + "TrainTestSplitMethod", [x, yval],
    )
    b.add_task(
        ns.ML + "Train", ns.ML + "MLPMethod",
        [split.output("train_features"), split.output("train_labels")],
        {"batch_size": 16},
    )
    return b


def build_stats_pipeline(schema: SchemaSet, csv_path: str, name: str = "statsdemo") -> PipelineBuilder:
    """Normalize a column, take its median, draw a line plot and a box plot."""
    b = PipelineBuilder(name, csv_path, schema)
    x = b.add_data_entity("x", "x", ns.DS + "Numerical", ns.DS + "Vector")
    norm = b.add_task(ns.STATS + "Normalization", ns.STATS + "MinMaxMethod", [x])
    b.add_task(ns.STATS + "CentralTendency", ns.STATS + "MedianMethod", [norm.output("normalized")])
    b.add_task(ns.VISU + "CanvasTask", ns.VISU + "CanvasMethod", [], {"rows": 1, "cols": 2})
    b.add_task(ns.VISU + "LinePlot", ns.VISU + "LineMethod", [norm.output("normalized")])
    b.add_task(ns.VISU + "BoxPlot", ns.VISU + "BoxPlotMethod", [norm.output("normalized")])
    return b


def write_demo_workspace(root) -> dict[str, str]:
    """Drop the demo datasets and saved fixture graphs under `root`.

    Returns a name -> path map for the written files.
    """
    from .schema import load_builtin_schemata

    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    schema = load_builtin_schemata()
    paths = {}

    cls_csv = root / "classification.csv"
    write_classification_csv(cls_csv)
    paths["classification_csv"] = str(cls_csv)
    reg_csv = root / "regression.csv"
    write_regression_csv(reg_csv)
    paths["regression_csv"] = str(reg_csv)

    for key, build, csv_path in (
        ("classification_kg", build_classification_pipeline, cls_csv),
        ("regression_kg", build_regression_pipeline, reg_csv),
        ("mlp_kg", build_mlp_pipeline, reg_csv),
        ("stats_kg", build_stats_pipeline, reg_csv),
    ):
        builder = build(schema, csv_path.name)
        out = root / f"{builder.name}.ttl"
        report = builder.save(out)
        if not report.conforms:  # pragma: no cover - construction guarantees
            raise AssertionError(f"demo fixture {key} does not conform")
        paths[key] = str(out)
    return paths
