"""Batch template fixtures shared by the CLI and acceptance suites."""

import json
import shutil

from kgflow import namespaces as ns


def sweep_template(ratio_values=None):
    """Normalization x model grid over the regression workspace data.

    With `ratio_values` the grid instead sweeps the split ratio on one
    pinned pipeline, which is how a failing grid point gets provoked.
    """
    template = {
        "name": "sweep",
        "csv_path": "regression.csv",
        "grid": {
            "norm": [ns.STATS + "MinMaxMethod", ns.STATS + "ZScoreMethod"],
            "model": [ns.ML + "KNNMethod", ns.ML + "LinearRegressionMethod"],
        },
        "entities": [
            {"name": "x", "column": "x", "semantics": ns.DS + "Numerical", "structure": ns.DS + "Vector"},
            {"name": "yval", "column": "yval", "semantics": ns.DS + "Numerical", "structure": ns.DS + "Vector"},
        ],
        "tasks": [
            {"task": ns.STATS + "Normalization", "method": "$norm", "inputs": ["x"]},
            {
                "task": ns.ML + "DataSplitting", "method": ns.ML + "TrainTestSplitMethod",
                "inputs": ["@1.normalized", "yval"], "params": {"ratio": 0.75, "seed": 3},
            },
            {"task": ns.ML + "Train", "method": "$model", "inputs": ["@2.train_features", "@2.train_labels"]},
            {"task": ns.ML + "Test", "method": "$model", "inputs": ["@3.model", "@2.test_features"]},
            {
                "task": ns.ML + "PerformanceCalculation", "method": ns.ML + "MAEMethod",
                "inputs": ["@4.predictions", "@2.test_labels"],
            },
        ],
    }
    if ratio_values is not None:
        template["grid"] = {"r": ratio_values}
        template["tasks"][0]["method"] = ns.STATS + "MinMaxMethod"
        template["tasks"][1]["params"] = {"ratio": "$r", "seed": 3}
        template["tasks"][2]["method"] = ns.ML + "LinearRegressionMethod"
        template["tasks"][3]["method"] = ns.ML + "LinearRegressionMethod"
    return template


def write_template(target_dir, workspace, template):
    shutil.copy(workspace / "regression.csv", target_dir / "regression.csv")
    path = target_dir / "template.json"
    path.write_text(json.dumps(template))
    return path
