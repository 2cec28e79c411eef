"""Command-line front end: validate, run, batch, catalog, export-plan, serve.

Exit codes are stable API: 0 success, 1 validation failure, 2 file or
usage errors, 3 runtime failure. `--format json` emits the same payloads
the HTTP service produces, so scripted callers can treat both alike.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import Optional

from . import namespaces as ns
from .builder import build_from_template, grid_points
from .errors import (
    IoError,
    KgflowError,
    MissingColumnError,
    RuntimeFailure,
    TurtleSyntaxError,
    UnknownClassError,
    ValidationFailedError,
)
from .execution import (
    RunResult,
    compile_plan,
    execute,
    export_plan_script,
    load_dataset,
    load_exekg,
)
from .schema import SchemaSet, load_builtin_schemata
from .service import catalog_payload, serve
from .validation import ValidationReport, load_shapes, validate_document

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_RUNTIME = 3


def _dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2)


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_USAGE


def _report_lines(report: ValidationReport) -> str:
    if report.conforms:
        return "conforms: no violations"
    lines = [f"{len(report.violations)} violation(s):"]
    for v in report.violations:
        lines.append(f"  [{v.kind}] {v.focus_node}: {v.message}")
    return "\n".join(lines)


def _binding_line(iri: str, value) -> str:
    local = ns.local_name(iri)
    d = value.to_dict()
    if d["kind"] == "single":
        v = d["value"]
        # Scores read best as percentages in terminal output.
        if local.endswith("_score") and isinstance(v, float):
            return f"  {local}: {v * 100:g}%"
        return f"  {local}: {v}"
    if d["kind"] == "model":
        return f"  {local}: {d['algorithm']} model"
    if d["kind"] == "vector":
        return f"  {local}: vector[{d['length']}]"
    return f"  {local}: matrix[{d['rows']}x{d['cols']}]"


def _result_lines(result: RunResult) -> str:
    lines = [f"pipeline {result.pipeline}: {result.status}"]
    for iri in sorted(result.bindings):
        lines.append(_binding_line(iri, result.bindings[iri]))
    for path in result.artifacts:
        lines.append(f"  wrote {path}")
    if result.status != "success":
        lines.append(f"  failed at {result.failed_task}: {result.error}")
    return "\n".join(lines)


def _emit(args, payload: dict, text: str) -> None:
    print(_dumps(payload) if args.format == "json" else text)


# ---------------------------------------------------------------------------
# Subcommands


def cmd_validate(args) -> int:
    schema = load_builtin_schemata()
    try:
        text = Path(args.path).read_text(encoding="utf-8")
    except OSError as exc:
        return _fail(f"cannot read {args.path}: {exc}")
    report = validate_document(text, load_shapes(schema), schema)
    _emit(args, report.to_dict(), _report_lines(report))
    return EXIT_OK if report.conforms else EXIT_INVALID


def _load_for_run(args, schema: SchemaSet):
    """Shared load path for run/export-plan; returns a plan or an exit code."""
    try:
        metadata, tasks = load_exekg(args.path, schema)
        return compile_plan(tasks, metadata, schema)
    except (IoError, TurtleSyntaxError) as exc:
        return _fail(str(exc))
    except UnknownClassError as exc:
        return _fail(str(exc))
    except ValidationFailedError as exc:
        _emit(args, exc.report.to_dict(), _report_lines(exc.report))
        return EXIT_INVALID
    except KgflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def cmd_run(args) -> int:
    schema = load_builtin_schemata()
    plan = _load_for_run(args, schema)
    if isinstance(plan, int):
        return plan
    dataset = None
    if args.dataset is not None:
        try:
            dataset = load_dataset(args.dataset)
        except KgflowError as exc:
            return _fail(str(exc))
    try:
        result = execute(
            plan, dataset=dataset, artifact_dir=args.out, seed_override=args.seed
        )
    except MissingColumnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except RuntimeFailure as exc:
        if exc.partial is not None:
            _emit(args, exc.partial.to_dict(), _result_lines(exc.partial))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    _emit(args, result.to_dict(), _result_lines(result))
    return EXIT_OK


def _headline_metric(result: RunResult) -> str:
    metric = ""
    for iri, value in result.bindings.items():
        d = value.to_dict()
        if ns.local_name(iri).endswith("_score") and d["kind"] == "single":
            metric = repr(d["value"])
    return metric


def cmd_batch(args) -> int:
    schema = load_builtin_schemata()
    try:
        template = json.loads(Path(args.template).read_text(encoding="utf-8"))
    except OSError as exc:
        return _fail(f"cannot read {args.template}: {exc}")
    except json.JSONDecodeError as exc:
        return _fail(f"template is not valid JSON: {exc}")
    if not isinstance(template, dict):
        return _fail("template must be a JSON object")

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    template_dir = Path(args.template).resolve().parent
    base = template.get("name", "pipeline")
    datasets: dict = {}
    rows = []
    for i, point in enumerate(grid_points(template.get("grid", {}))):
        name = f"{base}{i}"
        row = {"pipeline": name, "status": "success", "metric": "", "error": ""}
        try:
            builder = build_from_template(template, point, schema, name)
            path = out / f"{name}.ttl"
            report = builder.save(path)
            if not report.conforms:
                row.update(status="invalid", error=report.violations[0].message)
            else:
                # Dataset paths resolve against the template's directory, so
                # generated graphs keep portable relative paths.
                csv_path = Path(builder.csv_path)
                if not csv_path.is_absolute():
                    csv_path = template_dir / csv_path
                if csv_path not in datasets:
                    datasets[csv_path] = load_dataset(csv_path)
                metadata, tasks = load_exekg(path, schema)
                result = execute(
                    compile_plan(tasks, metadata, schema),
                    dataset=datasets[csv_path],
                    artifact_dir=out / f"{name}_artifacts",
                    seed_override=args.seed,
                )
                row["metric"] = _headline_metric(result)
        except RuntimeFailure as exc:
            row.update(status="failed", error=exc.cause)
        except KgflowError as exc:
            row.update(status="failed", error=str(exc))
        rows.append(row)

    results_path = out / "results.csv"
    with results_path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["pipeline", "status", "metric", "error"])
        writer.writeheader()
        writer.writerows(rows)

    text = "\n".join(
        f"{r['pipeline']}: {r['status']}" + (f" metric={r['metric']}" if r["metric"] else "")
        + (f" ({r['error']})" if r["error"] else "")
        for r in rows
    ) or "empty grid: nothing to do"
    _emit(args, {"results": rows, "results_csv": str(results_path)}, text)
    return EXIT_OK if all(r["status"] == "success" for r in rows) else EXIT_INVALID


def cmd_catalog(args) -> int:
    payload = catalog_payload(load_builtin_schemata())
    lines = ["tasks:"]
    for entry in payload["tasks"]:
        methods = ", ".join(ns.local_name(m) for m in entry["methods"])
        lines.append(f"  {entry['label']} ({methods})")
    lines.append("methods:")
    for entry in payload["methods"]:
        params = ", ".join(p["name"] for p in entry["params"]) or "no params"
        lines.append(f"  {entry['label']} ({params})")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_export_plan(args) -> int:
    plan = _load_for_run(args, load_builtin_schemata())
    if isinstance(plan, int):
        return plan
    print(export_plan_script(plan), end="")
    return EXIT_OK


def cmd_serve(args) -> int:
    serve(host=args.host, port=args.port, artifact_dir=args.artifacts)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser


def _add_format(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format", choices=("json", "text"), default="text",
        help="output format (default: text)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kgflow",
        description="Build, validate, and execute ML pipelines stored as knowledge graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a pipeline .ttl file")
    p.add_argument("path")
    _add_format(p)
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("run", help="validate and execute a pipeline .ttl file")
    p.add_argument("path")
    p.add_argument("--dataset", help="CSV path overriding the one in the graph")
    p.add_argument("--out", help="directory for SVG artifacts")
    p.add_argument("--seed", type=int, help="seed for params the graph leaves unpinned")
    _add_format(p)
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("batch", help="expand a template grid, then build and run each pipeline")
    p.add_argument("template", help="JSON template file with a variable grid")
    p.add_argument("--out", required=True, help="directory for generated .ttl files and results.csv")
    p.add_argument("--seed", type=int, help="seed for params the graphs leave unpinned")
    _add_format(p)
    p.set_defaults(fn=cmd_batch)

    p = sub.add_parser("catalog", help="list registered task and method classes")
    _add_format(p)
    p.set_defaults(fn=cmd_catalog)

    p = sub.add_parser("export-plan", help="print the execution plan of a pipeline file")
    p.add_argument("path")
    _add_format(p)
    p.set_defaults(fn=cmd_export_plan)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--artifacts", default="artifacts", help="artifact storage directory")
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
