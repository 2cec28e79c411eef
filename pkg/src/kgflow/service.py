"""HTTP companion service for catalog browsing, validation, and execution.

A thin stdlib server over the library: GET /catalog describes the registry,
POST /validate returns a validation report for Turtle text, POST /run
validates then executes (inlining small SVG artifacts), and POST /recommend
maps dataset column metadata to a task/method suggestion through fixed,
deterministic rules. State is immutable registry data plus an artifact
directory; concurrent requests share nothing else.
"""

from __future__ import annotations

import itertools
import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional

from . import namespaces as ns
from .errors import (
    KgflowError,
    MissingColumnError,
    RuntimeFailure,
    TurtleSyntaxError,
    UnknownClassError,
    ValidationFailedError,
)
from .execution import compile_plan, execute, parse_csv, parse_exekg_graph
from .rdf import parse_turtle
from .schema import SchemaSet, load_builtin_schemata
from .validation import load_shapes, validate

INLINE_SVG_CAP = 256 * 1024

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".svg": "image/svg+xml",
    ".map": "application/json",
    ".ico": "image/x-icon",
}


def catalog_payload(schema: SchemaSet) -> dict:
    """Registry contents in presentation form: concrete tasks and methods
    plus the semantics/structure vocabularies for data entity declarations."""
    tasks = []
    for iri in schema.task_classes():
        info = schema.classes[iri]
        io = schema.io_spec_of(iri)
        tasks.append({
            "iri": iri,
            "kind": "task",
            "label": info.label,
            "parent": info.parent,
            "methods": list(schema.compatible_methods(iri)),
            "min_inputs": io.min_inputs,
            "max_inputs": io.max_inputs,
            "outputs": [
                {"name": o.name, "structure": o.structure, "semantics": o.semantics}
                for o in io.outputs
            ],
        })
    methods = []
    for iri in schema.method_classes():
        info = schema.classes[iri]
        methods.append({
            "iri": iri,
            "kind": "method",
            "label": info.label,
            "parent": info.parent,
            "params": [
                {"name": p.name, "property": p.property_iri, "datatype": p.datatype,
                 "default": p.default, "required": p.required}
                for p in schema.params_of(iri)
            ],
        })

    def vocabulary(kind: str, root: str) -> list[dict]:
        iris = sorted(
            i for i, c in schema.classes.items() if c.kind == kind and i != root
        )
        return [{"iri": i, "label": schema.classes[i].label} for i in iris]

    return {
        "tasks": tasks,
        "methods": methods,
        "semantics": vocabulary("semantics", ns.DS + "DataSemantics"),
        "structures": vocabulary("structure", ns.DS + "DataStructure"),
    }


def recommend(columns: list[dict], label_column: Optional[str]) -> dict:
    """Fixed rule table from dataset shape to a starting task/method pair."""
    types = {c["name"]: c["type"] for c in columns}
    if label_column is not None and label_column not in types:
        raise KeyError(label_column)
    if label_column is None:
        return {
            "task": ns.ML + "Clustering",
            "method": ns.ML + "KMeansMethod",
            "reason": "no label column: unsupervised grouping of the feature columns",
        }
    if types[label_column] == "numeric":
        return {
            "task": ns.ML + "Regression",
            "method": ns.ML + "LinearRegressionMethod",
            "reason": f"numeric label column {label_column!r}: predict its value",
        }
    return {
        "task": ns.ML + "Classification",
        "method": ns.ML + "KNNMethod",
        "reason": f"categorical label column {label_column!r}: predict its class",
    }


class KgflowServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address, schema: SchemaSet, artifact_dir, static_dir):
        super().__init__(address, _Handler)
        self.schema = schema
        self.shapes = load_shapes(schema)
        self.artifact_dir = Path(artifact_dir)
        self.static_dir = None if static_dir is None else Path(static_dir)
        self.run_ids = itertools.count(1)
        self.run_lock = threading.Lock()

    def next_run_id(self) -> int:
        with self.run_lock:
            return next(self.run_ids)


class _Handler(BaseHTTPRequestHandler):
    server: KgflowServer
    protocol_version = "HTTP/1.1"

    def log_message(self, format, *args):  # noqa: A002 - stdlib signature
        pass

    # -- plumbing ------------------------------------------------------------

    def _send(self, code: int, body: bytes, content_type: str) -> None:
        self.send_response(code)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _json(self, code: int, payload: dict) -> None:
        body = json.dumps(payload, sort_keys=True, indent=2).encode("utf-8")
        self._send(code, body, "application/json")

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()

    # -- GET -----------------------------------------------------------------

    def do_GET(self):
        path = self.path.split("?", 1)[0]
        if path == "/catalog":
            self._json(200, catalog_payload(self.server.schema))
            return
        if path.startswith("/artifacts/"):
            self._serve_file(self.server.artifact_dir, path[len("/artifacts/"):])
            return
        if self.server.static_dir is not None:
            self._serve_file(self.server.static_dir, path.lstrip("/") or "index.html")
            return
        self._json(404, {"error": f"no such resource {path!r}"})

    def _serve_file(self, root: Path, relative: str) -> None:
        try:
            target = (root / relative).resolve()
            root_resolved = root.resolve()
        except OSError:
            self._json(404, {"error": "unreadable path"})
            return
        if root_resolved not in target.parents and target != root_resolved:
            self._json(404, {"error": "path escapes the served directory"})
            return
        if not target.is_file():
            self._json(404, {"error": f"no such file {relative!r}"})
            return
        content_type = _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
        self._send(200, target.read_bytes(), content_type)

    # -- POST ----------------------------------------------------------------

    def do_POST(self):
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length)
        try:
            body = json.loads(raw.decode("utf-8"))
            if not isinstance(body, dict):
                raise ValueError("body must be a JSON object")
        except (ValueError, UnicodeDecodeError) as exc:
            self._json(400, {"error": f"malformed request body: {exc}"})
            return
        path = self.path.split("?", 1)[0]
        if path == "/validate":
            self._post_validate(body)
        elif path == "/run":
            self._post_run(body)
        elif path == "/recommend":
            self._post_recommend(body)
        else:
            self._json(404, {"error": f"no such resource {path!r}"})

    def _parse_body_graph(self, body: dict):
        turtle = body.get("turtle")
        if not isinstance(turtle, str):
            self._json(400, {"error": "body needs a 'turtle' string field"})
            return None
        try:
            return parse_turtle(turtle)
        except TurtleSyntaxError as exc:
            self._json(400, {"error": f"turtle parse error: {exc}"})
            return None

    def _post_validate(self, body: dict) -> None:
        graph = self._parse_body_graph(body)
        if graph is None:
            return
        report = validate(graph, self.server.shapes, self.server.schema)
        self._json(200, report.to_dict())

    def _post_run(self, body: dict) -> None:
        graph = self._parse_body_graph(body)
        if graph is None:
            return
        report = validate(graph, self.server.shapes, self.server.schema)
        if not report.conforms:
            self._json(422, report.to_dict())
            return

        dataset = None
        if "dataset_csv" in body:
            try:
                dataset = parse_csv(body["dataset_csv"])
            except KgflowError as exc:
                self._json(400, {"error": f"bad inline dataset: {exc}"})
                return
        seed = body.get("seed")
        if seed is not None and not isinstance(seed, int):
            self._json(400, {"error": "'seed' must be an integer"})
            return

        schema = self.server.schema
        try:
            metadata, tasks = parse_exekg_graph(graph, schema)
            plan = compile_plan(tasks, metadata, schema)
            result = execute(plan, dataset=dataset, seed_override=seed)
        except ValidationFailedError as exc:
            self._json(422, exc.report.to_dict())
            return
        except UnknownClassError as exc:
            self._json(400, {"error": str(exc)})
            return
        except RuntimeFailure as exc:
            partial = exc.partial.to_dict() if exc.partial is not None else None
            self._json(500, {
                "error": exc.cause,
                "failed_task": exc.task_iri,
                "report": report.to_dict(),
                "result": partial,
            })
            return
        except MissingColumnError as exc:
            self._json(500, {
                "error": str(exc),
                "failed_task": None,
                "report": report.to_dict(),
                "result": None,
            })
            return
        except KgflowError as exc:
            self._json(400, {"error": str(exc)})
            return

        payload = {
            "report": report.to_dict(),
            "result": result.to_dict(),
            "plots": self._render_plots(result),
        }
        self._json(200, payload)

    def _render_plots(self, result) -> list[dict]:
        rendered = []
        run_id: Optional[int] = None
        for plot in result.plots:
            entry = {
                "filename": plot.filename, "kind": plot.kind, "canvas": plot.canvas,
                "row": plot.row, "col": plot.col,
            }
            if len(plot.svg.encode("utf-8")) <= INLINE_SVG_CAP:
                entry["svg"] = plot.svg
            else:
                # Oversized artifacts go to disk and come back by reference.
                if run_id is None:
                    run_id = self.server.next_run_id()
                target_dir = self.server.artifact_dir / f"run{run_id}"
                target_dir.mkdir(parents=True, exist_ok=True)
                (target_dir / plot.filename).write_text(plot.svg, encoding="utf-8")
                entry["url"] = f"/artifacts/run{run_id}/{plot.filename}"
            rendered.append(entry)
        return rendered

    def _post_recommend(self, body: dict) -> None:
        columns = body.get("columns")
        label = body.get("label_column")
        if not isinstance(columns, list) or not all(
            isinstance(c, dict) and isinstance(c.get("name"), str)
            and c.get("type") in ("numeric", "string")
            for c in columns
        ):
            self._json(400, {"error": "body needs 'columns': [{name, type: numeric|string}]"})
            return
        if label is not None and not isinstance(label, str):
            self._json(400, {"error": "'label_column' must be a string when present"})
            return
        try:
            self._json(200, recommend(columns, label))
        except KeyError:
            self._json(400, {"error": f"label column {label!r} is not among the columns"})


def make_server(
    host: str = "127.0.0.1",
    port: int = 8765,
    schema: Optional[SchemaSet] = None,
    artifact_dir="artifacts",
    static_dir=None,
) -> KgflowServer:
    """Build (but do not start) a server; port 0 picks a free port."""
    if schema is None:
        schema = load_builtin_schemata()
    if static_dir is None:
        candidate = Path("frontend") / "dist"
        static_dir = candidate if candidate.is_dir() else None
    return KgflowServer((host, port), schema, artifact_dir, static_dir)


def serve(
    host: str = "127.0.0.1",
    port: int = 8765,
    schema: Optional[SchemaSet] = None,
    artifact_dir="artifacts",
    static_dir=None,
) -> None:
    """Run the service until interrupted."""
    server = make_server(host, port, schema, artifact_dir, static_dir)
    address = f"http://{server.server_address[0]}:{server.server_address[1]}"
    print(f"kgflow service listening on {address}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
