"""Loading, planning, and running pipeline graphs.

The run path has three stages: `load_exekg` parses and validates a Turtle
document into ParsedTasks (fail-closed: a non-conforming graph never gets
further), `compile_plan` checks def-before-use over the task chain, and
`execute` walks the plan binding every data entity IRI to a Value exactly
once. Task/method pairs dispatch through a key registry, so methods added
via SchemaSet.register_extension run with no changes here.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from . import methods as ml
from . import namespaces as ns
from .builder import DataEntityRef
from .errors import (
    DimensionMismatchError,
    EmptyFileError,
    EmptyPipelineError,
    IoError,
    MissingColumnError,
    RaggedRowsError,
    RuntimeFailure,
    UnboundImplementationError,
    UnboundInputError,
    UnknownClassError,
    ValidationFailedError,
)
from .plotting import CanvasState, PlotArtifact, render_plot
from .rdf import Graph, Iri, Literal, TriplePattern, parse_turtle
from .schema import SchemaSet
from .validation import load_shapes, validate


# ---------------------------------------------------------------------------
# Values


@dataclass(frozen=True)
class SingleValue:
    """A scalar, a string, or an opaque trained model."""

    value: object

    def to_dict(self) -> dict:
        v = self.value
        if isinstance(v, (bool, int, float, str)):
            return {"kind": "single", "value": v}
        out: dict = {"kind": "model", "algorithm": v.algorithm}
        if isinstance(v, ml.LinearModel):
            out["coefficients"] = list(v.coefficients)
            out["intercept"] = v.intercept
        elif isinstance(v, ml.KnnModel):
            out["k"] = v.k
            out["points"] = len(v.points)
        elif isinstance(v, ml.KMeansModel):
            out["centroids"] = [list(c) for c in v.centroids]
        return out


@dataclass(frozen=True)
class VectorValue:
    values: tuple

    def to_dict(self) -> dict:
        return {"kind": "vector", "length": len(self.values), "values": list(self.values)}


@dataclass(frozen=True)
class MatrixValue:
    rows: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        widths = {len(r) for r in self.rows}
        if len(widths) > 1:
            raise ValueError(f"matrix rows have unequal widths {sorted(widths)}")

    @property
    def width(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def column(self, index: int) -> tuple:
        return tuple(row[index] for row in self.rows)

    def to_dict(self) -> dict:
        # Matrices are summarized, not inlined; vectors carry full values.
        return {"kind": "matrix", "rows": len(self.rows), "cols": self.width}


Value = SingleValue | VectorValue | MatrixValue


# ---------------------------------------------------------------------------
# Datasets


@dataclass(frozen=True)
class Dataset:
    """Column-oriented CSV contents; numeric columns are float tuples."""

    column_names: tuple[str, ...]
    columns: dict[str, tuple]
    row_count: int

    def column(self, name: str) -> tuple:
        if name not in self.columns:
            raise MissingColumnError(name)
        return self.columns[name]


def _parse_float(cell: str) -> Optional[float]:
    try:
        v = float(cell)
    except ValueError:
        return None
    # Keep "nan"/"inf" cells textual; finite numbers only.
    return v if v == v and abs(v) != float("inf") else None


def parse_csv(text: str) -> Dataset:
    """Parse comma-delimited text: header row, then rectangular data rows.

    A column becomes floats only when every cell parses as a finite number;
    otherwise it stays strings. Empty cells and short/long rows are rejected.
    """
    reader = csv.reader(text.splitlines())
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyFileError("CSV file has no header row") from None
    if header == [] or header == [""]:
        raise EmptyFileError("CSV file has no header row")
    seen = set()
    for name in header:
        if name == "":
            raise RaggedRowsError(1, "empty column name in header")
        if name in seen:
            raise RaggedRowsError(1, f"duplicate column name {name!r}")
        seen.add(name)

    raw: list[list[str]] = [[] for _ in header]
    for line, row in enumerate(reader, start=2):
        if len(row) != len(header):
            raise RaggedRowsError(line, f"expected {len(header)} fields, got {len(row)}")
        for i, cell in enumerate(row):
            if cell == "":
                raise RaggedRowsError(line, f"empty cell in column {header[i]!r}")
            raw[i].append(cell)

    columns: dict[str, tuple] = {}
    for name, cells in zip(header, raw):
        floats = [_parse_float(c) for c in cells]
        if cells and all(v is not None for v in floats):
            columns[name] = tuple(floats)
        else:
            columns[name] = tuple(cells)
    return Dataset(column_names=tuple(header), columns=columns, row_count=len(raw[0]))


def load_dataset(csv_path) -> Dataset:
    try:
        text = Path(csv_path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read dataset {csv_path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise IoError(f"dataset {csv_path} is not UTF-8: {exc}") from exc
    return parse_csv(text)


# ---------------------------------------------------------------------------
# Parsed object model


@dataclass(frozen=True)
class Entity:
    """An individual with its IRI split into namespace and local name."""

    iri: str
    type_iri: str

    @property
    def name(self) -> str:
        return ns.local_name(self.iri)

    @property
    def namespace(self) -> str:
        return ns.namespace_of(self.iri)


@dataclass(frozen=True)
class ParsedMethod(Entity):
    params: dict
    explicit_params: frozenset[str]


@dataclass(frozen=True)
class ParsedTask(Entity):
    """One chain element: its method, ordered input/output slots, successor."""

    method: ParsedMethod
    inputs: dict[str, DataEntityRef]
    outputs: dict[str, DataEntityRef]
    next_task_iri: Optional[str]


@dataclass(frozen=True)
class PipelineMetadata:
    iri: str
    name: str
    namespace: str
    csv_path: str
    base_dir: Optional[Path] = None

    def resolved_csv_path(self) -> Path:
        p = Path(self.csv_path)
        if p.is_absolute() or self.base_dir is None:
            return p
        return self.base_dir / p


@dataclass(frozen=True)
class ExecutionPlan:
    metadata: PipelineMetadata
    tasks: tuple[ParsedTask, ...]
    bound_iris: tuple[str, ...]
    schema: SchemaSet


@dataclass(frozen=True)
class RunResult:
    """Outcome of one run. `timings` is measured wall time and is kept out
    of `to_dict` so identical runs serialize byte-identically."""

    status: str
    pipeline: str
    bindings: dict
    artifacts: tuple[str, ...]
    plots: tuple[PlotArtifact, ...]
    timings: dict
    failed_task: Optional[str] = None
    error: Optional[str] = None

    def to_dict(self) -> dict:
        out = {
            "status": self.status,
            "pipeline": self.pipeline,
            "bindings": {iri: value.to_dict() for iri, value in self.bindings.items()},
            "artifacts": list(self.artifacts),
            "plots": [
                {"filename": p.filename, "kind": p.kind, "canvas": p.canvas,
                 "row": p.row, "col": p.col}
                for p in self.plots
            ],
        }
        if self.status != "success":
            out["failed_task"] = self.failed_task
            out["error"] = self.error
        return out


# ---------------------------------------------------------------------------
# Implementation registry


@dataclass
class ExecContext:
    """Mutable per-run state shared by implementations."""

    seed_override: Optional[int] = None
    canvas: Optional[CanvasState] = None
    plots: list = field(default_factory=list)


Implementation = Callable[[list, dict, ExecContext], list]

_IMPLEMENTATIONS: dict[str, Implementation] = {}


def register_implementation(key: str, fn: Implementation) -> None:
    """Bind a dispatch key (`TaskLocal:MethodLocal` for shipped pairs, the
    descriptor's key for extensions) to `fn(inputs, params, ctx) -> outputs`."""
    _IMPLEMENTATIONS[key] = fn


def implementation_for(key: str) -> Implementation:
    fn = _IMPLEMENTATIONS.get(key)
    if fn is None:
        raise UnboundImplementationError(f"no implementation registered for key {key!r}")
    return fn


def registered_implementations() -> tuple[str, ...]:
    return tuple(sorted(_IMPLEMENTATIONS))


def missing_implementations(schema: SchemaSet) -> list[str]:
    """Dispatch keys the schema can produce but the registry cannot serve."""
    missing = []
    for task in schema.task_classes():
        for method in schema.compatible_methods(task):
            key = schema.implementation_key(task, method)
            if key not in _IMPLEMENTATIONS:
                missing.append(key)
    return sorted(set(missing))


# ---------------------------------------------------------------------------
# Built-in implementations


def _vector(value: Value, what: str) -> tuple:
    if not isinstance(value, VectorValue):
        raise DimensionMismatchError(f"{what} must be a vector, got {type(value).__name__}")
    return value.values


def _numeric_vector(value: Value, what: str) -> tuple:
    values = _vector(value, what)
    if not all(isinstance(v, (int, float)) for v in values):
        raise DimensionMismatchError(f"{what} must be numeric")
    return values


def _feature_matrix(values: list, what: str = "features") -> list[list[float]]:
    """Rows from one matrix, or columns stacked from numeric vectors."""
    if len(values) == 1 and isinstance(values[0], MatrixValue):
        return [list(row) for row in values[0].rows]
    cols = [_numeric_vector(v, what) for v in values]
    lengths = {len(c) for c in cols}
    if len(lengths) > 1:
        raise DimensionMismatchError(f"{what} columns have unequal lengths {sorted(lengths)}")
    return [list(row) for row in zip(*cols)]


def _matrix_rows(value: Value, what: str) -> list[list[float]]:
    if isinstance(value, MatrixValue):
        return [list(row) for row in value.rows]
    raise DimensionMismatchError(f"{what} must be a matrix, got {type(value).__name__}")


def _model(value: Value, what: str) -> ml.Model:
    if isinstance(value, SingleValue) and isinstance(value.value, (ml.LinearModel, ml.KnnModel, ml.KMeansModel)):
        return value.value
    raise DimensionMismatchError(f"{what} must be a trained model")


def _impl_split(inputs, params, ctx):
    *feature_values, label_value = inputs
    features = _feature_matrix(feature_values)
    labels = list(_vector(label_value, "labels"))
    train_f, train_l, test_f, test_l = ml.train_test_split(
        features, labels, params["ratio"], params["seed"]
    )
    return [
        MatrixValue(tuple(tuple(r) for r in train_f)),
        VectorValue(tuple(train_l)),
        MatrixValue(tuple(tuple(r) for r in test_f)),
        VectorValue(tuple(test_l)),
    ]


def _impl_classification(inputs, params, ctx):
    train_f, train_l, test_f = inputs
    model = ml.train_knn(
        _feature_matrix([train_f]), list(_vector(train_l, "training labels")), params["k"]
    )
    return [VectorValue(tuple(ml.predict(model, _feature_matrix([test_f]))))]


def _impl_regression(inputs, params, ctx):
    train_f, train_l, test_f = inputs
    model = ml.train_linear_regression(
        _feature_matrix([train_f]), list(_numeric_vector(train_l, "training targets"))
    )
    return [VectorValue(tuple(ml.predict(model, _feature_matrix([test_f]))))]


def _impl_clustering(inputs, params, ctx):
    matrix = _feature_matrix(inputs)
    model = ml.train_kmeans(matrix, params["clusters"], params["seed"])
    return [VectorValue(tuple(ml.predict(model, matrix)))]


def _impl_train_knn(inputs, params, ctx):
    features = _feature_matrix(inputs[:-1])
    labels = list(_vector(inputs[-1], "training labels"))
    return [SingleValue(ml.train_knn(features, labels, params["k"]))]


def _impl_train_linreg(inputs, params, ctx):
    features = _feature_matrix(inputs[:-1])
    targets = list(_numeric_vector(inputs[-1], "training targets"))
    return [SingleValue(ml.train_linear_regression(features, targets))]


def _impl_train_kmeans(inputs, params, ctx):
    # Labels (the last input) are accepted for slot uniformity and ignored.
    features = _feature_matrix(inputs[:-1])
    return [SingleValue(ml.train_kmeans(features, params["clusters"], params["seed"]))]


def _impl_train_mlp(inputs, params, ctx):
    raise NotImplementedError("multilayer perceptron training is declared but not shipped")


def _impl_test(inputs, params, ctx):
    model_value, feature_value = inputs
    model = _model(model_value, "first input")
    return [VectorValue(tuple(ml.predict(model, _feature_matrix([feature_value]))))]


def _metric_impl(kind: str) -> Implementation:
    def run(inputs, params, ctx):
        predicted = _vector(inputs[0], "predictions")
        actual = _vector(inputs[1], "actual values")
        return [SingleValue(ml.score(kind, predicted, actual))]

    return run


def _stat_impl(fn) -> Implementation:
    def run(inputs, params, ctx):
        return [SingleValue(fn(_numeric_vector(inputs[0], "input"), params))]

    return run


def _impl_histogram(inputs, params, ctx):
    rows = ml.grouped_frequency(_numeric_vector(inputs[0], "input"), params["bins"])
    return [MatrixValue(tuple(tuple(r) for r in rows))]


def _norm_impl(mode: str) -> Implementation:
    def run(inputs, params, ctx):
        return [VectorValue(tuple(ml.normalize(_numeric_vector(inputs[0], "input"), mode)))]

    return run


def _impl_canvas(inputs, params, ctx):
    ctx.canvas = CanvasState(name=params["name"], rows=params["rows"], cols=params["cols"])
    return []


def _plot_data(kind: str, inputs):
    if kind in ("scatter", "line"):
        if len(inputs) == 2:
            xs = _numeric_vector(inputs[0], "x values")
            ys = _numeric_vector(inputs[1], "y values")
        elif isinstance(inputs[0], MatrixValue):
            m = inputs[0]
            if m.width < 2:
                raise DimensionMismatchError(f"{kind} plot needs a 2-column matrix, got width {m.width}")
            xs, ys = m.column(0), m.column(1)
        else:
            values = _numeric_vector(inputs[0], "values")
            xs, ys = tuple(float(i) for i in range(len(values))), values
        return (xs, ys)
    if kind == "boxplot":
        return _numeric_vector(inputs[0], "values")
    return _matrix_rows(inputs[0], "heatmap input")


def _make_plot_impl(kind: str) -> Implementation:
    def run(inputs, params, ctx):
        if ctx.canvas is None:
            raise DimensionMismatchError("no canvas was configured before this plot task")
        ctx.plots.append(render_plot(kind, _plot_data(kind, inputs), ctx.canvas))
        return []

    return run


register_implementation("DataSplitting:TrainTestSplitMethod", _impl_split)
register_implementation("Classification:KNNMethod", _impl_classification)
register_implementation("Regression:LinearRegressionMethod", _impl_regression)
register_implementation("Clustering:KMeansMethod", _impl_clustering)
register_implementation("Train:KNNMethod", _impl_train_knn)
register_implementation("Train:LinearRegressionMethod", _impl_train_linreg)
register_implementation("Train:KMeansMethod", _impl_train_kmeans)
register_implementation("Train:MLPMethod", _impl_train_mlp)
register_implementation("Test:KNNMethod", _impl_test)
register_implementation("Test:LinearRegressionMethod", _impl_test)
register_implementation("Test:KMeansMethod", _impl_test)
register_implementation("PerformanceCalculation:AccuracyMethod", _metric_impl("accuracy"))
register_implementation("PerformanceCalculation:MAEMethod", _metric_impl("mae"))
register_implementation("PerformanceCalculation:MAPEMethod", _metric_impl("mape"))
register_implementation("CentralTendency:MeanMethod", _stat_impl(lambda v, p: ml.mean(v)))
register_implementation("CentralTendency:MedianMethod", _stat_impl(lambda v, p: ml.median(v)))
register_implementation("PositionMeasure:PercentileMethod", _stat_impl(lambda v, p: ml.percentile(v, p["rank"])))
register_implementation("FrequencyDistribution:GroupedFrequencyMethod", _impl_histogram)
register_implementation("Normalization:MinMaxMethod", _norm_impl("minmax"))
register_implementation("Normalization:ZScoreMethod", _norm_impl("zscore"))
register_implementation("CanvasTask:CanvasMethod", _impl_canvas)
register_implementation("ScatterPlot:ScatterMethod", _make_plot_impl("scatter"))
register_implementation("LinePlot:LineMethod", _make_plot_impl("line"))
register_implementation("BoxPlot:BoxPlotMethod", _make_plot_impl("boxplot"))
register_implementation("Heatmap:HeatmapMethod", _make_plot_impl("heatmap"))


# ---------------------------------------------------------------------------
# Loading


def _python_value(lit: Literal, datatype: str):
    if datatype == ns.XSD_INTEGER:
        return int(lit.lexical)
    if datatype == ns.XSD_DOUBLE:
        return float(lit.lexical)
    if datatype == ns.XSD_BOOLEAN:
        return lit.lexical == "true"
    return lit.lexical


def _indexed_objects(graph: Graph, subject: Iri, base: str) -> list[Iri]:
    """Objects of `base`1, `base`2, ... in slot order; falls back to the
    unindexed property (sorted by IRI) for graphs written without indexes."""
    found = []
    i = 1
    while True:
        obj = graph.value(subject, Iri(f"{base}{i}"))
        if obj is None:
            break
        found.append(obj)
        i += 1
    if found:
        return found
    return list(graph.objects(subject, Iri(base)))


def _entity_ref(graph: Graph, iri: Iri) -> DataEntityRef:
    column = graph.value(iri, Iri(ns.DS + "hasSourceColumn"))
    semantics = graph.value(iri, Iri(ns.DS + "hasDataSemantics"))
    structure = graph.value(iri, Iri(ns.DS + "hasDataStructure"))
    return DataEntityRef(
        iri=iri.value,
        name=ns.local_name(iri.value),
        source_column=column.lexical if isinstance(column, Literal) else None,
        referenced_output=None if isinstance(column, Literal) else iri.value,
        semantics=semantics.value if isinstance(semantics, Iri) else "",
        structure=structure.value if isinstance(structure, Iri) else "",
    )


def _single_type(graph: Graph, iri: Iri, allowed: set[str]) -> str:
    types = [o.value for o in graph.objects(iri, Iri(ns.RDF_TYPE)) if isinstance(o, Iri)]
    matches = [t for t in types if t in allowed]
    # Validation guarantees exactly one; defend anyway for direct callers.
    if len(matches) != 1:
        raise UnknownClassError(f"{iri.value} has {len(matches)} registered types, expected 1")
    return matches[0]


def _parse_task(graph: Graph, task_iri: Iri, schema: SchemaSet) -> ParsedTask:
    task_class = _single_type(graph, task_iri, set(schema.task_classes()))
    method_iri = graph.value(task_iri, Iri(ns.DS + "hasMethod"))
    method_class = _single_type(graph, method_iri, set(schema.method_classes()))

    params: dict = {}
    explicit: set[str] = set()
    for spec in schema.params_of(method_class):
        obj = graph.value(method_iri, Iri(spec.property_iri))
        if isinstance(obj, Literal):
            params[spec.name] = _python_value(obj, spec.datatype)
            explicit.add(spec.name)
        elif spec.default is not None:
            params[spec.name] = spec.default

    inputs = {
        f"input{i}": _entity_ref(graph, obj)
        for i, obj in enumerate(_indexed_objects(graph, task_iri, ns.DS + "hasInput"), start=1)
    }
    io = schema.io_spec_of(task_class)
    out_objs = _indexed_objects(graph, task_iri, ns.DS + "hasOutput")
    outputs = {
        io.outputs[i].name: _entity_ref(graph, obj) for i, obj in enumerate(out_objs)
    }
    next_obj = graph.value(task_iri, Iri(ns.DS + "hasNextTask"))
    return ParsedTask(
        iri=task_iri.value,
        type_iri=task_class,
        method=ParsedMethod(
            iri=method_iri.value,
            type_iri=method_class,
            params=params,
            explicit_params=frozenset(explicit),
        ),
        inputs=inputs,
        outputs=outputs,
        next_task_iri=next_obj.value if isinstance(next_obj, Iri) else None,
    )


def _pipeline_name(namespace: str, pipeline_iri: str) -> str:
    marker = "/pipeline/"
    trimmed = namespace.rstrip("#/")
    if marker in trimmed:
        return trimmed.rsplit("/", 1)[-1]
    return ns.local_name(pipeline_iri)


def parse_exekg_graph(
    graph: Graph, schema: SchemaSet, base_dir: Optional[Path] = None
) -> tuple[PipelineMetadata, list[ParsedTask]]:
    """Validate a pipeline graph and map it to the parsed object model."""
    known = set(schema.classes)
    declared = {
        t.object.value
        for t in graph.match(TriplePattern(None, Iri(ns.RDF_TYPE), None))
        if isinstance(t.object, Iri)
    }
    for cls in sorted(declared - known):
        raise UnknownClassError(f"unknown class {cls}")

    report = validate(graph, load_shapes(schema), schema)
    if not report.conforms:
        raise ValidationFailedError(report)

    pipelines = graph.subjects(Iri(ns.RDF_TYPE), Iri(ns.DS + "Pipeline"))
    pipeline_iri = pipelines[0].value
    path_lit = graph.value(Iri(pipeline_iri), Iri(ns.DS + "hasInputDataPath"))
    namespace = ns.namespace_of(pipeline_iri)
    metadata = PipelineMetadata(
        iri=pipeline_iri,
        name=_pipeline_name(namespace, pipeline_iri),
        namespace=namespace,
        csv_path=path_lit.lexical if isinstance(path_lit, Literal) else "",
        base_dir=base_dir,
    )

    tasks = []
    cursor = graph.value(Iri(pipeline_iri), Iri(ns.DS + "hasNextTask"))
    while isinstance(cursor, Iri):
        task = _parse_task(graph, cursor, schema)
        tasks.append(task)
        cursor = Iri(task.next_task_iri) if task.next_task_iri else None
    return metadata, tasks


def load_exekg(path, schema: SchemaSet) -> tuple[PipelineMetadata, list[ParsedTask]]:
    """Parse a `.ttl` pipeline file; refuses non-conforming graphs."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    graph = parse_turtle(text)
    return parse_exekg_graph(graph, schema, base_dir=p.parent)


# ---------------------------------------------------------------------------
# Planning


def compile_plan(
    tasks: list[ParsedTask], metadata: PipelineMetadata, schema: SchemaSet
) -> ExecutionPlan:
    """Order-check the chain: every input must be a source column or an
    output of an earlier task."""
    if not tasks:
        raise EmptyPipelineError(f"pipeline {metadata.name!r} has no tasks")
    bound: list[str] = []
    produced: set[str] = set()
    for task in tasks:
        for slot, ref in task.inputs.items():
            if ref.source_column is None and ref.iri not in produced:
                raise UnboundInputError(
                    f"{task.iri} {slot} references {ref.iri}, which no earlier task produces"
                )
        for ref in task.outputs.values():
            produced.add(ref.iri)
            bound.append(ref.iri)
    return ExecutionPlan(
        metadata=metadata, tasks=tuple(tasks), bound_iris=tuple(bound), schema=schema
    )


# ---------------------------------------------------------------------------
# Execution


def _resolve_input(ref: DataEntityRef, dataset: Dataset, bindings: dict) -> Value:
    if ref.source_column is not None:
        return VectorValue(tuple(dataset.column(ref.source_column)))
    if ref.iri not in bindings:
        raise UnboundInputError(f"{ref.iri} is not bound")
    return bindings[ref.iri]


def execute(
    plan: ExecutionPlan,
    dataset: Optional[Dataset] = None,
    artifact_dir=None,
    seed_override: Optional[int] = None,
) -> RunResult:
    """Run the plan sequentially, binding each entity IRI exactly once.

    A task exception aborts the run with RuntimeFailure carrying the partial
    result; a missing dataset column raises MissingColumnError directly.
    `seed_override` fills seed params the graph leaves unpinned; explicit
    literals in the graph always win.
    """
    if dataset is None:
        dataset = load_dataset(plan.metadata.resolved_csv_path())
    ctx = ExecContext(seed_override=seed_override)
    bindings: dict = {}
    timings: dict = {}
    artifacts: list[str] = []
    written = 0

    out_dir = None if artifact_dir is None else Path(artifact_dir)

    def flush_plots() -> None:
        # The directory is created lazily: plot-free runs leave no trace.
        nonlocal written
        if out_dir is None:
            written = len(ctx.plots)
            return
        for plot in ctx.plots[written:]:
            out_dir.mkdir(parents=True, exist_ok=True)
            target = out_dir / plot.filename
            target.write_text(plot.svg, encoding="utf-8")
            artifacts.append(str(target))
        written = len(ctx.plots)

    for task in plan.tasks:
        started = time.perf_counter()
        try:
            ins = [_resolve_input(ref, dataset, bindings) for ref in task.inputs.values()]
        except MissingColumnError:
            raise
        key = plan.schema.implementation_key(task.type_iri, task.method.type_iri)
        params = dict(task.method.params)
        if (
            seed_override is not None
            and "seed" not in task.method.explicit_params
            and any(s.name == "seed" for s in plan.schema.params_of(task.method.type_iri))
        ):
            params["seed"] = seed_override
        try:
            fn = implementation_for(key)
            outs = fn(ins, params, ctx)
            slots = list(task.outputs.values())
            if len(outs) != len(slots):
                raise DimensionMismatchError(
                    f"{key} returned {len(outs)} values for {len(slots)} outputs"
                )
            for ref, value in zip(slots, outs):
                if ref.iri in bindings:
                    raise UnboundInputError(f"{ref.iri} bound twice")
                bindings[ref.iri] = value
        except Exception as exc:
            flush_plots()
            timings[task.iri] = time.perf_counter() - started
            partial = RunResult(
                status="failed",
                pipeline=plan.metadata.name,
                bindings=dict(bindings),
                artifacts=tuple(artifacts),
                plots=tuple(ctx.plots),
                timings=dict(timings),
                failed_task=task.iri,
                error=f"{type(exc).__name__}: {exc}",
            )
            raise RuntimeFailure(task.iri, f"{type(exc).__name__}: {exc}", partial) from exc
        timings[task.iri] = time.perf_counter() - started
        flush_plots()

    missing = [iri for iri in plan.bound_iris if iri not in bindings]
    if missing:
        raise UnboundInputError(f"run finished with unbound outputs: {missing[:3]}")
    return RunResult(
        status="success",
        pipeline=plan.metadata.name,
        bindings=bindings,
        artifacts=tuple(artifacts),
        plots=tuple(ctx.plots),
        timings=timings,
    )


def run_exekg(
    path,
    schema: SchemaSet,
    dataset: Optional[Dataset] = None,
    artifact_dir=None,
    seed_override: Optional[int] = None,
) -> RunResult:
    """Load, plan, and execute a pipeline file in one call."""
    metadata, tasks = load_exekg(path, schema)
    plan = compile_plan(tasks, metadata, schema)
    return execute(plan, dataset=dataset, artifact_dir=artifact_dir, seed_override=seed_override)


# ---------------------------------------------------------------------------
# Plan export


def export_plan_script(plan: ExecutionPlan) -> str:
    """Human-readable step listing of a compiled plan; deterministic."""
    lines = [
        f"# pipeline: {plan.metadata.name}",
        f"# dataset: {plan.metadata.csv_path}",
        "",
    ]
    for i, task in enumerate(plan.tasks, start=1):
        lines.append(f"step {i}: {ns.local_name(task.type_iri)} via {ns.local_name(task.method.type_iri)}")
        if task.method.params:
            rendered = ", ".join(f"{k}={task.method.params[k]!r}" for k in sorted(task.method.params))
            lines.append(f"  params: {rendered}")
        for slot, ref in task.inputs.items():
            source = f"column {ref.source_column!r}" if ref.source_column else ref.name
            lines.append(f"  {slot}: {source}")
        for name, ref in task.outputs.items():
            lines.append(f"  output {name}: {ref.name}")
        lines.append("")
    return "\n".join(lines)
