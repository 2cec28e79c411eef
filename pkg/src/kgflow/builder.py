"""Incremental construction of pipeline knowledge graphs.

A PipelineBuilder mints deterministic IRIs in a per-pipeline namespace:
class-counter locals for tasks and methods (`exe:Classification1`,
`exe:KNNMethod1`), user names for declared data entities (`exe:temp`), and
`<TaskLocal>_<slot>` for task outputs (`exe:DataSplitting1_train_features`).
Graphs are valid by construction; `save` re-validates anyway and refuses to
write a non-conforming document.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from . import namespaces as ns
from .errors import (
    ArityMismatchError,
    DuplicateEntityNameError,
    EmptyPipelineError,
    IncompatibleMethodError,
    InvalidNameError,
    IoError,
    KgflowError,
    ParamTypeError,
    UnknownClassError,
    UnknownParamError,
    ValidationFailedError,
)
from .rdf import Graph, Iri, Literal, Triple
from .schema import ParamSpec, SchemaSet
from .validation import ValidationReport, load_shapes, validate

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_\-]*$")


@dataclass(frozen=True)
class DataEntityRef:
    """Handle to a data entity individual.

    Exactly one of `source_column` (CSV-backed input) and `referenced_output`
    (bound by a producing task) is set.
    """

    iri: str
    name: str
    source_column: Optional[str]
    referenced_output: Optional[str]
    semantics: str
    structure: str

    def __post_init__(self):
        if (self.source_column is None) == (self.referenced_output is None):
            raise ValueError("exactly one of source_column/referenced_output must be set")


@dataclass(frozen=True)
class TaskHandle:
    iri: str
    task_class: str
    method_iri: str
    method_class: str
    outputs: tuple[DataEntityRef, ...]

    def output(self, name: str) -> DataEntityRef:
        for ref in self.outputs:
            if ref.name == name:
                return ref
        raise KeyError(f"{self.iri} has no output named {name!r}")


def format_literal(value, datatype: str) -> Literal:
    """Canonical literal for a Python param value of a declared datatype."""
    if datatype == ns.XSD_INTEGER:
        return Literal(str(value), datatype)
    if datatype == ns.XSD_DOUBLE:
        return Literal(repr(float(value)), datatype)
    if datatype == ns.XSD_BOOLEAN:
        return Literal("true" if value else "false", datatype)
    return Literal(str(value), datatype)


def check_param_value(spec: ParamSpec, value) -> object:
    """Type-check (and mildly coerce) a param value against its spec."""
    if spec.datatype == ns.XSD_INTEGER:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ParamTypeError(f"param {spec.name!r} expects an integer, got {value!r}")
        return value
    if spec.datatype == ns.XSD_DOUBLE:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ParamTypeError(f"param {spec.name!r} expects a number, got {value!r}")
        return float(value)
    if spec.datatype == ns.XSD_BOOLEAN:
        if not isinstance(value, bool):
            raise ParamTypeError(f"param {spec.name!r} expects a boolean, got {value!r}")
        return value
    if not isinstance(value, str):
        raise ParamTypeError(f"param {spec.name!r} expects a string, got {value!r}")
    return value


class PipelineBuilder:
    """Single-writer builder for one pipeline graph."""

    def __init__(self, name: str, csv_path: str, schema: SchemaSet):
        if not _NAME_RE.match(name):
            raise InvalidNameError(f"pipeline name {name!r} is not a valid IRI local name")
        self.name = name
        self.csv_path = csv_path
        self.schema = schema
        self.namespace = ns.pipeline_namespace(name)
        self.graph = Graph(prefixes={**ns.STANDARD_PREFIXES, "exe": self.namespace})
        self._counters: dict[str, itertools.count] = {}
        self._entity_names: set[str] = set()
        self._last_task: Optional[str] = None
        self.pipeline_iri = self._mint(ns.DS + "Pipeline")
        self._add(self.pipeline_iri, ns.RDF_TYPE, Iri(ns.DS + "Pipeline"))
        self._add(self.pipeline_iri, ns.DS + "hasInputDataPath", Literal(csv_path))

    # -- low-level -----------------------------------------------------------

    def _mint(self, class_iri: str) -> str:
        local = ns.local_name(class_iri)
        counter = self._counters.setdefault(local, itertools.count(1))
        return f"{self.namespace}{local}{next(counter)}"

    def _add(self, subject: str, predicate: str, obj) -> None:
        self.graph.insert(Triple(Iri(subject), Iri(predicate), obj))

    # -- operations ----------------------------------------------------------

    def add_data_entity(
        self,
        name: str,
        source_column: str,
        semantics: str,
        structure: str,
    ) -> DataEntityRef:
        """Declare a CSV-backed data entity; its IRI is `exe:<name>`."""
        if not _NAME_RE.match(name):
            raise InvalidNameError(f"entity name {name!r} is not a valid IRI local name")
        if name in self._entity_names:
            raise DuplicateEntityNameError(f"entity name {name!r} is already used")
        for cls, root in ((semantics, "DataSemantics"), (structure, "DataStructure")):
            if cls not in self.schema.classes or not self.schema.is_subclass_of(cls, ns.DS + root) or cls == ns.DS + root:
                raise UnknownClassError(f"{cls} is not a registered {root} subclass")
        self._entity_names.add(name)
        iri = f"{self.namespace}{name}"
        self._add(iri, ns.RDF_TYPE, Iri(ns.DS + "DataEntity"))
        self._add(iri, ns.DS + "hasSourceColumn", Literal(source_column))
        self._add(iri, ns.DS + "hasDataSemantics", Iri(semantics))
        self._add(iri, ns.DS + "hasDataStructure", Iri(structure))
        return DataEntityRef(
            iri=iri, name=name, source_column=source_column, referenced_output=None,
            semantics=semantics, structure=structure,
        )

    def add_task(
        self,
        task_class: str,
        method_class: str,
        inputs: Sequence[DataEntityRef],
        params: Optional[dict] = None,
    ) -> TaskHandle:
        """Append a task to the chain; returns a handle exposing its outputs."""
        params = dict(params or {})
        info = self.schema.classes.get(task_class)
        if info is None or info.kind != "task" or task_class in (ns.DS + "AtomicTask", ns.DS + "Pipeline"):
            raise UnknownClassError(f"{task_class} is not a concrete task class")
        allowed = self.schema.compatible_methods(task_class)
        if method_class not in allowed:
            raise IncompatibleMethodError(
                f"{ns.local_name(method_class)} cannot solve {ns.local_name(task_class)}"
            )
        io = self.schema.io_spec_of(task_class)
        if len(inputs) < io.min_inputs or (io.max_inputs is not None and len(inputs) > io.max_inputs):
            upper = "unbounded" if io.max_inputs is None else str(io.max_inputs)
            raise ArityMismatchError(
                f"{ns.local_name(task_class)} takes {io.min_inputs}..{upper} inputs, got {len(inputs)}"
            )

        specs = {s.name: s for s in self.schema.params_of(method_class)}
        for pname in params:
            if pname not in specs:
                raise UnknownParamError(f"{ns.local_name(method_class)} has no param {pname!r}")
        resolved: dict[str, object] = {}
        for pname, spec in specs.items():
            if pname in params:
                resolved[pname] = check_param_value(spec, params[pname])
            elif spec.default is not None:
                resolved[pname] = check_param_value(spec, spec.default)
            elif spec.min_count >= 1:
                raise ParamTypeError(
                    f"param {pname!r} of {ns.local_name(method_class)} is required and has no default"
                )

        task_iri = self._mint(task_class)
        method_iri = self._mint(method_class)
        self._add(task_iri, ns.RDF_TYPE, Iri(task_class))
        self._add(method_iri, ns.RDF_TYPE, Iri(method_class))
        self._add(task_iri, ns.DS + "hasMethod", Iri(method_iri))
        for pname, value in sorted(resolved.items()):
            spec = specs[pname]
            self._add(method_iri, spec.property_iri, format_literal(value, spec.datatype))
        for i, ref in enumerate(inputs, start=1):
            self._add(task_iri, ns.DS + "hasInput", Iri(ref.iri))
            self._add(task_iri, f"{ns.DS}hasInput{i}", Iri(ref.iri))

        out_refs = []
        task_local = ns.local_name(task_iri)
        for i, out in enumerate(io.outputs, start=1):
            out_iri = f"{self.namespace}{task_local}_{out.name}"
            self._add(out_iri, ns.RDF_TYPE, Iri(ns.DS + "DataEntity"))
            self._add(out_iri, ns.DS + "hasDataSemantics", Iri(out.semantics))
            self._add(out_iri, ns.DS + "hasDataStructure", Iri(out.structure))
            self._add(task_iri, ns.DS + "hasOutput", Iri(out_iri))
            self._add(task_iri, f"{ns.DS}hasOutput{i}", Iri(out_iri))
            out_refs.append(DataEntityRef(
                iri=out_iri, name=out.name, source_column=None, referenced_output=out_iri,
                semantics=out.semantics, structure=out.structure,
            ))

        previous = self._last_task if self._last_task is not None else self.pipeline_iri
        self._add(previous, ns.DS + "hasNextTask", Iri(task_iri))
        self._last_task = task_iri
        return TaskHandle(
            iri=task_iri, task_class=task_class, method_iri=method_iri,
            method_class=method_class, outputs=tuple(out_refs),
        )

    def validation_report(self) -> ValidationReport:
        shapes = load_shapes(self.schema)
        return validate(self.graph, shapes, self.schema)

    def save(self, path) -> ValidationReport:
        """Validate and, only when conforming, serialize to `path`.

        Raises EmptyPipelineError when no task was added, and IoError when
        the file cannot be written.
        """
        from .rdf import serialize_turtle

        if self._last_task is None:
            raise EmptyPipelineError(f"pipeline {self.name!r} has no tasks")
        report = self.validation_report()
        if not report.conforms:
            return report
        try:
            Path(path).write_text(serialize_turtle(self.graph), encoding="utf-8")
        except OSError as exc:
            raise IoError(f"cannot write {path}: {exc}") from exc
        return report


# ---------------------------------------------------------------------------
# Batch generation


def _substitute(value, variables: dict):
    """Replace `$var.path` strings (and recurse through containers)."""
    if isinstance(value, str) and value.startswith("$"):
        head, *rest = value[1:].split(".")
        if head not in variables:
            raise UnknownParamError(f"template variable {head!r} is not in the grid")
        cur = variables[head]
        for part in rest:
            cur = cur[part]
        return cur
    if isinstance(value, dict):
        return {k: _substitute(v, variables) for k, v in value.items()}
    if isinstance(value, list):
        return [_substitute(v, variables) for v in value]
    return value


def grid_points(grid: dict) -> list[dict]:
    """Cartesian product over grid variables, deterministic: variables in
    sorted name order, values in listed order. An empty grid yields no
    points (rather than one empty assignment): no variables, no batch."""
    if not grid:
        return []
    names = sorted(grid)
    points = [{}]
    for name in names:
        points = [{**p, name: v} for p in points for v in grid[name]]
    return points


def build_from_template(template: dict, variables: dict, schema: SchemaSet, name: str) -> PipelineBuilder:
    """Instantiate one pipeline from a template document and variable values.

    Input references are entity names or `@<taskindex>.<outputname>` (1-based).
    """
    builder = PipelineBuilder(name, _substitute(template["csv_path"], variables), schema)
    refs: dict[str, DataEntityRef] = {}
    for ent in template.get("entities", ()):
        ent = _substitute(ent, variables)
        refs[ent["name"]] = builder.add_data_entity(
            ent["name"], ent["column"], ent["semantics"], ent["structure"],
        )
    handles: list[TaskHandle] = []
    for spec in template.get("tasks", ()):
        spec = _substitute(spec, variables)
        inputs = []
        for ref in spec.get("inputs", ()):
            if ref.startswith("@"):
                idx_s, out_name = ref[1:].split(".", 1)
                handle = handles[int(idx_s) - 1]
                inputs.append(handle.output(out_name))
            else:
                inputs.append(refs[ref])
        handles.append(builder.add_task(spec["task"], spec["method"], inputs, spec.get("params")))
    return builder


def generate_batch(template: dict, schema: SchemaSet, out_dir) -> list[str]:
    """Expand the template grid, build and save one pipeline per grid point.

    Pipeline names take a deterministic numeric suffix in grid enumeration
    order. Build errors propagate, naming the grid point; a non-conforming
    result (possible only with a defective template) raises as well.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    base = template.get("name", "pipeline")
    paths = []
    for i, variables in enumerate(grid_points(template.get("grid", {}))):
        name = f"{base}{i}"
        try:
            builder = build_from_template(template, variables, schema, name)
            path = out / f"{name}.ttl"
            report = builder.save(path)
        except KgflowError as exc:
            exc.args = (f"grid point {i}: {exc}",)
            raise
        if not report.conforms:
            raise ValidationFailedError(report)
        paths.append(str(path))
    return paths
