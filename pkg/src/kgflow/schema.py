"""Schema registry: classes, compatibility, parameters, and io specs.

Loads the four shipped schema documents into one immutable SchemaSet and
answers the questions every other module asks: is X a subclass of Y, which
methods may solve task T, which parameters does method M declare, and how many
inputs/outputs does T take. Extensions register new task/method classes
against a copy; the registry itself is never mutated in place.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from typing import Optional

from . import namespaces as ns
from .errors import (
    DuplicateClassError,
    SchemaLoadError,
    UnknownClassError,
    UnknownParentError,
)
from .rdf import Graph, Iri, Literal, TriplePattern, parse_turtle

SCHEMA_FILES = ("ds.ttl", "ml.ttl", "stats.ttl", "visu.ttl")

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_\-]*$")


@dataclass(frozen=True)
class ParamSpec:
    """One declared parameter of a method class."""

    property_iri: str
    name: str
    datatype: str
    min_count: int = 0
    max_count: int = 1
    default: object = None

    @property
    def required(self) -> bool:
        return self.min_count >= 1 and self.default is None


@dataclass(frozen=True)
class OutputSpec:
    name: str
    structure: str
    semantics: str


@dataclass(frozen=True)
class IoSpec:
    min_inputs: int
    max_inputs: Optional[int]  # None = unbounded
    outputs: tuple[OutputSpec, ...]


@dataclass(frozen=True)
class ClassInfo:
    iri: str
    parent: Optional[str]
    kind: str  # "task" | "method" | "semantics" | "structure" | "other"
    label: str


@dataclass(frozen=True)
class ExtensionDescriptor:
    """Declarative registration of a new method (and optionally a new task).

    When `new_task_class` is None the method attaches to `parent_task_class`
    directly; otherwise a new task class is created under that parent and the
    method attaches to the new task. `implementation_key` names the callable
    the executor will dispatch to for the task/method pair.
    """

    new_method_class: str
    parent_task_class: str
    implementation_key: str
    new_task_class: Optional[str] = None
    params: tuple[ParamSpec, ...] = ()
    min_inputs: int = 1
    max_inputs: Optional[int] = 1
    outputs: tuple[OutputSpec, ...] = ()


def _split_label(local: str) -> str:
    # "TrainTestSplitMethod" -> "Train Test Split Method"; acronym runs kept.
    parts = re.findall(r"[A-Z]+(?=[A-Z][a-z0-9])|[A-Z][a-z0-9]*|[a-z0-9]+", local)
    return " ".join(parts) if parts else local


class SchemaSet:
    """Immutable view over a set of schema graphs."""

    def __init__(self, graphs: dict[str, Graph]):
        self.graphs = graphs
        self.classes: dict[str, ClassInfo] = {}
        self.compat: dict[str, tuple[str, ...]] = {}
        self.params: dict[str, tuple[ParamSpec, ...]] = {}
        self.io_specs: dict[str, IoSpec] = {}
        self._impl_keys: dict[tuple[str, str], str] = {}
        self._build()
        self._check()

    # -- construction --------------------------------------------------------

    def _union(self) -> Graph:
        merged = Graph()
        for g in self.graphs.values():
            merged.update(g.triples)
        return merged

    def _build(self):
        g = self._union()
        type_iri = Iri(ns.RDF_TYPE)
        subclass = Iri(ns.RDFS_SUBCLASSOF)

        class_iris = [
            t.subject.value
            for t in g.match(TriplePattern(None, type_iri, Iri(ns.OWL_CLASS)))
            if isinstance(t.subject, Iri)
        ]
        parents: dict[str, Optional[str]] = {}
        for iri in class_iris:
            sup = g.value(Iri(iri), subclass)
            parents[iri] = sup.value if isinstance(sup, Iri) else None

        def reaches(iri: str, root: str) -> bool:
            seen = set()
            cur: Optional[str] = iri
            while cur is not None and cur not in seen:
                if cur == root:
                    return True
                seen.add(cur)
                cur = parents.get(cur)
            return cur == root

        for iri in class_iris:
            if reaches(iri, ns.DS + "AtomicTask") or iri == ns.DS + "Pipeline":
                kind = "task"
            elif reaches(iri, ns.DS + "AtomicMethod"):
                kind = "method"
            elif reaches(iri, ns.DS + "DataSemantics") and iri != ns.DS + "DataSemantics":
                kind = "semantics"
            elif reaches(iri, ns.DS + "DataStructure") and iri != ns.DS + "DataStructure":
                kind = "structure"
            else:
                kind = "other"
            self.classes[iri] = ClassInfo(iri, parents[iri], kind, _split_label(ns.local_name(iri)))

        for t in g.match(TriplePattern(None, Iri(ns.DS + "hasCompatibleMethod"), None)):
            task, method = t.subject.value, t.object.value
            self.compat[task] = tuple(sorted(set(self.compat.get(task, ())) | {method}))

        # Parameter specs hang off datatype properties domained on methods.
        for t in g.match(TriplePattern(None, type_iri, Iri(ns.OWL_DATATYPE_PROPERTY))):
            prop = t.subject
            domains = [d.value for d in g.objects(prop, Iri(ns.RDFS_DOMAIN)) if isinstance(d, Iri)]
            method_domains = [d for d in domains if self.classes.get(d, None) and self.classes[d].kind == "method"]
            if not method_domains:
                continue
            rng = g.value(prop, Iri(ns.RDFS_RANGE))
            name_lit = g.value(prop, Iri(ns.DS + "hasParamName"))
            default_lit = g.value(prop, Iri(ns.DS + "hasDefaultValue"))
            min_lit = g.value(prop, Iri(ns.DS + "hasMinCount"))
            max_lit = g.value(prop, Iri(ns.DS + "hasMaxCount"))
            spec = ParamSpec(
                property_iri=prop.value,
                name=name_lit.lexical if isinstance(name_lit, Literal) else ns.local_name(prop.value),
                datatype=rng.value if isinstance(rng, Iri) else ns.XSD_STRING,
                min_count=int(min_lit.lexical) if isinstance(min_lit, Literal) else 0,
                max_count=int(max_lit.lexical) if isinstance(max_lit, Literal) else 1,
                default=_literal_to_python(default_lit) if isinstance(default_lit, Literal) else None,
            )
            for d in method_domains:
                self.params[d] = tuple(sorted(self.params.get(d, ()) + (spec,), key=lambda s: s.name))

        # Io specs: arity triples plus ordered OutputSpec individuals.
        arities: dict[str, tuple[int, Optional[int]]] = {}
        for iri in class_iris:
            mins = g.value(Iri(iri), Iri(ns.DS + "hasMinInputs"))
            maxs = g.value(Iri(iri), Iri(ns.DS + "hasMaxInputs"))
            if isinstance(mins, Literal):
                arities[iri] = (int(mins.lexical), int(maxs.lexical) if isinstance(maxs, Literal) else None)

        outputs: dict[str, list[tuple[int, OutputSpec]]] = {}
        for t in g.match(TriplePattern(None, type_iri, Iri(ns.DS + "OutputSpec"))):
            spec_node = t.subject
            task = g.value(spec_node, Iri(ns.DS + "belongsToTask"))
            idx = g.value(spec_node, Iri(ns.DS + "hasOutputIndex"))
            name = g.value(spec_node, Iri(ns.DS + "hasOutputName"))
            structure = g.value(spec_node, Iri(ns.DS + "hasOutputStructure"))
            semantics = g.value(spec_node, Iri(ns.DS + "hasOutputSemantics"))
            if not (isinstance(task, Iri) and isinstance(idx, Literal) and isinstance(name, Literal)):
                raise SchemaLoadError(f"incomplete output spec {spec_node}")
            outputs.setdefault(task.value, []).append(
                (int(idx.lexical), OutputSpec(name.lexical, structure.value, semantics.value))
            )
        for task, (lo, hi) in arities.items():
            ordered = tuple(s for _, s in sorted(outputs.get(task, []), key=lambda p: p[0]))
            self.io_specs[task] = IoSpec(lo, hi, ordered)

    def _check(self):
        at = ns.DS + "AtomicTask"
        am = ns.DS + "AtomicMethod"
        task_cls = ns.DS + "Task"
        direct_task_subs = sorted(
            c.iri for c in self.classes.values() if c.parent == task_cls
        )
        if direct_task_subs != sorted([at, ns.DS + "Pipeline"]):
            raise SchemaLoadError(f"ds:Task must have exactly the AtomicTask and Pipeline subclasses, found {direct_task_subs}")
        for iri, info in self.classes.items():
            # Parent chains must terminate inside the registry.
            seen = set()
            cur = info.parent
            while cur is not None:
                if cur in seen:
                    raise SchemaLoadError(f"cycle in subclass chain at {cur}")
                if cur not in self.classes:
                    raise SchemaLoadError(f"{iri} has unregistered ancestor {cur}")
                seen.add(cur)
                cur = self.classes[cur].parent
        for task, methods in self.compat.items():
            if not methods:
                raise SchemaLoadError(f"{task} has an empty method list")
            if not self.is_subclass_of(task, at):
                raise SchemaLoadError(f"{task} declares methods but is not a task class")
            for m in methods:
                if not self.is_subclass_of(m, am):
                    raise SchemaLoadError(f"{m} is not a method class")
            if task not in self.io_specs:
                raise SchemaLoadError(f"{task} has no input/output spec")
        # Every concrete (leaf) task class must be solvable.
        children: dict[str, int] = {}
        for info in self.classes.values():
            if info.parent:
                children[info.parent] = children.get(info.parent, 0) + 1
        for iri, info in self.classes.items():
            if info.kind == "task" and iri not in (at, ns.DS + "Pipeline", ns.DS + "Task"):
                if children.get(iri, 0) == 0 and iri not in self.compat:
                    raise SchemaLoadError(f"task class {iri} has no compatible methods")

    # -- queries -------------------------------------------------------------

    def is_subclass_of(self, cls: str, ancestor: str) -> bool:
        """Reflexive-transitive subclass test over the loaded hierarchies."""
        seen = set()
        cur: Optional[str] = cls
        while cur is not None and cur not in seen:
            if cur == ancestor:
                return True
            seen.add(cur)
            info = self.classes.get(cur)
            cur = info.parent if info else None
        return False

    def compatible_methods(self, task_class: str) -> tuple[str, ...]:
        """Method classes that may solve the task class. Raises UnknownClassError
        for IRIs that are not solvable task classes (unregistered, abstract, or
        not a task at all)."""
        methods = self.compat.get(task_class)
        if methods is None:
            raise UnknownClassError(f"no methods registered for {task_class}")
        return methods

    def params_of(self, method_class: str) -> tuple[ParamSpec, ...]:
        return self.params.get(method_class, ())

    def io_spec_of(self, task_class: str) -> IoSpec:
        spec = self.io_specs.get(task_class)
        if spec is None:
            raise UnknownClassError(f"no io spec for {task_class}")
        return spec

    def task_classes(self) -> list[str]:
        """Concrete (solvable) task classes; abstract roots are excluded."""
        return sorted(self.compat)

    def method_classes(self) -> list[str]:
        """Method classes attached to at least one task class."""
        return sorted({m for methods in self.compat.values() for m in methods})

    def implementation_key(self, task_class: str, method_class: str) -> str:
        """Dispatch key for a task/method pair. Extension pairs carry an
        explicit key; shipped pairs derive `TaskLocal:MethodLocal`."""
        explicit = self._impl_keys.get((task_class, method_class))
        if explicit is not None:
            return explicit
        return f"{ns.local_name(task_class)}:{ns.local_name(method_class)}"

    # -- extension -----------------------------------------------------------

    def register_extension(self, descriptor: ExtensionDescriptor) -> "SchemaSet":
        """A new SchemaSet with the descriptor's classes added. The receiver
        is left untouched."""
        at = ns.DS + "AtomicTask"
        am = ns.DS + "AtomicMethod"
        if descriptor.parent_task_class not in self.classes:
            raise UnknownParentError(f"unknown parent task class {descriptor.parent_task_class}")
        if not self.is_subclass_of(descriptor.parent_task_class, at):
            raise UnknownParentError(f"{descriptor.parent_task_class} is not a task class")
        if descriptor.new_method_class in self.classes:
            raise DuplicateClassError(f"{descriptor.new_method_class} is already registered")
        if descriptor.new_task_class is not None and descriptor.new_task_class in self.classes:
            raise DuplicateClassError(f"{descriptor.new_task_class} is already registered")

        clone = SchemaSet.__new__(SchemaSet)
        clone.graphs = self.graphs
        clone.classes = dict(self.classes)
        clone.compat = dict(self.compat)
        clone.params = dict(self.params)
        clone.io_specs = dict(self.io_specs)
        clone._impl_keys = dict(self._impl_keys)

        method = descriptor.new_method_class
        clone.classes[method] = ClassInfo(method, am, "method", _split_label(ns.local_name(method)))
        if descriptor.params:
            clone.params[method] = tuple(sorted(descriptor.params, key=lambda s: s.name))

        if descriptor.new_task_class is None:
            task = descriptor.parent_task_class
            if task not in clone.compat:
                raise UnknownParentError(f"{task} is abstract; attach the method to a concrete task")
        else:
            task = descriptor.new_task_class
            clone.classes[task] = ClassInfo(
                task, descriptor.parent_task_class, "task", _split_label(ns.local_name(task))
            )
            clone.io_specs[task] = IoSpec(descriptor.min_inputs, descriptor.max_inputs, descriptor.outputs)
        clone.compat[task] = tuple(sorted(set(clone.compat.get(task, ())) | {method}))
        clone._impl_keys[(task, method)] = descriptor.implementation_key
        return clone


def _literal_to_python(lit: Literal):
    if lit.datatype == ns.XSD_INTEGER:
        return int(lit.lexical)
    if lit.datatype == ns.XSD_DOUBLE:
        return float(lit.lexical)
    if lit.datatype == ns.XSD_BOOLEAN:
        return lit.lexical == "true"
    return lit.lexical


def schema_source(name: str) -> str:
    """Raw Turtle text of a shipped schema document (e.g. "ds.ttl")."""
    return resources.files("kgflow.schemata").joinpath(name).read_text(encoding="utf-8")


def load_builtin_schemata() -> SchemaSet:
    """Parse the four shipped schema documents into a SchemaSet."""
    graphs = {}
    for fname in SCHEMA_FILES:
        graphs[fname.removesuffix(".ttl")] = parse_turtle(schema_source(fname))
    return SchemaSet(graphs)


def extension_from_dict(raw: dict) -> ExtensionDescriptor:
    """Build a descriptor from a plain key/value document (JSON-shaped)."""
    params = tuple(
        ParamSpec(
            property_iri=p["property"],
            name=p.get("name", ns.local_name(p["property"])),
            datatype=p.get("datatype", ns.XSD_STRING),
            min_count=int(p.get("min_count", 0)),
            max_count=int(p.get("max_count", 1)),
            default=p.get("default"),
        )
        for p in raw.get("params", ())
    )
    outputs = tuple(
        OutputSpec(o["name"], o["structure"], o.get("semantics", ns.DS + "Numerical"))
        for o in raw.get("outputs", ())
    )
    if "max_inputs" in raw:
        max_inputs = None if raw["max_inputs"] is None else int(raw["max_inputs"])
    else:
        max_inputs = 1
    return ExtensionDescriptor(
        new_method_class=raw["method"],
        parent_task_class=raw["parent_task"],
        implementation_key=raw["implementation"],
        new_task_class=raw.get("task"),
        params=params,
        min_inputs=int(raw.get("min_inputs", 1)),
        max_inputs=max_inputs,
        outputs=outputs,
    )
