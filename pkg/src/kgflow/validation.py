"""Shape-based validation of pipeline graphs.

Shapes are loaded from the shipped `shapes.ttl`, which uses a small SHACL
vocabulary subset plus two custom constraint properties. Five constraint
kinds are evaluated natively:

  PropertyCardinality  min/max occurrences of a property on a focus node
  PropertyClass        property values must belong to a class
  PropertyDatatype     property literals must carry a datatype
  CompatiblePair       a task's method must be compatible with the task class
  OrderingRule         some earlier task in the chain must have a given class

Structural defects that shapes cannot express (no pipeline individual, chain
cycles, unreachable tasks, ambiguous types) are reported with the
PipelineStructure kind. Validation never mutates its inputs and reports are
deterministic: violations are sorted, not in discovery order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

from . import namespaces as ns
from .errors import ShapeLoadError
from .rdf import Graph, Iri, Literal, Term, TriplePattern, parse_turtle
from .schema import SchemaSet

#: Sentinel focus node for defects that have no natural individual.
DOCUMENT_FOCUS = ns.KFS + "Document"


@dataclass(frozen=True)
class PropertyCardinality:
    path: str
    min_count: int
    max_count: Optional[int]


@dataclass(frozen=True)
class PropertyClass:
    path: str
    required_class: str


@dataclass(frozen=True)
class PropertyDatatype:
    path: str
    datatype: str


@dataclass(frozen=True)
class CompatiblePair:
    path: str  # the method-linking property


@dataclass(frozen=True)
class OrderingRule:
    required_before: str


@dataclass(frozen=True)
class Shape:
    iri: str
    target_class: str
    constraints: tuple = ()


@dataclass(frozen=True)
class Violation:
    focus_node: str
    kind: str
    path: Optional[str]
    message: str

    def to_dict(self) -> dict:
        return {
            "focus_node": self.focus_node,
            "kind": self.kind,
            "path": self.path,
            "message": self.message,
        }


@dataclass(frozen=True)
class ValidationReport:
    conforms: bool
    violations: tuple[Violation, ...] = ()

    def to_dict(self) -> dict:
        return {
            "conforms": self.conforms,
            "violations": [v.to_dict() for v in self.violations],
        }


def _sorted_report(violations: list[Violation]) -> ValidationReport:
    ordered = tuple(sorted(set(violations), key=lambda v: (v.focus_node, v.kind, v.path or "", v.message)))
    return ValidationReport(conforms=not ordered, violations=ordered)


# ---------------------------------------------------------------------------
# Shape loading


def shapes_source() -> str:
    return resources.files("kgflow.schemata").joinpath("shapes.ttl").read_text(encoding="utf-8")


def load_shapes(schema: SchemaSet, text: Optional[str] = None) -> tuple[Shape, ...]:
    """Parse the shipped shapes document (or `text`) into Shape values.

    Raises ShapeLoadError when a node shape lacks a target class or a
    property shape lacks a path.
    """
    g = parse_turtle(text if text is not None else shapes_source())
    sh = lambda local: Iri(ns.SH + local)
    shapes = []
    for t in g.match(TriplePattern(None, Iri(ns.RDF_TYPE), Iri(ns.SH + "NodeShape"))):
        node = t.subject
        target = g.value(node, sh("targetClass"))
        if not isinstance(target, Iri):
            raise ShapeLoadError(f"node shape {node} has no sh:targetClass")
        constraints: list = []
        for prior in g.objects(node, Iri(ns.KFS + "requiresPriorTask")):
            constraints.append(OrderingRule(required_before=prior.value))
        for pshape in g.objects(node, sh("property")):
            path = g.value(pshape, sh("path"))
            if not isinstance(path, Iri):
                raise ShapeLoadError(f"property shape {pshape} has no sh:path")
            min_lit = g.value(pshape, sh("minCount"))
            max_lit = g.value(pshape, sh("maxCount"))
            if min_lit is not None or max_lit is not None:
                constraints.append(PropertyCardinality(
                    path=path.value,
                    min_count=int(min_lit.lexical) if isinstance(min_lit, Literal) else 0,
                    max_count=int(max_lit.lexical) if isinstance(max_lit, Literal) else None,
                ))
            cls = g.value(pshape, sh("class"))
            if isinstance(cls, Iri):
                constraints.append(PropertyClass(path=path.value, required_class=cls.value))
            dt = g.value(pshape, sh("datatype"))
            if isinstance(dt, Iri):
                constraints.append(PropertyDatatype(path=path.value, datatype=dt.value))
            compat_flag = g.value(pshape, Iri(ns.KFS + "methodCompatibleWithTask"))
            if isinstance(compat_flag, Literal) and compat_flag.lexical == "true":
                constraints.append(CompatiblePair(path=path.value))
        shapes.append(Shape(iri=node.value, target_class=target.value, constraints=tuple(constraints)))
    shapes.sort(key=lambda s: s.iri)
    return tuple(shapes)


# ---------------------------------------------------------------------------
# Evaluation


def _curie(iri: str) -> str:
    for prefix, namespace in (("ds", ns.DS), ("ml", ns.ML), ("stats", ns.STATS), ("visu", ns.VISU)):
        if iri.startswith(namespace):
            return f"{prefix}:{iri[len(namespace):]}"
    return iri


def _types_of(g: Graph, node: Term) -> list[str]:
    return [o.value for o in g.objects(node, Iri(ns.RDF_TYPE)) if isinstance(o, Iri)]


def _single_type(g: Graph, node: Term) -> Optional[str]:
    types = _types_of(g, node)
    return types[0] if len(types) == 1 else None


def _is_instance_of(g: Graph, value: Term, required: str, schema: SchemaSet) -> bool:
    """Class membership with one twist: when the requirement names a data
    structure (e.g. ds:SingleValue) and the value is a data entity, the
    entity's declared structure is what must match. Class IRIs used as values
    (structure/semantics slots) are checked by subclass relation directly."""
    if isinstance(value, Literal):
        return False
    types = _types_of(g, value)
    if not types:
        return isinstance(value, Iri) and schema.is_subclass_of(value.value, required)
    entity_cls = ns.DS + "DataEntity"
    for t in types:
        if schema.is_subclass_of(t, required):
            return True
    if schema.is_subclass_of(required, ns.DS + "DataStructure") and any(
        schema.is_subclass_of(t, entity_cls) for t in types
    ):
        structure = g.value(value, Iri(ns.DS + "hasDataStructure"))
        return isinstance(structure, Iri) and schema.is_subclass_of(structure.value, required)
    return False


@dataclass
class _ChainInfo:
    order: dict[str, int] = field(default_factory=dict)  # task iri -> position
    violations: list[Violation] = field(default_factory=list)


def _trace_chain(g: Graph, schema: SchemaSet, pipeline: Iri) -> _ChainInfo:
    info = _ChainInfo()
    next_p = Iri(ns.DS + "hasNextTask")
    frontier = [(o, 0) for o in g.objects(pipeline, next_p) if isinstance(o, Iri)]
    seen: set[str] = set()
    while frontier:
        node, pos = frontier.pop(0)
        if node.value in seen:
            info.violations.append(Violation(
                focus_node=node.value, kind="PipelineStructure", path=ns.DS + "hasNextTask",
                message="task chain contains a cycle",
            ))
            continue
        seen.add(node.value)
        info.order[node.value] = pos
        for nxt in g.objects(node, next_p):
            if isinstance(nxt, Iri):
                frontier.append((nxt, pos + 1))
    # Every task individual must sit on the chain.
    for t in g.match(TriplePattern(None, Iri(ns.RDF_TYPE), None)):
        cls = t.object
        if not isinstance(cls, Iri) or not isinstance(t.subject, Iri):
            continue
        if schema.is_subclass_of(cls.value, ns.DS + "AtomicTask") and t.subject.value not in info.order:
            info.violations.append(Violation(
                focus_node=t.subject.value, kind="PipelineStructure", path=None,
                message="task is not reachable from the pipeline chain",
            ))
    return info


def check_pipeline_order(exekg: Graph, shapes: tuple[Shape, ...], schema: SchemaSet) -> list[Violation]:
    """Chain traversal plus ordering-rule evaluation, without shape checks."""
    violations: list[Violation] = []
    pipelines = [
        s for s in exekg.subjects(Iri(ns.RDF_TYPE), Iri(ns.DS + "Pipeline")) if isinstance(s, Iri)
    ]
    if len(pipelines) != 1:
        violations.append(Violation(
            focus_node=DOCUMENT_FOCUS, kind="PipelineStructure", path=None,
            message=f"expected exactly one pipeline individual, found {len(pipelines)}",
        ))
        return violations
    chain = _trace_chain(exekg, schema, pipelines[0])
    violations.extend(chain.violations)

    ordering = [
        (shape, c)
        for shape in shapes
        for c in shape.constraints
        if isinstance(c, OrderingRule)
    ]
    for task_iri, pos in sorted(chain.order.items()):
        task_type = _single_type(exekg, Iri(task_iri))
        if task_type is None:
            continue
        for shape, rule in ordering:
            if not schema.is_subclass_of(task_type, shape.target_class):
                continue
            satisfied = any(
                other_pos < pos
                and (other_type := _single_type(exekg, Iri(other_iri))) is not None
                and schema.is_subclass_of(other_type, rule.required_before)
                for other_iri, other_pos in chain.order.items()
            )
            if not satisfied:
                violations.append(Violation(
                    focus_node=task_iri, kind="OrderingRule", path=None,
                    message=(
                        f"task of class {_curie(task_type)} requires an earlier task "
                        f"of class {_curie(rule.required_before)}"
                    ),
                ))
    return violations


def validate(exekg: Graph, shapes: tuple[Shape, ...], schema: SchemaSet) -> ValidationReport:
    """Evaluate every shape against the pipeline graph.

    Pure: neither the graph nor the schema is modified, and the report is
    fully determined by its inputs.
    """
    violations: list[Violation] = []
    type_p = Iri(ns.RDF_TYPE)

    typed_nodes = {}
    for t in exekg.match(TriplePattern(None, type_p, None)):
        if isinstance(t.subject, Iri):
            typed_nodes.setdefault(t.subject.value, []).append(
                t.object.value if isinstance(t.object, Iri) else "(literal)"
            )
    for node, types in sorted(typed_nodes.items()):
        if len(types) != 1:
            violations.append(Violation(
                focus_node=node, kind="PipelineStructure", path=ns.RDF_TYPE,
                message=f"individual has {len(types)} type assertions, expected exactly 1",
            ))
        for cls in types:
            if cls not in schema.classes:
                violations.append(Violation(
                    focus_node=node, kind="PipelineStructure", path=ns.RDF_TYPE,
                    message=f"unknown class {cls}",
                ))

    violations.extend(check_pipeline_order(exekg, shapes, schema))

    for shape in shapes:
        targets = [
            node for node, types in sorted(typed_nodes.items())
            if len(types) == 1 and schema.is_subclass_of(types[0], shape.target_class)
        ]
        for node in targets:
            focus = Iri(node)
            for c in shape.constraints:
                if isinstance(c, PropertyCardinality):
                    n = len(exekg.objects(focus, Iri(c.path)))
                    if n < c.min_count or (c.max_count is not None and n > c.max_count):
                        bound = f"at least {c.min_count}" if c.max_count is None else (
                            f"at most {c.max_count}" if c.min_count == 0 else
                            f"between {c.min_count} and {c.max_count}"
                        )
                        violations.append(Violation(
                            focus_node=node, kind="PropertyCardinality", path=c.path,
                            message=f"expected {bound} value(s) of {_curie(c.path)}, found {n}",
                        ))
                elif isinstance(c, PropertyClass):
                    for value in exekg.objects(focus, Iri(c.path)):
                        if not _is_instance_of(exekg, value, c.required_class, schema):
                            shown = value.value if isinstance(value, Iri) else str(value)
                            violations.append(Violation(
                                focus_node=node, kind="PropertyClass", path=c.path,
                                message=f"value {shown} of {_curie(c.path)} is not a {_curie(c.required_class)}",
                            ))
                elif isinstance(c, PropertyDatatype):
                    for value in exekg.objects(focus, Iri(c.path)):
                        if not isinstance(value, Literal) or value.datatype != c.datatype:
                            violations.append(Violation(
                                focus_node=node, kind="PropertyDatatype", path=c.path,
                                message=f"value of {_curie(c.path)} must be a literal of datatype {_curie(c.datatype)}",
                            ))
                elif isinstance(c, CompatiblePair):
                    task_type = typed_nodes[node][0]
                    for method in exekg.objects(focus, Iri(c.path)):
                        method_type = _single_type(exekg, method)
                        if method_type is None:
                            continue  # cardinality/type checks cover this
                        allowed = schema.compat.get(task_type, ())
                        if method_type not in allowed:
                            violations.append(Violation(
                                focus_node=node, kind="CompatiblePair", path=c.path,
                                message=(
                                    f"method class {_curie(method_type)} is not compatible "
                                    f"with task class {_curie(task_type)}"
                                ),
                            ))
    return _sorted_report(violations)


def validate_document(text: str, shapes: tuple[Shape, ...], schema: SchemaSet) -> ValidationReport:
    """Parse Turtle text and validate it; parse errors become violations so
    callers always get a report."""
    from .errors import TurtleSyntaxError

    try:
        g = parse_turtle(text)
    except TurtleSyntaxError as exc:
        return ValidationReport(conforms=False, violations=(
            Violation(DOCUMENT_FOCUS, "PipelineStructure", None, f"turtle parse error: {exc}"),
        ))
    return validate(g, shapes, schema)
