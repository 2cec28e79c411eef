"""kgflow: machine-learning pipelines as executable RDF knowledge graphs.

A pipeline lives as a Turtle document: data entities, a task chain, method
individuals with parameter literals. The library builds such graphs
(`PipelineBuilder`), checks them against shape constraints (`validate`),
and runs conforming graphs over CSV data (`run_exekg`), producing value
bindings and SVG artifacts. `SchemaSet.register_extension` plus
`register_implementation` add new methods without touching any of that.
"""

from .builder import (
    DataEntityRef,
    PipelineBuilder,
    TaskHandle,
    build_from_template,
    generate_batch,
    grid_points,
)
from .errors import KgflowError, RuntimeFailure, ValidationFailedError
from .execution import (
    Dataset,
    ExecutionPlan,
    MatrixValue,
    ParsedTask,
    PipelineMetadata,
    RunResult,
    SingleValue,
    VectorValue,
    compile_plan,
    execute,
    export_plan_script,
    load_dataset,
    load_exekg,
    parse_csv,
    register_implementation,
    run_exekg,
)
from .rdf import (
    BlankNode,
    Graph,
    Iri,
    Literal,
    Triple,
    TriplePattern,
    parse_turtle,
    serialize_turtle,
)
from .schema import (
    ExtensionDescriptor,
    OutputSpec,
    ParamSpec,
    SchemaSet,
    load_builtin_schemata,
)
from .validation import ValidationReport, Violation, load_shapes, validate, validate_document

__version__ = "0.1.0"

__all__ = [
    "BlankNode",
    "DataEntityRef",
    "Dataset",
    "ExecutionPlan",
    "ExtensionDescriptor",
    "Graph",
    "Iri",
    "KgflowError",
    "Literal",
    "MatrixValue",
    "OutputSpec",
    "ParamSpec",
    "ParsedTask",
    "PipelineBuilder",
    "PipelineMetadata",
    "RunResult",
    "RuntimeFailure",
    "SchemaSet",
    "SingleValue",
    "TaskHandle",
    "Triple",
    "TriplePattern",
    "ValidationFailedError",
    "ValidationReport",
    "VectorValue",
    "Violation",
    "build_from_template",
    "compile_plan",
    "execute",
    "export_plan_script",
    "generate_batch",
    "grid_points",
    "load_builtin_schemata",
    "load_dataset",
    "load_exekg",
    "load_shapes",
    "parse_csv",
    "parse_turtle",
    "register_implementation",
    "run_exekg",
    "serialize_turtle",
    "validate",
    "validate_document",
]
