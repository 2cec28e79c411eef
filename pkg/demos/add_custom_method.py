"""Teach the system a new method without touching any engine code.

A "negate column" method is declared against the shipped schema, wired to
a three-line implementation, and then built, validated, and executed with
the same machinery every stock method uses.
"""

from kgflow import namespaces as ns
from kgflow.builder import PipelineBuilder
from kgflow.execution import (
    VectorValue,
    compile_plan,
    execute,
    parse_csv,
    parse_exekg_graph,
    register_implementation,
)
from kgflow.schema import ExtensionDescriptor, load_builtin_schemata
from kgflow.validation import load_shapes, validate

NEGATE = ns.STATS + "NegateMethod"


def negate_column(inputs, params, ctx):
    (column,) = inputs
    return [VectorValue(tuple(-v for v in column.values))]


def main() -> None:
    schema = load_builtin_schemata().register_extension(ExtensionDescriptor(
        new_method_class=NEGATE,
        parent_task_class=ns.STATS + "Normalization",
        implementation_key="negate-column",
    ))
    register_implementation("negate-column", negate_column)
    print(f"registered {NEGATE}")

    builder = PipelineBuilder("negdemo", "inline.csv", schema)
    x = builder.add_data_entity("x", "x", ns.DS + "Numerical", ns.DS + "Vector")
    handle = builder.add_task(ns.STATS + "Normalization", NEGATE, [x])
    report = validate(builder.graph, load_shapes(schema), schema)
    print(f"pipeline conforms: {report.conforms}")

    metadata, tasks = parse_exekg_graph(builder.graph, schema)
    plan = compile_plan(tasks, metadata, schema)
    result = execute(plan, dataset=parse_csv("x\n1\n2\n3\n"))
    negated = result.bindings[handle.output("normalized").iri]
    print(f"negated column: {negated.values}")


if __name__ == "__main__":
    main()
