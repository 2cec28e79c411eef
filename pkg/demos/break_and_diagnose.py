"""Show how the validator pins a defect to one node in the graph.

A conforming pipeline is loaded, a single triple is removed, and the
resulting report names the exact task and constraint that broke.
"""

import tempfile
from pathlib import Path

from kgflow import namespaces as ns
from kgflow.demo import write_demo_workspace
from kgflow.rdf import Iri, TriplePattern, parse_turtle
from kgflow.schema import load_builtin_schemata
from kgflow.validation import load_shapes, validate


def main() -> None:
    schema = load_builtin_schemata()
    shapes = load_shapes(schema)
    with tempfile.TemporaryDirectory() as tmp:
        write_demo_workspace(tmp)
        graph = parse_turtle((Path(tmp) / "classdemo.ttl").read_text())

    before = validate(graph, shapes, schema)
    print(f"pristine graph conforms: {before.conforms}")

    task = ns.pipeline_namespace("classdemo") + "Classification1"
    (link,) = graph.match(TriplePattern(Iri(task), Iri(ns.DS + "hasMethod"), None))
    graph.remove(link)
    print(f"removed: {link.subject.value} ds:hasMethod {link.object.value}")

    report = validate(graph, shapes, schema)
    print(f"now {len(report.violations)} violation(s):")
    for violation in report.violations:
        print(f"  [{violation.kind}] at {violation.focus_node}")
        print(f"      {violation.message}")


if __name__ == "__main__":
    main()
