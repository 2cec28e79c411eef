"""Single-defect graph surgeries shared by the validation and acceptance suites.

Each entry loads a conforming pipeline graph, applies exactly one mutation,
and states the one violation kind and focus node the validator must report.
"""

from pathlib import Path

from kgflow import namespaces as ns
from kgflow.builder import PipelineBuilder
from kgflow.rdf import Graph, Iri, Literal, Triple, TriplePattern, parse_turtle
from kgflow.validation import DOCUMENT_FOCUS


def load_graph(workspace: Path, name: str) -> Graph:
    return parse_turtle((workspace / f"{name}.ttl").read_text())


def only_subject(g: Graph, class_iri: str) -> str:
    (subject,) = g.subjects(Iri(ns.RDF_TYPE), Iri(class_iri))
    return subject.value


def _drop(g: Graph, subject: str, predicate: str, obj=None) -> Triple:
    pattern = TriplePattern(Iri(subject), Iri(predicate), obj)
    (t,) = g.match(pattern)
    g.remove(t)
    return t


def _relink(g: Graph, subject: str, old_next: str, new_next: str) -> None:
    _drop(g, subject, ns.DS + "hasNextTask", Iri(old_next))
    g.insert(Triple(Iri(subject), Iri(ns.DS + "hasNextTask"), Iri(new_next)))


def drop_method(schema, workspace):
    g = load_graph(workspace, "classdemo")
    task = only_subject(g, ns.ML + "Classification")
    _drop(g, task, ns.DS + "hasMethod")
    return g, "PropertyCardinality", task


def foreign_method(schema, workspace):
    g = load_graph(workspace, "classdemo")
    task = only_subject(g, ns.ML + "Classification")
    _drop(g, task, ns.DS + "hasMethod")
    stray = ns.pipeline_namespace("classdemo") + "strayMethod"
    g.insert(Triple(Iri(stray), Iri(ns.RDF_TYPE), Iri(ns.ML + "MAEMethod")))
    g.insert(Triple(Iri(task), Iri(ns.DS + "hasMethod"), Iri(stray)))
    return g, "CompatiblePair", task


def drop_required_param(schema, workspace):
    b = PipelineBuilder("clusterfix", "classification.csv", schema)
    x = b.add_data_entity("x", "x", ns.DS + "Numerical", ns.DS + "Vector")
    b.add_task(ns.ML + "Clustering", ns.ML + "KMeansMethod", [x], {"clusters": 2})
    g = b.graph
    method = only_subject(g, ns.ML + "KMeansMethod")
    _drop(g, method, ns.ML + "hasClusterCount")
    return g, "PropertyCardinality", method


def drop_data_path(schema, workspace):
    g = load_graph(workspace, "classdemo")
    pipeline = only_subject(g, ns.DS + "Pipeline")
    _drop(g, pipeline, ns.DS + "hasInputDataPath")
    return g, "PropertyCardinality", pipeline


def string_batch_size(schema, workspace):
    g = load_graph(workspace, "mlpdemo")
    method = only_subject(g, ns.ML + "MLPMethod")
    _drop(g, method, ns.ML + "hasBatchSize")
    g.insert(Triple(Iri(method), Iri(ns.ML + "hasBatchSize"), Literal("plenty")))
    return g, "PropertyDatatype", method


def dangling_input(schema, workspace):
    g = load_graph(workspace, "classdemo")
    task = only_subject(g, ns.ML + "DataSplitting")
    namespace = ns.pipeline_namespace("classdemo")
    _drop(g, task, ns.DS + "hasInput", Iri(namespace + "x"))
    g.insert(Triple(Iri(task), Iri(ns.DS + "hasInput"), Iri(namespace + "ghost")))
    return g, "PropertyClass", task


def plot_before_canvas(schema, workspace):
    g = load_graph(workspace, "statsdemo")
    central = only_subject(g, ns.STATS + "CentralTendency")
    canvas = only_subject(g, ns.VISU + "CanvasTask")
    line = only_subject(g, ns.VISU + "LinePlot")
    box = only_subject(g, ns.VISU + "BoxPlot")
    _relink(g, central, canvas, line)
    _relink(g, line, box, canvas)
    _relink(g, canvas, line, box)
    return g, "OrderingRule", line


def double_next_task(schema, workspace):
    # The spur target is itself a fully valid task so the branch is the
    # only defect in the graph.
    g = load_graph(workspace, "classdemo")
    split = only_subject(g, ns.ML + "DataSplitting")
    namespace = ns.pipeline_namespace("classdemo")
    spur, spur_method = namespace + "SpurCanvas", namespace + "SpurCanvasMethod"
    g.insert(Triple(Iri(spur), Iri(ns.RDF_TYPE), Iri(ns.VISU + "CanvasTask")))
    g.insert(Triple(Iri(spur), Iri(ns.DS + "hasMethod"), Iri(spur_method)))
    g.insert(Triple(Iri(spur_method), Iri(ns.RDF_TYPE), Iri(ns.VISU + "CanvasMethod")))
    g.insert(Triple(Iri(split), Iri(ns.DS + "hasNextTask"), Iri(spur)))
    return g, "PropertyCardinality", split


def train_missing_input(schema, workspace):
    g = load_graph(workspace, "regdemo")
    train = only_subject(g, ns.ML + "Train")
    labels = ns.pipeline_namespace("regdemo") + "DataSplitting1_train_labels"
    _drop(g, train, ns.DS + "hasInput", Iri(labels))
    _drop(g, train, ns.DS + "hasInput2", Iri(labels))
    return g, "PropertyCardinality", train


def train_extra_output(schema, workspace):
    # The grafted output already has SingleValue structure, so only the
    # output count is off.
    g = load_graph(workspace, "regdemo")
    train = only_subject(g, ns.ML + "Train")
    score = ns.pipeline_namespace("regdemo") + "PerformanceCalculation1_score"
    g.insert(Triple(Iri(train), Iri(ns.DS + "hasOutput"), Iri(score)))
    return g, "PropertyCardinality", train


def train_output_wrong_structure(schema, workspace):
    g = load_graph(workspace, "regdemo")
    train = only_subject(g, ns.ML + "Train")
    model = ns.pipeline_namespace("regdemo") + "Train1_model"
    _drop(g, model, ns.DS + "hasDataStructure")
    g.insert(Triple(Iri(model), Iri(ns.DS + "hasDataStructure"), Iri(ns.DS + "Vector")))
    return g, "PropertyClass", train


def chain_cycle(schema, workspace):
    g = load_graph(workspace, "classdemo")
    first = only_subject(g, ns.ML + "DataSplitting")
    last = only_subject(g, ns.VISU + "ScatterPlot")
    g.insert(Triple(Iri(last), Iri(ns.DS + "hasNextTask"), Iri(first)))
    return g, "PipelineStructure", first


def orphan_task(schema, workspace):
    g = load_graph(workspace, "classdemo")
    canvas = only_subject(g, ns.VISU + "CanvasTask")
    scatter = only_subject(g, ns.VISU + "ScatterPlot")
    _drop(g, canvas, ns.DS + "hasNextTask")
    return g, "PipelineStructure", scatter


def missing_pipeline(schema, workspace):
    g = load_graph(workspace, "classdemo")
    pipeline = only_subject(g, ns.DS + "Pipeline")
    _drop(g, pipeline, ns.RDF_TYPE)
    return g, "PipelineStructure", DOCUMENT_FOCUS


def double_typed_task(schema, workspace):
    g = load_graph(workspace, "classdemo")
    task = only_subject(g, ns.ML + "Classification")
    g.insert(Triple(Iri(task), Iri(ns.RDF_TYPE), Iri(ns.STATS + "CentralTendency")))
    return g, "PipelineStructure", task


MUTATIONS = [
    drop_method,
    foreign_method,
    drop_required_param,
    drop_data_path,
    string_batch_size,
    dangling_input,
    double_next_task,
    train_missing_input,
    train_extra_output,
    train_output_wrong_structure,
    plot_before_canvas,
    chain_cycle,
    orphan_task,
    missing_pipeline,
    double_typed_task,
]
