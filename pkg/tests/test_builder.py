"""Pipeline construction: minting, validation-gated saves, templates, grids."""

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kgflow import namespaces as ns
from kgflow.builder import (
    PipelineBuilder,
    build_from_template,
    check_param_value,
    format_literal,
    generate_batch,
    grid_points,
)
from kgflow.demo import build_classification_pipeline
from kgflow.errors import (
    ArityMismatchError,
    DuplicateEntityNameError,
    EmptyPipelineError,
    IncompatibleMethodError,
    InvalidNameError,
    ParamTypeError,
    UnknownClassError,
    UnknownParamError,
)
from kgflow.rdf import Iri, Literal, parse_turtle, serialize_turtle
from kgflow.schema import ParamSpec

from pipelines import random_pipeline


def _builder(schema, name="p"):
    return PipelineBuilder(name, "data.csv", schema)


def _entity(b):
    return b.add_data_entity("x", "x", ns.DS + "Numerical", ns.DS + "Vector")


def test_minting_is_per_class_and_one_based(schema):
    b = _builder(schema)
    assert b.pipeline_iri.endswith("#Pipeline1")
    x = _entity(b)
    first = b.add_task(ns.STATS + "Normalization", ns.STATS + "MinMaxMethod", [x])
    second = b.add_task(ns.STATS + "Normalization", ns.STATS + "ZScoreMethod", [first.output("normalized")])
    assert first.iri.endswith("#Normalization1")
    assert second.iri.endswith("#Normalization2")
    assert first.method_iri.endswith("#MinMaxMethod1")
    assert second.output("normalized").iri.endswith("#Normalization2_normalized")


def test_entity_iri_uses_its_name(schema):
    b = _builder(schema, "mypipe")
    x = _entity(b)
    assert x.iri == ns.pipeline_namespace("mypipe") + "x"
    assert x.source_column == "x"


def test_defaults_are_written_into_the_graph(schema):
    b = _builder(schema)
    x = _entity(b)
    yval = b.add_data_entity("yval", "yval", ns.DS + "Numerical", ns.DS + "Vector")
    split = b.add_task(ns.ML + "DataSplitting", ns.ML + "TrainTestSplitMethod", [x, yval])
    method = Iri(split.method_iri)
    ratio = b.graph.value(method, Iri(ns.ML + "hasSplitRatio"))
    seed = b.graph.value(method, Iri(ns.ML + "hasRandomSeed"))
    assert ratio == Literal("0.75", ns.XSD_DOUBLE)
    assert seed == Literal("0", ns.XSD_INTEGER)


def test_optional_param_without_default_is_omitted(schema):
    b = _builder(schema)
    x = _entity(b)
    yval = b.add_data_entity("yval", "yval", ns.DS + "Numerical", ns.DS + "Vector")
    split = b.add_task(ns.ML + "DataSplitting", ns.ML + "TrainTestSplitMethod", [x, yval])
    train = b.add_task(
        ns.ML + "Train", ns.ML + "MLPMethod",
        [split.output("train_features"), split.output("train_labels")],
    )
    assert b.graph.value(Iri(train.method_iri), Iri(ns.ML + "hasBatchSize")) is None


def test_indexed_and_plain_input_triples_agree(schema):
    b = _builder(schema)
    x = _entity(b)
    yval = b.add_data_entity("yval", "yval", ns.DS + "Numerical", ns.DS + "Vector")
    split = b.add_task(ns.ML + "DataSplitting", ns.ML + "TrainTestSplitMethod", [x, yval])
    task = Iri(split.iri)
    plain = {o.value for o in b.graph.objects(task, Iri(ns.DS + "hasInput"))}
    assert plain == {x.iri, yval.iri}
    assert b.graph.value(task, Iri(ns.DS + "hasInput1")) == Iri(x.iri)
    assert b.graph.value(task, Iri(ns.DS + "hasInput2")) == Iri(yval.iri)
    outs = [split.output(n).iri for n in ("train_features", "train_labels", "test_features", "test_labels")]
    for i, out in enumerate(outs, start=1):
        assert b.graph.value(task, Iri(f"{ns.DS}hasOutput{i}")) == Iri(out)


def test_chain_links_pipeline_then_tasks(schema):
    b = _builder(schema)
    x = _entity(b)
    first = b.add_task(ns.STATS + "Normalization", ns.STATS + "MinMaxMethod", [x])
    second = b.add_task(ns.STATS + "CentralTendency", ns.STATS + "MeanMethod", [first.output("normalized")])
    nxt = Iri(ns.DS + "hasNextTask")
    assert b.graph.value(Iri(b.pipeline_iri), nxt) == Iri(first.iri)
    assert b.graph.value(Iri(first.iri), nxt) == Iri(second.iri)
    assert b.graph.value(Iri(second.iri), nxt) is None


def test_same_construction_serializes_identically(schema):
    one = serialize_turtle(build_classification_pipeline(schema, "classification.csv").graph)
    two = serialize_turtle(build_classification_pipeline(schema, "classification.csv").graph)
    assert one == two
    assert parse_turtle(one) == build_classification_pipeline(schema, "classification.csv").graph


def test_classification_fixture_size_is_stable(schema):
    b = build_classification_pipeline(schema, "classification.csv")
    assert len(b.graph) == 88


# -- rejected constructions --------------------------------------------------


def test_bad_names_are_rejected(schema):
    with pytest.raises(InvalidNameError):
        PipelineBuilder("no spaces", "data.csv", schema)
    b = _builder(schema)
    with pytest.raises(InvalidNameError):
        b.add_data_entity("1leading", "c", ns.DS + "Numerical", ns.DS + "Vector")


def test_duplicate_entity_name_is_rejected(schema):
    b = _builder(schema)
    _entity(b)
    with pytest.raises(DuplicateEntityNameError):
        _entity(b)


def test_entity_requires_registered_semantics_and_structure(schema):
    b = _builder(schema)
    with pytest.raises(UnknownClassError):
        b.add_data_entity("a", "a", ns.DS + "Sentiment", ns.DS + "Vector")
    with pytest.raises(UnknownClassError):
        b.add_data_entity("a", "a", ns.DS + "Numerical", ns.DS + "Tensor")
    with pytest.raises(UnknownClassError):
        # the abstract root itself does not describe data
        b.add_data_entity("a", "a", ns.DS + "DataSemantics", ns.DS + "Vector")


def test_abstract_and_unknown_task_classes_are_rejected(schema):
    b = _builder(schema)
    x = _entity(b)
    with pytest.raises(UnknownClassError):
        b.add_task(ns.DS + "AtomicTask", ns.STATS + "MinMaxMethod", [x])
    with pytest.raises(UnknownClassError):
        b.add_task(ns.ML + "Forecasting", ns.STATS + "MinMaxMethod", [x])


def test_incompatible_method_is_rejected(schema):
    b = _builder(schema)
    x = _entity(b)
    with pytest.raises(IncompatibleMethodError):
        b.add_task(ns.STATS + "Normalization", ns.ML + "KNNMethod", [x])


def test_arity_is_checked(schema):
    b = _builder(schema)
    x = _entity(b)
    with pytest.raises(ArityMismatchError):
        b.add_task(ns.STATS + "Normalization", ns.STATS + "MinMaxMethod", [])
    with pytest.raises(ArityMismatchError):
        b.add_task(ns.ML + "DataSplitting", ns.ML + "TrainTestSplitMethod", [x])


def test_param_validation(schema):
    b = _builder(schema)
    x = _entity(b)
    with pytest.raises(UnknownParamError):
        b.add_task(ns.STATS + "Normalization", ns.STATS + "MinMaxMethod", [x], {"gain": 2})
    with pytest.raises(ParamTypeError):
        # clusters is required and has no default
        b.add_task(ns.ML + "Clustering", ns.ML + "KMeansMethod", [x])
    with pytest.raises(ParamTypeError):
        b.add_task(ns.ML + "Clustering", ns.ML + "KMeansMethod", [x], {"clusters": "many"})


def test_check_param_value_coerces_and_rejects():
    spec = ParamSpec(ns.ML + "hasNeighborCount", "k", ns.XSD_INTEGER)
    assert check_param_value(spec, 3) == 3
    with pytest.raises(ParamTypeError):
        check_param_value(spec, True)  # bools are not neighbor counts
    with pytest.raises(ParamTypeError):
        check_param_value(spec, 2.5)
    ratio = ParamSpec(ns.ML + "hasSplitRatio", "ratio", ns.XSD_DOUBLE)
    assert check_param_value(ratio, 1) == 1.0
    with pytest.raises(ParamTypeError):
        check_param_value(ratio, "wide")


def test_format_literal_canonical_forms():
    assert format_literal(0.75, ns.XSD_DOUBLE) == Literal("0.75", ns.XSD_DOUBLE)
    assert format_literal(3, ns.XSD_INTEGER) == Literal("3", ns.XSD_INTEGER)
    assert format_literal("canvas", ns.XSD_STRING) == Literal("canvas")


# -- saving ------------------------------------------------------------------


def test_save_refuses_an_empty_pipeline(schema, tmp_path):
    b = _builder(schema)
    with pytest.raises(EmptyPipelineError):
        b.save(tmp_path / "empty.ttl")


def test_save_round_trips(schema, tmp_path):
    b = build_classification_pipeline(schema, "classification.csv")
    out = tmp_path / "demo.ttl"
    report = b.save(out)
    assert report.conforms
    assert parse_turtle(out.read_text()) == b.graph


def test_save_withholds_nonconforming_graphs(schema, tmp_path):
    b = _builder(schema)
    x = _entity(b)
    handle = b.add_task(ns.STATS + "Normalization", ns.STATS + "MinMaxMethod", [x])
    for t in list(b.graph):
        if t.subject == Iri(handle.iri) and t.predicate == Iri(ns.DS + "hasMethod"):
            b.graph.remove(t)
    out = tmp_path / "broken.ttl"
    report = b.save(out)
    assert not report.conforms
    assert not out.exists()


# -- grids and templates -----------------------------------------------------


def test_grid_points_order_and_empty():
    grid = {"b": [1, 2], "a": ["x", "y"]}
    assert grid_points(grid) == [
        {"a": "x", "b": 1}, {"a": "x", "b": 2},
        {"a": "y", "b": 1}, {"a": "y", "b": 2},
    ]
    assert grid_points({}) == []


TEMPLATE = {
    "name": "sweep",
    "csv_path": "regression.csv",
    "grid": {"norm": [ns.STATS + "MinMaxMethod", ns.STATS + "ZScoreMethod"], "spread": [5, 10]},
    "entities": [
        {"name": "x", "column": "x", "semantics": ns.DS + "Numerical", "structure": ns.DS + "Vector"},
    ],
    "tasks": [
        {"task": ns.STATS + "Normalization", "method": "$norm", "inputs": ["x"]},
        {
            "task": ns.STATS + "FrequencyDistribution",
            "method": ns.STATS + "GroupedFrequencyMethod",
            "inputs": ["@1.normalized"],
            "params": {"bins": "$spread"},
        },
    ],
}


def test_build_from_template_substitutes_and_wires(schema):
    b = build_from_template(TEMPLATE, {"norm": ns.STATS + "ZScoreMethod", "spread": 5}, schema, "one")
    method = b.graph.subjects(Iri(ns.RDF_TYPE), Iri(ns.STATS + "ZScoreMethod"))
    assert len(method) == 1
    freq = b.graph.subjects(Iri(ns.RDF_TYPE), Iri(ns.STATS + "GroupedFrequencyMethod"))
    bins = b.graph.value(freq[0], Iri(ns.STATS + "hasBinCount"))
    assert bins == Literal("5", ns.XSD_INTEGER)
    assert b.validation_report().conforms


def test_template_rejects_unknown_variables(schema):
    with pytest.raises(UnknownParamError):
        build_from_template(TEMPLATE, {"norm": ns.STATS + "MinMaxMethod"}, schema, "one")


def test_generate_batch_writes_one_file_per_point(schema, tmp_path):
    paths = generate_batch(TEMPLATE, schema, tmp_path / "out")
    assert [p.rsplit("/", 1)[-1] for p in paths] == [
        "sweep0.ttl", "sweep1.ttl", "sweep2.ttl", "sweep3.ttl",
    ]
    for p in paths:
        g = parse_turtle(open(p).read())
        assert len(g.subjects(Iri(ns.RDF_TYPE), Iri(ns.DS + "Pipeline"))) == 1


def test_generate_batch_names_the_failing_grid_point(schema, tmp_path):
    template = json.loads(json.dumps(TEMPLATE))
    template["grid"]["spread"] = [5, "narrow"]
    with pytest.raises(ParamTypeError, match="grid point 1"):
        generate_batch(template, schema, tmp_path / "out")


# -- property: every generated sequence conforms -----------------------------


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_random_valid_sequences_conform(schema, shapes, seed):
    from kgflow.validation import validate

    b = random_pipeline(schema, seed)
    report = validate(b.graph, shapes, schema)
    assert report.conforms, report.violations
