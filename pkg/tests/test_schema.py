"""Schema registry: class hierarchy, compatibility, params, io, extension."""

import pytest

from kgflow import namespaces as ns
from kgflow.errors import (
    DuplicateClassError,
    UnknownClassError,
    UnknownParentError,
)
from kgflow.schema import (
    ExtensionDescriptor,
    OutputSpec,
    ParamSpec,
    extension_from_dict,
    load_builtin_schemata,
)


def test_registry_size(schema):
    assert len(schema.task_classes()) == 16
    assert len(schema.method_classes()) == 19


def test_subclass_is_reflexive_and_transitive(schema):
    cls = ns.ML + "Classification"
    assert schema.is_subclass_of(cls, cls)
    assert schema.is_subclass_of(cls, ns.DS + "AtomicTask")
    assert not schema.is_subclass_of(ns.DS + "AtomicTask", cls)
    assert not schema.is_subclass_of(cls, ns.ML + "Regression")


def test_every_concrete_class_roots_in_an_atomic_class(schema):
    for iri in schema.task_classes():
        assert schema.is_subclass_of(iri, ns.DS + "AtomicTask")
    for iri in schema.method_classes():
        assert schema.is_subclass_of(iri, ns.DS + "AtomicMethod")


def test_compatible_methods_sorted_and_complete(schema):
    metrics = schema.compatible_methods(ns.ML + "PerformanceCalculation")
    assert metrics == (
        ns.ML + "AccuracyMethod",
        ns.ML + "MAEMethod",
        ns.ML + "MAPEMethod",
    )
    with pytest.raises(UnknownClassError):
        schema.compatible_methods(ns.DS + "AtomicTask")
    with pytest.raises(UnknownClassError):
        schema.compatible_methods(ns.ML + "KNNMethod")


def test_param_specs(schema):
    (k,) = schema.params_of(ns.ML + "KNNMethod")
    assert (k.name, k.datatype, k.default, k.required) == ("k", ns.XSD_INTEGER, 3, False)

    by_name = {p.name: p for p in schema.params_of(ns.ML + "TrainTestSplitMethod")}
    assert by_name["ratio"].datatype == ns.XSD_DOUBLE
    assert by_name["ratio"].default == 0.75
    assert by_name["seed"].default == 0

    (clusters, seed) = sorted(schema.params_of(ns.ML + "KMeansMethod"), key=lambda p: p.name)
    assert clusters.required and clusters.default is None
    assert not seed.required

    assert schema.params_of(ns.ML + "MAEMethod") == ()


def test_io_specs(schema):
    split = schema.io_spec_of(ns.ML + "DataSplitting")
    assert (split.min_inputs, split.max_inputs) == (2, None)
    assert [o.name for o in split.outputs] == [
        "train_features", "train_labels", "test_features", "test_labels",
    ]
    train = schema.io_spec_of(ns.ML + "Train")
    assert (train.min_inputs, train.max_inputs) == (2, 3)
    assert [o.structure for o in train.outputs] == [ns.DS + "SingleValue"]
    canvas = schema.io_spec_of(ns.VISU + "CanvasTask")
    assert (canvas.min_inputs, canvas.max_inputs) == (0, 0)
    assert canvas.outputs == ()


def test_labels_are_spaced_and_unique(schema):
    assert schema.classes[ns.ML + "TrainTestSplitMethod"].label == "Train Test Split Method"
    assert schema.classes[ns.ML + "KNNMethod"].label == "KNN Method"
    for group in (schema.task_classes(), schema.method_classes()):
        labels = [schema.classes[i].label for i in group]
        assert len(labels) == len(set(labels))


def test_implementation_keys_derive_from_locals(schema):
    key = schema.implementation_key(ns.ML + "Classification", ns.ML + "KNNMethod")
    assert key == "Classification:KNNMethod"


def test_every_compat_pair_has_a_key(schema):
    keys = {
        schema.implementation_key(t, m)
        for t in schema.task_classes()
        for m in schema.compatible_methods(t)
    }
    assert len(keys) == 25


# -- extension ---------------------------------------------------------------


def _negate_descriptor():
    return ExtensionDescriptor(
        new_method_class=ns.STATS + "NegateMethod",
        parent_task_class=ns.STATS + "Normalization",
        new_task_class=ns.STATS + "NegationTask",
        implementation_key="negate-column",
        params=(ParamSpec(ns.STATS + "hasScale", "scale", ns.XSD_DOUBLE, default=1.0),),
        min_inputs=1,
        max_inputs=1,
        outputs=(OutputSpec("negated", ns.DS + "Vector", ns.DS + "Numerical"),),
    )


def test_register_extension_clones(schema):
    extended = schema.register_extension(_negate_descriptor())
    task = ns.STATS + "NegationTask"
    method = ns.STATS + "NegateMethod"
    assert task in extended.classes and method in extended.classes
    assert task not in schema.classes and method not in schema.classes
    assert extended.compatible_methods(task) == (method,)
    assert extended.implementation_key(task, method) == "negate-column"
    assert [p.name for p in extended.params_of(method)] == ["scale"]
    io = extended.io_spec_of(task)
    assert io.outputs[0].name == "negated"


def test_extension_without_new_task_attaches_to_parent(schema):
    descriptor = ExtensionDescriptor(
        new_method_class=ns.STATS + "RobustScaleMethod",
        parent_task_class=ns.STATS + "Normalization",
        implementation_key="robust-scale",
    )
    extended = schema.register_extension(descriptor)
    methods = extended.compatible_methods(ns.STATS + "Normalization")
    assert ns.STATS + "RobustScaleMethod" in methods
    assert extended.implementation_key(ns.STATS + "Normalization", ns.STATS + "RobustScaleMethod") == "robust-scale"


def test_extension_rejects_duplicates_and_unknown_parents(schema):
    with pytest.raises(DuplicateClassError):
        schema.register_extension(ExtensionDescriptor(
            new_method_class=ns.ML + "KNNMethod",
            parent_task_class=ns.ML + "Classification",
            implementation_key="dup",
        ))
    with pytest.raises(UnknownParentError):
        schema.register_extension(ExtensionDescriptor(
            new_method_class=ns.ML + "NewMethod",
            parent_task_class=ns.ML + "NoSuchTask",
            implementation_key="orphan",
        ))


def test_extension_from_dict_defaults():
    d = extension_from_dict({
        "method": ns.STATS + "M",
        "parent_task": ns.STATS + "Normalization",
        "implementation": "m",
    })
    assert d.min_inputs == 1 and d.max_inputs == 1
    assert d.new_task_class is None
    unbounded = extension_from_dict({
        "method": ns.STATS + "M",
        "parent_task": ns.STATS + "Normalization",
        "implementation": "m",
        "max_inputs": None,
        "params": [{"property": ns.STATS + "hasScale", "datatype": ns.XSD_DOUBLE}],
    })
    assert unbounded.max_inputs is None
    assert unbounded.params[0].name == "hasScale"


def test_loading_is_pure():
    a = load_builtin_schemata()
    b = load_builtin_schemata()
    assert a.task_classes() == b.task_classes()
    assert a.classes.keys() == b.classes.keys()
