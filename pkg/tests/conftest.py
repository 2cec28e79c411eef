import pytest

from kgflow.demo import write_demo_workspace
from kgflow.schema import load_builtin_schemata
from kgflow.validation import load_shapes


@pytest.fixture(scope="session")
def schema():
    return load_builtin_schemata()


@pytest.fixture(scope="session")
def shapes(schema):
    return load_shapes(schema)


@pytest.fixture(scope="session")
def workspace(tmp_path_factory):
    """Directory with the four demo pipelines and their CSV files."""
    base = tmp_path_factory.mktemp("workspace")
    write_demo_workspace(base)
    return base
