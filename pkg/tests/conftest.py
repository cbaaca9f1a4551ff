import pytest

from degen.catalog import load_all


@pytest.fixture(scope="session")
def records():
    return load_all()


@pytest.fixture(scope="session")
def by_name(records):
    return {rec.name: rec for rec in records}
