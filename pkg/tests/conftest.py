from fractions import Fraction

import pytest
from fastapi.testclient import TestClient

import grmlab.store as store_module
from grmlab import channel as ch
from grmlab.gf import field_of_size
from grmlab.grm import grm_make, repetition_code
from grmlab.main import app


# Override the report store dependency with a fresh in-memory store per test
@pytest.fixture(autouse=True)
def override_report_store():
    store = store_module.InMemoryStore()

    async def get_store():
        return store

    app.dependency_overrides[store_module.get_store] = get_store
    yield store
    app.dependency_overrides.clear()


@pytest.fixture
def client():
    with TestClient(app) as test_client:
        yield test_client


@pytest.fixture
def report_store(override_report_store):
    return override_report_store


@pytest.fixture
def f2():
    return field_of_size(2)


@pytest.fixture
def f3():
    return field_of_size(3)


@pytest.fixture
def f4():
    return field_of_size(4)


@pytest.fixture
def f5():
    return field_of_size(5)


@pytest.fixture
def repetition(f2):
    """{00, 11}: the smallest code whose coset channel is not trivial."""
    return repetition_code(f2, 2)


@pytest.fixture
def rm2_1_2(f2):
    return grm_make(f2, 1, 2)


@pytest.fixture
def rm3_1_1(f3):
    return grm_make(f3, 1, 1)


@pytest.fixture
def ambiguous_4x2():
    return ch.DiscreteChannel.from_rows(
        [[1, 0], [Fraction(1, 2), Fraction(1, 2)], [0, 1], [0, 1]]
    )


@pytest.fixture
def mod4():
    return ch.additive_noise(4, [Fraction(1, 2), Fraction(0), Fraction(1, 2), Fraction(0)])
