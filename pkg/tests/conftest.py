import pytest

from kgbb.demo import load_demo, seed_travel, seed_weight
from kgbb.engine import Store


@pytest.fixture(scope="session")
def travel_spec():
    return load_demo("travel")


@pytest.fixture(scope="session")
def weight_spec():
    return load_demo("weight")


@pytest.fixture(scope="session")
def partonomy_spec():
    return load_demo("partonomy")


@pytest.fixture(scope="session")
def population_spec():
    return load_demo("population")


@pytest.fixture
def travel_store(travel_spec):
    store = Store(travel_spec)
    unit = seed_travel(store)
    return store, unit


@pytest.fixture
def weight_store(weight_spec):
    store = Store(weight_spec)
    created = seed_weight(store)
    return store, created
