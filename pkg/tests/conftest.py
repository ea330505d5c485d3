import sys
from pathlib import Path

import pytest

from cjkit import fixtures
from cjkit.scenario import build_model, parse_scenario

sys.path.insert(0, str(Path(__file__).parent))

ROOT = Path(__file__).resolve().parent.parent


def scenario_model(text):
    model, _ = build_model(parse_scenario(text))
    return model


@pytest.fixture
def counter_model():
    return scenario_model(fixtures.COUNTERMODEL)


@pytest.fixture
def c3():
    return scenario_model(fixtures.C3)


@pytest.fixture
def dog4():
    return scenario_model(fixtures.DOG4)


@pytest.fixture
def dog4_full():
    return scenario_model(fixtures.DOG4_FULL)
