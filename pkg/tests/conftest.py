from pathlib import Path

import pytest

from negotiable_qos.services.model_loader import load_model, load_scenario

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures" / "routeplanner"
GOAL_FILES = {
    "high": FIXTURE_DIR / "goals" / "high.txt",
    "distributed": FIXTURE_DIR / "goals" / "distributed.txt",
    "conditional": FIXTURE_DIR / "goals" / "conditional.txt",
}


@pytest.fixture
def model():
    loaded, _ = load_model(str(FIXTURE_DIR / "model.yaml"))
    return loaded


@pytest.fixture
def catalog(model):
    return model.catalog


@pytest.fixture
def goal_texts():
    return {user: path.read_text() for user, path in GOAL_FILES.items()}


@pytest.fixture
def setting2():
    return load_scenario(str(FIXTURE_DIR / "setting2.yaml"))


@pytest.fixture
def setting1():
    return load_scenario(str(FIXTURE_DIR / "setting1.yaml"))
