from pathlib import Path

import pytest

from aptbot.clock import parse_clock
from aptbot.validator import Goal
from aptbot.world import default_world

GOLDEN_DIR = Path(__file__).parent / "golden"
SCENARIO_PATH = Path(__file__).parent.parent / "scenarios" / "medication.scenario"

CANONICAL_PLAN = """[9:56pm] Move to the storeroom
[9:58pm] Pick 2 aspirin
[9:59pm] Move to the kitchen
[10:01pm] Fill glass with water
[10:02pm] Move to the living room
[10:04pm] Deliver 2 aspirin and 1 water to the living room
[10:05pm] Dock at the charging port
[10:07pm] Start charging"""


@pytest.fixture
def world():
    return default_world("9:54pm")


@pytest.fixture
def medication_goal():
    return Goal(
        deliveries=(("aspirin", 2), ("water", 1)),
        destination="living_room",
        target_time=parse_clock("10:00pm"),
        tolerance=5,
    )


@pytest.fixture
def golden_dir():
    return GOLDEN_DIR


@pytest.fixture
def scenario_path():
    return SCENARIO_PATH
