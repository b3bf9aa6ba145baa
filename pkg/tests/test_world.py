import pytest

from aptbot.clock import parse_clock
from aptbot.world import (
    WorldError,
    ZArmState,
    default_world,
    item_facility,
    item_location,
    read_sensors,
    travel_time,
    world_from_config,
)


def test_default_world_shape(world):
    assert world.rooms == ("living_room", "bedroom", "kitchen", "bathroom", "storeroom")
    assert world.capacity == 2
    assert world.clock_start == parse_clock("9:54pm")
    assert world.charging_room == "living_room"


def test_default_travel_is_uniform_two_minutes(world):
    for a in world.rooms:
        for b in world.rooms:
            expected = 0 if a == b else 2
            assert travel_time(world, a, b) == expected


def test_travel_time_rejects_unknown_room(world):
    with pytest.raises(WorldError):
        travel_time(world, "living_room", "garage")


def test_item_location_lookup(world):
    assert item_location(world, "aspirin") == "storeroom"
    assert item_location(world, "water") == "kitchen"
    with pytest.raises(WorldError):
        item_location(world, "coffee")


def test_water_is_unbounded_and_aspirin_counted(world):
    cooler = item_facility(world, "water")
    box = item_facility(world, "aspirin")
    assert cooler.stock["water"] is None
    assert box.stock["aspirin"] == 10


def test_read_sensors_includes_clock_and_position(world):
    arm = ZArmState(location="kitchen")
    readings = read_sensors(world, arm, world.clock_start)
    by_id = {r.sensor_id: r for r in readings}
    assert by_id["clock"].value == "9:54pm"
    assert by_id["clock"].location == "living_room"
    assert by_id["zarm_position"].value == "kitchen"
    assert [(r.location, r.sensor_id) for r in readings] == sorted(
        (r.location, r.sensor_id) for r in readings
    )


def test_world_from_config_travel_override_is_symmetric():
    world = world_from_config({"travel": {"living_room,storeroom": 4}})
    assert travel_time(world, "living_room", "storeroom") == 4
    assert travel_time(world, "storeroom", "living_room") == 4
    assert travel_time(world, "living_room", "kitchen") == 2


def test_world_from_config_stock_override():
    world = world_from_config({"stock": {"medicine_box": {"aspirin": 1}}})
    assert item_facility(world, "aspirin").stock["aspirin"] == 1
    assert item_facility(world, "ibuprofen").stock["ibuprofen"] == 10


def test_world_from_config_rejects_unknown_keys():
    with pytest.raises(WorldError):
        world_from_config({"room_list": ["kitchen"]})


def test_world_from_config_rejects_bad_travel_pair():
    with pytest.raises(WorldError):
        world_from_config({"travel": {"living_room": 3}})
    with pytest.raises(WorldError):
        world_from_config({"travel": {"living_room,garage": 3}})


def test_world_requires_charging_port_for_charging_room():
    world = world_from_config({"facilities": [{"kind": "water_cooler", "location": "kitchen", "stock": {"water": None}}]})
    with pytest.raises(WorldError):
        world.charging_room
