import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aptbot.clock import parse_clock
from aptbot.plan import (
    ActionPlan,
    Charge,
    Deliver,
    Dock,
    Fill,
    Move,
    NormalizeError,
    Pick,
    PlanParseError,
    TimedAction,
    Wait,
    action_phrase,
    items_text,
    normalize,
    parse_plan,
    room_id,
    room_text,
    serialize_plan,
)
from conftest import CANONICAL_PLAN


def test_parse_single_move_line():
    plan = parse_plan("[9:56pm] Move to the kitchen")
    assert plan.actions == (TimedAction(parse_clock("9:56pm"), Move("kitchen")),)


def test_both_move_phrasings_parse_identically():
    short = parse_plan("[9:56pm] Move to the kitchen")
    long = parse_plan("[9:56pm] Move from the living room to the kitchen")
    assert short == long


def test_verb_synonyms_normalize_to_same_actions():
    variants = [
        ("[9:58pm] Pick 2 aspirin", Pick("aspirin", 2)),
        ("[9:58pm] Take 2 pills of aspirin", Pick("aspirin", 2)),
        ("[9:58pm] Grab two aspirin", Pick("aspirin", 2)),
        ("[9:58pm] pick up 1 ibuprofen", Pick("ibuprofen", 1)),
        ("[10:01pm] Fill a glass with water", Fill("glass", "water")),
        ("[10:04pm] Bring 1 water to the bedroom", Deliver((("water", 1),), "bedroom")),
        (
            "[10:04pm] Deliver 2 aspirin and 1 glass of water to the living room",
            Deliver((("aspirin", 2), ("water", 1)), "living_room"),
        ),
        ("[10:05pm] Dock", Dock()),
        ("[10:05pm] Return to the charging port", Dock()),
        ("[10:07pm] Start charging", Charge()),
        ("[10:07pm] Charge", Charge()),
        ("[6:30am] Wait 2 minutes", Wait(2)),
        ("[6:30am] wait 1 minute", Wait(1)),
        ("[9:59pm] Go to the kitchen", Move("kitchen")),
    ]
    for line, expected in variants:
        plan = parse_plan(line)
        assert plan.actions[0].action == expected, line


def test_parse_ignores_prose_around_bracketed_lines():
    text = (
        "Sure, here is a plan.\n"
        "\n"
        "[9:56pm] Move to the kitchen\n"
        "That should work nicely.\n"
    )
    plan = parse_plan(text)
    assert len(plan.actions) == 1


def test_parse_full_canonical_plan():
    plan = parse_plan(CANONICAL_PLAN)
    kinds = [type(t.action).__name__ for t in plan.actions]
    assert kinds == ["Move", "Pick", "Move", "Fill", "Move", "Deliver", "Dock", "Charge"]
    assert plan.actions[0].start == parse_clock("9:56pm")
    assert plan.actions[-1].start == parse_clock("10:07pm")


def test_malformed_time_in_bracketed_line_is_an_error():
    with pytest.raises(PlanParseError) as exc_info:
        parse_plan("[9:5xpm] Move to the kitchen")
    assert exc_info.value.line_number == 1


def test_unknown_phrase_in_bracketed_line_is_an_error():
    with pytest.raises(PlanParseError) as exc_info:
        parse_plan("intro text\n[9:56pm] Levitate over the kitchen")
    assert exc_info.value.line_number == 2
    assert "Levitate" in exc_info.value.offending_text


def test_empty_text_parses_to_empty_plan():
    assert parse_plan("").actions == ()
    assert parse_plan("no plan lines here").actions == ()


def test_serializer_golden():
    plan = parse_plan(CANONICAL_PLAN)
    assert serialize_plan(plan) == CANONICAL_PLAN


def test_items_text_formats():
    assert items_text((("water", 1),)) == "1 water"
    assert items_text((("aspirin", 2), ("water", 1))) == "2 aspirin and 1 water"
    assert (
        items_text((("aspirin", 2), ("water", 1), ("glass", 3)))
        == "2 aspirin, 1 water and 3 glass"
    )


def test_action_phrases_are_canonical():
    cases = [
        (Move("living_room"), "Move to the living room"),
        (Pick("aspirin", 2), "Pick 2 aspirin"),
        (Fill("glass", "water"), "Fill glass with water"),
        (
            Deliver((("aspirin", 2), ("water", 1)), "living_room"),
            "Deliver 2 aspirin and 1 water to the living room",
        ),
        (Dock(), "Dock at the charging port"),
        (Charge(), "Start charging"),
        (Wait(1), "Wait 1 minute"),
        (Wait(5), "Wait 5 minutes"),
    ]
    for action, expected in cases:
        assert action_phrase(action) == expected


def test_room_id_and_text_round_trip():
    assert room_id("living room") == "living_room"
    assert room_id("Living Room") == "living_room"
    assert room_text("living_room") == "living room"
    assert room_id(room_text("storeroom")) == "storeroom"


def test_normalize_inserts_moves(world):
    plan = parse_plan("[9:58pm] Pick 2 aspirin\n[10:01pm] Fill glass with water")
    canon = normalize(plan, world, "living_room")
    assert serialize_plan(canon) == (
        "[9:56pm] Move to the storeroom\n"
        "[9:58pm] Pick 2 aspirin\n"
        "[9:59pm] Move to the kitchen\n"
        "[10:01pm] Fill glass with water"
    )


def test_normalize_is_idempotent(world):
    plan = parse_plan(CANONICAL_PLAN)
    once = normalize(plan, world, "living_room")
    twice = normalize(once, world, "living_room")
    assert once == twice == plan


def test_normalize_rejects_negative_inferred_start(world):
    plan = parse_plan("[12:01am] Pick 1 aspirin")
    with pytest.raises(NormalizeError):
        normalize(plan, world, "living_room")


def test_normalize_rejects_unknown_item(world):
    plan = parse_plan("[9:58pm] Pick 1 unobtainium")
    with pytest.raises(NormalizeError):
        normalize(plan, world, "living_room")


def test_normalize_rejects_unknown_start_room(world):
    plan = parse_plan("[9:58pm] Pick 1 aspirin")
    with pytest.raises(NormalizeError):
        normalize(plan, world, "garage")


_rooms = st.sampled_from(
    ["living_room", "bedroom", "kitchen", "bathroom", "storeroom"]
)
_items = st.sampled_from(["aspirin", "ibuprofen", "water", "glass"])
_qty = st.integers(min_value=1, max_value=9)

_actions = st.one_of(
    st.builds(Move, _rooms),
    st.builds(Pick, _items, _qty),
    st.builds(Fill, st.just("glass"), st.just("water")),
    st.builds(
        Deliver,
        st.lists(st.tuples(_items, _qty), min_size=1, max_size=3).map(tuple),
        _rooms,
    ),
    st.builds(Dock),
    st.builds(Charge),
    st.builds(Wait, st.integers(min_value=1, max_value=120)),
)


@st.composite
def plans(draw):
    n = draw(st.integers(min_value=0, max_value=10))
    starts = sorted(draw(st.lists(st.integers(0, 1439), min_size=n, max_size=n)))
    actions = draw(st.lists(_actions, min_size=n, max_size=n))
    return ActionPlan(tuple(TimedAction(s, a) for s, a in zip(starts, actions)))


@given(plans())
@settings(max_examples=200)
def test_round_trip_property(plan):
    assert parse_plan(serialize_plan(plan)) == plan


@given(st.text(max_size=200))
@settings(max_examples=300)
def test_fuzz_never_aborts(text):
    try:
        parse_plan(text)
    except PlanParseError:
        pass
