import copy

from aptbot.agent import (
    BACKEND_FAILED,
    FULFILLED,
    PLAN_FAILED,
    REJECTED_UNKNOWN_TYPE,
    AgentConfig,
    handle_request,
    replan_feedback,
)
from aptbot.gateway import ScriptedBackend, ScriptEntry
from aptbot.plan import PlanParseError, serialize_plan
from aptbot.validator import Violation
from aptbot.world import ZArmState
from conftest import CANONICAL_PLAN

REQUEST = (
    "please bring me two pills of aspirin with a glass of water "
    "at 10:00pm in the living room"
)
SLOT_LINE = "item=aspirin; qty=2; companion=water; time=10:00pm; room=living room"


def _arm():
    return ZArmState(location="living_room", docked=True, charging=True)


def _happy_backend():
    return ScriptedBackend(
        [
            ScriptEntry(response="(A)", contains="categorize it"),
            ScriptEntry(response=SLOT_LINE, contains="item="),
            ScriptEntry(response=CANONICAL_PLAN, contains="Current context:"),
        ]
    )


def test_fulfilled_on_first_plan(world):
    outcome = handle_request(REQUEST, world, _arm(), _happy_backend())
    assert outcome.status == FULFILLED
    assert outcome.attempts == 1
    assert serialize_plan(outcome.plan) == CANONICAL_PLAN
    assert outcome.schedule is not None
    assert outcome.event_log is not None
    assert outcome.event_log.outcome == "completed"
    assert len(outcome.transcript) == 6
    assert outcome.violations == ()


def test_arm_is_not_mutated(world):
    arm = _arm()
    before = copy.deepcopy(arm)
    handle_request(REQUEST, world, arm, _happy_backend())
    assert arm == before


def test_invalid_plan_is_retried_with_feedback(world):
    no_dock = CANONICAL_PLAN.rsplit("\n", 2)[0]
    backend = ScriptedBackend(
        [
            ScriptEntry(response="(A)", contains="categorize it"),
            ScriptEntry(response=SLOT_LINE, contains="item="),
            ScriptEntry(response=no_dock, step=3),
            ScriptEntry(response=CANONICAL_PLAN, contains="Problems found:"),
        ]
    )
    outcome = handle_request(REQUEST, world, _arm(), backend)
    assert outcome.status == FULFILLED
    assert outcome.attempts == 2
    feedback = outcome.transcript[6].content
    assert "The previous plan was not acceptable." in feedback
    assert "VIOLATION NotDockedAtEnd" in feedback


def test_unparseable_plan_feedback_names_the_line(world):
    backend = ScriptedBackend(
        [
            ScriptEntry(response="(A)", contains="categorize it"),
            ScriptEntry(response=SLOT_LINE, contains="item="),
            ScriptEntry(response="[9:56pm] Teleport to the kitchen", step=3),
            ScriptEntry(response=CANONICAL_PLAN, contains="Problems found:"),
        ]
    )
    outcome = handle_request(REQUEST, world, _arm(), backend)
    assert outcome.status == FULFILLED
    feedback = outcome.transcript[6].content
    assert "PARSE_ERROR line=1" in feedback


def test_unknown_request_type_is_rejected(world):
    backend = ScriptedBackend([ScriptEntry(response="(D)", contains="categorize it")])
    outcome = handle_request("fly me to the moon", world, _arm(), backend)
    assert outcome.status == REJECTED_UNKNOWN_TYPE
    assert "(D)" in outcome.error
    assert outcome.plan is None
    assert outcome.attempts == 0


def test_backend_failure_during_classification(world):
    backend = ScriptedBackend([])
    outcome = handle_request(REQUEST, world, _arm(), backend)
    assert outcome.status == BACKEND_FAILED
    assert outcome.attempts == 0
    assert "script" in outcome.error


def test_malformed_goal_reply_is_repaired(world):
    backend = ScriptedBackend(
        [
            ScriptEntry(response="(A)", contains="categorize it"),
            ScriptEntry(response="item=aspirin; qty=two pills", step=2),
            ScriptEntry(response=SLOT_LINE, contains="did not parse"),
            ScriptEntry(response=CANONICAL_PLAN, contains="Current context:"),
        ]
    )
    outcome = handle_request(REQUEST, world, _arm(), backend)
    assert outcome.status == FULFILLED
    assert outcome.attempts == 1


def test_goal_extraction_exhaustion_fails_the_request(world):
    backend = ScriptedBackend(
        [
            ScriptEntry(response="(A)", contains="categorize it"),
            ScriptEntry(response="nonsense", step=2),
            ScriptEntry(response="still nonsense", step=3),
        ]
    )
    config = AgentConfig(max_retries=1)
    outcome = handle_request(REQUEST, world, _arm(), backend, config=config)
    assert outcome.status == PLAN_FAILED
    assert outcome.attempts == 0
    assert "goal extraction failed" in outcome.error


def test_plan_exhaustion_reports_last_violations(world):
    backend = ScriptedBackend(
        [
            ScriptEntry(response="(A)", contains="categorize it"),
            ScriptEntry(response=SLOT_LINE, contains="item="),
            ScriptEntry(response="no plan here", step=3),
            ScriptEntry(response="still no plan", step=4),
        ]
    )
    config = AgentConfig(max_retries=1)
    outcome = handle_request(REQUEST, world, _arm(), backend, config=config)
    assert outcome.status == PLAN_FAILED
    assert outcome.attempts == 2
    assert [v.kind for v in outcome.violations] == ["GoalUnmet"]


def test_replan_feedback_is_deterministic_and_complete():
    failures = [
        Violation.not_docked_at_end(),
        PlanParseError(2, "malformed time", "[9:5xpm] Move"),
        "unknown item 'unobtainium'",
    ]
    text = replan_feedback(failures)
    assert text == (
        "The previous plan was not acceptable.\n"
        "Respond with a corrected full plan, one action per line in the format:\n"
        "[9:56pm] Move to the kitchen\n"
        "Problems found:\n"
        "VIOLATION NotDockedAtEnd\n"
        "PARSE_ERROR line=2 reason=malformed time\n"
        "unknown item 'unobtainium'"
    )
