"""Request handling loop: classify, extract the goal, plan, check, execute.

One request gets one fresh session. The model's plan text is parsed,
normalized, and validated before anything is simulated; a plan that fails
any check is bounced back to the model with a deterministic feedback
prompt listing every problem, up to the retry budget. The arm never acts
on an unvalidated plan.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .gateway import (
    Backend,
    ChatMessage,
    GatewayError,
    GenerationParams,
    Session,
    complete,
)
from .plan import ActionPlan, NormalizeError, PlanParseError, normalize, parse_plan
from .prompts import (
    GOAL_SLOT_FORMAT,
    GoalSlotError,
    RequestType,
    TemplateRepository,
    build_few_shot_prompt,
    classify_request,
    context_aware_description,
    default_templates,
    goal_prompt,
    parse_goal_slots,
)
from .simulator import FAULT, EventLog, execute
from .validator import (
    DurationModel,
    Goal,
    ScheduledAction,
    Violation,
    validate,
)
from .world import WorldError, WorldModel, ZArmState, read_sensors

FULFILLED = "fulfilled"
REJECTED_UNKNOWN_TYPE = "rejected_unknown_type"
PLAN_FAILED = "plan_failed"
BACKEND_FAILED = "backend_failed"


@dataclass(frozen=True)
class AgentConfig:
    # Retries beyond the first attempt, so max_retries=3 allows 4 exchanges.
    max_retries: int = 3
    durations: DurationModel = field(default_factory=DurationModel)
    tolerance: int = 5
    params: GenerationParams = field(default_factory=GenerationParams)
    token_budget: int = 8192

    def __post_init__(self) -> None:
        if self.max_retries < 0:
            raise ValueError("max_retries must be non-negative")
        if self.tolerance < 0:
            raise ValueError("tolerance must be non-negative")
        if self.token_budget < 1:
            raise ValueError("token_budget must be positive")


@dataclass
class RequestOutcome:
    status: str
    plan: ActionPlan | None = None
    schedule: list[ScheduledAction] | None = None
    event_log: EventLog | None = None
    transcript: list[ChatMessage] = field(default_factory=list)
    attempts: int = 0
    error: str | None = None
    violations: tuple[Violation, ...] = ()


def _failure_line(failure: Violation | PlanParseError | str) -> str:
    if isinstance(failure, Violation):
        return failure.machine_line()
    if isinstance(failure, PlanParseError):
        return f"PARSE_ERROR line={failure.line_number} reason={failure.reason}"
    return failure


def replan_feedback(failures: list) -> str:
    """Deterministic correction prompt listing every problem found."""
    if not failures:
        raise ValueError("replan_feedback needs at least one failure")
    lines = [
        "The previous plan was not acceptable.",
        "Respond with a corrected full plan, one action per line in the format:",
        "[9:56pm] Move to the kitchen",
        "Problems found:",
    ]
    lines.extend(_failure_line(f) for f in failures)
    return "\n".join(lines)


def _goal_repair_prompt(error: GoalSlotError) -> str:
    return (
        f"That reply did not parse ({error.reason}). "
        "Reply with exactly one line of the form "
        f"{GOAL_SLOT_FORMAT}. Use companion=none when only one item is requested."
    )


def _backend_failed(session: Session, exc: GatewayError, attempts: int) -> RequestOutcome:
    return RequestOutcome(
        status=BACKEND_FAILED,
        transcript=list(session.turns),
        attempts=attempts,
        error=str(exc),
    )


def handle_request(
    request: str,
    world: WorldModel,
    arm: ZArmState,
    backend: Backend,
    config: AgentConfig | None = None,
    templates: TemplateRepository | None = None,
) -> RequestOutcome:
    """Drive one natural-language request end to end.

    `attempts` on the outcome counts completed planning exchanges with the
    backend; classification and goal extraction are not counted.
    """
    config = config if config is not None else AgentConfig()
    templates = templates if templates is not None else default_templates(world)
    session = Session()

    try:
        req_type = classify_request(
            backend,
            request,
            session=session,
            params=config.params,
            input_limit=config.token_budget,
        )
    except GatewayError as exc:
        return _backend_failed(session, exc, attempts=0)

    if req_type is RequestType.UNKNOWN:
        raw = session.turns[-1].content if session.turns else ""
        return RequestOutcome(
            status=REJECTED_UNKNOWN_TYPE,
            transcript=list(session.turns),
            error=f"unrecognized request type: {raw!r}",
        )

    goal: Goal | None = None
    prompt = goal_prompt(request)
    last_slot_error: GoalSlotError | None = None
    for _ in range(config.max_retries + 1):
        try:
            reply = complete(
                backend, session, prompt, config.params, input_limit=config.token_budget
            )
        except GatewayError as exc:
            return _backend_failed(session, exc, attempts=0)
        try:
            goal = parse_goal_slots(reply, tolerance=config.tolerance)
            break
        except GoalSlotError as exc:
            last_slot_error = exc
            prompt = _goal_repair_prompt(exc)
    if goal is None:
        return RequestOutcome(
            status=PLAN_FAILED,
            transcript=list(session.turns),
            error=f"goal extraction failed: {last_slot_error}",
        )

    entry = templates.lookup(req_type)
    readings = read_sensors(world, arm, world.clock_start)
    description = context_aware_description(req_type, readings, entry.description)
    prompt = build_few_shot_prompt(description, entry.examples, request)

    last_failures: list = []
    attempts = 0
    for _ in range(config.max_retries + 1):
        try:
            reply = complete(
                backend, session, prompt, config.params, input_limit=config.token_budget
            )
        except GatewayError as exc:
            return _backend_failed(session, exc, attempts=attempts)
        attempts += 1

        try:
            raw_plan = parse_plan(reply)
            canonical = normalize(raw_plan, world, arm.location)
        except PlanParseError as exc:
            last_failures = [exc]
            prompt = replan_feedback(last_failures)
            continue
        except (NormalizeError, WorldError) as exc:
            last_failures = [str(exc)]
            prompt = replan_feedback(last_failures)
            continue

        try:
            result = validate(
                canonical,
                world,
                goal,
                config.durations,
                (arm.location, world.clock_start),
                start_docked=arm.docked,
            )
        except WorldError as exc:
            last_failures = [str(exc)]
            prompt = replan_feedback(last_failures)
            continue
        if not result.ok:
            last_failures = list(result.violations)
            prompt = replan_feedback(last_failures)
            continue

        log = execute(canonical, world, arm, config.durations)
        if log.outcome == FAULT:
            last_failures = [f"EXECUTION_FAULT {log.events[-1].detail}"]
            prompt = replan_feedback(last_failures)
            continue

        return RequestOutcome(
            status=FULFILLED,
            plan=canonical,
            schedule=result.schedule,
            event_log=log,
            transcript=list(session.turns),
            attempts=attempts,
        )

    return RequestOutcome(
        status=PLAN_FAILED,
        transcript=list(session.turns),
        attempts=attempts,
        error="plan attempts exhausted",
        violations=tuple(f for f in last_failures if isinstance(f, Violation)),
    )
