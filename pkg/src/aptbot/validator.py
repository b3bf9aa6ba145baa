"""Static feasibility checking of a canonical plan before execution.

A timestamp is the action's start; completion = start + duration. The
validator walks the whole plan and reports every violation it finds, never
just the first, as stable `VIOLATION <kind> <fields>` lines the agent can
feed back to the model.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .clock import MINUTES_PER_DAY, format_clock
from .plan import (
    ActionPlan,
    Charge,
    Deliver,
    Dock,
    Fill,
    Move,
    Pick,
    TimedAction,
    Wait,
    required_room,
)
from .world import WorldModel, travel_time


@dataclass(frozen=True)
class DurationModel:
    pick_min: int = 1
    fill_min: int = 1
    deliver_min: int = 1
    dock_min: int = 2

    def __post_init__(self) -> None:
        for name in ("pick_min", "fill_min", "deliver_min", "dock_min"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


@dataclass(frozen=True)
class Goal:
    deliveries: tuple[tuple[str, int], ...]
    destination: str
    target_time: int
    tolerance: int = 5
    require_terminal_dock: bool = True

    def __post_init__(self) -> None:
        if self.tolerance < 0:
            raise ValueError("tolerance must be >= 0")
        for _, qty in self.deliveries:
            if qty < 1:
                raise ValueError("delivery quantities must be positive")


@dataclass(frozen=True)
class Violation:
    kind: str
    fields: tuple[tuple[str, object], ...] = ()

    def machine_line(self) -> str:
        parts = [f"{k}={v}" for k, v in self.fields]
        return " ".join(["VIOLATION", self.kind, *parts])

    @classmethod
    def chronology(cls, index: int) -> Violation:
        return cls("Chronology", (("index", index),))

    @classmethod
    def travel_infeasible(cls, index: int, needed: int, available: int) -> Violation:
        return cls(
            "TravelInfeasible",
            (("index", index), ("needed", needed), ("available", available)),
        )

    @classmethod
    def item_unavailable(cls, item: str, room: str) -> Violation:
        return cls("ItemUnavailable", (("item", item), ("room", room)))

    @classmethod
    def capacity_exceeded(cls, index: int) -> Violation:
        return cls("CapacityExceeded", (("index", index),))

    @classmethod
    def goal_unmet(cls, missing: list[tuple[str, int]]) -> Violation:
        text = ",".join(f"{item}:{qty}" for item, qty in missing)
        return cls("GoalUnmet", (("missing", text),))

    @classmethod
    def deadline_missed(cls, actual: int, target: int, tolerance: int) -> Violation:
        return cls(
            "DeadlineMissed",
            (
                ("actual", format_clock(actual)),
                ("target", format_clock(target)),
                ("tolerance", tolerance),
            ),
        )

    @classmethod
    def not_docked_at_end(cls) -> Violation:
        return cls("NotDockedAtEnd")

    @classmethod
    def time_wraparound(cls) -> Violation:
        return cls("TimeWraparound")


@dataclass(frozen=True)
class ScheduledAction:
    timed: TimedAction
    completion: int


@dataclass
class ValidationResult:
    schedule: list[ScheduledAction] | None
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _action_room(action, world: WorldModel) -> str | None:
    """Room a non-move action must run in; None when location-free."""
    if isinstance(action, (Move, Wait)):
        return None
    return required_room(action, world)


def check_deadline(schedule: list[ScheduledAction], goal: Goal) -> Violation | None:
    """Delivery completion must land inside the goal's time window."""
    if not goal.deliveries:
        return None
    goal_items = {item for item, _ in goal.deliveries}
    actual = None
    for s in schedule:
        a = s.timed.action
        if isinstance(a, Deliver) and a.dest == goal.destination:
            if any(item in goal_items for item, _ in a.items):
                actual = s.completion
    if actual is None:
        return None
    if abs(actual - goal.target_time) > goal.tolerance:
        return Violation.deadline_missed(actual, goal.target_time, goal.tolerance)
    return None


def validate(
    plan: ActionPlan,
    world: WorldModel,
    goal: Goal,
    durations: DurationModel,
    start: tuple[str, int],
    *,
    start_docked: bool = False,
) -> ValidationResult:
    """Check the whole plan and return either its schedule or every violation.

    Checks, in order: chronology (including travel gaps after moves),
    location continuity, stock availability, payload capacity, goal
    coverage, the deadline window, and terminal docking. The plan should be
    canonical (run `normalize` first); unknown rooms or items raise
    WorldError since they indicate a non-normalized plan.
    """
    start_room, clock = start
    violations: list[Violation] = []
    schedule: list[ScheduledAction] = []

    current = start_room
    docked = start_docked
    wrapped = False
    # item -> remaining stock (None = unbounded), per facility at its room
    stock: dict[tuple[str, str], int | None] = {}
    for f in world.facilities:
        for item, qty in f.stock.items():
            stock[(f.location, item)] = qty
    payload: dict[str, int] = {}
    delivered: dict[str, dict[str, int]] = {}

    prev_start = None
    prev_completion = clock
    prev_travel = None  # travel minutes when previous action was a Move

    for i, ta in enumerate(plan.actions):
        if i == 0:
            if ta.start < clock:
                violations.append(Violation.chronology(0))
        else:
            if ta.start < prev_start:
                violations.append(Violation.chronology(i))
            elif ta.start < prev_completion:
                if prev_travel is not None:
                    violations.append(
                        Violation.travel_infeasible(
                            i - 1, prev_travel, ta.start - prev_start
                        )
                    )
                else:
                    violations.append(Violation.chronology(i))

        action = ta.action
        if isinstance(action, Move):
            minutes = travel_time(world, current, action.dest)
            duration = minutes
            current = action.dest
            docked = False
            prev_travel = minutes
        else:
            prev_travel = None
            room = _action_room(action, world)
            if room is not None and room != current:
                needed = travel_time(world, current, room)
                available = max(0, ta.start - prev_completion)
                violations.append(Violation.travel_infeasible(i, needed, available))
                current = room  # keep scanning from where the action assumes
            if isinstance(action, Pick):
                duration = durations.pick_min
                remaining = stock.get((current, action.item))
                if (current, action.item) not in stock or (
                    remaining is not None and remaining < action.qty
                ):
                    violations.append(Violation.item_unavailable(action.item, current))
                elif remaining is not None:
                    stock[(current, action.item)] = remaining - action.qty
                payload[action.item] = payload.get(action.item, 0) + action.qty
                if len(payload) > world.capacity:
                    violations.append(Violation.capacity_exceeded(i))
            elif isinstance(action, Fill):
                duration = durations.fill_min
                remaining = stock.get((current, action.source))
                if (current, action.source) not in stock or (
                    remaining is not None and remaining < 1
                ):
                    violations.append(Violation.item_unavailable(action.source, current))
                elif remaining is not None:
                    stock[(current, action.source)] = remaining - 1
                payload[action.source] = payload.get(action.source, 0) + 1
                if len(payload) > world.capacity:
                    violations.append(Violation.capacity_exceeded(i))
            elif isinstance(action, Deliver):
                duration = durations.deliver_min
                room_deliveries = delivered.setdefault(current, {})
                for item, qty in action.items:
                    have = payload.get(item, 0)
                    if have < qty:
                        violations.append(Violation.item_unavailable(item, current))
                    taken = min(have, qty)
                    if taken:
                        payload[item] = have - taken
                        if payload[item] == 0:
                            del payload[item]
                    room_deliveries[item] = room_deliveries.get(item, 0) + taken
            elif isinstance(action, Dock):
                duration = durations.dock_min
                docked = True
            elif isinstance(action, Charge):
                duration = 0
                if not docked:
                    violations.append(
                        Violation.item_unavailable("charging_port", current)
                    )
            elif isinstance(action, Wait):
                duration = action.minutes

        completion = ta.start + duration
        if completion >= MINUTES_PER_DAY and not wrapped:
            violations.append(Violation.time_wraparound())
            wrapped = True
        schedule.append(ScheduledAction(ta, completion))
        prev_start = ta.start
        prev_completion = max(prev_completion, completion)

    missing = []
    for item, qty in goal.deliveries:
        got = delivered.get(goal.destination, {}).get(item, 0)
        if got < qty:
            missing.append((item, qty - got))
    if missing:
        violations.append(Violation.goal_unmet(missing))

    deadline = check_deadline(schedule, goal)
    if deadline is not None:
        violations.append(deadline)

    if goal.require_terminal_dock and not docked:
        violations.append(Violation.not_docked_at_end())

    if violations:
        return ValidationResult(None, violations)
    return ValidationResult(schedule, [])
