"""Brute-force baseline planner used as ground truth in tests.

Enumerates every ordering of the goal's pickup/fill waypoints (factorial,
capped at 8), builds the earliest-feasible schedule for each, then shifts
the whole schedule so the delivery completes as close to the target time
as the window allows. Never called on the production path; the model is
the planner there.
"""

from __future__ import annotations

from itertools import permutations

from .plan import ActionPlan, Charge, Deliver, Dock, Fill, Move, Pick, TimedAction
from .validator import DurationModel, Goal
from .world import WorldError, WorldModel, item_facility, travel_time

MAX_WAYPOINTS = 8


class UnachievableGoalError(ValueError):
    def __init__(self, missing: list[str]):
        super().__init__(f"required items not stocked anywhere: {', '.join(missing)}")
        self.missing = missing


def _waypoints(world: WorldModel, goal: Goal) -> list[tuple[str, str, int]]:
    """(room, item, qty) per required item; fails listing unstocked items."""
    missing = []
    out = []
    for item, qty in goal.deliveries:
        try:
            facility = item_facility(world, item)
        except WorldError:
            missing.append(item)
            continue
        out.append((facility.location, item, qty))
    if missing:
        raise UnachievableGoalError(missing)
    return out


def _build(
    world: WorldModel,
    goal: Goal,
    durations: DurationModel,
    start: tuple[str, int],
    order: tuple[tuple[str, str, int], ...],
    start_docked: bool,
) -> tuple[ActionPlan, int | None, int] | None:
    """Earliest-feasible chain for one waypoint order, shifted toward the target.

    Returns (plan, delivery_completion, plan_completion) or None when the
    order cannot meet the deadline window or runs past midnight.
    """
    room, clock = start
    actions: list[TimedAction] = []
    current, t = room, clock

    def move_to(dest: str) -> None:
        nonlocal current, t
        if dest == current:
            return
        actions.append(TimedAction(t, Move(dest)))
        t += travel_time(world, current, dest)
        current = dest

    for wp_room, item, qty in order:
        move_to(wp_room)
        facility = item_facility(world, item)
        if facility.kind == "water_cooler":
            for _ in range(qty):
                actions.append(TimedAction(t, Fill("glass", item)))
                t += durations.fill_min
        else:
            actions.append(TimedAction(t, Pick(item, qty)))
            t += durations.pick_min

    delivery_completion = None
    if goal.deliveries:
        move_to(goal.destination)
        actions.append(TimedAction(t, Deliver(tuple(goal.deliveries), goal.destination)))
        t += durations.deliver_min
        delivery_completion = t

    if goal.require_terminal_dock and not (start_docked and not actions and current == world.charging_room):
        move_to(world.charging_room)
        actions.append(TimedAction(t, Dock()))
        t += durations.dock_min
        actions.append(TimedAction(t, Charge()))

    shift = 0
    if delivery_completion is not None:
        if delivery_completion > goal.target_time + goal.tolerance:
            return None  # already too late; shifting only delays further
        shift = max(0, goal.target_time - delivery_completion)
    if t + shift >= 1440:
        return None
    if shift:
        actions = [TimedAction(a.start + shift, a.action) for a in actions]
        if delivery_completion is not None:
            delivery_completion += shift
    return ActionPlan(tuple(actions)), delivery_completion, t + shift


def _candidates(
    world: WorldModel,
    goal: Goal,
    durations: DurationModel,
    start: tuple[str, int],
    max_waypoints: int,
    start_docked: bool,
) -> list[tuple[tuple[str, ...], tuple[str, ...], ActionPlan, int | None, int]]:
    """All feasible orderings as (rooms, items, plan, delivery, completion)."""
    waypoints = sorted(_waypoints(world, goal))
    if len(waypoints) > max_waypoints:
        raise ValueError(f"too many waypoints: {len(waypoints)} > {max_waypoints}")
    seen: set[tuple[tuple[str, str, int], ...]] = set()
    out = []
    for order in permutations(waypoints):
        if order in seen:
            continue
        seen.add(order)
        built = _build(world, goal, durations, start, order, start_docked)
        if built is None:
            continue
        plan, delivery, completion = built
        rooms = tuple(room for room, _, _ in order)
        items = tuple(item for _, item, _ in order)
        out.append((rooms, items, plan, delivery, completion))
    out.sort(key=lambda c: (c[0], c[1]))
    return out


def enumerate_feasible(
    world: WorldModel,
    goal: Goal,
    durations: DurationModel,
    start: tuple[str, int],
    max_waypoints: int = MAX_WAYPOINTS,
    *,
    start_docked: bool = False,
) -> list[ActionPlan]:
    """Every waypoint ordering that admits a valid schedule, canonical form."""
    return [
        plan
        for _, _, plan, _, _ in _candidates(
            world, goal, durations, start, max_waypoints, start_docked
        )
    ]


def plan_oracle(
    world: WorldModel,
    goal: Goal,
    durations: DurationModel,
    start: tuple[str, int],
    *,
    start_docked: bool = False,
) -> ActionPlan:
    """Best feasible plan: delivery closest to the target, ties broken by
    earlier completion, then lexicographic room order."""
    candidates = _candidates(world, goal, durations, start, MAX_WAYPOINTS, start_docked)
    if not candidates:
        raise ValueError("no waypoint ordering fits the deadline window")

    def rank(c):
        rooms, items, _plan, delivery, completion = c
        closeness = abs(delivery - goal.target_time) if delivery is not None else 0
        return (closeness, completion, rooms, items)

    return min(candidates, key=rank)[2]
