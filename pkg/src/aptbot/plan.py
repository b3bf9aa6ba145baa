"""Timed action-plan text: grammar, tolerant parser, serializer, normalizer.

A plan is one action per line in the form `[h:mmam] Verb phrase`. Text
around plan lines is ignored, because model responses wrap plans in prose.
The serializer is byte-deterministic; `parse_plan(serialize_plan(p)) == p`
for every canonical plan.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .clock import ClockParseError, parse_clock, format_clock
from .world import WorldError, WorldModel, item_location, travel_time


class PlanParseError(ValueError):
    def __init__(self, line_number: int, reason: str, offending_text: str):
        super().__init__(f"line {line_number}: {reason}: {offending_text!r}")
        self.line_number = line_number
        self.reason = reason
        self.offending_text = offending_text


class NormalizeError(ValueError):
    """Raised when implicit moves cannot be inserted."""


@dataclass(frozen=True)
class Move:
    dest: str


@dataclass(frozen=True)
class Pick:
    item: str
    qty: int


@dataclass(frozen=True)
class Fill:
    container: str
    source: str


@dataclass(frozen=True)
class Deliver:
    items: tuple[tuple[str, int], ...]
    dest: str


@dataclass(frozen=True)
class Dock:
    pass


@dataclass(frozen=True)
class Charge:
    pass


@dataclass(frozen=True)
class Wait:
    minutes: int


Action = Move | Pick | Fill | Deliver | Dock | Charge | Wait


@dataclass(frozen=True)
class TimedAction:
    start: int
    action: Action


@dataclass(frozen=True)
class ActionPlan:
    actions: tuple[TimedAction, ...] = ()


def room_id(text: str) -> str:
    return "_".join(text.strip().lower().split())


def room_text(room: str) -> str:
    return room.replace("_", " ")


_LINE_RE = re.compile(r"^\s*\[([^\]]*)\]\s*(.*)$")

_WORD_NUMBERS = {
    "one": 1, "two": 2, "three": 3, "four": 4, "five": 5, "six": 6,
    "seven": 7, "eight": 8, "nine": 9, "ten": 10, "eleven": 11, "twelve": 12,
}

_MOVE_RE = re.compile(
    r"^(?:move|go|return)\s+(?:from\s+(?:the\s+)?.+?\s+)?(?:back\s+)?to\s+(?:the\s+)?(?P<dest>.+)$"
)
_PICK_RE = re.compile(r"^(?:pick\s+up|pick|take|grab|fetch)\s+(?P<rest>.+)$")
_FILL_RE = re.compile(
    r"^fill\s+(?:the\s+|a\s+)?(?P<container>.+?)\s+with\s+(?:the\s+)?(?P<source>.+)$"
)
_DELIVER_RE = re.compile(
    r"^(?:deliver|bring)\s+(?P<items>.+)\s+to\s+(?:the\s+)?(?P<dest>.+)$"
)
_DOCK_RE = re.compile(
    r"^(?:dock(?:\s+at\s+(?:the\s+)?charging\s+port)?|return\s+to\s+(?:the\s+)?charging\s+port)$"
)
_CHARGE_RE = re.compile(r"^(?:start\s+charging|charge)$")
_WAIT_RE = re.compile(r"^wait\s+(?:for\s+)?(?P<n>\d+)\s+minutes?$")


def _parse_qty_item(text: str) -> tuple[str, int]:
    """Split "2 aspirin" / "two pills of aspirin" / "aspirin" into (item, qty)."""
    words = text.strip().lower().split()
    qty = 1
    if words and words[0].isdigit():
        qty = int(words.pop(0))
    elif words and words[0] in _WORD_NUMBERS:
        qty = _WORD_NUMBERS[words.pop(0)]
    while len(words) > 1 and words[0] in ("a", "an", "the"):
        words.pop(0)
    if len(words) > 2 and words[0] in ("pills", "pill", "glasses", "glass", "cups", "cup") and words[1] == "of":
        words = words[2:]
    item = " ".join(words)
    if not item or qty < 1:
        raise ValueError(f"bad item phrase {text!r}")
    return item, qty


def _parse_phrase(phrase: str) -> Action:
    lowered = " ".join(phrase.strip().rstrip(".").split()).lower()
    if _DOCK_RE.match(lowered):
        return Dock()
    if _CHARGE_RE.match(lowered):
        return Charge()
    if m := _WAIT_RE.match(lowered):
        minutes = int(m.group("n"))
        if minutes < 1:
            raise ValueError("wait must be at least one minute")
        return Wait(minutes)
    if m := _MOVE_RE.match(lowered):
        return Move(room_id(m.group("dest")))
    if m := _FILL_RE.match(lowered):
        return Fill(m.group("container").strip(), m.group("source").strip())
    if m := _DELIVER_RE.match(lowered):
        items = tuple(
            _parse_qty_item(part)
            for chunk in m.group("items").split(",")
            for part in re.split(r"\s+and\s+", chunk)
            if part.strip()
        )
        if not items:
            raise ValueError("empty delivery list")
        return Deliver(items, room_id(m.group("dest")))
    if m := _PICK_RE.match(lowered):
        item, qty = _parse_qty_item(m.group("rest"))
        return Pick(item, qty)
    raise ValueError(f"unrecognized action {phrase!r}")


def parse_plan(text: str) -> ActionPlan:
    """Extract every `[time] phrase` line; everything else is prose.

    Raises PlanParseError for a bracketed line whose time token is
    malformed or whose phrase matches no verb pattern.
    """
    actions = []
    for number, line in enumerate(text.splitlines(), start=1):
        m = _LINE_RE.match(line)
        if m is None:
            continue
        time_text, phrase = m.group(1), m.group(2)
        try:
            start = parse_clock(time_text)
        except ClockParseError:
            raise PlanParseError(number, "malformed time", line.strip()) from None
        try:
            action = _parse_phrase(phrase)
        except ValueError as exc:
            raise PlanParseError(number, str(exc), line.strip()) from None
        actions.append(TimedAction(start, action))
    return ActionPlan(tuple(actions))


def items_text(items: tuple[tuple[str, int], ...]) -> str:
    parts = [f"{qty} {item}" for item, qty in items]
    if len(parts) == 1:
        return parts[0]
    return ", ".join(parts[:-1]) + " and " + parts[-1]


def action_phrase(action: Action) -> str:
    """Canonical verb phrase, the serializer's single wording per verb."""
    if isinstance(action, Move):
        return f"Move to the {room_text(action.dest)}"
    if isinstance(action, Pick):
        return f"Pick {action.qty} {action.item}"
    if isinstance(action, Fill):
        return f"Fill {action.container} with {action.source}"
    if isinstance(action, Deliver):
        return f"Deliver {items_text(action.items)} to the {room_text(action.dest)}"
    if isinstance(action, Dock):
        return "Dock at the charging port"
    if isinstance(action, Charge):
        return "Start charging"
    if isinstance(action, Wait):
        unit = "minute" if action.minutes == 1 else "minutes"
        return f"Wait {action.minutes} {unit}"
    raise TypeError(f"not an action: {action!r}")


def serialize_plan(plan: ActionPlan) -> str:
    return "\n".join(
        f"[{format_clock(ta.start)}] {action_phrase(ta.action)}" for ta in plan.actions
    )


def required_room(action: Action, world: WorldModel) -> str | None:
    """Room the action must happen in; None when any room works."""
    if isinstance(action, Pick):
        return item_location(world, action.item)
    if isinstance(action, Fill):
        return item_location(world, action.source)
    if isinstance(action, Deliver):
        if action.dest not in world.rooms:
            raise WorldError(f"unknown room {action.dest!r}")
        return action.dest
    if isinstance(action, (Dock, Charge)):
        return world.charging_room
    return None


def normalize(plan: ActionPlan, world: WorldModel, start_room: str) -> ActionPlan:
    """Insert explicit moves so consecutive actions never change rooms implicitly.

    Inserted moves start at the next action's time minus the travel time.
    Idempotent; canonical plans come back unchanged.
    """
    if start_room not in world.rooms:
        raise NormalizeError(f"unknown room {start_room!r}")
    current = start_room
    out: list[TimedAction] = []
    for ta in plan.actions:
        if isinstance(ta.action, Move):
            if ta.action.dest not in world.rooms:
                raise NormalizeError(f"unknown room {ta.action.dest!r}")
            current = ta.action.dest
            out.append(ta)
            continue
        try:
            room = required_room(ta.action, world)
        except WorldError as exc:
            raise NormalizeError(str(exc)) from None
        if room is not None and room != current:
            minutes = travel_time(world, current, room)
            move_start = ta.start - minutes
            if move_start < 0:
                raise NormalizeError(
                    f"implied move to {room} would begin before the day starts"
                )
            out.append(TimedAction(move_start, Move(room)))
            current = room
        out.append(ta)
    return ActionPlan(tuple(out))
