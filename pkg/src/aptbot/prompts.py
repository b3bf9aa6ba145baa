"""Prompt construction, request classification, and goal extraction.

The few-shot scaffold and the request-classification fixture are frozen
byte-for-byte, spacing quirks and all; golden tests guard them against
drift. The classification fixture's worked example answers "(C)" even
though its own option list labels appliance control "(B)" -- the fixture is
preserved verbatim rather than corrected, and classification must still
work with it as-is.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from .clock import format_clock, parse_clock, ClockParseError
from .gateway import Backend, GenerationParams, Session, complete
from .plan import room_id, room_text
from .validator import Goal
from .world import SensorReading, WorldModel

# Fixed scaffold with positional slots {0}=description, {1}=examples,
# {2}=question. Do not "fix" the spacing; it is part of the contract.
FEW_SHOT_SCAFFOLD = (
    "Please answer the question by considering descriptions "
    "and examples below. \n\n"
    "Descriptions: {0}. \n "
    "Examples: {1}. \n \n "
    "Question: {2}. \n "
    "Answer: "
)

# The few-shot scaffold with the examples segment removed, nothing else.
_EXAMPLES_SEGMENT = "Examples: {1}. \n \n "
ZERO_SHOT_SCAFFOLD = FEW_SHOT_SCAFFOLD.replace(_EXAMPLES_SEGMENT, "")

# One-shot request-classification fixture, frozen verbatim including the
# run-together words and the "(C)" answer.
CLASSIFY_DESCRIPTION = (
    "Read the user's request in the Question and categorize it"
    "using one of following types.\n"
    "(A) take medicine, (B) appliance  control, (C) food & "
    "beverage...\n Please answer the index of option only."
)
CLASSIFY_EXAMPLE = (
    "\n**********\n"
    "\n Question: turn on the heater when the temperature is below"
    "freezing\n Answer: (C) \n"
    "\n**********\n"
)

_PLACEHOLDERS = ("{0}", "{1}", "{2}")


class RequestType(enum.Enum):
    A_TAKE_MEDICINE = "A"
    B_APPLIANCE_CONTROL = "B"
    C_FOOD_BEVERAGE = "C"
    UNKNOWN = "unknown"


_LETTER_TO_TYPE = {
    "A": RequestType.A_TAKE_MEDICINE,
    "B": RequestType.B_APPLIANCE_CONTROL,
    "C": RequestType.C_FOOD_BEVERAGE,
}


class GoalSlotError(ValueError):
    """Slot-line reply that does not parse; carries the raw reply."""

    def __init__(self, reason: str, raw: str):
        super().__init__(f"{reason}: {raw!r}")
        self.reason = reason
        self.raw = raw


def _check_slots(**slots: str) -> None:
    for name, value in slots.items():
        for marker in _PLACEHOLDERS:
            if marker in value:
                raise ValueError(f"{name} must not contain scaffold marker {marker}")


def build_few_shot_prompt(description: str, examples: str, question: str) -> str:
    _check_slots(description=description, examples=examples, question=question)
    return FEW_SHOT_SCAFFOLD.format(description, examples, question)


def build_zero_shot_prompt(description: str, question: str) -> str:
    _check_slots(description=description, question=question)
    return ZERO_SHOT_SCAFFOLD.format(description, "", question)


def extract_option(answer: str) -> str | None:
    """First standalone option letter, or None when absent or ambiguous.

    Accepts "(A)", a bare single-letter answer, and "(a) take medicine".
    Two different letters in one answer is ambiguous: None, not a guess.
    """
    letters = [m.group(1).upper() for m in re.finditer(r"\(([A-Za-z])\)", answer)]
    if not letters:
        bare = answer.strip().rstrip(".").strip()
        if len(bare) == 1 and bare.isalpha():
            letters = [bare.upper()]
    if not letters or len(set(letters)) != 1:
        return None
    return letters[0]


def classify_request(
    backend: Backend,
    request: str,
    *,
    session: Session | None = None,
    params: GenerationParams | None = None,
    input_limit: int | None = None,
) -> RequestType:
    """One-shot classification via the frozen fixture prompt."""
    prompt = build_few_shot_prompt(CLASSIFY_DESCRIPTION, CLASSIFY_EXAMPLE, request)
    session = session if session is not None else Session()
    params = params if params is not None else GenerationParams()
    answer = complete(backend, session, prompt, params, input_limit=input_limit)
    letter = extract_option(answer)
    return _LETTER_TO_TYPE.get(letter, RequestType.UNKNOWN)


def context_aware_description(
    req_type: RequestType, readings: list[SensorReading], base: str
) -> str:
    """Append one `Current context:` line per sensor reading to the base text.

    `req_type` mirrors the pipeline signature; the rendering itself is the
    same for every type. No readings, no context block.
    """
    del req_type
    if not readings:
        return base
    lines = []
    for r in readings:
        unit = f" {r.unit}" if r.unit else ""
        lines.append(f"{r.location}/{r.sensor_id}: {r.value}{unit} (t={format_clock(r.timestamp)})")
    return base + "\n\nCurrent context:\n" + "\n".join(lines)


# Slot-line grammar for goal extraction. The reply must contain all five
# keys; companion=none means a single-item goal.
GOAL_SLOT_FORMAT = "item=<x>; qty=<n>; companion=<y>; time=<h:mmam|pm>; room=<room>"

GOAL_SLOT_DESCRIPTION = (
    "You extract the delivery goal from a household request. "
    "Reply with exactly one line of the form "
    + GOAL_SLOT_FORMAT
    + ". Use companion=none when only one item is requested"
)

GOAL_SLOT_EXAMPLE = (
    "Request: please bring me one pill of ibuprofen with water at 8:30am "
    "in the bedroom \n Answer: item=ibuprofen; qty=1; companion=water; "
    "time=8:30am; room=bedroom"
)

_SLOT_KEYS = ("item", "qty", "companion", "time", "room")


def format_goal_slots(goal: Goal) -> str:
    """Render a goal back into the slot line (inverse of parse_goal_slots)."""
    if not goal.deliveries:
        raise ValueError("goal has no deliveries to render")
    item, qty = goal.deliveries[0]
    companion = goal.deliveries[1][0] if len(goal.deliveries) > 1 else "none"
    return (
        f"item={item}; qty={qty}; companion={companion}; "
        f"time={format_clock(goal.target_time)}; room={room_text(goal.destination)}"
    )


def parse_goal_slots(text: str, *, tolerance: int = 5) -> Goal:
    values = {}
    for key in _SLOT_KEYS:
        m = re.search(rf"\b{key}\s*=\s*([^;\n]+)", text)
        if m is None:
            raise GoalSlotError(f"missing slot {key!r}", text)
        values[key] = m.group(1).strip()
    try:
        qty = int(values["qty"])
    except ValueError:
        raise GoalSlotError("qty is not an integer", text) from None
    if qty < 1:
        raise GoalSlotError("qty must be positive", text)
    try:
        target = parse_clock(values["time"])
    except ClockParseError:
        raise GoalSlotError("malformed time", text) from None
    deliveries = [(values["item"].lower(), qty)]
    companion = values["companion"].lower()
    if companion not in ("none", ""):
        deliveries.append((companion, 1))
    return Goal(
        deliveries=tuple(deliveries),
        destination=room_id(values["room"]),
        target_time=target,
        tolerance=tolerance,
    )


def goal_prompt(request: str) -> str:
    return build_few_shot_prompt(GOAL_SLOT_DESCRIPTION, GOAL_SLOT_EXAMPLE, request)


def extract_goal(
    backend: Backend,
    request: str,
    req_type: RequestType,
    *,
    session: Session | None = None,
    params: GenerationParams | None = None,
    tolerance: int = 5,
    input_limit: int | None = None,
) -> Goal:
    """Ask for the slot line and parse it; GoalSlotError carries the raw reply."""
    if req_type is RequestType.UNKNOWN:
        raise ValueError("cannot extract a goal for an unknown request type")
    session = session if session is not None else Session()
    params = params if params is not None else GenerationParams()
    reply = complete(backend, session, goal_prompt(request), params, input_limit=input_limit)
    return parse_goal_slots(reply, tolerance=tolerance)


@dataclass(frozen=True)
class TemplateEntry:
    description: str
    examples: str


@dataclass(frozen=True)
class TemplateRepository:
    entries: dict[RequestType, TemplateEntry]

    def __post_init__(self) -> None:
        for rt in RequestType:
            if rt is RequestType.UNKNOWN:
                continue
            if rt not in self.entries:
                raise ValueError(f"missing template for {rt.name}")

    def lookup(self, req_type: RequestType) -> TemplateEntry:
        if req_type is RequestType.UNKNOWN:
            raise KeyError("no template for unknown request type")
        return self.entries[req_type]


def _apartment_description(world: WorldModel) -> str:
    rooms = ", ".join(room_text(r) for r in world.rooms)
    placements = []
    for f in world.facilities:
        if f.kind == "charging_port":
            placements.append(f"the charging port is in the {room_text(f.location)}")
        else:
            stocked = ", ".join(sorted(f.stock))
            kind = f.kind.replace("_", " ")
            note = f" stocking {stocked}" if stocked else ""
            placements.append(f"the {kind} in the {room_text(f.location)}{note}")
    hops = max(
        (m for (a, b), m in world.travel.items() if a != b),
        default=0,
    )
    return (
        "You control a mobile z-arm robot in an apartment with these rooms: "
        f"{rooms}. Facilities: {'; '.join(placements)}. "
        f"Travel between rooms takes up to {hops} minutes. "
        "When the task is done the robot must return to the charging port "
        "and start charging. Write one action per line, each line starting "
        "with the start time in brackets, like: [9:56pm] Move to the kitchen"
    )


_MEDICINE_EXAMPLE = (
    "Request: please bring me one pill of ibuprofen with water at 8:30am "
    "in the bedroom \n"
    " Plan: \n"
    "[8:22am] Move to the storeroom \n"
    "[8:24am] Pick 1 ibuprofen \n"
    "[8:25am] Move to the kitchen \n"
    "[8:27am] Fill glass with water \n"
    "[8:28am] Move to the bedroom \n"
    "[8:30am] Deliver 1 ibuprofen and 1 water to the bedroom \n"
    "[8:31am] Move to the living room \n"
    "[8:33am] Dock at the charging port \n"
    "[8:35am] Start charging"
)

_APPLIANCE_EXAMPLE = (
    "Request: check on the heater in the bathroom at 6:30am \n"
    " Plan: \n"
    "[6:28am] Move to the bathroom \n"
    "[6:30am] Wait 2 minutes \n"
    "[6:32am] Move to the living room \n"
    "[6:34am] Dock at the charging port \n"
    "[6:36am] Start charging"
)

_BEVERAGE_EXAMPLE = (
    "Request: bring a glass of water to the bedroom at 3:00pm \n"
    " Plan: \n"
    "[2:56pm] Move to the kitchen \n"
    "[2:58pm] Fill glass with water \n"
    "[2:59pm] Move to the bedroom \n"
    "[3:01pm] Deliver 1 water to the bedroom \n"
    "[3:02pm] Move to the living room \n"
    "[3:04pm] Dock at the charging port \n"
    "[3:06pm] Start charging"
)


def default_templates(world: WorldModel) -> TemplateRepository:
    base = _apartment_description(world)
    return TemplateRepository(
        {
            RequestType.A_TAKE_MEDICINE: TemplateEntry(base, _MEDICINE_EXAMPLE),
            RequestType.B_APPLIANCE_CONTROL: TemplateEntry(base, _APPLIANCE_EXAMPLE),
            RequestType.C_FOOD_BEVERAGE: TemplateEntry(base, _BEVERAGE_EXAMPLE),
        }
    )


# News fixtures: the classifier and recommender prompt pair exercising the
# same template machinery on the news-notification example.
NEWS_TITLE = "Europe's first bitcoin ETF set to launch after 12-month delay"

NEWS_PAST_TITLES = (
    "Thailand’s Pita loses parliamentary vote for prime minister",
    "Bitcoin Tumbles Toward $30K, KAVA Crashes 12% Daily (Market Watch)",
    "Barclays Said to Ready Sale of German Consumer Finance Business",
)

NEWS_CLASSIFY_DESCRIPTION = (
    "You categorize the type of a news title, such as finance, politics, "
    "entertainments & sports and so on. Please answer the category only"
)

NEWS_RECOMMEND_DESCRIPTION = (
    "You decide whether the user would be interested in reading a news "
    "title during the office hours, based on the news read before. "
    "Please answer yes or no with a short reason"
)

NEWS_RECOMMEND_EXAMPLES = (
    "the last three news read by the user in the office hours are "
    f"(i) {NEWS_PAST_TITLES[0]!r}, (ii) {NEWS_PAST_TITLES[1]!r}, and "
    f"(iii) {NEWS_PAST_TITLES[2]!r}"
)


def news_fixture_prompts() -> tuple[str, str]:
    """(zero-shot classification, few-shot recommendation) prompt texts."""
    classification = build_zero_shot_prompt(NEWS_CLASSIFY_DESCRIPTION, NEWS_TITLE)
    recommendation = build_few_shot_prompt(
        NEWS_RECOMMEND_DESCRIPTION, NEWS_RECOMMEND_EXAMPLES, NEWS_TITLE
    )
    return classification, recommendation
