"""Command-line interface: repl, run, and validate subcommands.

Exit codes: 0 success, 1 domain failure (violations found, or a scenario
request not fulfilled), 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .agent import FULFILLED, AgentConfig, RequestOutcome, handle_request
from .clock import format_clock
from .gateway import (
    BackendError,
    ChatMessage,
    GatewayError,
    default_model_from_env,
    http_backend_from_env,
)
from .plan import (
    NormalizeError,
    PlanParseError,
    action_phrase,
    normalize,
    parse_plan,
    serialize_plan,
)
from .prompts import GoalSlotError, parse_goal_slots
from .scenario import Scenario, ScenarioError, load_scenario
from .simulator import render_event_log
from .validator import DurationModel, validate
from .world import WorldError, ZArmState, default_world


def render_transcript(turns: list[ChatMessage]) -> str:
    """Chat turns as labeled blocks, byte-stable for golden comparison."""
    if not turns:
        return ""
    blocks = [f"=== {m.role} ===\n{m.content}" for m in turns]
    return "\n\n".join(blocks) + "\n"


def fresh_arm(scenario_world) -> ZArmState:
    return ZArmState(
        location=scenario_world.charging_room,
        capacity=scenario_world.capacity,
        docked=True,
        charging=True,
    )


def _write_outputs(outcome: RequestOutcome, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "transcript.txt").write_text(
        render_transcript(outcome.transcript), encoding="utf-8"
    )
    plan_text = serialize_plan(outcome.plan) + "\n" if outcome.plan is not None else ""
    (out_dir / "plan.txt").write_text(plan_text, encoding="utf-8")
    events_text = (
        render_event_log(outcome.event_log) + "\n"
        if outcome.event_log is not None
        else ""
    )
    (out_dir / "events.txt").write_text(events_text, encoding="utf-8")


def run_scenario(scenario: Scenario, out_root: Path) -> list[RequestOutcome]:
    """Run every request against one shared scripted backend.

    The script is written for the whole scenario, so the backend (and its
    consume-once matcher state) spans requests; the arm starts each
    request docked at the charging port.
    """
    backend = scenario.make_backend()
    outcomes = []
    for index, request in enumerate(scenario.requests, start=1):
        arm = fresh_arm(scenario.world)
        outcome = handle_request(
            request,
            scenario.world,
            arm,
            backend,
            config=scenario.config,
            templates=scenario.templates,
        )
        _write_outputs(outcome, out_root / f"request_{index:03d}")
        outcomes.append(outcome)
    return outcomes


def _cmd_run(args: argparse.Namespace) -> int:
    try:
        scenario = load_scenario(args.scenario)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    outcomes = run_scenario(scenario, Path(args.out))
    for index, outcome in enumerate(outcomes, start=1):
        print(f"request {index}: {outcome.status}")
    return 0 if all(o.status == FULFILLED for o in outcomes) else 1


def _print_outcome(outcome: RequestOutcome) -> None:
    if outcome.plan is not None:
        print(serialize_plan(outcome.plan))
    if outcome.event_log is not None:
        for line in outcome.event_log.lines():
            print(line)
    for violation in outcome.violations:
        print(violation.machine_line())
    if outcome.error:
        print(f"error: {outcome.error}")
    print(f"status: {outcome.status}")


def _cmd_repl(args: argparse.Namespace) -> int:
    if args.scenario:
        try:
            scenario = load_scenario(args.scenario)
        except ScenarioError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        world = scenario.world
        templates = scenario.templates
        config = scenario.config
        backend = scenario.make_backend()
    else:
        try:
            backend = http_backend_from_env()
        except BackendError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        world = default_world()
        templates = None
        config = AgentConfig()
        config = replace(
            config, params=replace(config.params, model_name=default_model_from_env())
        )

    interactive = sys.stdin.isatty()
    while True:
        if interactive:
            print("> ", end="", flush=True)
        line = sys.stdin.readline()
        if not line:
            return 0
        request = line.strip()
        if not request:
            continue
        if request == ":quit":
            return 0
        try:
            outcome = handle_request(
                request,
                world,
                fresh_arm(world),
                backend,
                config=config,
                templates=templates,
            )
        except GatewayError as exc:
            print(f"error: {exc}")
            continue
        _print_outcome(outcome)


def _cmd_validate(args: argparse.Namespace) -> int:
    try:
        goal = parse_goal_slots(args.goal)
    except GoalSlotError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.world:
        try:
            world = load_scenario(args.world).world
        except ScenarioError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    else:
        world = default_world()

    try:
        text = Path(args.planfile).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read plan file: {exc}", file=sys.stderr)
        return 2

    try:
        plan = parse_plan(text)
        plan = normalize(plan, world, world.charging_room)
    except PlanParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NormalizeError, WorldError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    result = validate(
        plan,
        world,
        goal,
        DurationModel(),
        start=(world.charging_room, world.clock_start),
        start_docked=True,
    )
    if not result.ok:
        for violation in result.violations:
            print(violation.machine_line())
        return 1
    for scheduled in result.schedule:
        start = format_clock(scheduled.timed.start)
        end = format_clock(scheduled.completion)
        print(f"{start} -> {end}  {action_phrase(scheduled.timed.action)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aptbot",
        description="Context-aware household agent: request in, checked plan out.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_repl = sub.add_parser("repl", help="interactive request loop")
    p_repl.add_argument(
        "--scenario", help="scenario file providing world, templates, and script"
    )
    p_repl.set_defaults(func=_cmd_repl)

    p_run = sub.add_parser("run", help="run every request in a scenario file")
    p_run.add_argument("--scenario", required=True, help="scenario file to run")
    p_run.add_argument(
        "--out", default="out", help="directory for per-request outputs"
    )
    p_run.set_defaults(func=_cmd_run)

    p_val = sub.add_parser("validate", help="check a plan file against a goal")
    p_val.add_argument("planfile", help="text file of timed action lines")
    p_val.add_argument(
        "--world", help="scenario file whose world section to validate against"
    )
    p_val.add_argument(
        "--goal",
        required=True,
        help="goal slots, e.g. 'item=aspirin; qty=2; companion=water; "
        "time=10:00pm; room=living room'",
    )
    p_val.set_defaults(func=_cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
