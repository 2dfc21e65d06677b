"""Execution histories: full-state snapshots with forward/backward stepping.

Backward stepping replays recorded snapshots rather than inverting
transitions; entries are never discarded, so advance/step_back form a
zipper over the recorded prefix of the run.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .analysis import Analysis, analyze
from .machine import RUNNING, State, initial_state, state_from_json, state_to_json, step
from .syntax import Program, category_at, parse_program


@dataclass(frozen=True)
class TraceEntry:
    index: int
    pre_loc: int
    instr_category: str
    label: str
    post_state: State


class History:
    """The recorded trace of one program run, with a movable cursor."""

    def __init__(self, program: Program, static: Analysis | None = None, recursion_limit: int = 10000):
        self.program = program
        self.static = static if static is not None else analyze(program)
        self.recursion_limit = recursion_limit
        first = initial_state(program)
        self.entries: list[TraceEntry] = [TraceEntry(0, first.top.loc, category_at(program, first.top.loc), "init", first)]
        self.cursor = 0

    @property
    def current(self) -> TraceEntry:
        return self.entries[self.cursor]

    @property
    def current_state(self) -> State:
        return self.current.post_state

    def advance(self) -> TraceEntry:
        """Move forward: replay a recorded entry, or compute one new step."""
        if self.cursor < len(self.entries) - 1:
            self.cursor += 1
            return self.current
        state = self.current_state
        if state.status != RUNNING:
            return self.current
        pre_loc = state.top.loc
        new_state, label = step(state, self.program, self.static.control, self.static.scopes, self.recursion_limit)
        assert label is not None
        self.entries.append(TraceEntry(len(self.entries), pre_loc, category_at(self.program, pre_loc), label, new_state))
        self.cursor += 1
        return self.current

    def step_back(self) -> TraceEntry:
        self.cursor = max(0, self.cursor - 1)
        return self.current

    def reset(self) -> TraceEntry:
        self.cursor = 0
        return self.current

    def run_to_end(self, max_steps: int = 10000) -> bool:
        """Advance until terminal or max_steps new transitions; True if terminal."""
        steps = 0
        while self.current_state.status == RUNNING and steps < max_steps:
            self.advance()
            steps += 1
        return self.current_state.status != RUNNING


def serialize_trace(history: History) -> dict:
    return {
        "program": list(history.program.source_lines),
        "entries": [
            {"index": e.index, "preLoc": e.pre_loc, "label": e.label, "state": state_to_json(e.post_state)}
            for e in history.entries
        ],
    }


def trace_to_text(history: History) -> str:
    lines = []
    for e in history.entries:
        stack = ",".join(f"({c.loc},{c.env})" for c in e.post_state.stack)
        lines.append(f"{e.index}: loc={e.pre_loc} label={e.label} stack=[{stack}]")
    return "\n".join(lines)


def trace_entries_from_json(doc: dict) -> list[TraceEntry]:
    """Rebuild trace entries from a serialized trace document."""
    program = parse_program("\n".join(doc["program"]))
    entries = []
    for item in doc["entries"]:
        entries.append(
            TraceEntry(
                index=item["index"],
                pre_loc=item["preLoc"],
                instr_category=category_at(program, item["preLoc"]),
                label=item["label"],
                post_state=state_from_json(item["state"]),
            )
        )
    return entries


def canonical_state_json(state: State) -> str:
    """Deterministic byte form of a state, for replay comparison."""
    return json.dumps(state_to_json(state), sort_keys=True, separators=(",", ":"))
