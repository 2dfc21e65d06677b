from __future__ import annotations

import json

from simplipy.machine import IntV
from simplipy.syntax import parse_program
from simplipy.trace import (
    History,
    canonical_state_json,
    serialize_trace,
    trace_entries_from_json,
    trace_to_text,
)

from programs import P1, P2, P3


def _history(source):
    return History(parse_program(source))


# ---------------------------------------------------------------------------
# advance


def test_advance_computes_first_step():
    h = _history(P1)
    h.advance()
    assert h.cursor == 1
    assert h.current_state.envs[0] == {"x": IntV(1)}


def test_advance_at_terminal_is_identity():
    h = _history(P1)
    h.run_to_end()
    cursor = h.cursor
    entries = list(h.entries)
    h.advance()
    assert h.cursor == cursor
    assert h.entries == entries


def test_advance_replays_without_recompute():
    h = _history(P1)
    for _ in range(3):
        h.advance()
    recorded = list(h.entries)
    h.reset()
    assert h.cursor == 0
    h.advance()
    assert h.cursor == 1
    assert h.entries == recorded
    assert h.current is recorded[1]


# ---------------------------------------------------------------------------
# step_back


def test_step_back_decrements():
    h = _history(P1)
    h.advance()
    h.advance()
    h.step_back()
    assert h.cursor == 1


def test_step_back_floors_at_zero():
    h = _history(P1)
    h.step_back()
    assert h.cursor == 0


def test_step_back_after_advance_is_identity():
    h = _history(P2)
    seen = []
    while h.current_state.status == "running":
        state_before = h.current_state
        cursor_before = h.cursor
        h.advance()
        h.step_back()
        assert h.cursor == cursor_before
        assert h.current_state == state_before
        h.advance()
        seen.append(h.cursor)
    assert seen  # the loop actually ran


def test_step_back_keeps_recorded_entries():
    h = _history(P1)
    h.run_to_end()
    total = len(h.entries)
    for _ in range(10):
        h.step_back()
    assert len(h.entries) == total
    assert h.cursor == 0


# ---------------------------------------------------------------------------
# serialization


def test_serialize_p1_full_run():
    h = _history(P1)
    h.run_to_end()
    doc = serialize_trace(h)
    assert len(doc["entries"]) == 4
    assert doc["entries"][0]["label"] == "init"
    assert doc["entries"][3]["state"]["status"]["kind"] == "finished"
    assert doc["program"] == P1.splitlines()


def test_serialize_empty_program():
    h = _history("")
    doc = serialize_trace(h)
    assert len(doc["entries"]) == 1
    assert doc["entries"][0]["label"] == "init"


def test_serialize_round_trip():
    h = _history(P3)
    h.run_to_end()
    doc = json.loads(json.dumps(serialize_trace(h), sort_keys=True))
    entries = trace_entries_from_json(doc)
    assert entries == h.entries


def test_trace_text_format():
    h = _history(P1)
    h.run_to_end()
    lines = trace_to_text(h).splitlines()
    assert lines[0] == "0: loc=1 label=init stack=[(1,0)]"
    assert lines[1] == "1: loc=1 label=next stack=[(2,0)]"
    assert len(lines) == 4


# ---------------------------------------------------------------------------
# replay determinism


def test_replay_reproduces_snapshots_byte_identically():
    for source in (P1, P2, P3):
        h1 = _history(source)
        h1.run_to_end()
        h2 = _history(source)
        h2.run_to_end()
        assert [e.label for e in h1.entries] == [e.label for e in h2.entries]
        for a, b in zip(h1.entries, h2.entries):
            assert canonical_state_json(a.post_state) == canonical_state_json(b.post_state)


def test_zipper_interleaving_never_escapes_bounds():
    h = _history(P2)
    import random

    rng = random.Random(7)
    for _ in range(200):
        if rng.random() < 0.5:
            h.advance()
        else:
            h.step_back()
        assert 0 <= h.cursor < len(h.entries)
