"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
report lines alongside pytest's own verdicts.
"""

from __future__ import annotations

import json
import time

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from simplipy.analysis import analyze, control_maps
from simplipy.cli import main as cli_main
from simplipy.machine import ErrorKind, initial_state, run_to_fixed_point, step
from simplipy.service import create_app
from simplipy.simplifier import simplify
from simplipy.syntax import parse_program
from simplipy.trace import History, canonical_state_json, serialize_trace

import test_properties
from oracle import assert_bindings_match, host_error_line, host_final_bindings, machine_global_bindings
from programs import ERROR_PROGRAMS, HAND_CONTROL_TABLES, ORACLE_CORPUS, P1, P2, P3, P4


def _report(name: str, failed: list[str] | None = None) -> None:
    if failed:
        print(f"ACCEPTANCE FAIL: {name} ({len(failed)} case(s)): {failed[:3]}")
        pytest.fail(f"{name}: {failed}")
    print(f"ACCEPTANCE PASS: {name}")


# ---------------------------------------------------------------------------


def test_criterion_oracle_equivalence():
    """>= 40 subset programs finish and match the host interpreter's final
    module bindings exactly (floats to 1e-12 relative), in under 5 seconds."""
    assert len(ORACLE_CORPUS) >= 40
    failures = []
    started = time.monotonic()
    for idx, source in enumerate(ORACLE_CORPUS):
        try:
            p = parse_program(source)
            a = analyze(p)
            states = run_to_fixed_point(initial_state(p), p, a.control, a.scopes)
            final = states[-1]
            assert final.status == "finished", f"status {final.status}"
            assert_bindings_match(machine_global_bindings(final), host_final_bindings(source))
        except AssertionError as e:
            failures.append(f"program {idx}: {e}")
    elapsed = time.monotonic() - started
    assert elapsed < 5.0, f"oracle suite took {elapsed:.2f}s"
    _report(f"oracle equivalence ({len(ORACLE_CORPUS)} programs, {elapsed:.2f}s)", failures)


def test_criterion_hand_derived_control_tables():
    """control_maps equals tables derived by hand for P2/P3/P4 and 13 more."""
    assert len(HAND_CONTROL_TABLES) >= 13
    names = [t[0] for t in HAND_CONTROL_TABLES]
    assert {"P2", "P3", "P4"} <= set(names)
    failures = []
    for name, source, expected in HAND_CONTROL_TABLES:
        p = parse_program(source)
        cm = control_maps(p)
        got = {"next": cm.next, "true": cm.true_, "false": cm.false_}
        if got != expected:
            failures.append(f"{name}: {got} != {expected}")
        if cm.err != {i: i for i in range(1, p.n + 1)}:
            failures.append(f"{name}: err is not the identity")
    _report(f"hand-derived control tables ({len(HAND_CONTROL_TABLES)} listings)", failures)


def test_criterion_error_semantics():
    """Each error kind ends Errored at the expected line; terminal states are
    fixed points; name errors agree with the host interpreter's line."""
    failures = []
    cases = list(ERROR_PROGRAMS)
    for name, source, kind, line in cases:
        p = parse_program(source)
        a = analyze(p)
        states = run_to_fixed_point(initial_state(p), p, a.control, a.scopes)
        final = states[-1]
        if final.status != "errored" or final.error.kind.value != kind or final.error.loc != line:
            failures.append(f"{name}: got {final.status}/{final.error}")
            continue
        again, label = step(final, p, a.control, a.scopes)
        if again != final or label is not None:
            failures.append(f"{name}: errored state is not a fixed point")

    # recursion limit (dedicated kind, configurable depth)
    src = "def f(a):\n    r = f(a)\n    return r\nq = f(0)"
    p = parse_program(src)
    a = analyze(p)
    s = initial_state(p)
    while s.status == "running":
        s, _ = step(s, p, a.control, a.scopes, recursion_limit=64)
    if s.error.kind != ErrorKind.RECURSION_LIMIT or s.error.loc != 2:
        failures.append(f"recursion limit: got {s.error}")

    # host-interpreter agreement on name errors: same kind family, same line
    for name, source, kind, line in cases:
        if kind not in ("NameNotFound", "UnboundLocal"):
            continue
        host = host_error_line(source)
        if host is None:
            failures.append(f"{name}: host interpreter did not raise")
            continue
        exc_type, host_line = host
        expected_exc = UnboundLocalError if kind == "UnboundLocal" else NameError
        if not issubclass(exc_type, expected_exc) or host_line != line:
            failures.append(f"{name}: host raised {exc_type.__name__} at {host_line}")
    kinds = {kind for _, _, kind, _ in cases} | {"RecursionLimit"}
    _report(f"error semantics ({sorted(kinds)})", failures)


def test_criterion_structural_invariants():
    """Randomized-program property suite: err identity, hierarchy order and
    acyclicity, push/pop discipline, frame initialization, env-id contiguity,
    CFG conformance of non-call/return transitions."""
    test_properties.test_err_identity_and_label_validity()
    test_properties.test_hierarchy_well_founded_after_every_step()
    test_properties.test_continuation_push_pop_discipline()
    test_properties.test_frame_initialization_on_call()
    test_properties.test_env_ids_contiguous_and_fresh_only_on_calls()
    test_properties.test_cfg_conformance_of_sequential_transitions()
    _report("structural invariant suite (randomized programs)")


def test_criterion_time_travel():
    """step_back after advance is the identity at every cursor, and a replay
    reproduces every snapshot byte-identically under canonical serialization."""
    failures = []
    sources = [P1, P2, P3, P4, "while True:\n    pass", "x = 1 // 0"]
    for source in sources:
        h = History(parse_program(source))
        h.run_to_end(max_steps=60)
        recorded = [canonical_state_json(e.post_state) for e in h.entries]
        h.reset()
        for cursor in range(len(h.entries)):
            h.cursor = cursor
            if cursor == len(h.entries) - 1 and h.current_state.status != "running":
                continue  # terminal fixed point: advance is a no-op by contract
            before = canonical_state_json(h.current_state)
            h.advance()
            h.step_back()
            after = canonical_state_json(h.current_state)
            if h.cursor != cursor or before != after:
                failures.append(f"{source!r} cursor {cursor}")
        replay = History(parse_program(source))
        replay.run_to_end(max_steps=60)
        replayed = [canonical_state_json(e.post_state) for e in replay.entries]
        if replayed != recorded:
            failures.append(f"{source!r}: replay differs")
    _report("time travel (zipper identity + byte-identical replay)", failures)


def test_criterion_simplifier():
    """The rewrite corpus is idempotent and semantics-preserving; unsupported
    constructs yield diagnostics naming the construct and original line."""
    failures = []
    corpus = [
        "def f(n):\n    return n\ndef g(n):\n    return n * 10\nx = f(1) + g(2)",
        "x = 0\nx += 5\nx -= 2\nx *= 3",
        "x = 2\nif x == 1:\n    y = 1\nelif x == 2:\n    y = 2\nelse:\n    y = 3",
        "def f():\n    return\nr = f()",
        "def side(x):\n    global log\n    log = log + 1\n    return x\nlog = 0\nside(1)\nside(2)",
        "i = 0\ndef low(n):\n    return n < 4\nwhile low(i):\n    i += 1",
    ]
    for idx, source in enumerate(corpus):
        result = simplify(source)
        if result.output is None:
            failures.append(f"corpus {idx}: {[d.message for d in result.diagnostics]}")
            continue
        twice = simplify(result.output)
        if twice.output != result.output:
            failures.append(f"corpus {idx}: not idempotent")
            continue
        if not all(ln in result.line_map for ln in range(1, len(result.output.splitlines()) + 1)):
            failures.append(f"corpus {idx}: line map incomplete")
            continue
        p = parse_program(result.output)
        a = analyze(p)
        states = run_to_fixed_point(initial_state(p), p, a.control, a.scopes)
        if states[-1].status != "finished":
            failures.append(f"corpus {idx}: simplified program did not finish")
            continue
        machine = {k: v for k, v in machine_global_bindings(states[-1]).items() if not k.startswith("_t")}
        try:
            assert_bindings_match(machine, host_final_bindings(source))
        except AssertionError as e:
            failures.append(f"corpus {idx}: {e}")

    unsupported = [
        ("for i in range(3):\n    pass", "for loop", 1),
        ("x = [1]", "list literal", 1),
        ("pass\nimport os", "import", 2),
        ("x = lambda: 1", "lambda", 1),
        ("a = b = 1", "chained assignment", 1),
        ("x = d['k']", "subscripting", 1),
    ]
    for source, construct, line in unsupported:
        result = simplify(source)
        if result.output is not None:
            failures.append(f"{construct}: accepted")
        elif not any(construct in d.message and d.line == line for d in result.diagnostics):
            failures.append(f"{construct}: diagnostics {[d.message for d in result.diagnostics]}")
    _report("simplifier (idempotent, semantics-preserving, named diagnostics)", failures)


def test_criterion_interface_conformance(tmp_path):
    """CLI trace JSON equals the service's step-by-step JSON; terminal step
    requests are byte-idempotent; unknown sessions give 404."""
    failures = []
    client = TestClient(create_app())
    runner = CliRunner()
    for source in (P1, P2, P3, P4):
        path = tmp_path / "prog.spy"
        path.write_text(source, encoding="utf-8")
        cli_result = runner.invoke(cli_main, ["trace", str(path)])
        cli_doc = json.loads(cli_result.output)

        sid = client.post("/api/sessions", json={"source": source}).json()["sessionId"]
        service_states = [client.get(f"/api/sessions/{sid}").json()["state"]]
        while True:
            doc = client.post(f"/api/sessions/{sid}/step").json()
            if doc["cursor"] == len(service_states) - 1:
                break  # terminal: no new entry was recorded
            service_states.append(doc["state"])

        cli_states = [e["state"] for e in cli_doc["entries"]]
        if cli_states != service_states:
            failures.append(f"{source!r}: CLI and service disagree")

        # terminal idempotence, byte-for-byte
        one = client.post(f"/api/sessions/{sid}/step")
        two = client.post(f"/api/sessions/{sid}/step")
        if one.content != two.content:
            failures.append(f"{source!r}: terminal step not idempotent")

    if client.get("/api/sessions/does-not-exist").status_code != 404:
        failures.append("unknown session did not 404")
    _report("interface conformance (CLI == service, terminal idempotence, 404)", failures)
