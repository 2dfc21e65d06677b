from __future__ import annotations

import pytest

from simplipy.analysis import analyze
from simplipy.machine import initial_state, run_to_fixed_point
from simplipy.simplifier import simplify
from simplipy.syntax import parse_program

from oracle import assert_bindings_match, host_final_bindings, machine_global_bindings


def _run_machine(source):
    p = parse_program(source)
    a = analyze(p)
    states = run_to_fixed_point(initial_state(p), p, a.control, a.scopes)
    assert states[-1].status == "finished", states[-1]
    return states[-1]


def _assert_preserved(original, drop_temps=True):
    """Host bindings of the original == machine bindings of the simplified output."""
    result = simplify(original)
    assert result.output is not None, [d.message for d in result.diagnostics]
    final = _run_machine(result.output)
    machine = machine_global_bindings(final)
    if drop_temps:
        machine = {k: v for k, v in machine.items() if not k.startswith("_t")}
    assert_bindings_match(machine, host_final_bindings(original))
    return result


# ---------------------------------------------------------------------------
# rewrite rules


def test_hoists_calls_left_to_right():
    r = simplify("x = f(1) + g(2)")
    assert r.output == "_t0 = f(1)\n_t1 = g(2)\nx = _t0 + _t1"
    assert "hoist_calls" in r.applied


def test_expands_augmented_assignment():
    r = simplify("x += 1")
    assert r.output == "x = x + 1"
    assert r.applied == ["expand_augmented_assignment"]


def test_lambda_produces_named_diagnostic():
    r = simplify("y = lambda x: x")
    assert r.output is None
    [d] = r.diagnostics
    assert "lambda unsupported; bind a named def instead" in d.message
    assert d.line == 1


def test_strips_blank_lines_and_comments_and_renumbers():
    src = "# header\nx = 1\n\n# middle\ny = x + 1  # trailing\n"
    r = simplify(src)
    assert r.output == "x = 1\ny = x + 1"
    assert r.line_map == {1: 2, 2: 5}
    assert "strip_blank_and_comment_lines" in r.applied


def test_desugars_elif_chain():
    src = "x = 2\nif x == 1:\n    y = 1\nelif x == 2:\n    y = 2\nelse:\n    y = 3\n"
    r = simplify(src)
    assert r.output == "x = 2\nif x == 1:\n    y = 1\nelse:\n    if x == 2:\n        y = 2\n    else:\n        y = 3"
    assert "desugar_elif" in r.applied
    parse_program(r.output)


def test_names_bare_calls():
    r = simplify("def f(x):\n    return x\nf(1)\n")
    assert r.output is not None
    assert "_t0 = f(1)" in r.output.splitlines()
    assert "name_bare_call" in r.applied


def test_rewrites_bare_return():
    r = simplify("def f():\n    return\nx = f()\n")
    assert r.output is not None
    assert "    return None" in r.output.splitlines()
    assert "explicit_return_none" in r.applied


def test_nested_calls_hoist_innermost_first():
    r = simplify("x = f(g(1), 2)")
    assert r.output == "_t0 = g(1)\nx = f(_t0, 2)"


def test_call_in_if_condition_hoisted_before_header():
    r = simplify("if check(1):\n    x = 1\nelse:\n    x = 2\n")
    assert r.output == "_t0 = check(1)\nif _t0:\n    x = 1\nelse:\n    x = 2"


def test_call_in_while_condition_reevaluated_each_iteration():
    src = "i = 0\ndef low(n):\n    return n < 3\nwhile low(i):\n    i += 1\n"
    r = simplify(src)
    assert r.output is not None
    assert "while True:" in r.output
    _assert_preserved(src)


def test_line_map_covers_every_output_line():
    src = "x = f(1) + g(2)"
    r = simplify(src)
    assert set(r.line_map) == {1, 2, 3}
    assert set(r.line_map.values()) == {1}


# ---------------------------------------------------------------------------
# unsupported constructs name themselves and the original line


@pytest.mark.parametrize(
    "src,needle,line",
    [
        ("for i in range(3):\n    pass", "for loop", 1),
        ("x = [1, 2]", "list literal", 1),
        ("x = (1, 2)", "tuple", 1),
        ("x = {1: 2}", "dict literal", 1),
        ("class C:\n    pass", "class definition", 1),
        ("import os", "import", 1),
        ("try:\n    pass\nexcept Exception:\n    pass", "exception handling", 1),
        ("x = [i for i in range(3)]", "comprehension", 1),
        ("a = b = 1", "chained assignment", 1),
        ("a, b = 1, 2", "multiple assignment", 1),
        ("x = y.z", "attribute access", 1),
        ("x = y[0]", "subscripting", 1),
        ("pass\nx = f'{1}'", "f-string", 2),
        ("while True:\n    pass\nelse:\n    pass", "'else' clause on 'while'", 4),
        ("x = 1 if True else 2", "conditional expression", 1),
        ("x = 2 ** 3", "operator '**'", 1),
        ("x = 1 < 2 < 3", "chained comparison", 1),
        ("x = 1 is None", "'is' unsupported", 1),
        ("assert True", "assert", 1),
    ],
)
def test_unsupported_constructs(src, needle, line):
    r = simplify(src)
    assert r.output is None
    assert any(needle in d.message and d.line == line for d in r.diagnostics), [d.message for d in r.diagnostics]


def test_invalid_python_reports_syntax_diagnostic():
    r = simplify("def f(:\n    pass")
    assert r.output is None
    assert r.diagnostics[0].code == "simplify.syntax"


# ---------------------------------------------------------------------------
# idempotence, freshness, preservation


IDEMPOTENCE_CORPUS = [
    "x = f(1) + g(2)",
    "x += 1",
    "x = 2\nif x == 1:\n    y = 1\nelif x == 2:\n    y = 2\nelse:\n    y = 3\n",
    "def f():\n    return\nx = f()\n",
    "i = 0\ndef low(n):\n    return n < 3\nwhile low(i):\n    i += 1\n",
    "# comment\n\npass\n",
    "def f(x):\n    '''doc'''\n    return x\ny = f(1)\n",
]


@pytest.mark.parametrize("src", IDEMPOTENCE_CORPUS)
def test_idempotence(src):
    once = simplify(src)
    assert once.output is not None
    twice = simplify(once.output)
    assert twice.output == once.output


def test_fresh_temporaries_avoid_source_identifiers():
    src = "_t0 = 1\n_t1 = 2\nx = f(_t0) + g(_t1)"
    r = simplify(src)
    assert r.output is not None
    lines = r.output.splitlines()
    assert lines[2].startswith("_t2 = f(") and lines[3].startswith("_t3 = g(")


PRESERVATION_CORPUS = [
    "x = 1\ny = x + 1",
    "def f(n):\n    return n * 2\ndef g(n):\n    return n + 1\nx = f(1) + g(2)",
    "x = 1\nx += 4\nx *= 2",
    "x = 3\nif x == 1:\n    y = 1\nelif x == 2:\n    y = 2\nelif x == 3:\n    y = 33\nelse:\n    y = 4",
    "def f(x):\n    return x + 1\nr = f(f(f(0)))",
    "i = 0\ndef low(n):\n    return n < 5\nwhile low(i):\n    i += 2",
    "total = 0\nn = 5\nwhile n:  # truthiness replaced below\n    total += n\n    n -= 1" .replace("while n:", "while n > 0:"),
    "def note(x):\n    global log\n    log = log + x\n    return x\nlog = ''\na = note('a') + note('b')",
]


@pytest.mark.parametrize("src", PRESERVATION_CORPUS)
def test_semantic_preservation(src):
    _assert_preserved(src)


def test_hoisting_preserves_evaluation_order_of_side_effects():
    src = (
        "order = ''\n"
        "def f(x):\n"
        "    global order\n"
        "    order = order + 'f'\n"
        "    return 1\n"
        "def g(x):\n"
        "    global order\n"
        "    order = order + 'g'\n"
        "    return 2\n"
        "x = f(1) + g(2)\n"
    )
    result = _assert_preserved(src)
    final = _run_machine(result.output)
    from simplipy.machine import StrV

    assert final.envs[0]["order"] == StrV("fg")


def test_short_circuit_call_positions_are_rejected_not_broken():
    r = simplify("def f():\n    return True\nx = True and f()")
    assert r.output is None
    assert any("right operand of and/or" in d.message for d in r.diagnostics)
