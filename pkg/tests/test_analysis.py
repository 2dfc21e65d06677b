from __future__ import annotations

import pytest
from hypothesis import given, settings

from simplipy.analysis import (
    TOP_BLOCK,
    block_at,
    build_cfg,
    cfg_to_dot,
    cfg_to_json,
    control_maps,
    control_maps_to_json,
    lexical_blocks,
    scope_for,
    scopes_to_json,
    structural_abstraction,
    validate,
)
from simplipy.diagnostics import StaticError
from simplipy.syntax import parse_program

from genprog import subset_programs
from programs import HAND_CONTROL_TABLES, P1, P2, P3, P4


# ---------------------------------------------------------------------------
# lexical blocks


def test_blocks_for_call_program():
    scopes = lexical_blocks(parse_program(P3))
    top = scope_for(scopes, TOP_BLOCK)
    assert top.locals == {"f", "r"}
    assert top.parent is None
    f = scope_for(scopes, 1)
    assert f.params == ("a",)
    assert f.locals == {"a", "b"}
    assert f.extent == (2, 3)
    assert f.parent == TOP_BLOCK


def test_blocks_for_nonlocal_program():
    scopes = lexical_blocks(parse_program(P4))
    outer = scope_for(scopes, 1)
    assert outer.locals == {"x", "inner", "r"}
    inner = scope_for(scopes, 3)
    assert inner.nonlocals == {"x"}
    assert inner.locals == frozenset()
    assert inner.parent == 1


def test_blocks_trivial_program():
    scopes = lexical_blocks(parse_program("pass"))
    assert len(scopes) == 1
    top = scopes[0]
    assert top.locals == frozenset()
    assert top.nonlocals == frozenset()
    assert top.globals == frozenset()


def test_block_sets_are_disjoint():
    src = "g = 0\ndef f(a):\n    global g\n    g = a\n    b = 1\n    return b\nr = f(2)"
    scopes = lexical_blocks(parse_program(src))
    f = scope_for(scopes, 2)
    assert f.globals == {"g"}
    assert f.locals == {"a", "b"}
    assert not (f.locals & f.globals)


def test_nonlocal_at_top_level_rejected():
    with pytest.raises(StaticError) as exc:
        lexical_blocks(parse_program("nonlocal x"))
    assert exc.value.diagnostics[0].code == "static.nonlocal-top-level"


def test_nonlocal_without_binding_rejected():
    src = "def f():\n    nonlocal q\n    q = 1\n    return q\nr = f()"
    with pytest.raises(StaticError) as exc:
        lexical_blocks(parse_program(src))
    assert exc.value.diagnostics[0].code == "static.nonlocal-unbound"


def test_global_at_top_level_is_noop():
    scopes = lexical_blocks(parse_program("global x\nx = 1"))
    assert scopes[0].globals == frozenset()
    assert scopes[0].locals == {"x"}


def test_block_at_resolution():
    scopes = lexical_blocks(parse_program(P4))
    assert block_at(scopes, 1) == TOP_BLOCK
    assert block_at(scopes, 2) == 1
    assert block_at(scopes, 3) == 1  # the inner def header runs in outer's block
    assert block_at(scopes, 5) == 3
    assert block_at(scopes, 10) == TOP_BLOCK


# ---------------------------------------------------------------------------
# control maps


@pytest.mark.parametrize("name,source,expected", HAND_CONTROL_TABLES, ids=[t[0] for t in HAND_CONTROL_TABLES])
def test_control_maps_match_hand_tables(name, source, expected):
    p = parse_program(source)
    cm = control_maps(p)
    assert cm.next == expected["next"]
    assert cm.true_ == expected["true"]
    assert cm.false_ == expected["false"]
    assert cm.err == {i: i for i in range(1, p.n + 1)}


def test_control_maps_single_pass():
    cm = control_maps(parse_program("pass"))
    assert cm.next == {1: 2}
    assert cm.err == {1: 1}


def test_break_outside_loop_rejected():
    with pytest.raises(StaticError) as exc:
        control_maps(parse_program("break"))
    d = exc.value.diagnostics[0]
    assert d.line == 1
    assert "break outside loop" in d.message


def test_continue_outside_loop_rejected():
    with pytest.raises(StaticError):
        control_maps(parse_program("continue"))


def test_return_outside_function_rejected():
    with pytest.raises(StaticError) as exc:
        control_maps(parse_program("return 1"))
    assert "return outside function" in exc.value.diagnostics[0].message


def test_break_inside_def_does_not_bind_outer_loop():
    src = "while True:\n    def f():\n        break\n    pass"
    with pytest.raises(StaticError) as exc:
        control_maps(parse_program(src))
    assert exc.value.diagnostics[0].line == 3


# ---------------------------------------------------------------------------
# structural abstraction


def test_abstraction_p1():
    table = structural_abstraction(parse_program(P1))
    assert table == {1: "ExpAssign", 2: "ExpAssign", 3: "Pass", 4: "End"}


def test_abstraction_p2():
    table = structural_abstraction(parse_program(P2))
    assert table == {1: "ExpAssign", 2: "While", 3: "ExpAssign", 4: "If", 5: "Break", 6: "Pass", 7: "Pass", 8: "End"}


def test_abstraction_p3():
    table = structural_abstraction(parse_program(P3))
    assert table == {1: "Def", 2: "ExpAssign", 3: "Return", 4: "CallAssign", 5: "Pass", 6: "End"}


# ---------------------------------------------------------------------------
# cfg


def test_cfg_p2():
    p = parse_program(P2)
    cfg = build_cfg(p, control_maps(p))
    assert len(cfg.nodes) == 8
    edges = set(cfg.edges)
    assert (2, 3, "true") in edges
    assert (2, 7, "false") in edges
    assert (5, 7, "next") in edges
    assert (6, 2, "next") in edges


def test_cfg_single_pass():
    p = parse_program("pass")
    cfg = build_cfg(p, control_maps(p))
    assert [loc for loc, _ in cfg.nodes] == [1, 2]
    assert cfg.edges == ((1, 2, "next"),)


def test_cfg_p3_return_has_no_out_edge_and_entry_no_in_edge():
    p = parse_program(P3)
    cfg = build_cfg(p, control_maps(p))
    assert not [e for e in cfg.edges if e[0] == 3]
    assert not [e for e in cfg.edges if e[1] == 2]


def test_cfg_if_while_out_degrees():
    p = parse_program(P2)
    cfg = build_cfg(p, control_maps(p))
    for loc, cat in cfg.nodes:
        out = [e for e in cfg.edges if e[0] == loc]
        if cat in ("If", "While"):
            assert sorted(e[2] for e in out) == ["false", "true"]


def test_cfg_dot_output():
    p = parse_program(P2)
    dot = cfg_to_dot(build_cfg(p, control_maps(p)))
    assert dot.startswith("digraph")
    assert '2 -> 7 [label="false"]' in dot
    assert '2 [label="2: While"]' in dot


def test_cfg_json_shape():
    p = parse_program("pass")
    doc = cfg_to_json(build_cfg(p, control_maps(p)))
    assert doc == {
        "nodes": [{"loc": 1, "category": "Pass"}, {"loc": 2, "category": "End"}],
        "edges": [{"from": 1, "to": 2, "label": "next"}],
    }


def test_scopes_json_sorted_sets():
    doc = scopes_to_json(lexical_blocks(parse_program(P3)))
    assert doc[0]["locals"] == ["f", "r"]
    assert doc[1] == {
        "block": 1,
        "extent": [2, 3],
        "parent": 0,
        "params": ["a"],
        "locals": ["a", "b"],
        "nonlocals": [],
        "globals": [],
    }


def test_control_maps_json_omits_err():
    doc = control_maps_to_json(control_maps(parse_program("pass")))
    assert doc == {"next": {"1": 2}, "true": {}, "false": {}}


# ---------------------------------------------------------------------------
# validate


def test_validate_break_outside_loop():
    diags = validate(parse_program("break"))
    assert [d.line for d in diags] == [1]
    assert "break outside loop" in diags[0].message


def test_validate_return_outside_function():
    diags = validate(parse_program("return 1"))
    assert "return outside function" in diags[0].message


def test_validate_clean_program():
    assert validate(parse_program(P1)) == []


def test_validate_duplicate_params():
    diags = validate(parse_program("def f(a, a):\n    return a\nr = f(1, 2)"))
    assert any(d.code == "static.dup-param" for d in diags)


def test_validate_global_after_assignment():
    src = "def f():\n    x = 1\n    global x\n    return x\nr = f()"
    diags = validate(parse_program(src))
    assert any(d.code == "static.decl-after-assign" and d.line == 3 for d in diags)


def test_validate_nonlocal_param_conflict():
    src = "def f(a):\n    def g():\n        nonlocal a\n        a = 2\n        return a\n    r = g()\n    return r\nq = f(1)"
    diags = validate(parse_program(src))
    assert diags == []  # nonlocal of an enclosing param is fine
    src_bad = "def f(a):\n    nonlocal a\n    return a\nr = f(1)"
    diags_bad = validate(parse_program(src_bad))
    assert any(d.code in ("static.decl-param", "static.nonlocal-unbound") for d in diags_bad)


def test_validate_global_and_nonlocal_same_name():
    src = "def f():\n    x = 0\n    def g():\n        global y\n        nonlocal y\n        y = 1\n        return y\n    r = g()\n    return r\nq = f()"
    diags = validate(parse_program(src))
    assert any(d.code == "static.global-and-nonlocal" for d in diags)


def test_validate_aggregates_multiple():
    diags = validate(parse_program("break\nreturn 1"))
    assert len(diags) == 2


# ---------------------------------------------------------------------------
# properties over random programs


@settings(max_examples=50, deadline=None)
@given(subset_programs())
def test_generated_programs_validate_cleanly(source):
    p = parse_program(source)
    assert validate(p) == []


@settings(max_examples=50, deadline=None)
@given(subset_programs())
def test_err_is_identity_everywhere(source):
    p = parse_program(source)
    cm = control_maps(p)
    assert cm.err == {i: i for i in range(1, p.n + 1)}


@settings(max_examples=50, deadline=None)
@given(subset_programs())
def test_branch_maps_defined_exactly_on_branch_instructions(source):
    p = parse_program(source)
    cm = control_maps(p)
    branch_locs = {loc for loc, cat in structural_abstraction(p).items() if cat in ("If", "While")}
    assert set(cm.true_) == branch_locs
    assert set(cm.false_) == branch_locs
    for loc in branch_locs:
        assert 1 <= cm.true_[loc] <= p.n + 1
        assert 1 <= cm.false_[loc] <= p.n + 1
    no_next = {loc for loc, cat in structural_abstraction(p).items() if cat in ("If", "While", "Else", "Return", "End")}
    assert set(cm.next) == set(range(1, p.n + 1)) - no_next


@settings(max_examples=50, deadline=None)
@given(subset_programs())
def test_cfg_reachability_from_roots(source):
    p = parse_program(source)
    cm = control_maps(p)
    cfg = build_cfg(p, cm)
    scopes = lexical_blocks(p)
    roots = {1} | {s.extent[0] for s in scopes if s.block != TOP_BLOCK}
    succ: dict[int, list[int]] = {}
    for f, t, _ in cfg.edges:
        succ.setdefault(f, []).append(t)
    seen = set()
    frontier = [r for r in roots]
    while frontier:
        node = frontier.pop()
        if node in seen:
            continue
        seen.add(node)
        frontier.extend(succ.get(node, []))
    categories = dict(cfg.nodes)
    for loc, cat in cfg.nodes:
        if cat != "Else":
            assert loc in seen, f"node {loc} ({cat}) unreachable"
