"""Static analysis: lexical blocks, control transfer maps, CFG, structural abstraction.

Scopes are function-only: the top-level block (id 0) and one block per `def`,
keyed by the def header's location.  If/while bodies never open a scope.
The four control transfer maps are next/true/false/err; err is the identity
on every instruction location and marks the fixed point taken on errors.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagnostics import Diagnostic, StaticError, error
from . import syntax
from .syntax import (
    Break,
    CallAssign,
    Continue,
    Def,
    DefS,
    ExpAssign,
    Global,
    IfS,
    Location,
    Nonlocal,
    Program,
    Return,
    SimpleS,
    Stmt,
    WhileS,
)

TOP_BLOCK = 0

CATEGORIES = ("Pass", "Global", "Nonlocal", "Break", "Continue", "ExpAssign", "CallAssign", "If", "Else", "While", "Def", "Return", "End")


@dataclass(frozen=True)
class ScopeInfo:
    block: int
    extent: tuple[Location, Location]
    parent: int | None
    params: tuple[str, ...]
    locals: frozenset[str]
    nonlocals: frozenset[str]
    globals: frozenset[str]


@dataclass(frozen=True)
class ControlMaps:
    next: dict[Location, Location]
    true_: dict[Location, Location]
    false_: dict[Location, Location]
    err: dict[Location, Location]


@dataclass(frozen=True)
class Cfg:
    nodes: tuple[tuple[Location, str], ...]
    edges: tuple[tuple[Location, Location, str], ...]


@dataclass(frozen=True)
class Analysis:
    """Bundle of every static artifact for a validated program."""

    program: Program
    scopes: list[ScopeInfo]
    control: ControlMaps
    cfg: Cfg
    abstraction: dict[Location, str]


# ---------------------------------------------------------------------------
# Lexical blocks


def _collect_blocks(program: Program) -> dict[int, dict]:
    """Raw block table: extent, parent, params, keyed by block id."""
    blocks: dict[int, dict] = {TOP_BLOCK: {"extent": (1, program.n), "parent": None, "params": ()}}

    def last_loc(stmts: tuple[Stmt, ...]) -> Location:
        last = stmts[-1]
        if isinstance(last, SimpleS):
            return last.loc
        if isinstance(last, IfS):
            return last_loc(last.orelse) if last.orelse else last_loc(last.then)
        if isinstance(last, (WhileS, DefS)):
            return last_loc(last.body)
        raise TypeError(last)

    def walk(stmts: tuple[Stmt, ...], parent: int) -> None:
        for st in stmts:
            if isinstance(st, DefS):
                instr = program.instrs[st.loc]
                assert isinstance(instr, Def)
                blocks[st.loc] = {
                    "extent": (st.body[0].loc, last_loc(st.body)),
                    "parent": parent,
                    "params": instr.params,
                }
                walk(st.body, st.loc)
            elif isinstance(st, IfS):
                walk(st.then, parent)
                walk(st.orelse, parent)
            elif isinstance(st, WhileS):
                walk(st.body, parent)

    walk(syntax.statement_tree(program), TOP_BLOCK)
    return blocks


def _scan_scopes(program: Program) -> tuple[list[ScopeInfo], list[Diagnostic]]:
    diags: list[Diagnostic] = []
    blocks = _collect_blocks(program)
    owner = {loc: _owning_block(blocks, loc) for loc in range(1, program.n + 1)}

    assigned: dict[int, set[str]] = {b: set() for b in blocks}
    nonlocals: dict[int, set[str]] = {b: set() for b in blocks}
    globals_: dict[int, set[str]] = {b: set() for b in blocks}

    for loc in range(1, program.n + 1):
        instr = program.instrs[loc]
        b = owner[loc]
        if isinstance(instr, (ExpAssign, CallAssign)):
            assigned[b].add(instr.target)
        elif isinstance(instr, Def):
            assigned[b].add(instr.name)
        elif isinstance(instr, Global):
            if b != TOP_BLOCK:
                globals_[b].update(instr.names)
        elif isinstance(instr, Nonlocal):
            if b == TOP_BLOCK:
                diags.append(error(loc, 1, "static.nonlocal-top-level", "nonlocal declaration at top level"))
            else:
                nonlocals[b].update(instr.names)

    for b in blocks:
        both = nonlocals[b] & globals_[b]
        for name in sorted(both):
            diags.append(error(blocks[b]["extent"][0], 1, "static.global-and-nonlocal", f"name '{name}' is declared both global and nonlocal"))

    locals_: dict[int, frozenset[str]] = {}
    for b, info in blocks.items():
        locals_[b] = frozenset((assigned[b] | set(info["params"])) - nonlocals[b] - globals_[b])

    # every nonlocal must be a local of some enclosing function block
    for b, info in blocks.items():
        for name in sorted(nonlocals[b]):
            anc = info["parent"]
            found = False
            while anc is not None and anc != TOP_BLOCK:
                if name in locals_[anc]:
                    found = True
                    break
                anc = blocks[anc]["parent"]
            if not found:
                line = _decl_line(program, b, owner, name, Nonlocal)
                diags.append(error(line, 1, "static.nonlocal-unbound", f"no binding for nonlocal '{name}' in any enclosing function"))

    scopes = [
        ScopeInfo(
            block=b,
            extent=info["extent"],
            parent=info["parent"],
            params=tuple(info["params"]),
            locals=locals_[b],
            nonlocals=frozenset(nonlocals[b]),
            globals=frozenset(globals_[b]),
        )
        for b, info in sorted(blocks.items())
    ]
    return scopes, diags


def _owning_block(blocks: dict[int, dict], loc: Location) -> int:
    best = TOP_BLOCK
    best_lo = 0
    for b, info in blocks.items():
        lo, hi = info["extent"]
        if b != TOP_BLOCK and lo <= loc <= hi and lo > best_lo:
            best = b
            best_lo = lo
    return best


def _decl_line(program: Program, block: int, owner: dict[int, int], name: str, kind: type) -> int:
    for loc in range(1, program.n + 1):
        instr = program.instrs[loc]
        if owner[loc] == block and isinstance(instr, kind) and name in instr.names:
            return loc
    return 1


def lexical_blocks(program: Program) -> list[ScopeInfo]:
    scopes, diags = _scan_scopes(program)
    if diags:
        raise StaticError(diags)
    return scopes


def block_at(scopes: list[ScopeInfo], loc: Location) -> int:
    """Innermost block whose extent contains loc; the top block otherwise."""
    best = TOP_BLOCK
    best_lo = 0
    for s in scopes:
        lo, hi = s.extent
        if s.block != TOP_BLOCK and lo <= loc <= hi and lo > best_lo:
            best = s.block
            best_lo = lo
    return best


def scope_for(scopes: list[ScopeInfo], block: int) -> ScopeInfo:
    for s in scopes:
        if s.block == block:
            return s
    raise KeyError(f"no block {block}")


# ---------------------------------------------------------------------------
# Control transfer maps


def _wire(program: Program) -> tuple[ControlMaps, list[Diagnostic]]:
    diags: list[Diagnostic] = []
    nxt: dict[Location, Location] = {}
    true_: dict[Location, Location] = {}
    false_: dict[Location, Location] = {}
    end = program.end

    def first_loc(st: Stmt) -> Location:
        return st.loc

    def wire(stmts: tuple[Stmt, ...], follow: Location, loop: tuple[Location, Location] | None, in_def: bool) -> None:
        for idx, st in enumerate(stmts):
            after = first_loc(stmts[idx + 1]) if idx + 1 < len(stmts) else follow
            if isinstance(st, SimpleS):
                instr = program.instrs[st.loc]
                if isinstance(instr, Break):
                    if loop is None:
                        diags.append(error(st.loc, 1, "static.break", "break outside loop"))
                    else:
                        nxt[st.loc] = loop[1]
                elif isinstance(instr, Continue):
                    if loop is None:
                        diags.append(error(st.loc, 1, "static.continue", "continue outside loop"))
                    else:
                        nxt[st.loc] = loop[0]
                elif isinstance(instr, Return):
                    if not in_def:
                        diags.append(error(st.loc, 1, "static.return", "return outside function"))
                else:
                    nxt[st.loc] = after
            elif isinstance(st, IfS):
                true_[st.loc] = first_loc(st.then[0])
                false_[st.loc] = first_loc(st.orelse[0]) if st.orelse else after
                wire(st.then, after, loop, in_def)
                if st.orelse:
                    wire(st.orelse, after, loop, in_def)
            elif isinstance(st, WhileS):
                true_[st.loc] = first_loc(st.body[0])
                false_[st.loc] = after
                wire(st.body, st.loc, (st.loc, after), in_def)
            elif isinstance(st, DefS):
                nxt[st.loc] = after
                wire(st.body, end, None, True)

    wire(syntax.statement_tree(program), end, None, False)
    err = {loc: loc for loc in range(1, program.n + 1)}
    return ControlMaps(nxt, true_, false_, err), diags


def control_maps(program: Program) -> ControlMaps:
    cm, diags = _wire(program)
    if diags:
        raise StaticError(diags)
    return cm


# ---------------------------------------------------------------------------
# Structural abstraction and CFG


def structural_abstraction(program: Program) -> dict[Location, str]:
    table = {loc: syntax.category_at(program, loc) for loc in range(1, program.n + 1)}
    table[program.end] = "End"
    return table


def build_cfg(program: Program, cm: ControlMaps) -> Cfg:
    abstraction = structural_abstraction(program)
    nodes = tuple((loc, abstraction[loc]) for loc in range(1, program.end + 1))
    edges: list[tuple[Location, Location, str]] = []
    for src, dst in cm.next.items():
        edges.append((src, dst, "next"))
    for src, dst in cm.true_.items():
        edges.append((src, dst, "true"))
    for src, dst in cm.false_.items():
        edges.append((src, dst, "false"))
    edges.sort(key=lambda e: (e[0], e[2], e[1]))
    return Cfg(nodes, tuple(edges))


# ---------------------------------------------------------------------------
# Validation


def validate(program: Program) -> list[Diagnostic]:
    """All static diagnostics for the program; empty means runnable."""
    scopes, diags = _scan_scopes(program)
    _, wire_diags = _wire(program)
    diags = diags + wire_diags

    blocks = _collect_blocks(program)
    owner = {loc: _owning_block(blocks, loc) for loc in range(1, program.n + 1)}

    # duplicate parameters
    for loc in range(1, program.n + 1):
        instr = program.instrs[loc]
        if isinstance(instr, Def) and len(set(instr.params)) != len(instr.params):
            dupes = sorted({p for p in instr.params if instr.params.count(p) > 1})
            diags.append(error(loc, 1, "static.dup-param", f"duplicate parameter name(s): {', '.join(dupes)}"))

    # global/nonlocal declarations after an assignment of the same name
    first_assign: dict[tuple[int, str], int] = {}
    for b, info in blocks.items():
        for p in info["params"]:
            # parameters are bound when the function is entered, before any body line
            lo = info["extent"][0]
            first_assign.setdefault((b, p), lo - 1)
    for loc in range(1, program.n + 1):
        instr = program.instrs[loc]
        b = owner[loc]
        if isinstance(instr, (ExpAssign, CallAssign)):
            first_assign.setdefault((b, instr.target), loc)
        elif isinstance(instr, Def):
            first_assign.setdefault((b, instr.name), loc)
        elif isinstance(instr, (Global, Nonlocal)):
            word = "global" if isinstance(instr, Global) else "nonlocal"
            for name in instr.names:
                prior = first_assign.get((b, name))
                if prior is not None and prior < loc:
                    if name in blocks[b]["params"]:
                        diags.append(error(loc, 1, "static.decl-param", f"name '{name}' is a parameter and cannot be declared {word}"))
                    else:
                        diags.append(error(loc, 1, "static.decl-after-assign", f"name '{name}' is assigned before its {word} declaration"))

    diags.sort(key=lambda d: (d.line, d.column, d.code))
    return diags


def analyze(program: Program) -> Analysis:
    """Validate and compute every static artifact; raises StaticError when invalid."""
    diags = validate(program)
    if diags:
        raise StaticError(diags)
    scopes, _ = _scan_scopes(program)
    cm, _ = _wire(program)
    return Analysis(program, scopes, cm, build_cfg(program, cm), structural_abstraction(program))


# ---------------------------------------------------------------------------
# Exports


def scopes_to_json(scopes: list[ScopeInfo]) -> list[dict]:
    return [
        {
            "block": s.block,
            "extent": [s.extent[0], s.extent[1]],
            "parent": s.parent,
            "params": list(s.params),
            "locals": sorted(s.locals),
            "nonlocals": sorted(s.nonlocals),
            "globals": sorted(s.globals),
        }
        for s in scopes
    ]


def control_maps_to_json(cm: ControlMaps) -> dict:
    """The next/true/false tables; err is omitted as the identity."""
    return {
        "next": {str(k): v for k, v in sorted(cm.next.items())},
        "true": {str(k): v for k, v in sorted(cm.true_.items())},
        "false": {str(k): v for k, v in sorted(cm.false_.items())},
    }


def abstraction_to_json(table: dict[Location, str]) -> dict:
    return {str(loc): cat for loc, cat in sorted(table.items())}


def cfg_to_json(cfg: Cfg) -> dict:
    return {
        "nodes": [{"loc": loc, "category": cat} for loc, cat in cfg.nodes],
        "edges": [{"from": f, "to": t, "label": lbl} for f, t, lbl in cfg.edges],
    }


def cfg_to_dot(cfg: Cfg) -> str:
    lines = ["digraph cfg {", "  rankdir=TB;"]
    for loc, cat in cfg.nodes:
        lines.append(f'  {loc} [label="{loc}: {cat}"];')
    for f, t, lbl in cfg.edges:
        lines.append(f'  {f} -> {t} [label="{lbl}"];')
    lines.append("}")
    return "\n".join(lines)
