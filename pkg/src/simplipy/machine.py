"""The abstract machine: values, states, variable lookup, and the step function.

A state is the triple (lexical map, lexical hierarchy, continuation): all
environments ever created keyed by integer id (0 = global), the parent
relation between environment ids, and a stack of (location, env) contexts
whose top determines the next instruction.  States are immutable snapshots;
`step` builds a new state and reports the transition label taken.

Reaching the end location with more than one context on the stack is the
fall-through exit of a function body and behaves as `return None`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

from . import analysis as _analysis
from .analysis import ControlMaps, ScopeInfo, block_at, scope_for
from .syntax import (
    Binary,
    Break,
    CallAssign,
    Const,
    Continue,
    Def,
    Else,
    Exp,
    ExpAssign,
    Global,
    If,
    Location,
    Nonlocal,
    Pass,
    Program,
    Return,
    Unary,
    Var,
    While,
)

GLOBAL_ENV = 0
DEFAULT_RECURSION_LIMIT = 10000

RUNNING = "running"
FINISHED = "finished"
ERRORED = "errored"


class ErrorKind(str, enum.Enum):
    NAME_NOT_FOUND = "NameNotFound"
    UNBOUND_LOCAL = "UnboundLocal"
    TYPE_MISMATCH = "TypeMismatch"
    ARITY_MISMATCH = "ArityMismatch"
    DIVISION_BY_ZERO = "DivisionByZero"
    RECURSION_LIMIT = "RecursionLimit"


# ---------------------------------------------------------------------------
# Values


@dataclass(frozen=True)
class IntV:
    value: int


@dataclass(frozen=True)
class FloatV:
    value: float


@dataclass(frozen=True)
class BoolV:
    value: bool


@dataclass(frozen=True)
class StrV:
    value: str


@dataclass(frozen=True)
class NoneV:
    pass


@dataclass(frozen=True)
class Bottom:
    """Marker for a declared-but-unassigned local; reading it is an error."""


@dataclass(frozen=True)
class Closure:
    entry: Location
    params: tuple[str, ...]
    def_env: int
    def_loc: Location


Value = IntV | FloatV | BoolV | StrV | NoneV | Bottom | Closure

BOTTOM = Bottom()
NONE = NoneV()


def const_value(v: object) -> Value:
    if isinstance(v, bool):
        return BoolV(v)
    if isinstance(v, int):
        return IntV(v)
    if isinstance(v, float):
        return FloatV(v)
    if isinstance(v, str):
        return StrV(v)
    if v is None:
        return NONE
    raise TypeError(f"not a constant: {v!r}")


# ---------------------------------------------------------------------------
# State


@dataclass(frozen=True)
class Context:
    loc: Location
    env: int


@dataclass(frozen=True)
class MachineError:
    kind: ErrorKind
    loc: Location


@dataclass(frozen=True)
class State:
    envs: dict[int, dict[str, Value]]
    parents: dict[int, int]
    stack: tuple[Context, ...]  # index 0 is the top of the continuation
    status: str = RUNNING
    error: MachineError | None = None

    @property
    def top(self) -> Context:
        return self.stack[0]


class EvalError(Exception):
    """Internal signal converted by `step` into an err transition."""

    def __init__(self, kind: ErrorKind, message: str = ""):
        self.kind = kind
        super().__init__(message or kind.value)


def initial_state(program: Program) -> State:
    status = FINISHED if program.n == 0 else RUNNING
    return State(envs={GLOBAL_ENV: {}}, parents={}, stack=(Context(1, GLOBAL_ENV),), status=status)


# ---------------------------------------------------------------------------
# Lookup and update resolution


def lookup(state: State, env: int, name: str, scopes: list[ScopeInfo], block: int) -> Value:
    """Resolve a name per the scope discipline of the executing block.

    Globals of the block are read from the global environment only.
    Nonlocals start at the parent environment and stop before the global one.
    Everything else walks the chain from the current environment to the root.
    """
    info = scope_for(scopes, block)
    if name in info.globals:
        return _found(state.envs[GLOBAL_ENV], name)
    if name in info.nonlocals:
        cur = state.parents.get(env)
        while cur is not None and cur != GLOBAL_ENV:
            if name in state.envs[cur]:
                return _found(state.envs[cur], name)
            cur = state.parents.get(cur)
        raise EvalError(ErrorKind.NAME_NOT_FOUND, f"nonlocal name '{name}' is not bound")
    cur: int | None = env
    while cur is not None:
        if name in state.envs[cur]:
            return _found(state.envs[cur], name)
        cur = state.parents.get(cur)
    raise EvalError(ErrorKind.NAME_NOT_FOUND, f"name '{name}' is not defined")


def _found(bindings: dict[str, Value], name: str) -> Value:
    v = bindings[name]
    if isinstance(v, Bottom):
        raise EvalError(ErrorKind.UNBOUND_LOCAL, f"local name '{name}' read before assignment")
    return v


def resolve_update_env(state: State, env: int, name: str, scopes: list[ScopeInfo], block: int) -> int:
    """Environment id where an assignment to `name` must write."""
    info = scope_for(scopes, block)
    if block == _analysis.TOP_BLOCK or name in info.globals:
        return GLOBAL_ENV
    if name in info.nonlocals:
        cur = state.parents.get(env)
        while cur is not None and cur != GLOBAL_ENV:
            if name in state.envs[cur]:
                return cur
            cur = state.parents.get(cur)
        raise EvalError(ErrorKind.NAME_NOT_FOUND, f"nonlocal name '{name}' is not bound")
    if name in info.locals:
        return env
    raise EvalError(ErrorKind.NAME_NOT_FOUND, f"'{name}' is not assignable in this block")


# ---------------------------------------------------------------------------
# Expression evaluation


def eval_exp(state: State, env: int, exp: Exp, scopes: list[ScopeInfo], block: int) -> Value:
    if isinstance(exp, Const):
        return const_value(exp.value)
    if isinstance(exp, Var):
        return lookup(state, env, exp.name, scopes, block)
    if isinstance(exp, Unary):
        return _apply_unary(exp.op, eval_exp(state, env, exp.operand, scopes, block))
    if isinstance(exp, Binary):
        if exp.op in ("and", "or"):
            left = eval_exp(state, env, exp.left, scopes, block)
            if not isinstance(left, BoolV):
                raise EvalError(ErrorKind.TYPE_MISMATCH, f"'{exp.op}' requires boolean operands")
            if exp.op == "and" and not left.value:
                return BoolV(False)
            if exp.op == "or" and left.value:
                return BoolV(True)
            right = eval_exp(state, env, exp.right, scopes, block)
            if not isinstance(right, BoolV):
                raise EvalError(ErrorKind.TYPE_MISMATCH, f"'{exp.op}' requires boolean operands")
            return right
        left = eval_exp(state, env, exp.left, scopes, block)
        right = eval_exp(state, env, exp.right, scopes, block)
        return _apply_binary(exp.op, left, right)
    raise TypeError(f"not an expression: {exp!r}")


def _apply_unary(op: str, v: Value) -> Value:
    if op == "neg":
        if isinstance(v, IntV):
            return IntV(-v.value)
        if isinstance(v, FloatV):
            return FloatV(-v.value)
        raise EvalError(ErrorKind.TYPE_MISMATCH, "unary '-' requires a number")
    if op == "not":
        if isinstance(v, BoolV):
            return BoolV(not v.value)
        raise EvalError(ErrorKind.TYPE_MISMATCH, "'not' requires a boolean")
    raise TypeError(f"unknown unary operator {op!r}")


def _is_num(v: Value) -> bool:
    return isinstance(v, (IntV, FloatV))


def _apply_binary(op: str, left: Value, right: Value) -> Value:
    if op == "+":
        if isinstance(left, StrV) and isinstance(right, StrV):
            return StrV(left.value + right.value)
        if _is_num(left) and _is_num(right):
            return _numeric(left.value + right.value, left, right)
        raise EvalError(ErrorKind.TYPE_MISMATCH, "'+' requires two numbers or two strings")
    if op in ("-", "*"):
        if _is_num(left) and _is_num(right):
            result = left.value - right.value if op == "-" else left.value * right.value
            return _numeric(result, left, right)
        raise EvalError(ErrorKind.TYPE_MISMATCH, f"'{op}' requires numbers")
    if op == "/":
        if not (_is_num(left) and _is_num(right)):
            raise EvalError(ErrorKind.TYPE_MISMATCH, "'/' requires numbers")
        if right.value == 0:
            raise EvalError(ErrorKind.DIVISION_BY_ZERO, "division by zero")
        return FloatV(left.value / right.value)
    if op in ("//", "%"):
        if not (isinstance(left, IntV) and isinstance(right, IntV)):
            raise EvalError(ErrorKind.TYPE_MISMATCH, f"'{op}' requires integers")
        if right.value == 0:
            raise EvalError(ErrorKind.DIVISION_BY_ZERO, "division by zero")
        return IntV(left.value // right.value if op == "//" else left.value % right.value)
    if op in ("==", "!=", "<", "<=", ">", ">="):
        return _compare(op, left, right)
    raise TypeError(f"unknown binary operator {op!r}")


def _numeric(result: int | float, left: Value, right: Value) -> Value:
    if isinstance(left, IntV) and isinstance(right, IntV):
        return IntV(result)
    return FloatV(result)


def _compare(op: str, left: Value, right: Value) -> Value:
    if _is_num(left) and _is_num(right):
        a, b = left.value, right.value
    elif isinstance(left, StrV) and isinstance(right, StrV):
        a, b = left.value, right.value
    elif op in ("==", "!=") and isinstance(left, BoolV) and isinstance(right, BoolV):
        a, b = left.value, right.value
    elif op in ("==", "!=") and isinstance(left, NoneV) and isinstance(right, NoneV):
        return BoolV(op == "==")
    else:
        raise EvalError(ErrorKind.TYPE_MISMATCH, f"'{op}' not supported between these operand types")
    if op == "==":
        return BoolV(a == b)
    if op == "!=":
        return BoolV(a != b)
    if op == "<":
        return BoolV(a < b)
    if op == "<=":
        return BoolV(a <= b)
    if op == ">":
        return BoolV(a > b)
    return BoolV(a >= b)


# ---------------------------------------------------------------------------
# Transitions


def _with_binding(envs: dict[int, dict[str, Value]], env: int, name: str, value: Value) -> dict[int, dict[str, Value]]:
    updated = dict(envs[env])
    updated[name] = value
    out = dict(envs)
    out[env] = updated
    return out


def _finish_status(stack: tuple[Context, ...], end: Location) -> str:
    return FINISHED if len(stack) == 1 and stack[0].loc == end else RUNNING


def step(
    state: State,
    program: Program,
    cm: ControlMaps,
    scopes: list[ScopeInfo],
    recursion_limit: int = DEFAULT_RECURSION_LIMIT,
) -> tuple[State, str | None]:
    """One transition of the machine; terminal states are fixed points.

    Returns the successor state and the label of the transition taken:
    next, true, false, call, return, or err.  Calling step on a finished or
    errored state returns the state itself with label None.
    """
    if state.status != RUNNING:
        return state, None

    top = state.top
    loc = top.loc
    end = program.end

    try:
        if loc == end:
            # fall-through exit of a function body: behaves as `return None`
            return _do_return(state, program, cm, scopes, NONE)

        instr = program.instrs[loc]
        block = block_at(scopes, loc)

        if isinstance(instr, (Pass, Global, Nonlocal, Break, Continue)):
            return _move(state, cm.next[loc], end), "next"

        if isinstance(instr, ExpAssign):
            value = eval_exp(state, top.env, instr.rhs, scopes, block)
            target_env = resolve_update_env(state, top.env, instr.target, scopes, block)
            envs = _with_binding(state.envs, target_env, instr.target, value)
            nxt = cm.next[loc]
            stack = (Context(nxt, top.env),) + state.stack[1:]
            return State(envs, state.parents, stack, _finish_status(stack, end)), "next"

        if isinstance(instr, (If, While)):
            cond = eval_exp(state, top.env, instr.cond, scopes, block)
            if not isinstance(cond, BoolV):
                raise EvalError(ErrorKind.TYPE_MISMATCH, "condition must evaluate to a boolean")
            if cond.value:
                return _move(state, cm.true_[loc], end), "true"
            return _move(state, cm.false_[loc], end), "false"

        if isinstance(instr, Def):
            closure = Closure(entry=loc + 1, params=instr.params, def_env=top.env, def_loc=loc)
            target_env = resolve_update_env(state, top.env, instr.name, scopes, block)
            envs = _with_binding(state.envs, target_env, instr.name, closure)
            nxt = cm.next[loc]
            stack = (Context(nxt, top.env),) + state.stack[1:]
            return State(envs, state.parents, stack, _finish_status(stack, end)), "next"

        if isinstance(instr, CallAssign):
            callee = lookup(state, top.env, instr.callee, scopes, block)
            if not isinstance(callee, Closure):
                raise EvalError(ErrorKind.TYPE_MISMATCH, f"'{instr.callee}' is not callable")
            args = [eval_exp(state, top.env, a, scopes, block) for a in instr.args]
            if len(args) != len(callee.params):
                raise EvalError(
                    ErrorKind.ARITY_MISMATCH,
                    f"'{instr.callee}' expects {len(callee.params)} argument(s), got {len(args)}",
                )
            if len(state.stack) >= recursion_limit:
                raise EvalError(ErrorKind.RECURSION_LIMIT, "continuation depth limit exceeded")
            callee_scope = scope_for(scopes, callee.def_loc)
            frame: dict[str, Value] = dict(zip(callee.params, args))
            for name in sorted(callee_scope.locals):
                if name not in frame:
                    frame[name] = BOTTOM
            new_env = max(state.envs) + 1
            envs = dict(state.envs)
            envs[new_env] = frame
            parents = dict(state.parents)
            parents[new_env] = callee.def_env
            stack = (Context(callee.entry, new_env),) + state.stack
            return State(envs, parents, stack, RUNNING), "call"

        if isinstance(instr, Return):
            value = eval_exp(state, top.env, instr.rhs, scopes, block)
            return _do_return(state, program, cm, scopes, value)

        if isinstance(instr, Else):
            raise RuntimeError(f"control reached an else marker at line {loc}")
        raise TypeError(f"unknown instruction at line {loc}: {instr!r}")

    except EvalError as e:
        errored = replace(state, status=ERRORED, error=MachineError(e.kind, loc))
        return errored, "err"


def _move(state: State, to: Location, end: Location) -> State:
    stack = (Context(to, state.top.env),) + state.stack[1:]
    return State(state.envs, state.parents, stack, _finish_status(stack, end))


def _do_return(
    state: State,
    program: Program,
    cm: ControlMaps,
    scopes: list[ScopeInfo],
    value: Value,
) -> tuple[State, str]:
    caller = state.stack[1]
    call_instr = program.instrs[caller.loc]
    assert isinstance(call_instr, CallAssign), f"return to a non-call site at line {caller.loc}"
    caller_block = block_at(scopes, caller.loc)
    target_env = resolve_update_env(state, caller.env, call_instr.target, scopes, caller_block)
    envs = _with_binding(state.envs, target_env, call_instr.target, value)
    stack = (Context(cm.next[caller.loc], caller.env),) + state.stack[2:]
    return State(envs, state.parents, stack, _finish_status(stack, program.end)), "return"


def run_to_fixed_point(
    state: State,
    program: Program,
    cm: ControlMaps,
    scopes: list[ScopeInfo],
    max_steps: int = 10000,
    recursion_limit: int = DEFAULT_RECURSION_LIMIT,
) -> list[State]:
    """States visited from `state` until terminal, or until max_steps transitions.

    The run is truncated (non-terminating program) iff the final state's
    status is still running.
    """
    states = [state]
    current = state
    for _ in range(max_steps):
        if current.status != RUNNING:
            break
        current, _label = step(current, program, cm, scopes, recursion_limit)
        states.append(current)
    return states


# ---------------------------------------------------------------------------
# JSON encoding of states


def value_to_json(v: Value) -> object:
    if isinstance(v, (IntV, FloatV, BoolV, StrV)):
        return v.value
    if isinstance(v, NoneV):
        return None
    if isinstance(v, Bottom):
        return {"bottom": True}
    if isinstance(v, Closure):
        return {"closure": {"entry": v.entry, "params": list(v.params), "defEnv": v.def_env}}
    raise TypeError(f"not a value: {v!r}")


def value_from_json(obj: object) -> Value:
    if isinstance(obj, bool):
        return BoolV(obj)
    if isinstance(obj, int):
        return IntV(obj)
    if isinstance(obj, float):
        return FloatV(obj)
    if isinstance(obj, str):
        return StrV(obj)
    if obj is None:
        return NONE
    if isinstance(obj, dict):
        if obj.get("bottom"):
            return BOTTOM
        if "closure" in obj:
            c = obj["closure"]
            return Closure(c["entry"], tuple(c["params"]), c["defEnv"], c["entry"] - 1)
    raise TypeError(f"not a value encoding: {obj!r}")


def state_to_json(state: State) -> dict:
    status: dict[str, object] = {"kind": state.status}
    if state.error is not None:
        status["error"] = {"kind": state.error.kind.value, "loc": state.error.loc}
    return {
        "envs": {str(i): {name: value_to_json(v) for name, v in bindings.items()} for i, bindings in state.envs.items()},
        "parents": {str(i): p for i, p in state.parents.items()},
        "stack": [{"loc": c.loc, "env": c.env} for c in state.stack],
        "status": status,
    }


def state_from_json(doc: dict) -> State:
    envs = {int(i): {name: value_from_json(v) for name, v in bindings.items()} for i, bindings in doc["envs"].items()}
    parents = {int(i): p for i, p in doc["parents"].items()}
    stack = tuple(Context(c["loc"], c["env"]) for c in doc["stack"])
    status = doc["status"]["kind"]
    err_doc = doc["status"].get("error")
    err = MachineError(ErrorKind(err_doc["kind"]), err_doc["loc"]) if err_doc else None
    return State(envs, parents, stack, status, err)
