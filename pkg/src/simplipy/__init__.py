"""SimpliPy: a source-tracking interpreter for a restricted Python subset.

The package provides a line-oriented parser, static analysis (lexical
blocks, control transfer maps, control flow graph), a small-step machine
over (lexical map, lexical hierarchy, continuation) states, bidirectional
execution traces, a Python-to-subset simplifier, and a session HTTP service
plus CLI around all of it.
"""

from .analysis import (
    Analysis,
    Cfg,
    ControlMaps,
    ScopeInfo,
    analyze,
    build_cfg,
    cfg_to_dot,
    cfg_to_json,
    control_maps,
    lexical_blocks,
    structural_abstraction,
    validate,
)
from .diagnostics import Diagnostic, LexError, OutOfRangeError, ParseError, SimpliPyError, StaticError
from .machine import (
    BOTTOM,
    Bottom,
    BoolV,
    Closure,
    Context,
    ErrorKind,
    FloatV,
    IntV,
    NoneV,
    State,
    StrV,
    Value,
    eval_exp,
    initial_state,
    lookup,
    resolve_update_env,
    run_to_fixed_point,
    state_from_json,
    state_to_json,
    step,
)
from .simplifier import SimplifyResult, simplify
from .syntax import Exp, Instr, Program, instruction_at, parse_program, render_program, tokenize
from .trace import History, TraceEntry, serialize_trace, trace_to_text

__version__ = "0.1.0"

__all__ = [
    "Analysis",
    "BOTTOM",
    "BoolV",
    "Bottom",
    "Cfg",
    "Closure",
    "Context",
    "ControlMaps",
    "Diagnostic",
    "ErrorKind",
    "Exp",
    "FloatV",
    "History",
    "Instr",
    "IntV",
    "LexError",
    "NoneV",
    "OutOfRangeError",
    "ParseError",
    "Program",
    "ScopeInfo",
    "SimpliPyError",
    "SimplifyResult",
    "State",
    "StaticError",
    "StrV",
    "TraceEntry",
    "Value",
    "analyze",
    "build_cfg",
    "cfg_to_dot",
    "cfg_to_json",
    "control_maps",
    "eval_exp",
    "initial_state",
    "instruction_at",
    "lexical_blocks",
    "lookup",
    "parse_program",
    "render_program",
    "resolve_update_env",
    "run_to_fixed_point",
    "serialize_trace",
    "simplify",
    "state_from_json",
    "state_to_json",
    "step",
    "structural_abstraction",
    "tokenize",
    "trace_to_text",
    "validate",
]
