"""Best-effort rewriting of standard Python source into the SimpliPy subset.

Rewrites applied: blank lines and comments stripped, augmented assignment
expanded, elif chains nested, calls hoisted out of expressions into fresh
`_tN` temporaries (left-to-right, innermost first), bare call statements
given a target, bare `return` made explicit.  While-loop conditions that
contain calls are rotated into a `while True:` form so the call is
re-evaluated every iteration and break/continue keep their meaning.

Anything outside the subset produces an error diagnostic naming the
construct and the original line; output is produced only when there are no
error diagnostics.
"""

from __future__ import annotations

import ast
import io
import tokenize as _pytokenize
from dataclasses import dataclass, field

from .diagnostics import Diagnostic, SimpliPyError, error
from . import syntax
from .syntax import Binary, Const, Exp, Unary, Var

_BIN_OPS = {ast.Add: "+", ast.Sub: "-", ast.Mult: "*", ast.Div: "/", ast.FloorDiv: "//", ast.Mod: "%"}
_CMP_OPS = {ast.Eq: "==", ast.NotEq: "!=", ast.Lt: "<", ast.LtE: "<=", ast.Gt: ">", ast.GtE: ">="}

RULE_STRIP = "strip_blank_and_comment_lines"
RULE_AUG = "expand_augmented_assignment"
RULE_ELIF = "desugar_elif"
RULE_HOIST = "hoist_calls"
RULE_BARE_CALL = "name_bare_call"
RULE_BARE_RETURN = "explicit_return_none"
RULE_WHILE_CALL = "rotate_while_condition_call"
RULE_DROP_CONST = "drop_constant_statement"


@dataclass
class SimplifyResult:
    output: str | None
    applied: list[str]
    diagnostics: list[Diagnostic]
    line_map: dict[int, int]

    def to_json(self) -> dict:
        return {
            "output": self.output,
            "applied": list(self.applied),
            "diagnostics": [d.to_json() for d in self.diagnostics],
            "lineMap": {str(k): v for k, v in sorted(self.line_map.items())},
        }


class _Unsupported(Exception):
    def __init__(self, construct: str, line: int, message: str | None = None):
        self.construct = construct
        self.line = line
        self.message = message or f"{construct} unsupported"
        super().__init__(self.message)


@dataclass
class _Ctx:
    identifiers: set[str]
    counter: int = 0
    applied: list[str] = field(default_factory=list)

    def mark(self, rule: str) -> None:
        if rule not in self.applied:
            self.applied.append(rule)

    def fresh(self) -> str:
        while True:
            name = f"_t{self.counter}"
            self.counter += 1
            if name not in self.identifiers:
                self.identifiers.add(name)
                return name


@dataclass
class _Line:
    depth: int
    text: str
    origin: int


def simplify(source: str) -> SimplifyResult:
    try:
        tree = ast.parse(source)
    except SyntaxError as e:
        line = e.lineno or 1
        col = e.offset or 1
        diag = error(line, col, "simplify.syntax", f"not valid Python: {e.msg}")
        return SimplifyResult(None, [], [diag], {})

    ctx = _Ctx(identifiers=_collect_identifiers(tree))
    if _has_blank_or_comment(source):
        ctx.mark(RULE_STRIP)

    diags: list[Diagnostic] = []
    lines: list[_Line] = []
    _emit_block(tree.body, 0, ctx, lines, diags, header_line=1)

    if diags:
        diags.sort(key=lambda d: (d.line, d.column))
        return SimplifyResult(None, ctx.applied, diags, {})

    text = "\n".join("    " * ln.depth + ln.text for ln in lines)
    line_map = {i + 1: ln.origin for i, ln in enumerate(lines)}

    try:
        syntax.parse_program(text)
    except SimpliPyError as e:
        internal = [error(d.line, d.column, "simplify.internal", f"simplified output failed to parse: {d.message}") for d in e.diagnostics]
        return SimplifyResult(None, ctx.applied, internal, {})

    return SimplifyResult(text, ctx.applied, [], line_map)


def _collect_identifiers(tree: ast.AST) -> set[str]:
    names: set[str] = set()
    for node in ast.walk(tree):
        if isinstance(node, ast.Name):
            names.add(node.id)
        elif isinstance(node, ast.FunctionDef):
            names.add(node.name)
        elif isinstance(node, ast.arg):
            names.add(node.arg)
        elif isinstance(node, (ast.Global, ast.Nonlocal)):
            names.update(node.names)
    return names


def _has_blank_or_comment(source: str) -> bool:
    if any(not line.strip() for line in source.splitlines()):
        return True
    try:
        for tok in _pytokenize.generate_tokens(io.StringIO(source).readline):
            if tok.type == _pytokenize.COMMENT:
                return True
    except _pytokenize.TokenizeError:
        pass
    return False


# ---------------------------------------------------------------------------
# Statement emission


def _emit_block(
    body: list[ast.stmt],
    depth: int,
    ctx: _Ctx,
    lines: list[_Line],
    diags: list[Diagnostic],
    header_line: int,
) -> None:
    emitted_before = len(lines)
    for stmt in body:
        try:
            _emit_stmt(stmt, depth, ctx, lines, diags)
        except _Unsupported as u:
            diags.append(error(u.line, 1, "simplify.unsupported", u.message))
    if len(lines) == emitted_before:
        # every statement dropped (e.g. a lone docstring): keep the block nonempty
        lines.append(_Line(depth, "pass", header_line))


def _emit_stmt(stmt: ast.stmt, depth: int, ctx: _Ctx, lines: list[_Line], diags: list[Diagnostic]) -> None:
    if isinstance(stmt, ast.Pass):
        lines.append(_Line(depth, "pass", stmt.lineno))
        return
    if isinstance(stmt, ast.Break):
        lines.append(_Line(depth, "break", stmt.lineno))
        return
    if isinstance(stmt, ast.Continue):
        lines.append(_Line(depth, "continue", stmt.lineno))
        return
    if isinstance(stmt, ast.Global):
        lines.append(_Line(depth, "global " + ", ".join(stmt.names), stmt.lineno))
        return
    if isinstance(stmt, ast.Nonlocal):
        lines.append(_Line(depth, "nonlocal " + ", ".join(stmt.names), stmt.lineno))
        return

    if isinstance(stmt, ast.Assign):
        if len(stmt.targets) != 1:
            raise _Unsupported("chained assignment", stmt.lineno, f"chained assignment unsupported (line {stmt.lineno})")
        target = stmt.targets[0]
        if isinstance(target, (ast.Tuple, ast.List)):
            raise _Unsupported("multiple assignment", stmt.lineno, f"multiple assignment unsupported (line {stmt.lineno})")
        if not isinstance(target, ast.Name):
            raise _Unsupported("assignment target", stmt.lineno, f"assignment to {_describe(target)} unsupported (line {stmt.lineno})")
        _emit_assign(target.id, stmt.value, depth, ctx, lines, stmt.lineno)
        return

    if isinstance(stmt, ast.AugAssign):
        if not isinstance(stmt.target, ast.Name):
            raise _Unsupported("assignment target", stmt.lineno, f"assignment to {_describe(stmt.target)} unsupported (line {stmt.lineno})")
        if type(stmt.op) not in _BIN_OPS:
            raise _Unsupported("operator", stmt.lineno, f"operator '{_op_symbol(stmt.op)}=' unsupported (line {stmt.lineno})")
        ctx.mark(RULE_AUG)
        load = ast.Name(stmt.target.id, ast.Load())
        ast.copy_location(load, stmt.target)
        expanded = ast.BinOp(load, stmt.op, stmt.value)
        ast.copy_location(expanded, stmt)
        _emit_assign(stmt.target.id, expanded, depth, ctx, lines, stmt.lineno)
        return

    if isinstance(stmt, ast.Expr):
        if isinstance(stmt.value, ast.Call):
            ctx.mark(RULE_BARE_CALL)
            pre: list[_Line] = []
            call_text = _render_call(stmt.value, depth, ctx, pre)
            lines.extend(pre)
            lines.append(_Line(depth, f"{ctx.fresh()} = {call_text}", stmt.lineno))
            return
        if isinstance(stmt.value, ast.Constant):
            ctx.mark(RULE_DROP_CONST)
            return
        raise _Unsupported("expression statement", stmt.lineno, f"bare expression statement unsupported (line {stmt.lineno})")

    if isinstance(stmt, ast.Return):
        if stmt.value is None:
            ctx.mark(RULE_BARE_RETURN)
            lines.append(_Line(depth, "return None", stmt.lineno))
            return
        pre = []
        exp = _lower_exp(stmt.value, depth, ctx, pre)
        lines.extend(pre)
        lines.append(_Line(depth, f"return {syntax.render_exp(exp)}", stmt.lineno))
        return

    if isinstance(stmt, ast.If):
        _emit_if(stmt, depth, ctx, lines, diags)
        return

    if isinstance(stmt, ast.While):
        _emit_while(stmt, depth, ctx, lines, diags)
        return

    if isinstance(stmt, ast.FunctionDef):
        _emit_def(stmt, depth, ctx, lines, diags)
        return

    raise _Unsupported(_describe(stmt), stmt.lineno, f"{_describe(stmt)} unsupported (line {stmt.lineno})")


def _emit_assign(target: str, value: ast.expr, depth: int, ctx: _Ctx, lines: list[_Line], origin: int) -> None:
    pre: list[_Line] = []
    if isinstance(value, ast.Call):
        # the whole right-hand side is a call: emit a call assignment directly
        call_text = _render_call(value, depth, ctx, pre)
        lines.extend(pre)
        lines.append(_Line(depth, f"{target} = {call_text}", origin))
        return
    exp = _lower_exp(value, depth, ctx, pre)
    lines.extend(pre)
    lines.append(_Line(depth, f"{target} = {syntax.render_exp(exp)}", origin))


def _emit_if(stmt: ast.If, depth: int, ctx: _Ctx, lines: list[_Line], diags: list[Diagnostic]) -> None:
    pre: list[_Line] = []
    cond = _lower_exp(stmt.test, depth, ctx, pre)
    lines.extend(pre)
    lines.append(_Line(depth, f"if {syntax.render_exp(cond)}:", stmt.lineno))
    _emit_block(stmt.body, depth + 1, ctx, lines, diags, stmt.lineno)
    if stmt.orelse:
        if len(stmt.orelse) == 1 and isinstance(stmt.orelse[0], ast.If) and stmt.orelse[0].col_offset == stmt.col_offset:
            ctx.mark(RULE_ELIF)
        else_line = stmt.orelse[0].lineno
        lines.append(_Line(depth, "else:", else_line))
        _emit_block(stmt.orelse, depth + 1, ctx, lines, diags, else_line)


def _emit_while(stmt: ast.While, depth: int, ctx: _Ctx, lines: list[_Line], diags: list[Diagnostic]) -> None:
    if stmt.orelse:
        raise _Unsupported("while-else", stmt.orelse[0].lineno, f"'else' clause on 'while' unsupported (line {stmt.orelse[0].lineno})")
    if _contains_call(stmt.test):
        # the condition must be re-evaluated every iteration, so hoisting has
        # to happen inside the loop; break/continue keep their meaning
        ctx.mark(RULE_WHILE_CALL)
        lines.append(_Line(depth, "while True:", stmt.lineno))
        pre: list[_Line] = []
        cond = _lower_exp(stmt.test, depth + 1, ctx, pre)
        lines.extend(pre)
        lines.append(_Line(depth + 1, f"if {syntax.render_exp(cond)}:", stmt.lineno))
        _emit_block(stmt.body, depth + 2, ctx, lines, diags, stmt.lineno)
        lines.append(_Line(depth + 1, "else:", stmt.lineno))
        lines.append(_Line(depth + 2, "break", stmt.lineno))
        return
    pre = []
    cond = _lower_exp(stmt.test, depth, ctx, pre)
    assert not pre
    lines.append(_Line(depth, f"while {syntax.render_exp(cond)}:", stmt.lineno))
    _emit_block(stmt.body, depth + 1, ctx, lines, diags, stmt.lineno)


def _emit_def(stmt: ast.FunctionDef, depth: int, ctx: _Ctx, lines: list[_Line], diags: list[Diagnostic]) -> None:
    if stmt.decorator_list:
        raise _Unsupported("decorator", stmt.lineno, f"decorator unsupported (line {stmt.lineno})")
    a = stmt.args
    if a.posonlyargs or a.kwonlyargs or a.vararg or a.kwarg or a.defaults or a.kw_defaults:
        raise _Unsupported("parameter syntax", stmt.lineno, f"only plain positional parameters are supported (line {stmt.lineno})")
    if stmt.returns or any(arg.annotation for arg in a.args):
        raise _Unsupported("annotation", stmt.lineno, f"annotation unsupported (line {stmt.lineno})")
    params = ", ".join(arg.arg for arg in a.args)
    lines.append(_Line(depth, f"def {stmt.name}({params}):", stmt.lineno))
    body = stmt.body
    if body and isinstance(body[0], ast.Expr) and isinstance(body[0].value, ast.Constant) and isinstance(body[0].value.value, str):
        ctx.mark(RULE_DROP_CONST)
        body = body[1:]
    _emit_block(body, depth + 1, ctx, lines, diags, stmt.lineno)


# ---------------------------------------------------------------------------
# Expression lowering


def _contains_call(node: ast.expr) -> bool:
    return any(isinstance(n, ast.Call) for n in ast.walk(node))


def _render_call(call: ast.Call, depth: int, ctx: _Ctx, pre: list[_Line]) -> str:
    """Render a call whose inner calls have been hoisted into `pre`."""
    if not isinstance(call.func, ast.Name):
        raise _Unsupported("callee", call.lineno, f"only calls to plain names are supported (line {call.lineno})")
    if call.keywords:
        raise _Unsupported("keyword argument", call.lineno, f"keyword argument unsupported (line {call.lineno})")
    args = []
    for arg in call.args:
        if isinstance(arg, ast.Starred):
            raise _Unsupported("starred argument", call.lineno, f"starred argument unsupported (line {call.lineno})")
        args.append(_lower_exp(arg, depth, ctx, pre))
    return f"{call.func.id}({', '.join(syntax.render_exp(a) for a in args)})"


def _lower_exp(node: ast.expr, depth: int, ctx: _Ctx, pre: list[_Line], allow_calls: bool = True) -> Exp:
    """Convert a Python expression to a subset expression, hoisting calls.

    Calls become fresh temporaries assigned just before the statement being
    emitted (innermost first, left to right).  Inside the right operand of
    `and`/`or` a call would escape its short-circuit guard, so it is rejected.
    """
    if isinstance(node, ast.Constant):
        v = node.value
        if v is None or isinstance(v, (bool, int, float, str)):
            return Const(v)
        raise _Unsupported("literal", node.lineno, f"{type(v).__name__} literal unsupported (line {node.lineno})")
    if isinstance(node, ast.Name):
        return Var(node.id)
    if isinstance(node, ast.UnaryOp):
        if isinstance(node.op, ast.USub):
            return Unary("neg", _lower_exp(node.operand, depth, ctx, pre, allow_calls))
        if isinstance(node.op, ast.Not):
            return Unary("not", _lower_exp(node.operand, depth, ctx, pre, allow_calls))
        raise _Unsupported("operator", node.lineno, f"unary operator '{_op_symbol(node.op)}' unsupported (line {node.lineno})")
    if isinstance(node, ast.BinOp):
        if type(node.op) not in _BIN_OPS:
            raise _Unsupported("operator", node.lineno, f"operator '{_op_symbol(node.op)}' unsupported (line {node.lineno})")
        left = _lower_exp(node.left, depth, ctx, pre, allow_calls)
        right = _lower_exp(node.right, depth, ctx, pre, allow_calls)
        return Binary(_BIN_OPS[type(node.op)], left, right)
    if isinstance(node, ast.BoolOp):
        op = "and" if isinstance(node.op, ast.And) else "or"
        result = _lower_exp(node.values[0], depth, ctx, pre, allow_calls)
        for operand in node.values[1:]:
            # operands after the first are evaluated conditionally
            right = _lower_exp(operand, depth, ctx, pre, allow_calls=False)
            result = Binary(op, result, right)
        return result
    if isinstance(node, ast.Compare):
        if len(node.ops) != 1:
            raise _Unsupported("chained comparison", node.lineno, f"chained comparison unsupported (line {node.lineno})")
        if type(node.ops[0]) not in _CMP_OPS:
            raise _Unsupported("operator", node.lineno, f"comparison '{_op_symbol(node.ops[0])}' unsupported (line {node.lineno})")
        left = _lower_exp(node.left, depth, ctx, pre, allow_calls)
        right = _lower_exp(node.comparators[0], depth, ctx, pre, allow_calls)
        return Binary(_CMP_OPS[type(node.ops[0])], left, right)
    if isinstance(node, ast.Call):
        if not allow_calls:
            raise _Unsupported(
                "call in short-circuit position",
                node.lineno,
                f"call inside the right operand of and/or cannot be hoisted safely (line {node.lineno})",
            )
        ctx.mark(RULE_HOIST)
        call_text = _render_call(node, depth, ctx, pre)
        temp = ctx.fresh()
        pre.append(_Line(depth, f"{temp} = {call_text}", node.lineno))
        return Var(temp)
    if isinstance(node, ast.Lambda):
        raise _Unsupported("lambda", node.lineno, f"lambda unsupported; bind a named def instead (line {node.lineno})")
    raise _Unsupported(_describe(node), node.lineno, f"{_describe(node)} unsupported (line {node.lineno})")


_DESCRIPTIONS = {
    ast.For: "for loop",
    ast.AsyncFor: "async for loop",
    ast.AsyncFunctionDef: "async function",
    ast.ClassDef: "class definition",
    ast.Import: "import",
    ast.ImportFrom: "import",
    ast.Try: "exception handling",
    ast.Raise: "exception handling",
    ast.With: "with statement",
    ast.AsyncWith: "with statement",
    ast.Assert: "assert statement",
    ast.Delete: "del statement",
    ast.Match: "match statement",
    ast.AnnAssign: "annotated assignment",
    ast.List: "list literal",
    ast.Tuple: "tuple",
    ast.Dict: "dict literal",
    ast.Set: "set literal",
    ast.ListComp: "comprehension",
    ast.SetComp: "comprehension",
    ast.DictComp: "comprehension",
    ast.GeneratorExp: "comprehension",
    ast.Attribute: "attribute access",
    ast.Subscript: "subscripting",
    ast.JoinedStr: "f-string",
    ast.IfExp: "conditional expression",
    ast.Starred: "starred expression",
    ast.Yield: "yield",
    ast.YieldFrom: "yield",
    ast.Await: "await",
    ast.NamedExpr: "assignment expression",
    ast.Slice: "slice",
}

_OP_SYMBOLS = {
    ast.Pow: "**",
    ast.MatMult: "@",
    ast.LShift: "<<",
    ast.RShift: ">>",
    ast.BitOr: "|",
    ast.BitXor: "^",
    ast.BitAnd: "&",
    ast.UAdd: "+",
    ast.Invert: "~",
    ast.Is: "is",
    ast.IsNot: "is not",
    ast.In: "in",
    ast.NotIn: "not in",
    ast.Add: "+",
    ast.Sub: "-",
    ast.Mult: "*",
    ast.Div: "/",
    ast.FloorDiv: "//",
    ast.Mod: "%",
}


def _describe(node: ast.AST) -> str:
    return _DESCRIPTIONS.get(type(node), type(node).__name__)


def _op_symbol(op: ast.AST) -> str:
    return _OP_SYMBOLS.get(type(op), type(op).__name__)
