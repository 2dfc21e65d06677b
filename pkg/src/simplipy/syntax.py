"""Tokenizer, line-oriented parser, and program table for the SimpliPy subset.

A program is a total map from line numbers 1..N to instructions; line N+1 is
the end-of-program location and never holds an instruction.  Every source
line is exactly one instruction, so tokens, instructions, and diagnostics
all carry physical line numbers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .diagnostics import Diagnostic, LexError, OutOfRangeError, ParseError, error

Location = int

# Hard keywords of the host language; none may be used as an identifier.
KEYWORDS = frozenset(
    "False None True and as assert async await break class continue def del elif "
    "else except finally for from global if import in is lambda nonlocal not or "
    "pass raise return try while with yield".split()
)

UNARY_OPS = ("neg", "not")
BINARY_OPS = ("+", "-", "*", "/", "//", "%", "==", "!=", "<", "<=", ">", ">=", "and", "or")

_TWO_CHAR_OPS = ("==", "!=", "<=", ">=", "//")
_ONE_CHAR_OPS = "+-*/%<>=():,"
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER_RE = re.compile(r"\d+(?:\.\d+)?(?:[eE][+-]?\d+)?")
_ESCAPES = {"\\": "\\", "'": "'", '"': '"', "n": "\n", "t": "\t"}


# ---------------------------------------------------------------------------
# Tokens


@dataclass(frozen=True)
class Token:
    kind: str  # "kw" | "id" | "int" | "float" | "str" | "op" | "comment"
    text: str
    line: int
    col: int
    value: object = None


@dataclass(frozen=True)
class LineTokens:
    line: int
    indent: int
    tokens: tuple[Token, ...]

    @property
    def blank(self) -> bool:
        return not self.tokens


def tokenize(source: str, indent_width: int | None = None) -> list[LineTokens]:
    """Split source into per-line token lists with indentation levels.

    Indentation must use spaces; the unit width is `indent_width` when given,
    otherwise it is taken from the first indented line (default 4).
    """
    lines = source.splitlines()
    diags: list[Diagnostic] = []

    leading: list[int] = []
    for idx, text in enumerate(lines, start=1):
        n = 0
        while n < len(text) and text[n] in " \t":
            if text[n] == "\t":
                diags.append(error(idx, n + 1, "lex.tab-indent", "tab character in indentation; use spaces"))
                break
            n += 1
        leading.append(n)

    unit = indent_width
    if unit is None:
        for idx, text in enumerate(lines, start=1):
            stripped = text.strip()
            if leading[idx - 1] > 0 and stripped and not stripped.startswith("#"):
                unit = leading[idx - 1]
                break
    if not unit or unit <= 0:
        unit = 4

    result: list[LineTokens] = []
    for idx, text in enumerate(lines, start=1):
        stripped = text.strip()
        spaces = leading[idx - 1]
        if stripped and not stripped.startswith("#") and spaces % unit != 0:
            diags.append(error(idx, spaces + 1, "lex.indent", f"indentation of {spaces} spaces is not a multiple of {unit}"))
        level = spaces // unit
        tokens, line_diags = _scan_line(text, idx, spaces)
        diags.extend(line_diags)
        result.append(LineTokens(idx, level, tuple(tokens)))

    if diags:
        raise LexError(diags)
    return result


def _scan_line(text: str, line: int, start: int) -> tuple[list[Token], list[Diagnostic]]:
    tokens: list[Token] = []
    diags: list[Diagnostic] = []
    i = start
    while i < len(text):
        ch = text[i]
        if ch in " \t":
            i += 1
            continue
        col = i + 1
        if ch == "#":
            tokens.append(Token("comment", text[i:], line, col))
            break
        if m := _IDENT_RE.match(text, i):
            word = m.group()
            kind = "kw" if word in KEYWORDS else "id"
            tokens.append(Token(kind, word, line, col))
            i = m.end()
            continue
        if ch.isascii() and ch.isdigit():
            m = _NUMBER_RE.match(text, i)
            assert m is not None
            num = m.group()
            end = m.end()
            if end < len(text) and (text[end].isalnum() or text[end] == "_"):
                diags.append(error(line, col, "lex.number", f"invalid number literal starting at {num!r}"))
                break
            if "." in num or "e" in num or "E" in num:
                tokens.append(Token("float", num, line, col, float(num)))
            else:
                tokens.append(Token("int", num, line, col, int(num)))
            i = end
            continue
        if ch in "'\"":
            tok, i, err_d = _scan_string(text, line, i)
            if err_d is not None:
                diags.append(err_d)
                break
            tokens.append(tok)
            continue
        two = text[i : i + 2]
        if two in _TWO_CHAR_OPS:
            tokens.append(Token("op", two, line, col))
            i += 2
            continue
        if ch in _ONE_CHAR_OPS:
            tokens.append(Token("op", ch, line, col))
            i += 1
            continue
        diags.append(error(line, col, "lex.char", f"unexpected character {ch!r}"))
        break
    return tokens, diags


def _scan_string(text: str, line: int, start: int) -> tuple[Token | None, int, Diagnostic | None]:
    quote = text[start]
    i = start + 1
    buf: list[str] = []
    while i < len(text):
        c = text[i]
        if c == "\\":
            if i + 1 >= len(text):
                return None, i, error(line, start + 1, "lex.string", "unterminated string literal")
            esc = text[i + 1]
            if esc not in _ESCAPES:
                return None, i, error(line, i + 2, "lex.escape", f"unsupported escape sequence '\\{esc}'")
            buf.append(_ESCAPES[esc])
            i += 2
        elif c == quote:
            return Token("str", text[start : i + 1], line, start + 1, "".join(buf)), i + 1, None
        else:
            buf.append(c)
            i += 1
    return None, i, error(line, start + 1, "lex.string", "unterminated string literal")


# ---------------------------------------------------------------------------
# Expressions


@dataclass(frozen=True)
class Const:
    value: object  # int | float | bool | str | None


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str  # "neg" | "not"
    operand: "Exp"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Exp"
    right: "Exp"


Exp = Const | Var | Unary | Binary


# ---------------------------------------------------------------------------
# Instructions


@dataclass(frozen=True)
class Pass:
    pass


@dataclass(frozen=True)
class Global:
    names: tuple[str, ...]


@dataclass(frozen=True)
class Nonlocal:
    names: tuple[str, ...]


@dataclass(frozen=True)
class Break:
    pass


@dataclass(frozen=True)
class Continue:
    pass


@dataclass(frozen=True)
class ExpAssign:
    target: str
    rhs: Exp


@dataclass(frozen=True)
class CallAssign:
    target: str
    callee: str
    args: tuple[Exp, ...]


@dataclass(frozen=True)
class If:
    cond: Exp


@dataclass(frozen=True)
class Else:
    pass


@dataclass(frozen=True)
class While:
    cond: Exp


@dataclass(frozen=True)
class Def:
    name: str
    params: tuple[str, ...]


@dataclass(frozen=True)
class Return:
    rhs: Exp


Instr = Pass | Global | Nonlocal | Break | Continue | ExpAssign | CallAssign | If | Else | While | Def | Return


@dataclass(frozen=True)
class Program:
    instrs: dict[Location, Instr]
    n: int
    indent: dict[Location, int]
    source_lines: tuple[str, ...]

    @property
    def end(self) -> Location:
        """The end-of-program location N+1."""
        return self.n + 1

    def instruction_at(self, loc: Location) -> Instr:
        return instruction_at(self, loc)


def instruction_at(program: Program, loc: Location) -> Instr:
    if not 1 <= loc <= program.n:
        raise OutOfRangeError(f"no instruction at location {loc} (valid range 1..{program.n})")
    return program.instrs[loc]


def category(instr: Instr) -> str:
    return type(instr).__name__


def category_at(program: Program, loc: Location) -> str:
    if loc == program.end:
        return "End"
    return category(instruction_at(program, loc))


# ---------------------------------------------------------------------------
# Statement tree (block structure)


@dataclass(frozen=True)
class SimpleS:
    loc: Location


@dataclass(frozen=True)
class IfS:
    loc: Location
    then: tuple["Stmt", ...]
    else_loc: Location | None
    orelse: tuple["Stmt", ...]


@dataclass(frozen=True)
class WhileS:
    loc: Location
    body: tuple["Stmt", ...]


@dataclass(frozen=True)
class DefS:
    loc: Location
    body: tuple["Stmt", ...]


Stmt = SimpleS | IfS | WhileS | DefS


def statement_tree(program: Program) -> tuple[Stmt, ...]:
    """Group the flat instruction table into nested statements by indentation."""
    return _build_tree(program.instrs, program.indent, program.n)


def _build_tree(instrs: dict[int, Instr], indent: dict[int, int], n: int) -> tuple[Stmt, ...]:
    def block(start: int, depth: int) -> tuple[list[Stmt], int]:
        stmts: list[Stmt] = []
        i = start
        while i <= n and indent[i] == depth:
            instr = instrs[i]
            if isinstance(instr, If):
                body, j = header_body(i, depth)
                else_loc = None
                orelse: list[Stmt] = []
                if j <= n and indent[j] == depth and isinstance(instrs[j], Else):
                    else_loc = j
                    orelse, j = header_body(j, depth)
                stmts.append(IfS(i, tuple(body), else_loc, tuple(orelse)))
                i = j
            elif isinstance(instr, While):
                body, j = header_body(i, depth)
                if j <= n and indent[j] == depth and isinstance(instrs[j], Else):
                    raise ParseError([error(j, 1, "parse.while-else", "'else' clause on 'while' is not supported")])
                stmts.append(WhileS(i, tuple(body)))
                i = j
            elif isinstance(instr, Def):
                body, j = header_body(i, depth)
                stmts.append(DefS(i, tuple(body)))
                i = j
            elif isinstance(instr, Else):
                raise ParseError([error(i, 1, "parse.else", "'else' without a matching 'if' at the same depth")])
            else:
                stmts.append(SimpleS(i))
                i += 1
        if i <= n and indent[i] > depth:
            raise ParseError([error(i, 1, "parse.indent", "unexpected indent")])
        return stmts, i

    def header_body(header: int, depth: int) -> tuple[list[Stmt], int]:
        start = header + 1
        if start > n or indent[start] != depth + 1:
            if start <= n and indent[start] > depth + 1:
                raise ParseError([error(start, 1, "parse.indent", "block indented by more than one level")])
            raise ParseError([error(header, 1, "parse.empty-block", "block headed by this line is empty")])
        return block(start, depth + 1)

    if n == 0:
        return ()
    if indent[1] != 0:
        raise ParseError([error(1, 1, "parse.indent", "first line must not be indented")])
    stmts, i = block(1, 0)
    if i <= n:
        raise ParseError([error(i, 1, "parse.indent", "unexpected indent")])
    return tuple(stmts)


# ---------------------------------------------------------------------------
# Parser


class _LineError(Exception):
    def __init__(self, col: int, code: str, message: str):
        self.col = col
        self.code = code
        self.message = message
        super().__init__(message)


def parse_program(source: str, indent_width: int | None = None) -> Program:
    """Parse source text into a Program, or raise with all collected diagnostics.

    Each physical line must be exactly one instruction; blank lines and
    comments are rejected (the simplifier strips them and renumbers).
    """
    lexed = tokenize(source, indent_width)
    diags: list[Diagnostic] = []
    instrs: dict[int, Instr] = {}
    indent: dict[int, int] = {}

    for lt in lexed:
        indent[lt.line] = lt.indent
        if lt.blank:
            diags.append(error(lt.line, 1, "parse.blank-line", "blank line not allowed; run the simplifier to strip it"))
            continue
        if any(t.kind == "comment" for t in lt.tokens):
            col = next(t.col for t in lt.tokens if t.kind == "comment")
            diags.append(error(lt.line, col, "parse.comment", "comment not allowed; run the simplifier to strip it"))
            continue
        try:
            instrs[lt.line] = _parse_line(lt.tokens)
        except _LineError as e:
            diags.append(error(lt.line, e.col, e.code, e.message))

    if diags:
        raise ParseError(diags)

    program = Program(instrs, len(lexed), indent, tuple(source.splitlines()))
    statement_tree(program)  # validates block structure, raises ParseError
    return program


def _parse_line(tokens: tuple[Token, ...]) -> Instr:
    t0 = tokens[0]
    if t0.kind == "kw":
        word = t0.text
        if word == "pass":
            _expect_end(tokens, 1)
            return Pass()
        if word == "break":
            _expect_end(tokens, 1)
            return Break()
        if word == "continue":
            _expect_end(tokens, 1)
            return Continue()
        if word in ("global", "nonlocal"):
            names = _parse_namelist(tokens, 1)
            return Global(names) if word == "global" else Nonlocal(names)
        if word == "return":
            if len(tokens) == 1:
                raise _LineError(t0.col, "parse.return", "'return' requires a value; the simplifier rewrites bare returns")
            rhs = _parse_exp_tokens(tokens[1:])
            return Return(rhs)
        if word == "if":
            return If(_parse_header_cond(tokens))
        if word == "while":
            return While(_parse_header_cond(tokens))
        if word == "else":
            if len(tokens) != 2 or not _is_op(tokens[1], ":"):
                raise _LineError(t0.col, "parse.else", "'else' must be followed by ':' only")
            return Else()
        if word == "def":
            return _parse_def(tokens)
        if word == "elif":
            raise _LineError(t0.col, "parse.elif", "'elif' not supported; the simplifier desugars it into nested if/else")
        if word == "lambda":
            raise _LineError(t0.col, "parse.lambda", "lambda unsupported; bind a named def instead")
        raise _LineError(t0.col, "parse.stmt", f"keyword '{word}' is not part of the subset")
    if t0.kind == "id":
        if len(tokens) >= 2 and _is_op(tokens[1], "("):
            raise _LineError(t0.col, "parse.bare-call", "call statement must assign its result; the simplifier rewrites it")
        if len(tokens) < 2 or not _is_op(tokens[1], "="):
            raise _LineError(t0.col, "parse.stmt", "expected '=' after identifier")
        if len(tokens) == 2:
            raise _LineError(tokens[1].col, "parse.exp", "missing expression after '='")
        rhs_tokens = tokens[2:]
        call = _match_whole_call(rhs_tokens)
        if call is not None:
            callee, args = call
            return CallAssign(t0.text, callee, args)
        return ExpAssign(t0.text, _parse_exp_tokens(rhs_tokens))
    raise _LineError(t0.col, "parse.stmt", f"expected a statement, found {t0.text!r}")


def _is_op(tok: Token, text: str) -> bool:
    return tok.kind == "op" and tok.text == text


def _expect_end(tokens: tuple[Token, ...], pos: int) -> None:
    if len(tokens) > pos:
        t = tokens[pos]
        raise _LineError(t.col, "parse.trailing", f"unexpected {t.text!r} after statement")


def _parse_namelist(tokens: tuple[Token, ...], pos: int) -> tuple[str, ...]:
    names: list[str] = []
    while True:
        if pos >= len(tokens) or tokens[pos].kind != "id":
            col = tokens[pos].col if pos < len(tokens) else tokens[-1].col
            raise _LineError(col, "parse.namelist", "expected identifier")
        names.append(tokens[pos].text)
        pos += 1
        if pos == len(tokens):
            return tuple(names)
        if not _is_op(tokens[pos], ","):
            raise _LineError(tokens[pos].col, "parse.namelist", f"expected ',' between names, found {tokens[pos].text!r}")
        pos += 1


def _parse_header_cond(tokens: tuple[Token, ...]) -> Exp:
    if not _is_op(tokens[-1], ":"):
        raise _LineError(tokens[-1].col, "parse.colon", "compound statement header must end with ':'")
    if len(tokens) < 3:
        raise _LineError(tokens[0].col, "parse.exp", "missing condition expression")
    return _parse_exp_tokens(tokens[1:-1])


def _parse_def(tokens: tuple[Token, ...]) -> Instr:
    if not _is_op(tokens[-1], ":"):
        raise _LineError(tokens[-1].col, "parse.colon", "def header must end with ':'")
    if len(tokens) < 5 or tokens[1].kind != "id" or not _is_op(tokens[2], "(") or not _is_op(tokens[-2], ")"):
        col = tokens[1].col if len(tokens) > 1 else tokens[0].col
        raise _LineError(col, "parse.def", "expected 'def name(params):'")
    name = tokens[1].text
    params: list[str] = []
    inner = tokens[3:-2]
    pos = 0
    while pos < len(inner):
        if inner[pos].kind != "id":
            raise _LineError(inner[pos].col, "parse.def", "parameters must be plain identifiers")
        params.append(inner[pos].text)
        pos += 1
        if pos < len(inner):
            if not _is_op(inner[pos], ","):
                raise _LineError(inner[pos].col, "parse.def", f"expected ',' between parameters, found {inner[pos].text!r}")
            pos += 1
            if pos == len(inner):
                raise _LineError(inner[-1].col, "parse.def", "trailing comma in parameter list")
    return Def(name, tuple(params))


def _match_whole_call(tokens: tuple[Token, ...]) -> tuple[str, tuple[Exp, ...]] | None:
    """Recognize a right-hand side that is exactly `callee(arg, ...)`."""
    if len(tokens) < 3 or tokens[0].kind != "id" or not _is_op(tokens[1], "("):
        return None
    depth = 0
    close = -1
    for i, t in enumerate(tokens[1:], start=1):
        if _is_op(t, "("):
            depth += 1
        elif _is_op(t, ")"):
            depth -= 1
            if depth == 0:
                close = i
                break
    if close != len(tokens) - 1:
        return None
    inner = tokens[2:close]
    args: list[Exp] = []
    if inner:
        for group in _split_top_commas(inner):
            if not group:
                raise _LineError(tokens[0].col, "parse.call", "empty argument")
            args.append(_parse_exp_tokens(tuple(group)))
    return tokens[0].text, tuple(args)


def _split_top_commas(tokens: tuple[Token, ...]) -> list[list[Token]]:
    groups: list[list[Token]] = [[]]
    depth = 0
    for t in tokens:
        if _is_op(t, "("):
            depth += 1
        elif _is_op(t, ")"):
            depth -= 1
        if depth == 0 and _is_op(t, ","):
            groups.append([])
        else:
            groups[-1].append(t)
    return groups


class _ExpParser:
    """Recursive-descent expression parser; expressions never contain calls."""

    def __init__(self, tokens: tuple[Token, ...]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def parse(self) -> Exp:
        e = self.or_exp()
        t = self.peek()
        if t is not None:
            raise _LineError(t.col, "parse.exp", f"unexpected {t.text!r} in expression")
        return e

    def or_exp(self) -> Exp:
        e = self.and_exp()
        while (t := self.peek()) is not None and t.kind == "kw" and t.text == "or":
            self.advance()
            e = Binary("or", e, self.and_exp())
        return e

    def and_exp(self) -> Exp:
        e = self.not_exp()
        while (t := self.peek()) is not None and t.kind == "kw" and t.text == "and":
            self.advance()
            e = Binary("and", e, self.not_exp())
        return e

    def not_exp(self) -> Exp:
        t = self.peek()
        if t is not None and t.kind == "kw" and t.text == "not":
            self.advance()
            return Unary("not", self.not_exp())
        return self.comparison()

    def comparison(self) -> Exp:
        e = self.arith()
        t = self.peek()
        if t is not None and t.kind == "op" and t.text in ("==", "!=", "<", "<=", ">", ">="):
            op = self.advance().text
            right = self.arith()
            nxt = self.peek()
            if nxt is not None and nxt.kind == "op" and nxt.text in ("==", "!=", "<", "<=", ">", ">="):
                raise _LineError(nxt.col, "parse.chained-cmp", "chained comparisons are not supported")
            return Binary(op, e, right)
        return e

    def arith(self) -> Exp:
        e = self.term()
        while (t := self.peek()) is not None and t.kind == "op" and t.text in ("+", "-"):
            op = self.advance().text
            e = Binary(op, e, self.term())
        return e

    def term(self) -> Exp:
        e = self.unary()
        while (t := self.peek()) is not None and t.kind == "op" and t.text in ("*", "/", "//", "%"):
            op = self.advance().text
            e = Binary(op, e, self.unary())
        return e

    def unary(self) -> Exp:
        t = self.peek()
        if t is not None and t.kind == "op" and t.text == "-":
            self.advance()
            return Unary("neg", self.unary())
        return self.atom()

    def atom(self) -> Exp:
        t = self.peek()
        if t is None:
            last = self.tokens[-1] if self.tokens else None
            raise _LineError(last.col if last else 1, "parse.exp", "unexpected end of expression")
        if t.kind == "int" or t.kind == "float" or t.kind == "str":
            self.advance()
            return Const(t.value)
        if t.kind == "kw":
            if t.text == "True":
                self.advance()
                return Const(True)
            if t.text == "False":
                self.advance()
                return Const(False)
            if t.text == "None":
                self.advance()
                return Const(None)
            if t.text == "lambda":
                raise _LineError(t.col, "parse.lambda", "lambda unsupported; bind a named def instead")
            raise _LineError(t.col, "parse.exp", f"unexpected keyword {t.text!r} in expression")
        if t.kind == "id":
            self.advance()
            nxt = self.peek()
            if nxt is not None and _is_op(nxt, "("):
                raise _LineError(nxt.col, "parse.call-in-exp", "call not allowed inside expression")
            return Var(t.text)
        if _is_op(t, "("):
            self.advance()
            e = self.or_exp()
            closing = self.peek()
            if closing is None or not _is_op(closing, ")"):
                raise _LineError(t.col, "parse.paren", "unbalanced parenthesis")
            self.advance()
            return e
        raise _LineError(t.col, "parse.exp", f"unexpected {t.text!r} in expression")


def _parse_exp_tokens(tokens: tuple[Token, ...]) -> Exp:
    return _ExpParser(tuple(tokens)).parse()


# ---------------------------------------------------------------------------
# Rendering (canonical source text)

_PREC = {"or": 1, "and": 2, "==": 4, "!=": 4, "<": 4, "<=": 4, ">": 4, ">=": 4, "+": 5, "-": 5, "*": 6, "/": 6, "//": 6, "%": 6}
_PREC_NOT = 3
_PREC_NEG = 7
_PREC_ATOM = 9


def _prec(e: Exp) -> int:
    if isinstance(e, Binary):
        return _PREC[e.op]
    if isinstance(e, Unary):
        return _PREC_NOT if e.op == "not" else _PREC_NEG
    return _PREC_ATOM


def render_exp(e: Exp) -> str:
    if isinstance(e, Const):
        return _render_const(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Unary):
        mine = _PREC_NOT if e.op == "not" else _PREC_NEG
        inner = render_exp(e.operand)
        if _prec(e.operand) < mine:
            inner = f"({inner})"
        return f"not {inner}" if e.op == "not" else f"-{inner}"
    if isinstance(e, Binary):
        mine = _PREC[e.op]
        left = render_exp(e.left)
        right = render_exp(e.right)
        if _prec(e.left) < mine:
            left = f"({left})"
        if _prec(e.right) <= mine:
            right = f"({right})"
        return f"{left} {e.op} {right}"
    raise TypeError(f"not an expression: {e!r}")


def _render_const(v: object) -> str:
    if v is None:
        return "None"
    if v is True:
        return "True"
    if v is False:
        return "False"
    if isinstance(v, str):
        out = v.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t")
        return f'"{out}"'
    return repr(v)


def render_instr(instr: Instr) -> str:
    if isinstance(instr, Pass):
        return "pass"
    if isinstance(instr, Break):
        return "break"
    if isinstance(instr, Continue):
        return "continue"
    if isinstance(instr, Global):
        return "global " + ", ".join(instr.names)
    if isinstance(instr, Nonlocal):
        return "nonlocal " + ", ".join(instr.names)
    if isinstance(instr, ExpAssign):
        return f"{instr.target} = {render_exp(instr.rhs)}"
    if isinstance(instr, CallAssign):
        args = ", ".join(render_exp(a) for a in instr.args)
        return f"{instr.target} = {instr.callee}({args})"
    if isinstance(instr, If):
        return f"if {render_exp(instr.cond)}:"
    if isinstance(instr, Else):
        return "else:"
    if isinstance(instr, While):
        return f"while {render_exp(instr.cond)}:"
    if isinstance(instr, Def):
        return f"def {instr.name}({', '.join(instr.params)}):"
    if isinstance(instr, Return):
        return f"return {render_exp(instr.rhs)}"
    raise TypeError(f"not an instruction: {instr!r}")


def render_program(program: Program, indent_width: int = 4) -> str:
    lines = []
    for loc in range(1, program.n + 1):
        lines.append(" " * (indent_width * program.indent[loc]) + render_instr(program.instrs[loc]))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# JSON encodings


def exp_to_json(e: Exp) -> dict:
    if isinstance(e, Const):
        return {"kind": "Const", "value": e.value}
    if isinstance(e, Var):
        return {"kind": "Var", "name": e.name}
    if isinstance(e, Unary):
        return {"kind": "Unary", "op": e.op, "operand": exp_to_json(e.operand)}
    if isinstance(e, Binary):
        return {"kind": "Binary", "op": e.op, "left": exp_to_json(e.left), "right": exp_to_json(e.right)}
    raise TypeError(f"not an expression: {e!r}")


def instr_to_json(instr: Instr) -> dict:
    kind = category(instr)
    if isinstance(instr, (Pass, Break, Continue, Else)):
        return {"kind": kind}
    if isinstance(instr, (Global, Nonlocal)):
        return {"kind": kind, "names": list(instr.names)}
    if isinstance(instr, ExpAssign):
        return {"kind": kind, "target": instr.target, "rhs": exp_to_json(instr.rhs)}
    if isinstance(instr, CallAssign):
        return {"kind": kind, "target": instr.target, "callee": instr.callee, "args": [exp_to_json(a) for a in instr.args]}
    if isinstance(instr, If):
        return {"kind": kind, "cond": exp_to_json(instr.cond)}
    if isinstance(instr, While):
        return {"kind": kind, "cond": exp_to_json(instr.cond)}
    if isinstance(instr, Def):
        return {"kind": kind, "name": instr.name, "params": list(instr.params)}
    if isinstance(instr, Return):
        return {"kind": kind, "rhs": exp_to_json(instr.rhs)}
    raise TypeError(f"not an instruction: {instr!r}")


def program_to_json(program: Program) -> dict:
    return {
        "n": program.n,
        "instrs": {str(loc): instr_to_json(program.instrs[loc]) for loc in range(1, program.n + 1)},
        "indent": {str(loc): program.indent[loc] for loc in range(1, program.n + 1)},
        "sourceLines": list(program.source_lines),
    }
