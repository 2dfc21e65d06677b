"""Structured diagnostics and the exception hierarchy shared across the package."""

from __future__ import annotations

from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    line: int
    column: int
    code: str
    message: str

    def to_json(self) -> dict:
        return asdict(self)


def error(line: int, column: int, code: str, message: str) -> Diagnostic:
    return Diagnostic("error", line, column, code, message)


class SimpliPyError(Exception):
    """Base class for errors that carry source diagnostics."""

    def __init__(self, diagnostics: list[Diagnostic] | tuple[Diagnostic, ...]):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(f"line {d.line}: {d.message}" for d in self.diagnostics) or "error")


class LexError(SimpliPyError):
    pass


class ParseError(SimpliPyError):
    pass


class StaticError(SimpliPyError):
    pass


class OutOfRangeError(IndexError):
    """Raised when asking for an instruction at a location that holds none."""
