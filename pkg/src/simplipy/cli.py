"""Command-line entry points: parse, analyze, trace, simplify, serve.

Exit codes: 0 success / finished, 1 diagnostics, 2 usage (missing file),
3 run ended in an error state, 4 run truncated by the step limit.
"""

from __future__ import annotations

import json
import sys

import click

from .analysis import (
    abstraction_to_json,
    analyze,
    cfg_to_dot,
    cfg_to_json,
    control_maps_to_json,
    scopes_to_json,
)
from .diagnostics import SimpliPyError
from .simplifier import simplify as run_simplify
from .syntax import parse_program, program_to_json
from .trace import History, serialize_trace, trace_to_text

EXIT_OK = 0
EXIT_DIAGNOSTICS = 1
EXIT_USAGE = 2
EXIT_ERRORED = 3
EXIT_TRUNCATED = 4


def _emit(doc: dict) -> None:
    click.echo(json.dumps(doc, indent=2, sort_keys=True))


def _fail_diagnostics(exc: SimpliPyError) -> None:
    _emit({"diagnostics": [d.to_json() for d in exc.diagnostics]})
    sys.exit(EXIT_DIAGNOSTICS)


@click.group()
def main() -> None:
    """SimpliPy: parse, analyze, trace, and serve a restricted Python subset."""


@main.command("parse")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
def cli_parse(file: str) -> None:
    """Parse FILE and print its instruction table as JSON."""
    source = _read(file)
    try:
        program = parse_program(source)
    except SimpliPyError as e:
        _fail_diagnostics(e)
    _emit(program_to_json(program))


@main.command("analyze")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--scopes", "want_scopes", is_flag=True, help="Emit lexical block information.")
@click.option("--cfg", "cfg_format", type=click.Choice(["dot", "json"]), default=None, help="Emit the control flow graph.")
@click.option("--ctf", "want_ctf", is_flag=True, help="Emit the control transfer tables (err omitted as the identity).")
@click.option("--abstract", "want_abstract", is_flag=True, help="Emit the structural abstraction.")
def cli_analyze(file: str, want_scopes: bool, cfg_format: str | None, want_ctf: bool, want_abstract: bool) -> None:
    """Validate FILE and print the requested static artifacts."""
    source = _read(file)
    try:
        program = parse_program(source)
        static = analyze(program)
    except SimpliPyError as e:
        _fail_diagnostics(e)

    if not (want_scopes or cfg_format or want_ctf or want_abstract):
        _emit(
            {
                "scopes": scopes_to_json(static.scopes),
                "ctf": control_maps_to_json(static.control),
                "abstraction": abstraction_to_json(static.abstraction),
                "cfg": cfg_to_json(static.cfg),
            }
        )
        return
    if want_scopes:
        _emit(scopes_to_json(static.scopes))
    if want_ctf:
        _emit(control_maps_to_json(static.control))
    if want_abstract:
        _emit(abstraction_to_json(static.abstraction))
    if cfg_format == "dot":
        click.echo(cfg_to_dot(static.cfg))
    elif cfg_format == "json":
        _emit(cfg_to_json(static.cfg))


@main.command("trace")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--max-steps", type=int, default=10000, envvar="SIMPLIPY_MAX_STEPS", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json", show_default=True)
def cli_trace(file: str, max_steps: int, fmt: str) -> None:
    """Run FILE to its fixed point and print the full trace."""
    source = _read(file)
    try:
        program = parse_program(source)
        history = History(program)
    except SimpliPyError as e:
        _fail_diagnostics(e)

    terminal = history.run_to_end(max_steps=max_steps)
    if fmt == "json":
        _emit(serialize_trace(history))
    else:
        click.echo(trace_to_text(history))

    status = history.current_state.status
    if not terminal:
        sys.exit(EXIT_TRUNCATED)
    if status == "errored":
        sys.exit(EXIT_ERRORED)
    sys.exit(EXIT_OK)


@main.command("simplify")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
def cli_simplify(file: str) -> None:
    """Rewrite standard Python in FILE into the subset; print the result JSON."""
    result = run_simplify(_read(file))
    _emit(result.to_json())
    if result.output is None:
        sys.exit(EXIT_DIAGNOSTICS)


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, envvar="SIMPLIPY_PORT", show_default=True)
@click.option("--static-dir", type=click.Path(file_okay=False), default=None, envvar="SIMPLIPY_STATIC_DIR")
def cli_serve(host: str, port: int, static_dir: str | None) -> None:
    """Start the debugger HTTP service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(static_dir=static_dir), host=host, port=port)


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


if __name__ == "__main__":
    main()
