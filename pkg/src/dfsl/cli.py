"""``dfsl`` command line: script + raw data in, interpretation + XML out.

Exit codes: 0 success, 1 lexical/syntax error, 2 semantic error,
3 runtime error, 4 I/O or usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from typing import List, Optional, Sequence, TextIO

from . import __version__
from .bitstream import BitSource
from .emitter import to_text, to_xml
from .errors import DataIOError, ExecutionError, LexError, ParseError, SemanticError
from .interpreter import execute
from .parser import parse, parse_error_report
from .semantics import analyze, dump_tree, elaborate

EXIT_OK = 0
EXIT_SYNTAX = 1
EXIT_SEMANTIC = 2
EXIT_RUNTIME = 3
EXIT_IO = 4


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; 2 means a semantic error here
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


@dataclass
class CliConfig:
    script_path: str
    data_path: Optional[str] = None
    hex_override: Optional[str] = None
    xml_out: Optional[str] = None
    out: Optional[str] = None
    dump_ast: bool = False
    dump_fields: bool = False
    strict: bool = False

    def __post_init__(self):
        if self.data_path is not None and self.hex_override is not None:
            raise ValueError("data_path and hex_override are mutually exclusive")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="dfsl",
        description="Interpret binary data with a DFSL layout script.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_ArgumentParser)
    run = sub.add_parser("run", help="parse data with a script",
                         description="Parse raw data according to a DFSL script.")
    run.add_argument("script", help="DFSL script file")
    src = run.add_mutually_exclusive_group()
    src.add_argument("--data", metavar="FILE", help="read data from FILE instead of the script's binding")
    src.add_argument("--hex", metavar="HEXSTRING", help="use HEXSTRING as data (4 bits per digit)")
    run.add_argument("--xml", metavar="PATH", help="write the XML parse tree to PATH")
    run.add_argument("--out", metavar="PATH", help="write text output to PATH instead of stdout")
    run.add_argument("--dump-ast", action="store_true", help="print the elaborated tree with sizes")
    run.add_argument("--dump-fields", action="store_true", help="append 'name = value' for every field")
    run.add_argument("--strict", action="store_true", help="warn when trailing data is left unread")
    return parser


def version_and_help() -> str:
    parser = build_parser()
    run_help = parser._subparsers._group_actions[0].choices["run"].format_help()
    return f"dfsl {__version__}\n\n{parser.format_help()}\n{run_help}"


def run(config: CliConfig, stdout: TextIO = None, stderr: TextIO = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr

    def fail(code: int, message: str) -> int:
        print(message, file=stderr)
        return code

    try:
        with open(config.script_path, encoding="utf-8") as fh:
            source = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        return fail(EXIT_IO, f"dfsl: cannot read script {config.script_path}: {exc}")

    name = os.path.basename(config.script_path)
    try:
        ast = parse(source)
    except (LexError, ParseError) as exc:
        return fail(EXIT_SYNTAX, parse_error_report(exc, source, name))

    try:
        table = analyze(ast)
    except SemanticError as exc:
        return fail(EXIT_SEMANTIC, f"{name}: semantic error: {exc}")

    try:
        override = None
        if config.data_path is not None:
            override = BitSource.from_file(config.data_path)
        elif config.hex_override is not None:
            override = BitSource.from_hex_string(config.hex_override)
    except DataIOError as exc:
        return fail(EXIT_IO, f"dfsl: {exc}")
    except ValueError as exc:
        return fail(EXIT_IO, f"dfsl: --hex: {exc}")

    if config.dump_ast:
        stdout.write(dump_tree(elaborate(table)))

    base_dir = os.path.dirname(os.path.abspath(config.script_path))
    try:
        report = execute(ast, table, override, base_dir=base_dir)
    except ExecutionError as exc:
        return fail(EXIT_RUNTIME, f"{name}: runtime error: {exc}")
    except DataIOError as exc:
        return fail(EXIT_IO, f"{name}: {exc}")

    if config.strict and report.unread_bits:
        print(f"{name}: warning: {report.unread_bits} trailing bit(s) of data were not read", file=stderr)

    text = to_text(report, config.dump_fields)
    try:
        if config.out:
            with open(config.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            stdout.write(text)
        if config.xml_out:
            with open(config.xml_out, "w", encoding="utf-8") as fh:
                fh.write(to_xml(report, name))
    except OSError as exc:
        return fail(EXIT_IO, f"dfsl: cannot write output: {exc}")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_IO
    except SystemExit as exc:  # --help / --version
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_IO
    config = CliConfig(
        script_path=args.script,
        data_path=args.data,
        hex_override=args.hex,
        xml_out=args.xml,
        out=args.out,
        dump_ast=args.dump_ast,
        dump_fields=args.dump_fields,
        strict=args.strict,
    )
    return run(config)


def entry_point() -> None:
    sys.exit(main())
