"""Interpreter for DFSL, a language describing the bit-level layout of binary data."""

__version__ = "0.1.0"

from .bitstream import BitCursor, BitSource, FieldBits
from .emitter import read_xml_fields, to_text, to_xml, validate_xml
from .errors import (
    DFSLError,
    DataIOError,
    ExecutionError,
    LexError,
    ParseError,
    SemanticError,
    StreamExhausted,
)
from .interpreter import NodeKind, ResultNode, RunReport, execute, run_source
from .lexer import tokenize
from .parser import parse, parse_error_report, parse_script
from .semantics import analyze, build_domain_table, detect_cycles, elaborate, propagate_sizes

__all__ = [
    "BitCursor", "BitSource", "FieldBits",
    "read_xml_fields", "to_text", "to_xml", "validate_xml",
    "DFSLError", "DataIOError", "ExecutionError", "LexError", "ParseError", "SemanticError",
    "StreamExhausted",
    "NodeKind", "ResultNode", "RunReport", "execute", "run_source",
    "tokenize", "parse", "parse_error_report", "parse_script",
    "analyze", "build_domain_table", "detect_cycles", "elaborate", "propagate_sizes",
]
