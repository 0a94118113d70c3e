"""Recursive-descent parser from a token list to a :class:`ScriptAst`."""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple, Union

from . import nodes as n
from .errors import DFSLError, LexError, ParseError
from .lexer import tokenize
from .tokens import SourceSpan, Token, TokenKind

_READ_VERBS = {
    "getbit": n.Verb.GET_BIT,
    "seebit": n.Verb.SEE_BIT,
    "getbyte": n.Verb.GET_BYTES,
    "getbytes": n.Verb.GET_BYTES,
    "seebyte": n.Verb.SEE_BYTES,
    "seebytes": n.Verb.SEE_BYTES,
}

# binary operator precedence, loosest first
_BINARY_LEVELS: Tuple[Tuple[str, ...], ...] = (
    ("||",),
    ("&&",),
    ("==", "!="),
    ("<", "<=", ">", ">="),
    ("+", "-"),
    ("*", "/", "%"),
)
_ADDITIVE_LEVEL = 4


class Parser:
    def __init__(self, tokens: Sequence[Token]):
        self.toks = list(tokens)
        self.pos = 0

    # -- token helpers ------------------------------------------------------

    @property
    def tok(self) -> Optional[Token]:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def _span(self) -> SourceSpan:
        if self.tok is not None:
            return self.tok.span
        return self.toks[-1].span if self.toks else SourceSpan(1, 1, 0)

    def error(self, expected: str) -> ParseError:
        tok = self.tok
        found = "end of input" if tok is None else repr(tok.lexeme())
        return ParseError(f"expected {expected}, found {found}", self._span(), expected)

    def at_op(self, *ops: str) -> bool:
        return self.tok is not None and self.tok.is_op(*ops)

    def at_word(self, *words: str) -> bool:
        return self.tok is not None and self.tok.is_word(*words)

    def advance(self) -> Token:
        tok = self.tok
        if tok is None:
            raise self.error("more input")
        self.pos += 1
        return tok

    def expect_op(self, op: str) -> Token:
        if not self.at_op(op):
            raise self.error(repr(op))
        return self.advance()

    def expect_word(self, word: str) -> Token:
        if not self.at_word(word):
            raise self.error(repr(word))
        return self.advance()

    def expect_kind(self, kind: TokenKind, what: str) -> Token:
        if self.tok is None or self.tok.kind is not kind:
            raise self.error(what)
        return self.advance()

    def skip_semicolon(self) -> None:
        if self.at_op(";"):
            self.advance()

    # -- top level ----------------------------------------------------------

    def parse_script(self) -> n.ScriptAst:
        items: List[n.TopLevelItem] = []
        while self.tok is not None:
            items.append(self.top_level_item())
        return n.ScriptAst(tuple(items))

    def top_level_item(self) -> n.TopLevelItem:
        name_tok = self.expect_kind(TokenKind.DOMAIN, "a domain name ($name)")
        if self.at_op(":="):
            self.advance()
            return self.domain_def(name_tok)
        if self.at_op("="):
            self.advance()
            init = self.binding_init()
            self.expect_op(";")
            return n.DomainBinding(name_tok.text, init, name_tok.span)
        raise self.error("'=' or ':='")

    def binding_init(self) -> Union[n.NumberLit, n.GetFile]:
        tok = self.tok
        if tok is not None and tok.kind is TokenKind.NUMBER and tok.hex_digit_count:
            self.advance()
            return n.NumberLit(tok.number_value, tok.hex_digit_count, tok.span)
        if self.at_word("getfile"):
            self.advance()
            self.expect_op("<")
            path = self.expect_kind(TokenKind.STRING, "a quoted file path")
            self.expect_op(">")
            return n.GetFile(path.text, tok.span)
        raise self.error("a hexadecimal literal or getFile")

    def domain_def(self, name_tok: Token) -> n.DomainDef:
        self.expect_op("{")
        body: List[n.BodyItem] = []
        while not self.at_op("}"):
            if self.tok is None:
                raise self.error("'}'")
            body.append(self.body_item())
        self.advance()
        where_block = None
        if self.at_word("where"):
            self.advance()
            where_block = self.braced_block()
        self.skip_semicolon()
        return n.DomainDef(name_tok.text, tuple(body), where_block, name_tok.span)

    def body_item(self) -> n.BodyItem:
        tok = self.tok
        if tok.kind is TokenKind.SUBDOMAIN and self.pos + 1 < len(self.toks) and self.toks[self.pos + 1].is_op("="):
            self.pos += 2
            if self.tok is not None and self.tok.kind is TokenKind.DOMAIN:
                ref = self.advance()
                self.expect_op(";")
                return n.FieldStmt(tok.text, n.DomainRef(ref.text, ref.span), tok.span)
            expr = self.expr()
            self.expect_op(";")
            if isinstance(expr, n.ReadCommand):
                return n.FieldStmt(tok.text, expr, tok.span)
            return n.Assign(tok.text, expr, tok.span)
        return self.statement()

    # -- statements ---------------------------------------------------------

    def braced_block(self) -> Tuple[n.Stmt, ...]:
        self.expect_op("{")
        stmts = []
        while not self.at_op("}"):
            if self.tok is None:
                raise self.error("'}'")
            stmts.append(self.statement())
        self.advance()
        return tuple(stmts)

    def block(self) -> Tuple[n.Stmt, ...]:
        if self.at_op("{"):
            return self.braced_block()
        return (self.statement(),)

    def statement(self) -> n.Stmt:
        tok = self.tok
        if tok is None:
            raise self.error("a statement")
        if tok.kind is TokenKind.WORD:
            handler = getattr(self, "stmt_" + tok.text, None)
            if handler is not None:
                self.advance()
                return handler(tok)
        if tok.is_op(";"):
            # empty statement
            self.advance()
            return n.ExprStmt(n.NumberLit(0), tok.span)
        stmt = self.simple_statement()
        self.expect_op(";")
        return stmt

    def simple_statement(self) -> n.Stmt:
        tok = self.tok
        if tok is not None and tok.kind is TokenKind.SUBDOMAIN and self.pos + 1 < len(self.toks) \
                and self.toks[self.pos + 1].is_op("="):
            self.pos += 2
            return n.Assign(tok.text, self.expr(), tok.span)
        return n.ExprStmt(self.expr(), tok.span if tok else self._span())

    def stmt_print(self, tok: Token, newline: bool = False) -> n.Stmt:
        self.expect_op("(")
        args = []
        if not self.at_op(")"):
            args.append(self.expr())
            while self.at_op(","):
                self.advance()
                args.append(self.expr())
        self.expect_op(")")
        self.expect_op(";")
        return n.Print(tuple(args), newline, tok.span)

    def stmt_println(self, tok: Token) -> n.Stmt:
        return self.stmt_print(tok, newline=True)

    def _paren_expr(self) -> n.Expr:
        self.expect_op("(")
        e = self.expr()
        self.expect_op(")")
        return e

    def stmt_if(self, tok: Token) -> n.Stmt:
        cond = self._paren_expr()
        then_block = self.block()
        else_block = None
        if self.at_word("else"):
            self.advance()
            else_block = self.block()
        self.skip_semicolon()
        return n.If(cond, then_block, else_block, tok.span)

    def stmt_switch(self, tok: Token) -> n.Stmt:
        scrutinee = self._paren_expr()
        self.expect_op("{")
        cases: List[n.Case] = []
        default_block = None
        while not self.at_op("}"):
            if self.at_word("case"):
                self.advance()
                value = self.expr()
                self.expect_op(":")
                block, has_break = self._case_body()
                cases.append(n.Case(value, block, has_break))
            elif self.at_word("default"):
                if default_block is not None:
                    raise ParseError("duplicate default label", self._span(), "'case' or '}'")
                self.advance()
                self.expect_op(":")
                # a break at the end of default only ends the switch
                default_block, _ = self._case_body()
            else:
                raise self.error("'case', 'default' or '}'")
        self.advance()
        self.skip_semicolon()
        return n.Switch(scrutinee, tuple(cases), default_block, tok.span)

    def _case_body(self) -> Tuple[Tuple[n.Stmt, ...], bool]:
        stmts: List[n.Stmt] = []
        while not (self.at_word("case", "default") or self.at_op("}")):
            if self.tok is None:
                raise self.error("'}'")
            stmts.append(self.statement())
            if isinstance(stmts[-1], n.Break):
                stmts.pop()
                # anything after a break is unreachable until the next label
                while not (self.at_word("case", "default") or self.at_op("}")):
                    if self.tok is None:
                        raise self.error("'}'")
                    self.statement()
                return tuple(stmts), True
        return tuple(stmts), False

    def stmt_while(self, tok: Token) -> n.Stmt:
        cond = self._paren_expr()
        block = self.block()
        self.skip_semicolon()
        return n.While(cond, block, tok.span)

    def stmt_do(self, tok: Token) -> n.Stmt:
        block = self.block()
        self.expect_word("while")
        cond = self._paren_expr()
        self.expect_op(";")
        return n.DoWhile(block, cond, tok.span)

    def stmt_for(self, tok: Token) -> n.Stmt:
        self.expect_op("(")
        init = None if self.at_op(";") else self.simple_statement()
        self.expect_op(";")
        cond = None if self.at_op(";") else self.expr()
        self.expect_op(";")
        step = None if self.at_op(")") else self.simple_statement()
        self.expect_op(")")
        block = self.block()
        self.skip_semicolon()
        return n.For(init, cond, step, block, tok.span)

    def stmt_break(self, tok: Token) -> n.Stmt:
        self.expect_op(";")
        return n.Break(tok.span)

    def stmt_continue(self, tok: Token) -> n.Stmt:
        self.expect_op(";")
        return n.Continue(tok.span)

    # -- expressions --------------------------------------------------------

    def expr(self) -> n.Expr:
        return self.binary(0)

    def binary(self, level: int) -> n.Expr:
        if level == len(_BINARY_LEVELS):
            return self.unary()
        ops = _BINARY_LEVELS[level]
        lhs = self.binary(level + 1)
        while self.tok is not None and self.tok.kind is TokenKind.OPERATOR and self.tok.text in ops:
            op = self.advance()
            rhs = self.binary(level + 1)
            lhs = n.BinaryOp(op.text, lhs, rhs, op.span)
        return lhs

    def unary(self) -> n.Expr:
        if self.at_op("!", "-", "+"):
            op = self.advance()
            return n.UnaryOp(op.text, self.unary(), op.span)
        return self.primary()

    def primary(self) -> n.Expr:
        tok = self.tok
        if tok is None:
            raise self.error("an expression")
        if tok.kind is TokenKind.NUMBER:
            self.advance()
            return n.NumberLit(tok.number_value, tok.hex_digit_count, tok.span)
        if tok.kind is TokenKind.STRING:
            self.advance()
            return n.StringLit(tok.text, tok.span)
        if tok.kind is TokenKind.SUBDOMAIN:
            self.advance()
            return n.SubDomainRef(tok.text, tok.span)
        if tok.is_op("("):
            return self._paren_expr()
        if tok.kind is TokenKind.WORD and tok.text in _READ_VERBS:
            self.advance()
            return self.read_command(tok)
        if tok.kind is TokenKind.DOMAIN:
            raise ParseError("a domain reference is only allowed as a field's right-hand side",
                             tok.span, "an expression")
        raise self.error("an expression")

    def _starts_operand(self) -> bool:
        tok = self.tok
        if tok is None:
            return False
        if tok.kind in (TokenKind.NUMBER, TokenKind.SUBDOMAIN):
            return True
        if tok.kind is TokenKind.WORD:
            return tok.text in _READ_VERBS
        return tok.is_op("(")

    def _operand(self) -> n.Expr:
        # operands bind at additive level: "getByte (%ihl - 5) * 4" reads (ihl-5)*4 bytes
        return self.binary(_ADDITIVE_LEVEL)

    def read_command(self, verb_tok: Token) -> n.ReadCommand:
        verb = _READ_VERBS[verb_tok.text]
        is_bit = verb.unit_bits == 1
        if self.at_op("@"):
            if not is_bit:
                raise ParseError(f"{verb_tok.text} does not accept '@position'", self._span(), "a count")
            self.advance()
            position = self._operand()
            count = None
            if self.at_op(","):
                self.advance()
                count = self._operand()
            return n.ReadCommand(verb, n.At(position, count), verb_tok.span)
        if not self._starts_operand():
            return n.ReadCommand(verb, n.Count(None), verb_tok.span)
        first = self._operand()
        if self.at_op("~"):
            if not is_bit:
                raise ParseError(f"{verb_tok.text} does not accept 'start ~ stop'", self._span(), "';'")
            self.advance()
            stop = self._operand()
            return n.ReadCommand(verb, n.Range(first, stop), verb_tok.span)
        return n.ReadCommand(verb, n.Count(first), verb_tok.span)


def parse_script(tokens: Sequence[Token]) -> n.ScriptAst:
    """Build a parse tree; the first syntax error aborts with :class:`ParseError`."""
    return Parser(tokens).parse_script()


def parse(source: str) -> n.ScriptAst:
    """Tokenize and parse DFSL source text."""
    return parse_script(tokenize(source))


def parse_error_report(err: DFSLError, source: str, filename: str = "<script>") -> str:
    """One-line diagnostic for a lexer or parser error, with line and column."""
    kind = "lexical error" if isinstance(err, LexError) else "syntax error"
    span = err.span
    if span is None:
        return f"{filename}: {kind}: {err.message}"
    lines = source.splitlines()
    context = ""
    if 0 < span.line <= len(lines):
        snippet = lines[span.line - 1].strip()
        if snippet:
            context = f" near `{snippet[:40]}`"
    return f"{filename}: {kind} at line {span.line}, column {span.column}: {err.message}{context}"
