"""Lexer, parser, AST, and canonical formatter for the session script language.

One statement per `;`. Keywords are case-insensitive; class and key names
are bare identifiers or double-quoted strings (quoting is required when a
name contains anything beyond [A-Za-z0-9_] or collides with a keyword).
`#` starts a comment running to the end of the line.

Spans are 1-based (line, column) and point at the first character of the
token that anchors the node. Spans never participate in AST equality, so
parse(format(script)) compares equal to the original script.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

from ..errors import DslParseError

KEYWORDS = frozenset("""
    load format select where pivot via mode fanin fanout intersect smart scope
    filter group by asc desc bins snip on off undo clear describe export
    adapt report apply degree in out any and contains true false
""".split())

MODE_WORDS = ("fanin", "fanout", "intersect", "smart", "scope")
_OPS = ("==", "!=", "<=", ">=", "<", ">")
_BARE_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER = re.compile(r"-?\d+(\.\d+)?")

NAME = "NAME"
STRING = "STRING"
INT = "INT"
REAL = "REAL"
OP = "OP"
PUNCT = "PUNCT"
KW = "KW"
EOF = "EOF"


@dataclass(frozen=True)
class Token:
    type: str
    value: object
    line: int
    col: int
    text: str

    def describe(self) -> str:
        if self.type == EOF:
            return "end of input"
        return repr(self.text)


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if ch == '"':
            j = i + 1
            out = []
            while j < n:
                c = source[j]
                if c == '"':
                    break
                if c == "\n":
                    j = n
                    break
                if c == "\\":
                    if j + 1 >= n:
                        j = n
                        break
                    esc = source[j + 1]
                    out.append({"n": "\n", "t": "\t", "r": "\r"}.get(esc, esc))
                    j += 2
                    continue
                out.append(c)
                j += 1
            if j >= n:
                raise DslParseError("unterminated string", start_line, start_col,
                                    expected=['"'])
            text = source[i:j + 1]
            tokens.append(Token(STRING, "".join(out), start_line, start_col, text))
            col += j + 1 - i
            i = j + 1
            continue
        m = _NUMBER.match(source, i)
        if m and (ch.isdigit() or (ch == "-" and m.end() > i + 1)):
            text = m.group(0)
            if m.group(1):
                tokens.append(Token(REAL, float(text), start_line, start_col, text))
            else:
                tokens.append(Token(INT, int(text), start_line, start_col, text))
            col += len(text)
            i = m.end()
            continue
        m = _BARE_NAME.match(source, i)
        if m:
            text = m.group(0)
            low = text.lower()
            if low in KEYWORDS:
                tokens.append(Token(KW, low, start_line, start_col, text))
            else:
                tokens.append(Token(NAME, text, start_line, start_col, text))
            col += len(text)
            i = m.end()
            continue
        two = source[i:i + 2]
        if two in _OPS:
            tokens.append(Token(OP, two, start_line, start_col, two))
            i += 2
            col += 2
            continue
        if ch in "<>":
            tokens.append(Token(OP, ch, start_line, start_col, ch))
            i += 1
            col += 1
            continue
        if ch in ";,()":
            tokens.append(Token(PUNCT, ch, start_line, start_col, ch))
            i += 1
            col += 1
            continue
        raise DslParseError(f"unexpected character {ch!r}", start_line, start_col)
    tokens.append(Token(EOF, None, line, col, ""))
    return tokens


# -- AST ------------------------------------------------------------------------


@dataclass(frozen=True)
class Span:
    line: int
    col: int


def _span_field():
    return field(compare=False, repr=False)


@dataclass(frozen=True)
class AttrPred:
    key: str
    op: str
    literal: object       # scalar, or tuple of scalars for `in`
    span: Span = _span_field()


@dataclass(frozen=True)
class DegreePred:
    direction: str        # any | incoming | outgoing
    op: str
    threshold: int
    span: Span = _span_field()


Pred = Union[AttrPred, DegreePred]


@dataclass(frozen=True)
class Load:
    path: str
    format: Optional[str]
    span: Span = _span_field()


@dataclass(frozen=True)
class Select:
    cls: str
    predicates: tuple[Pred, ...]
    span: Span = _span_field()


@dataclass(frozen=True)
class Pivot:
    target: str
    via: Optional[str]
    mode: Optional[str]
    span: Span = _span_field()


@dataclass(frozen=True)
class Filter:
    predicates: tuple[Pred, ...]
    span: Span = _span_field()


@dataclass(frozen=True)
class Group:
    key: str
    order: Optional[str]          # asc | desc | None
    bins: Optional[int]           # equal-width bin count
    span: Span = _span_field()


@dataclass(frozen=True)
class Bins:
    labels: tuple[str, ...]
    span: Span = _span_field()


@dataclass(frozen=True)
class Snip:
    filter_id: int
    span: Span = _span_field()


@dataclass(frozen=True)
class Scope:
    on: bool
    span: Span = _span_field()


@dataclass(frozen=True)
class Undo:
    span: Span = _span_field()


@dataclass(frozen=True)
class Clear:
    span: Span = _span_field()


@dataclass(frozen=True)
class Describe:
    span: Span = _span_field()


@dataclass(frozen=True)
class Export:
    path: str
    format: Optional[str]
    span: Span = _span_field()


@dataclass(frozen=True)
class AdaptReport:
    span: Span = _span_field()


@dataclass(frozen=True)
class AdaptApply:
    index: int
    span: Span = _span_field()


Statement = Union[Load, Select, Pivot, Filter, Group, Bins, Snip, Scope,
                  Undo, Clear, Describe, Export, AdaptReport, AdaptApply]


@dataclass(frozen=True)
class Script:
    statements: tuple[Statement, ...]


# -- parser -----------------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, what: str, expected: Optional[list[str]] = None):
        tok = self.peek()
        raise DslParseError(f"expected {what}, found {tok.describe()}",
                            tok.line, tok.col, expected=expected or [what])

    def at_kw(self, *words: str) -> bool:
        tok = self.peek()
        return tok.type == KW and tok.value in words

    def eat_kw(self, *words: str) -> Token:
        if not self.at_kw(*words):
            self.fail(" or ".join(f"'{w}'" for w in words), expected=list(words))
        return self.advance()

    def eat_punct(self, ch: str) -> Token:
        tok = self.peek()
        if tok.type != PUNCT or tok.value != ch:
            self.fail(f"'{ch}'", expected=[ch])
        return self.advance()

    def eat_name(self, what: str) -> str:
        tok = self.peek()
        if tok.type in (NAME, STRING):
            self.advance()
            return tok.value
        self.fail(what, expected=[what])

    def eat_int(self, what: str = "integer") -> int:
        tok = self.peek()
        if tok.type != INT:
            self.fail(what, expected=[what])
        self.advance()
        return tok.value

    def eat_string(self, what: str = "string") -> str:
        tok = self.peek()
        if tok.type != STRING:
            self.fail(what, expected=[what])
        self.advance()
        return tok.value

    # -- grammar --------------------------------------------------------------

    def parse_script(self) -> Script:
        statements: list[Statement] = []
        loads = 0
        while self.peek().type != EOF:
            stmt = self.parse_statement()
            if isinstance(stmt, Load):
                loads += 1
                if loads > 1:
                    raise DslParseError("duplicate load", stmt.span.line,
                                        stmt.span.col)
            self.eat_punct(";")
            statements.append(stmt)
        return Script(tuple(statements))

    def parse_statement(self) -> Statement:
        tok = self.peek()
        if tok.type != KW:
            self.fail("a statement keyword",
                      expected=["load", "select", "pivot", "filter", "group",
                                "bins", "snip", "scope", "undo", "clear",
                                "describe", "export", "adapt"])
        span = Span(tok.line, tok.col)
        word = tok.value
        if word == "load":
            self.advance()
            path = self.eat_string("file path")
            fmt = None
            if self.at_kw("format"):
                self.advance()
                fmt = self.eat_name("format name")
            return Load(path, fmt, span)
        if word == "select":
            self.advance()
            cls = self.eat_name("class name")
            preds: tuple[Pred, ...] = ()
            if self.at_kw("where"):
                self.advance()
                preds = self.parse_predicates()
            return Select(cls, preds, span)
        if word == "pivot":
            self.advance()
            target = self.eat_name("class name")
            via = None
            mode = None
            if self.at_kw("via"):
                self.advance()
                via = self.eat_name("edge class name")
            if self.at_kw("mode"):
                self.advance()
                mode_tok = self.eat_kw(*MODE_WORDS)
                mode = mode_tok.value
            return Pivot(target, via, mode, span)
        if word == "filter":
            self.advance()
            return Filter(self.parse_predicates(), span)
        if word == "group":
            self.advance()
            self.eat_kw("by")
            key = self.eat_name("attribute key")
            order = None
            if self.at_kw("asc", "desc"):
                order = self.advance().value
            nbins = None
            if self.at_kw("bins"):
                self.advance()
                nbins = self.eat_int("bin count")
            return Group(key, order, nbins, span)
        if word == "bins":
            self.advance()
            labels = [self.eat_string("bin label")]
            while self.peek().type == PUNCT and self.peek().value == ",":
                self.advance()
                labels.append(self.eat_string("bin label"))
            return Bins(tuple(labels), span)
        if word == "snip":
            self.advance()
            return Snip(self.eat_int("filter id"), span)
        if word == "scope":
            self.advance()
            on_tok = self.eat_kw("on", "off")
            return Scope(on_tok.value == "on", span)
        if word == "undo":
            self.advance()
            return Undo(span)
        if word == "clear":
            self.advance()
            return Clear(span)
        if word == "describe":
            self.advance()
            return Describe(span)
        if word == "export":
            self.advance()
            path = self.eat_string("file path")
            fmt = None
            if self.at_kw("format"):
                self.advance()
                fmt = self.eat_name("format name")
            return Export(path, fmt, span)
        if word == "adapt":
            self.advance()
            sub = self.eat_kw("report", "apply")
            if sub.value == "report":
                return AdaptReport(span)
            return AdaptApply(self.eat_int("proposal number"), span)
        self.fail("a statement keyword")

    def parse_predicates(self) -> tuple[Pred, ...]:
        preds = [self.parse_predicate()]
        while self.at_kw("and"):
            self.advance()
            preds.append(self.parse_predicate())
        return tuple(preds)

    def parse_predicate(self) -> Pred:
        tok = self.peek()
        span = Span(tok.line, tok.col)
        if self.at_kw("degree"):
            self.advance()
            direction = "any"
            if self.at_kw("in", "out", "any"):
                word = self.advance().value
                direction = {"in": "incoming", "out": "outgoing", "any": "any"}[word]
            op_tok = self.peek()
            if op_tok.type != OP:
                self.fail("comparison operator",
                          expected=["==", "!=", "<", "<=", ">", ">="])
            self.advance()
            threshold = self.eat_int("integer threshold")
            return DegreePred(direction, op_tok.value, threshold, span)
        key = self.eat_name("attribute key")
        op_tok = self.peek()
        if op_tok.type == OP:
            self.advance()
            op = op_tok.value
        elif self.at_kw("contains"):
            self.advance()
            op = "contains"
        elif self.at_kw("in"):
            self.advance()
            op = "in"
        else:
            self.fail("operator",
                      expected=["==", "!=", "<", "<=", ">", ">=", "contains", "in"])
        if op == "in":
            self.eat_punct("(")
            values = [self.parse_literal()]
            while self.peek().type == PUNCT and self.peek().value == ",":
                self.advance()
                values.append(self.parse_literal())
            self.eat_punct(")")
            return AttrPred(key, op, tuple(values), span)
        return AttrPred(key, op, self.parse_literal(), span)

    def parse_literal(self):
        tok = self.peek()
        if tok.type in (STRING, INT, REAL):
            self.advance()
            return tok.value
        if self.at_kw("true"):
            self.advance()
            return True
        if self.at_kw("false"):
            self.advance()
            return False
        self.fail("a literal", expected=["string", "number", "true", "false"])


def parse(text: str) -> Script:
    return _Parser(tokenize(text)).parse_script()


# -- canonical formatter ------------------------------------------------------------


def _quote(s: str) -> str:
    out = s.replace("\\", "\\\\").replace('"', '\\"')
    out = out.replace("\n", "\\n").replace("\t", "\\t").replace("\r", "\\r")
    return f'"{out}"'


def _name_text(s: str) -> str:
    if _BARE_NAME.fullmatch(s) and s.lower() not in KEYWORDS:
        return s
    return _quote(s)


def _literal_text(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float)):
        return repr(v)
    return _quote(v)


def _pred_text(p: Pred) -> str:
    if isinstance(p, DegreePred):
        word = {"incoming": "in", "outgoing": "out", "any": "any"}[p.direction]
        return f"degree {word} {p.op} {p.threshold}"
    if p.op == "in":
        inner = ", ".join(_literal_text(v) for v in p.literal)
        return f"{_name_text(p.key)} in ({inner})"
    return f"{_name_text(p.key)} {p.op} {_literal_text(p.literal)}"


def format_statement(stmt: Statement) -> str:
    if isinstance(stmt, Load):
        out = f"load {_quote(stmt.path)}"
        if stmt.format:
            out += f" format {_name_text(stmt.format)}"
        return out + ";"
    if isinstance(stmt, Select):
        out = f"select {_name_text(stmt.cls)}"
        if stmt.predicates:
            out += " where " + " and ".join(_pred_text(p) for p in stmt.predicates)
        return out + ";"
    if isinstance(stmt, Pivot):
        out = f"pivot {_name_text(stmt.target)}"
        if stmt.via:
            out += f" via {_name_text(stmt.via)}"
        if stmt.mode:
            out += f" mode {stmt.mode}"
        return out + ";"
    if isinstance(stmt, Filter):
        return "filter " + " and ".join(_pred_text(p) for p in stmt.predicates) + ";"
    if isinstance(stmt, Group):
        out = f"group by {_name_text(stmt.key)}"
        if stmt.order:
            out += f" {stmt.order}"
        if stmt.bins is not None:
            out += f" bins {stmt.bins}"
        return out + ";"
    if isinstance(stmt, Bins):
        return "bins " + ", ".join(_quote(lab) for lab in stmt.labels) + ";"
    if isinstance(stmt, Snip):
        return f"snip {stmt.filter_id};"
    if isinstance(stmt, Scope):
        return f"scope {'on' if stmt.on else 'off'};"
    if isinstance(stmt, Undo):
        return "undo;"
    if isinstance(stmt, Clear):
        return "clear;"
    if isinstance(stmt, Describe):
        return "describe;"
    if isinstance(stmt, Export):
        out = f"export {_quote(stmt.path)}"
        if stmt.format:
            out += f" format {_name_text(stmt.format)}"
        return out + ";"
    if isinstance(stmt, AdaptReport):
        return "adapt report;"
    if isinstance(stmt, AdaptApply):
        return f"adapt apply {stmt.index};"
    raise TypeError(f"unknown statement {stmt!r}")


def format_script(script: Script) -> str:
    if not script.statements:
        return ""
    return "\n".join(format_statement(s) for s in script.statements) + "\n"
