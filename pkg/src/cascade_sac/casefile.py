"""Line-oriented casefile format.

Example::

    # headlamp item
    case "Headlamp"
    node G1 goal block=top_claim covers=RQ-09-03 "The headlamp item is acceptably secure"
    node S1 strategy "Argue over the assets of the item"
    edge G1 -> S1 supported_by

Tokens are separated by spaces. Attribute values are bare words; node text
and the case name are double-quoted with ``\\"`` and ``\\\\`` as the only
escapes. ``#`` starts a comment line.
"""

from __future__ import annotations

import dataclasses
import enum
from typing import Optional

from .blocks import CascadeBlock
from .graph import (
    ATTR_KEYS,
    IDENT_RE,
    AssuranceCase,
    Edge,
    EdgeKind,
    Node,
    NodeKind,
    attr_problem,
    build_case,
)

_KINDS = {k.value: k for k in NodeKind}
_RELS = {k.value: k for k in EdgeKind}
_BLOCKS = {b.value: b for b in CascadeBlock}


class ErrorKind(str, enum.Enum):
    LEX = "Lex"
    SYNTAX = "Syntax"
    SEMANTIC = "Semantic"


@dataclasses.dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int


@dataclasses.dataclass(frozen=True)
class ParseError:
    span: SourceSpan
    message: str
    kind: ErrorKind

    def __str__(self) -> str:
        return f"{self.span.line}:{self.span.column}: {self.kind.value} error: {self.message}"


class CasefileError(ValueError):
    """Raised by :func:`parse` with every error found in the input."""

    def __init__(self, errors: list[ParseError]):
        self.errors = errors
        super().__init__("\n".join(str(e) for e in errors))


@dataclasses.dataclass
class _Token:
    text: str
    column: int
    quoted: bool


class _LineParser:
    def __init__(self, lineno: int):
        self.lineno = lineno
        self.errors: list[ParseError] = []

    def error(self, column: int, message: str, kind: ErrorKind) -> None:
        self.errors.append(ParseError(SourceSpan(self.lineno, column), message, kind))

    def lex(self, line: str) -> Optional[list[_Token]]:
        tokens = []
        i, n = 0, len(line)
        while i < n:
            if line[i] in " \t":
                i += 1
                continue
            start = i
            if line[i] == '"':
                buf = []
                i += 1
                closed = False
                while i < n:
                    c = line[i]
                    if c == "\\":
                        if i + 1 < n and line[i + 1] in '"\\':
                            buf.append(line[i + 1])
                            i += 2
                            continue
                        self.error(i + 1, "bad escape; only \\\" and \\\\ are allowed", ErrorKind.LEX)
                        return None
                    if c == '"':
                        closed = True
                        i += 1
                        break
                    buf.append(c)
                    i += 1
                if not closed:
                    self.error(start + 1, "unterminated string", ErrorKind.LEX)
                    return None
                if i < n and line[i] not in " \t":
                    self.error(i + 1, "expected a space after the closing quote", ErrorKind.LEX)
                    return None
                tokens.append(_Token("".join(buf), start + 1, True))
            else:
                while i < n and line[i] not in " \t":
                    if line[i] == '"':
                        self.error(i + 1, "unexpected quote inside a word", ErrorKind.LEX)
                        return None
                    i += 1
                tokens.append(_Token(line[start:i], start + 1, False))
        return tokens

    def ident(self, tok: _Token, what: str) -> Optional[str]:
        if tok.quoted or not IDENT_RE.fullmatch(tok.text):
            self.error(tok.column, f"invalid {what} {tok.text!r}", ErrorKind.SYNTAX)
            return None
        return tok.text

    def case_line(self, toks: list[_Token]) -> Optional[str]:
        if len(toks) != 2 or not toks[1].quoted:
            self.error(toks[0].column, 'expected: case "<name>"', ErrorKind.SYNTAX)
            return None
        return toks[1].text

    def node_line(self, toks: list[_Token]) -> Optional[Node]:
        if len(toks) < 4:
            self.error(toks[0].column, 'expected: node <id> <kind> [key=value ...] "<text>"', ErrorKind.SYNTAX)
            return None
        ok = True
        node_id = self.ident(toks[1], "node id")
        kind = None
        if toks[2].quoted or toks[2].text not in _KINDS:
            self.error(toks[2].column, f"unknown node kind {toks[2].text!r}", ErrorKind.SYNTAX)
        else:
            kind = _KINDS[toks[2].text]
        text_tok = toks[-1]
        if not text_tok.quoted:
            self.error(text_tok.column, "node text must be a quoted string", ErrorKind.SYNTAX)
            ok = False
        elif not text_tok.text:
            self.error(text_tok.column, "node text must be non-empty", ErrorKind.SEMANTIC)
            ok = False

        block = None
        attrs: dict[str, str] = {}
        seen: set[str] = set()
        for tok in toks[3:-1]:
            key, eq, value = tok.text.partition("=")
            if tok.quoted or not eq or not key or not value:
                self.error(tok.column, f"expected key=value, got {tok.text!r}", ErrorKind.SYNTAX)
                ok = False
                continue
            if key in seen:
                self.error(tok.column, f"duplicate attribute {key!r}", ErrorKind.SEMANTIC)
                ok = False
                continue
            seen.add(key)
            if key == "block":
                if value not in _BLOCKS:
                    self.error(tok.column + len(key) + 1, f"unknown block {value!r}", ErrorKind.SEMANTIC)
                    ok = False
                else:
                    block = _BLOCKS[value]
                continue
            problem = attr_problem(key, value)
            if problem:
                col = tok.column if key not in ATTR_KEYS else tok.column + len(key) + 1
                self.error(col, problem, ErrorKind.SEMANTIC)
                ok = False
                continue
            attrs[key] = value

        if not (ok and node_id and kind):
            return None
        try:
            return Node(node_id, kind, text_tok.text, block, attrs)
        except ValueError as exc:
            self.error(toks[0].column, str(exc), ErrorKind.SEMANTIC)
            return None

    def edge_line(self, toks: list[_Token]) -> Optional[Edge]:
        if len(toks) != 5:
            self.error(toks[0].column, "expected: edge <id> -> <id> <relation>", ErrorKind.SYNTAX)
            return None
        src = self.ident(toks[1], "edge source")
        if toks[2].quoted or toks[2].text != "->":
            self.error(toks[2].column, f"expected '->', got {toks[2].text!r}", ErrorKind.SYNTAX)
            src = None
        dst = self.ident(toks[3], "edge target")
        rel = None
        if toks[4].quoted or toks[4].text not in _RELS:
            self.error(toks[4].column, f"unknown relation {toks[4].text!r}", ErrorKind.SYNTAX)
        else:
            rel = _RELS[toks[4].text]
        if not (src and dst and rel):
            return None
        try:
            return Edge(src, dst, rel)
        except ValueError as exc:
            self.error(toks[0].column, str(exc), ErrorKind.SEMANTIC)
            return None


def parse(text: str) -> AssuranceCase:
    """Parse casefile text into an :class:`AssuranceCase`.

    Raises CasefileError listing every lexical, syntactic and token-level
    semantic error; structural problems surface from ``build_case`` as
    CaseBuildError.
    """
    errors: list[ParseError] = []
    name: Optional[str] = None
    nodes: list[Node] = []
    edges: list[Edge] = []
    if text.startswith("\ufeff"):
        text = text[1:]
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw[:-1] if raw.endswith("\r") else raw
        stripped = line.strip(" \t")
        if not stripped or stripped.startswith("#"):
            continue
        lp = _LineParser(lineno)
        toks = lp.lex(line)
        if toks is not None:
            head = toks[0]
            keyword = None if head.quoted else head.text
            if name is None and keyword != "case":
                lp.error(head.column, "file must start with a case line", ErrorKind.SYNTAX)
                name = ""
            if keyword == "case":
                if name is not None:
                    lp.error(head.column, "duplicate case line", ErrorKind.SYNTAX)
                else:
                    name = lp.case_line(toks) or ""
            elif keyword == "node":
                node = lp.node_line(toks)
                if node is not None:
                    nodes.append(node)
            elif keyword == "edge":
                edge = lp.edge_line(toks)
                if edge is not None:
                    edges.append(edge)
            else:
                lp.error(head.column, f"unknown keyword {head.text!r}", ErrorKind.SYNTAX)
        errors.extend(lp.errors)
    if name is None:
        errors.append(ParseError(SourceSpan(1, 1), "missing case line", ErrorKind.SYNTAX))
    if errors:
        raise CasefileError(errors)
    return build_case(name, nodes, edges)


def quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _node_line(n: Node) -> str:
    parts = ["node", n.id, n.kind.value]
    if n.block is not None:
        parts.append(f"block={n.block.value}")
    parts.extend(f"{k}={n.attrs[k]}" for k in sorted(n.attrs))
    parts.append(quote(n.text))
    return " ".join(parts)


def serialize(case: AssuranceCase) -> str:
    """Canonical casefile text: nodes by id, edges by (source, target, relation)."""
    lines = [f"case {quote(case.name)}"]
    for n in sorted(case.nodes, key=lambda n: n.id.encode()):
        lines.append(_node_line(n))
    for e in sorted(case.edges, key=Edge.sort_key):
        lines.append(f"edge {e.source} -> {e.target} {e.kind.value}")
    return "\n".join(lines) + "\n"


def load(path) -> AssuranceCase:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse(fh.read())
