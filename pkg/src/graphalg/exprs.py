"""Expression syntax for span elements.

Grammar (whitespace-insensitive):

    expr   := ['-'] term (('+' | '-') term)*
    term   := atom ('*' atom)*
    atom   := rational | 'P(' vertex ')' | 'S(' path ')' | 'S*(' path ')' | '(' expr ')'
    path   := label ('[' int ']')? ('.' label ('[' int ']')?)*

Rationals are `int` or `int/int`; an omitted edge index defaults to 0.
A bare scalar never forms an element on its own.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .algebra import AlgebraElement
from .core import Edge, Graph, Path


class ExpressionError(ValueError):
    pass


_TOKEN = re.compile(
    r"\s*(?:(?P<number>\d+(?:/\d+)?)|(?P<sstar>S\*\()|(?P<s>S\()|(?P<p>P\()|(?P<lparen>\()|(?P<rparen>\))|(?P<plus>\+)|(?P<minus>-)|(?P<times>\*)|(?P<body>[^()+\-*\s]+))"
)


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ExpressionError(f"cannot tokenize at {text[pos:pos + 10]!r}")
        pos = m.end()
        for kind, value in m.groupdict().items():
            if value is not None:
                tokens.append((kind, value))
                break
    return tokens


def parse_path(g: Graph, text: str) -> Path:
    edges = []
    at = None
    for segment in text.split("."):
        m = re.fullmatch(r"(?P<label>[^\[\]]+)(?:\[(?P<index>\d+)\])?", segment.strip())
        if not m:
            raise ExpressionError(f"bad path segment {segment!r}")
        label = m.group("label")
        index = int(m.group("index") or 0)
        if not g.has_bundle(label):
            raise ExpressionError(f"unknown bundle {label!r}")
        e = Edge(label, index)
        if not g.is_valid_edge(e):
            raise ExpressionError(f"index {index} exceeds the multiplicity of bundle {label!r}")
        src = g.edge_src(e)
        if at is None:
            base = src
        elif at != src:
            raise ExpressionError(f"path breaks at {segment!r}: expected source {at}, bundle starts at {src}")
        at = g.edge_dst(e)
        edges.append(e)
    return Path(base, tuple(edges))


class _Parser:
    def __init__(self, g: Graph, tokens: list[tuple[str, str]]):
        self.g = g
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> str | None:
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def take(self) -> tuple[str, str]:
        if self.pos >= len(self.tokens):
            raise ExpressionError("unexpected end of expression")
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> str:
        k, value = self.take()
        if k != kind:
            raise ExpressionError(f"expected {kind}, got {value!r}")
        return value

    # values are either ('scalar', Fraction) or ('element', AlgebraElement)

    def parse_expr(self):
        negate = False
        if self.peek() == "minus":
            self.take()
            negate = True
        value = self.parse_term()
        if negate:
            value = _negate(value)
        while self.peek() in ("plus", "minus"):
            op, _ = self.take()
            rhs = self.parse_term()
            if op == "minus":
                rhs = _negate(rhs)
            value = _add(value, rhs)
        return value

    def parse_term(self):
        value = self.parse_atom()
        while self.peek() == "times":
            self.take()
            value = _mul(value, self.parse_atom())
        return value

    def parse_atom(self):
        kind, text = self.take()
        if kind == "number":
            return ("scalar", Fraction(text))
        if kind == "p":
            body = self.expect("body")
            self.expect("rparen")
            if not self.g.has_vertex(body):
                raise ExpressionError(f"unknown vertex {body!r}")
            return ("element", AlgebraElement.projection(self.g, body))
        if kind in ("s", "sstar"):
            body = self.expect("body")
            self.expect("rparen")
            element = AlgebraElement.isometry(self.g, parse_path(self.g, body))
            if kind == "sstar":
                element = element.star()
            return ("element", element)
        if kind == "lparen":
            value = self.parse_expr()
            self.expect("rparen")
            return value
        raise ExpressionError(f"unexpected token {text!r}")


def _negate(value):
    kind, payload = value
    return (kind, -payload if kind == "scalar" else payload.scale(-1))


def _add(a, b):
    if a[0] == "scalar" and b[0] == "scalar":
        return ("scalar", a[1] + b[1])
    if a[0] == "element" and b[0] == "element":
        return ("element", a[1] + b[1])
    raise ExpressionError("cannot add a bare scalar to an element")


def _mul(a, b):
    if a[0] == "scalar" and b[0] == "scalar":
        return ("scalar", a[1] * b[1])
    if a[0] == "scalar":
        return ("element", b[1].scale(a[1]))
    if b[0] == "scalar":
        return ("element", a[1].scale(b[1]))
    return ("element", a[1] * b[1])


def evaluate_expression(g: Graph, text: str) -> AlgebraElement:
    parser = _Parser(g, _tokenize(text))
    kind, value = parser.parse_expr()
    if parser.pos != len(parser.tokens):
        raise ExpressionError(f"trailing tokens from {parser.tokens[parser.pos][1]!r}")
    if kind != "element":
        raise ExpressionError("expression reduces to a bare scalar, not a span element")
    return value
