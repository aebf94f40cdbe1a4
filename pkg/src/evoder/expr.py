"""Tiny exact-arithmetic expression language used by the type table.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '·' | '/') factor)*
    factor := ('-' | '+') factor | NUMBER | SYMBOL | '(' expr ')'

Symbols are ``ω_xy`` (or ``w_xy``) for structure constants and ``d_xy`` for
derivation entries, with ``x, y`` vertex letters. ``−`` is accepted as minus.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Mapping, Union

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([ωwd]_[a-z]{2})|([-+*/()·−]))")

Node = Union[Fraction, str, tuple]


class ExpressionError(ValueError):
    pass


def _tokenize(text: str) -> list[str]:
    text = text.replace("−", "-").replace("·", "*")
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExpressionError(f"unexpected character at {pos} in {text!r}")
        tokens.append(m.group(m.lastindex))
        pos = m.end()
    return tokens


def _normalize_symbol(tok: str) -> str:
    return "w" + tok[1:] if tok[0] == "ω" else tok


class _Parser:
    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise ExpressionError("unexpected end of expression")
        self.pos += 1
        return tok

    def expr(self) -> Node:
        node = self.term()
        while self.peek() in ("+", "-"):
            node = (self.take(), node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.peek() in ("*", "/"):
            node = (self.take(), node, self.factor())
        return node

    def factor(self) -> Node:
        tok = self.take()
        if tok == "-":
            return ("neg", self.factor())
        if tok == "+":
            return self.factor()
        if tok == "(":
            node = self.expr()
            if self.take() != ")":
                raise ExpressionError("expected ')'")
            return node
        if tok[0].isdigit():
            return Fraction(tok)
        if tok[0] in "ωwd":
            return _normalize_symbol(tok)
        raise ExpressionError(f"unexpected token {tok!r}")


def parse(text: str) -> Node:
    p = _Parser(_tokenize(text))
    node = p.expr()
    if p.peek() is not None:
        raise ExpressionError(f"trailing input in {text!r}")
    return node


def evaluate(node: Node, env: Mapping[str, Fraction]) -> Fraction:
    if isinstance(node, Fraction):
        return node
    if isinstance(node, str):
        return env[node]
    op = node[0]
    if op == "neg":
        return -evaluate(node[1], env)
    x, y = evaluate(node[1], env), evaluate(node[2], env)
    if op == "+":
        return x + y
    if op == "-":
        return x - y
    if op == "*":
        return x * y
    return x / y


def symbols(node: Node) -> set[str]:
    if isinstance(node, Fraction):
        return set()
    if isinstance(node, str):
        return {node}
    return set().union(*(symbols(c) for c in node[1:]))


def parse_relation(text: str) -> tuple[str, Node]:
    """``"d_xy = expr"`` -> (``"d_xy"``, parsed expr)."""
    lhs, sep, rhs = text.partition("=")
    lhs = lhs.strip()
    if not sep or not re.fullmatch(r"d_[a-z]{2}", lhs):
        raise ExpressionError(f"relation must read 'd_xy = expr': {text!r}")
    return lhs, parse(rhs)
