"""Small recursive-descent parser for arithmetic expressions.

The grammar is shared by scalars ("e" is the uniformizer of the rational
function backends) and Laurent polynomials ("T", "T1", "T2").  Values are
built on the fly through callbacks, so the same parser evaluates into any
ring that supports ``+``, ``-`` and ``*``::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" exponent)?
    atom   := INT | NAME | "(" expr ")"
    exponent := ["+" | "-"] INT | "(" ["+" | "-"] INT ")"
"""

from __future__ import annotations

import re
from typing import Any, Callable

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


class ParseError(ValueError):
    """Malformed input text; ``pos`` is the 0-based character offset."""

    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


def _normalize(text: str) -> str:
    return text.replace("−", "-").replace("·", "*")


def tokenize(text: str) -> list[tuple[str, str, int]]:
    text = _normalize(text)
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", text, start)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), start))
        else:
            op = "^" if m.group(3) == "**" else m.group(3)
            tokens.append(("op", op, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class Evaluator:
    """Evaluate an expression into a caller-chosen ring.

    ``const(n)`` lifts a non-negative integer, ``var(name, pos)`` resolves a
    name (raising ``KeyError`` for unknown ones), ``div(a, b, pos)`` and
    ``pow(a, n, pos)`` implement the partial operations and may raise
    ``ValueError``/``ZeroDivisionError``, reported as a ``ParseError``.
    """

    def __init__(
        self,
        const: Callable[[int], Any],
        var: Callable[[str, int], Any],
        div: Callable[[Any, Any, int], Any],
        pow: Callable[[Any, int, int], Any],
    ):
        self.const = const
        self.var = var
        self.div = div
        self.pow = pow

    def __call__(self, text: str) -> Any:
        self._text = _normalize(text)
        self._toks = tokenize(text)
        self._i = 0
        if self._peek()[0] == "end":
            raise ParseError("empty expression", self._text, 0)
        value = self._expr()
        kind, tok, pos = self._peek()
        if kind != "end":
            raise ParseError(f"unexpected {tok!r}", self._text, pos)
        return value

    def _peek(self):
        return self._toks[self._i]

    def _next(self):
        tok = self._toks[self._i]
        self._i += 1
        return tok

    def _fail(self, message: str, pos: int):
        raise ParseError(message, self._text, pos)

    def _expr(self):
        value = self._term()
        while self._peek()[1] in ("+", "-") and self._peek()[0] == "op":
            _, op, _ = self._next()
            rhs = self._term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def _term(self):
        value = self._unary()
        while self._peek()[0] == "op" and self._peek()[1] in ("*", "/"):
            _, op, pos = self._next()
            rhs = self._unary()
            value = value * rhs if op == "*" else self._call(self.div, value, rhs, pos)
        return value

    def _unary(self):
        kind, tok, _ = self._peek()
        if kind == "op" and tok in ("+", "-"):
            self._next()
            value = self._unary()
            return -value if tok == "-" else value
        return self._power()

    def _power(self):
        base = self._atom()
        kind, tok, pos = self._peek()
        if kind == "op" and tok == "^":
            self._next()
            return self._call(self.pow, base, self._exponent(), pos)
        return base

    def _call(self, fn, a, b, pos):
        try:
            return fn(a, b, pos)
        except ParseError:
            raise
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise ParseError(str(exc), self._text, pos) from None

    def _signed_int(self) -> int:
        sign = 1
        kind, tok, pos = self._peek()
        if kind == "op" and tok in ("+", "-"):
            self._next()
            sign = -1 if tok == "-" else 1
            kind, tok, pos = self._peek()
        if kind != "int":
            self._fail("expected integer exponent", pos)
        self._next()
        return sign * int(tok)

    def _exponent(self) -> int:
        kind, tok, pos = self._peek()
        if kind == "op" and tok == "(":
            self._next()
            n = self._signed_int()
            kind, tok, pos = self._peek()
            if tok != ")":
                self._fail("expected ')'", pos)
            self._next()
            return n
        return self._signed_int()

    def _atom(self):
        kind, tok, pos = self._next()
        if kind == "int":
            return self.const(int(tok))
        if kind == "name":
            try:
                return self.var(tok, pos)
            except KeyError:
                self._fail(f"unknown symbol {tok!r}", pos)
        if kind == "op" and tok == "(":
            value = self._expr()
            kind, tok, pos2 = self._peek()
            if tok != ")" or kind != "op":
                self._fail("expected ')'", pos2)
            self._next()
            return value
        if kind == "end":
            self._fail("unexpected end of input", pos)
        self._fail(f"unexpected {tok!r}", pos)
