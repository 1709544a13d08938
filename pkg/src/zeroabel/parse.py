"""Text grammar for polynomials and cycles.

Grammar (whitespace ignored)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := atom (('^'|'**') ['-'] INT)?
    atom   := NUMBER | 'z' | 'x' | '(' expr ')' | ('+'|'-') factor

Numbers are integers or decimals; ``1/2`` is a rational through division.
Division is allowed by constants and, for Laurent input, by monomials.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path

from .errors import InputError, ParseError
from .poly import ExactPoly, LaurentPoly

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\.\d*)?|\.\d+)|(?P<var>[zx])|(?P<op>\*\*|[-+*/^()]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            skip = len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[pos + skip]!r}", text, pos + skip)
        start = m.start(m.lastgroup)
        tokens.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, msg: str, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok[2])

    def parse(self) -> LaurentPoly:
        if self.peek()[0] == "end":
            self.fail("empty expression")
        value = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected token {self.peek()[1]!r}")
        return value

    def expr(self) -> LaurentPoly:
        value = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> LaurentPoly:
        value = self.factor()
        while self.peek()[1] in ("*", "/"):
            op_tok = self.take()
            rhs = self.factor()
            if op_tok[1] == "*":
                value = value * rhs
            else:
                terms = rhs.terms
                if len(terms) != 1:
                    self.fail("division only by a constant or a monomial", op_tok)
                value = value / rhs
        return value

    def factor(self) -> LaurentPoly:
        tok = self.peek()
        if tok[1] in ("+", "-"):
            self.take()
            inner = self.factor()
            return inner if tok[1] == "+" else -inner
        base = self.atom()
        if self.peek()[1] in ("^", "**"):
            self.take()
            sign = 1
            if self.peek()[1] == "-":
                self.take()
                sign = -1
            exp_tok = self.take()
            if exp_tok[0] != "num" or not exp_tok[1].isdigit():
                self.fail("exponent must be an integer literal", exp_tok)
            e = sign * int(exp_tok[1])
            if e < 0 and len(base.terms) != 1:
                self.fail("negative exponent of a non-monomial", exp_tok)
            if e < 0 and 0 in base.terms and len(base.terms) == 1 and base.terms[0] == 0:
                self.fail("zero to a negative power", exp_tok)
            return base**e
        return base

    def atom(self) -> LaurentPoly:
        tok = self.take()
        kind, val, _ = tok
        if kind == "num":
            return LaurentPoly({0: Fraction(val)})
        if kind == "var":
            return LaurentPoly({1: 1})
        if val == "(":
            inner = self.expr()
            if self.peek()[1] != ")":
                self.fail("expected ')'")
            self.take()
            return inner
        if kind == "end":
            self.fail("unexpected end of input", tok)
        self.fail(f"unexpected token {val!r}", tok)


def parse_laurent(text: str) -> LaurentPoly:
    try:
        return _Parser(text).parse()
    except ZeroDivisionError:
        raise ParseError("division by zero", text, 0) from None


def parse_poly(text: str) -> ExactPoly:
    value = parse_laurent(text)
    if not value.is_polynomial():
        raise ParseError("negative powers are not allowed in a polynomial", text, 0)
    return value.to_poly()


def parse_cycle(text: str) -> list[int]:
    """Comma-separated integers, or ``@path`` to a JSON array/object."""
    text = text.strip()
    if text.startswith("@"):
        path = Path(text[1:])
        try:
            data = json.loads(path.read_text())
        except OSError as exc:
            raise InputError(f"cannot read cycle file {path}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON in {path}: {exc.msg}", text, exc.pos) from None
        if isinstance(data, dict):
            data = data.get("cycle", data.get("weights"))
        if not isinstance(data, list) or not all(isinstance(x, int) for x in data):
            raise InputError("cycle file must hold a JSON list of integers")
        return data
    out = []
    pos = 0
    for piece in text.split(","):
        s = piece.strip()
        if not re.fullmatch(r"[-+]?\d+", s):
            raise ParseError(f"invalid cycle weight {s!r}", text, pos)
        out.append(int(s))
        pos += len(piece) + 1
    return out
