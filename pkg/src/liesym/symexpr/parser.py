"""Recursive-descent parser for the expression surface syntax.

Grammar::

    sum     := product (('+' | '-') product)*
    product := unary (('*' | '/') unary)*
    unary   := '-' unary | '+' unary | power
    power   := primary ('^' exponent)?
    exponent:= ['-'] INT | '(' ['-'] INT ['/' INT] ')'
    primary := NUMBER | NAME | NAME '(' sum ')' | '(' sum ')'

Names: x y t u (coordinates and dependent variable), a b d e (parameters),
u_<xyt>+ (jets), sqrt / exp (functions); any other identifier, optionally
with a _<xytu>+ derivative tag, is an opaque function atom.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .atoms import AtomError, T, jet_from_label, opaque_from_label
from .expr import Expr, ExprError, sqrt, symbol
from .params import ParamPoly

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|([A-Za-z][A-Za-z0-9]*(?:_[A-Za-z]+)?)|(.))")
_PARAMS = {"a", "b", "d", "e"}


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                break
            if m.group(1):
                self.tokens.append(("num", m.group(1), m.start(1)))
            elif m.group(2):
                self.tokens.append(("name", m.group(2), m.start(2)))
            elif m.group(3):
                self.tokens.append(("op", m.group(3), m.start(3)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", "", len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, text, pos = self.take()
        if text != value:
            raise ParseError(f"expected {value!r}, found {text or 'end of input'!r}", pos)

    def fail(self, message: str, pos: int | None = None):
        raise ParseError(message, self.peek()[2] if pos is None else pos)

    # grammar ------------------------------------------------------------

    def parse(self) -> Expr:
        if not self.tokens:
            self.fail("empty expression")
        e = self.sum()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {text!r}", pos)
        return e

    def sum(self) -> Expr:
        e = self.product()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.product()
            e = e + rhs if op == "+" else e - rhs
        return e

    def product(self) -> Expr:
        e = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op, pos = self.take()[1], self.peek()[2]
            rhs = self.unary()
            if op == "*":
                e = e * rhs
            else:
                try:
                    e = e * rhs.reciprocal()
                except ExprError as exc:
                    raise ParseError(f"unsupported division: {exc}", pos) from None
        return e

    def unary(self) -> Expr:
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.take()
            return -self.unary()
        if kind == "op" and text == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.primary()
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            pos = self.take()[2]
            k = self.exponent()
            try:
                return base ** k
            except ExprError as exc:
                raise ParseError(str(exc), pos) from None
        return base

    def exponent(self) -> Fraction:
        kind, text, pos = self.peek()
        if kind == "op" and text == "(":
            self.take()
            sign = self._sign()
            num = self._int()
            den = 1
            if self.peek()[1] == "/":
                self.take()
                den = self._int()
            self.expect(")")
            return sign * Fraction(num, den)
        sign = self._sign()
        return sign * Fraction(self._int())

    def _sign(self) -> int:
        if self.peek()[1] == "-":
            self.take()
            return -1
        return 1

    def _int(self) -> int:
        kind, text, pos = self.take()
        if kind != "num" or "." in text:
            raise ParseError("expected an integer exponent", pos)
        return int(text)

    def primary(self) -> Expr:
        kind, text, pos = self.take()
        if kind == "num":
            return Expr.const(Fraction(text))
        if kind == "op" and text == "(":
            e = self.sum()
            self.expect(")")
            return e
        if kind == "name":
            if text in ("sqrt", "exp"):
                self.expect("(")
                arg_pos = self.peek()[2]
                arg = self.sum()
                self.expect(")")
                return self._function(text, arg, arg_pos)
            return self._name(text, pos)
        if kind == "end":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected {text!r}", pos)

    def _function(self, name: str, arg: Expr, pos: int) -> Expr:
        if name == "sqrt":
            try:
                return sqrt(arg)
            except ExprError as exc:
                raise ParseError(f"sqrt argument not representable: {exc}", pos) from None
        # exp(rate*t): the argument must be linear-in-parameters times t
        if arg.is_zero():
            return Expr.const(1)
        rate = None
        if all(powers == ((T, 1),) and not r for (powers, r) in arg.terms):
            rate = sum(arg.terms.values(), start=ParamPoly())
        if rate is None or not rate.is_linear():
            raise ParseError("exp argument must be (linear in a, b, d, e)*t", pos)
        return Expr.exp(rate)

    def _name(self, text: str, pos: int) -> Expr:
        if text in ("x", "y", "t", "u") or text in _PARAMS:
            return symbol(text)
        try:
            if text.startswith("u_"):
                return Expr.atom(jet_from_label(text))
            return Expr.atom(opaque_from_label(text))
        except AtomError as exc:
            raise ParseError(str(exc), pos) from None


def parse(text: str) -> Expr:
    return _Parser(text).parse()
