"""Exact polynomials in the model constants a, b, d, e.

Monomials are stored as exponent 4-tuples ordered (a, b, d, e).  Negative
exponents are tolerated so that division by a single parameter monomial
(``b*t/b``) stays exact; nothing else in the package produces them.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Mapping, Union

import numpy as np

PARAMS = ("a", "b", "d", "e")
_INDEX = {name: i for i, name in enumerate(PARAMS)}
_UNIT = (0, 0, 0, 0)

Number = Union[int, Fraction]


class ParamError(ValueError):
    pass


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise ParamError(f"not an exact rational: {value!r}")


class ParamPoly:
    """Immutable polynomial with Fraction coefficients in a, b, d, e."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple, Number] | None = None):
        clean = {}
        if terms:
            for mono, c in terms.items():
                c = as_fraction(c)
                if c:
                    clean[tuple(mono)] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "ParamPoly":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, value) -> "ParamPoly":
        value = as_fraction(value)
        return cls._raw({_UNIT: value} if value else {})

    @classmethod
    def symbol(cls, name: str) -> "ParamPoly":
        if name not in _INDEX:
            raise ParamError(f"unknown parameter {name!r}")
        mono = [0, 0, 0, 0]
        mono[_INDEX[name]] = 1
        return cls._raw({tuple(mono): Fraction(1)})

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and _UNIT in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ParamError(f"{self} is not a constant")
        return self._terms.get(_UNIT, Fraction(0))

    def constant_term(self) -> Fraction:
        return self._terms.get(_UNIT, Fraction(0))

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_linear(self) -> bool:
        """True when every monomial has degree at most one (no inverses)."""
        return all(min(m) >= 0 and sum(m) <= 1 for m in self._terms)

    def symbols(self) -> set[str]:
        used = set()
        for mono in self._terms:
            for name, k in zip(PARAMS, mono):
                if k:
                    used.add(name)
        return used

    def linear_coefficient(self, name: str) -> Fraction:
        mono = [0, 0, 0, 0]
        mono[_INDEX[name]] = 1
        return self._terms.get(tuple(mono), Fraction(0))

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other) -> "ParamPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for mono, c in other._terms.items():
            s = out.get(mono, 0) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return ParamPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "ParamPoly":
        return ParamPoly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "ParamPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "ParamPoly":
        return _coerce(other) - self

    def __mul__(self, other) -> "ParamPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not self._terms or not other._terms:
            return ZERO
        if other.is_constant():
            k = other._terms[_UNIT]
            return ParamPoly._raw({m: c * k for m, c in self._terms.items()})
        if self.is_constant():
            return other * self
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2], m1[3] + m2[3])
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return ParamPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "ParamPoly":
        if not isinstance(n, int):
            raise ParamError("parameter polynomials take integer powers only")
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "ParamPoly":
        """Inverse of a single-monomial polynomial."""
        if len(self._terms) != 1:
            raise ParamError(f"cannot divide by {self}")
        (mono, c), = self._terms.items()
        return ParamPoly._raw({tuple(-k for k in mono): 1 / c})

    def substitute(self, bindings: Mapping[str, "ParamPoly"]) -> "ParamPoly":
        if not bindings or not (self.symbols() & set(bindings)):
            return self
        result = ZERO
        for mono, c in self._terms.items():
            term = ParamPoly.const(c)
            for name, k in zip(PARAMS, mono):
                if not k:
                    continue
                base = bindings.get(name)
                if base is None:
                    m = [0, 0, 0, 0]
                    m[_INDEX[name]] = k
                    term = term * ParamPoly._raw({tuple(m): Fraction(1)})
                else:
                    term = term * (base ** k)
            result = result + term
        return result

    def evaluate(self, values: Mapping[str, object]):
        total = 0.0
        for mono, c in self._terms.items():
            val = float(c)
            for name, k in zip(PARAMS, mono):
                if k:
                    if name not in values:
                        raise KeyError(name)
                    val = val * np.power(values[name], k) if k > 0 else val / np.power(values[name], -k)
            total = total + val
        return total

    # -- identity ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return False
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def sort_key(self) -> tuple:
        return tuple((_mono_key(m), c) for m, c in sorted(self._terms.items(), key=lambda it: _mono_key(it[0])))

    def __repr__(self) -> str:
        return f"ParamPoly({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono in sorted(self._terms, key=_mono_key):
            parts.append(_format_term(self._terms[mono], mono))
        text = parts[0]
        for p in parts[1:]:
            text += " - " + p[1:] if p.startswith("-") else " + " + p
        return text


def _mono_key(mono: tuple) -> tuple:
    # higher total degree first, then lexicographic in (a, b, d, e)
    return (-sum(mono), tuple(-k for k in mono))


def format_number(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_monomial(mono: tuple) -> str:
    factors = []
    for name, k in zip(PARAMS, mono):
        if k == 1:
            factors.append(name)
        elif k:
            factors.append(f"{name}^{k}" if k > 0 else f"{name}^({k})")
    return "*".join(factors)


def _format_term(c: Fraction, mono: tuple) -> str:
    body = format_monomial(mono)
    if not body:
        return format_number(c)
    if c == 1:
        return body
    if c == -1:
        return "-" + body
    return f"{format_number(c)}*{body}"


def _coerce(value):
    if isinstance(value, ParamPoly):
        return value
    if isinstance(value, (int, Fraction)):
        return ParamPoly.const(value)
    return NotImplemented


ZERO = ParamPoly._raw({})
ONE = ParamPoly._raw({_UNIT: Fraction(1)})


def param_bindings(values: Mapping[str, object]) -> dict[str, ParamPoly]:
    """Normalise a mapping name -> number|ParamPoly into ParamPoly values."""
    out = {}
    for name, v in values.items():
        if name not in _INDEX:
            raise ParamError(f"unknown parameter {name!r}")
        out[name] = v if isinstance(v, ParamPoly) else ParamPoly.const(as_fraction(v))
    return out
