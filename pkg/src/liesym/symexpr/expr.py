"""Canonical sums of monomials c * prod(atom^k) * exp(alpha*t).

A term key is ``(powers, exparg)`` where ``powers`` is a tuple of
``(Atom, exponent)`` pairs sorted by atom order and ``exparg`` is the
parameter-linear rate multiplying t.  Coefficients are :class:`ParamPoly`.
Exponents on x and y live in the half-integer lattice (so sqrt(x)^2 is x by
construction); every other atom carries a nonnegative integer exponent.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping

import numpy as np

from .atoms import COORD, DEP, JET, OPAQUE, T, U, X, Y, Atom, coord
from .params import ONE as P_ONE
from .params import ZERO as P_ZERO
from .params import ParamError, ParamPoly, as_fraction, format_number, param_bindings


class ExprError(ValueError):
    """An operation would leave the representable term algebra."""


class DomainError(ValueError):
    """Numeric evaluation outside x > 0, y > 0."""


def _norm_exp(k) -> int | Fraction:
    k = Fraction(k)
    return k.numerator if k.denominator == 1 else k


def _check_power(atom: Atom, k) -> None:
    if atom is X or atom is Y:
        if Fraction(k).denominator not in (1, 2):
            raise ExprError(f"{atom.label}^{k} is outside the half-integer lattice")
        return
    if isinstance(k, Fraction) or k < 0:
        raise ExprError(f"{atom.label}^{k} is not representable")


def _merge(p: tuple, q: tuple) -> tuple:
    if not p:
        return q
    if not q:
        return p
    acc = dict(p)
    for atom, k in q:
        s = acc.get(atom, 0) + k
        if s:
            acc[atom] = _norm_exp(s)
        else:
            del acc[atom]
    return tuple(sorted(acc.items(), key=lambda it: it[0].key))


def _coeff(value) -> ParamPoly:
    if isinstance(value, ParamPoly):
        return value
    return ParamPoly.const(as_fraction(value))


class Expr:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: dict | None = None):
        # trusted: keys canonical, coefficients nonzero
        self._terms = terms if terms is not None else {}
        self._hash = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def const(cls, value) -> "Expr":
        c = _coeff(value)
        return cls({((), P_ZERO): c} if c else {})

    @classmethod
    def param(cls, name: str) -> "Expr":
        return cls.const(ParamPoly.symbol(name))

    @classmethod
    def atom(cls, atom: Atom, power=1) -> "Expr":
        power = _norm_exp(power)
        if power == 0:
            return ONE
        _check_power(atom, power)
        return cls({(((atom, power),), P_ZERO): P_ONE})

    @classmethod
    def exp(cls, rate) -> "Expr":
        """exp(rate * t) for a parameter-linear ``rate``."""
        rate = _coeff(rate)
        if not rate.is_linear():
            raise ExprError(f"exp rate {rate} is not linear in the parameters")
        return cls({((), rate): P_ONE})

    @classmethod
    def from_terms(cls, items: Iterable[tuple]) -> "Expr":
        """Build from (coeff, powers-mapping, exparg) triples."""
        out = ZERO
        for c, powers, rate in items:
            term = cls.const(c) * cls.exp(rate)
            for atom, k in dict(powers).items():
                term = term * cls.atom(atom, k)
            out = out + term
        return out

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict:
        return self._terms

    def items(self):
        """Yield (coeff, powers, exparg) triples in canonical order."""
        for key in sorted(self._terms, key=_term_key):
            yield self._terms[key], key[0], key[1]

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def atoms(self) -> set[Atom]:
        return {a for (powers, _) in self._terms for a, _ in powers}

    def params(self) -> set[str]:
        used: set[str] = set()
        for (_, rate), c in self._terms.items():
            used |= c.symbols() | rate.symbols()
        return used

    def has_kind(self, kind: str) -> bool:
        return any(a.kind == kind for a in self.atoms())

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and ((), P_ZERO) in self._terms)

    def as_param(self) -> ParamPoly:
        if not self.is_constant():
            raise ExprError(f"{self} is not a parameter constant")
        return self._terms.get(((), P_ZERO), P_ZERO)

    def degree_in(self, atom: Atom):
        return max((dict(p).get(atom, 0) for p, _ in self._terms), default=0)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other) -> "Expr":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for key, c in other._terms.items():
            prev = out.get(key)
            if prev is None:
                out[key] = c
            else:
                s = prev + c
                if s:
                    out[key] = s
                else:
                    del out[key]
        return Expr(out)

    __radd__ = __add__

    def __neg__(self) -> "Expr":
        return Expr({k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> "Expr":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Expr":
        return _coerce(other) - self

    def __mul__(self, other) -> "Expr":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not self._terms or not other._terms:
            return ZERO
        if len(other._terms) > len(self._terms):
            self, other = other, self
        out: dict = {}
        for (p2, r2), c2 in other._terms.items():
            for (p1, r1), c1 in self._terms.items():
                key = (_merge(p1, p2), r1 + r2 if r2 else r1)
                c = c1 * c2
                prev = out.get(key)
                if prev is None:
                    out[key] = c
                else:
                    s = prev + c
                    if s:
                        out[key] = s
                    else:
                        del out[key]
        return Expr(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Expr":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.reciprocal()

    def __rtruediv__(self, other) -> "Expr":
        return _coerce(other) * self.reciprocal()

    def reciprocal(self) -> "Expr":
        """Inverse of a single term whose atoms all tolerate negative powers."""
        if len(self._terms) != 1:
            raise ExprError(f"cannot divide by the sum {self}")
        ((powers, rate), c), = self._terms.items()
        try:
            inv_c = c.inverse()
        except ParamError as exc:
            raise ExprError(str(exc)) from None
        for atom, k in powers:
            _check_power(atom, -k)
        return Expr({(tuple((a, -k) for a, k in powers), -rate): inv_c})

    def __pow__(self, n) -> "Expr":
        n = _norm_exp(n)
        if isinstance(n, int) and n >= 0:
            result, base = ONE, self
            while n:
                if n & 1:
                    result = result * base
                base = base * base
                n >>= 1
            return result
        return self._monomial_power(n)

    def _monomial_power(self, n: Fraction | int) -> "Expr":
        if len(self._terms) != 1:
            raise ExprError(f"non-integer or negative power of the sum {self}")
        ((powers, rate), c), = self._terms.items()
        if isinstance(n, int):
            c_new = c.inverse() ** (-n) if n < 0 else c ** n
        else:
            c_new = _rational_power(c, n)
        new_powers = []
        for atom, k in powers:
            k2 = _norm_exp(k * n)
            _check_power(atom, k2)
            new_powers.append((atom, k2))
        new_rate = rate * ParamPoly.const(n) if rate else rate
        if new_rate and not new_rate.is_linear():
            raise ExprError("exp rate left the linear class")
        return Expr({(tuple(new_powers), new_rate): c_new})

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return False
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"Expr({self})"

    def __str__(self) -> str:
        return to_text(self)

    # -- structural helpers ----------------------------------------------

    def map_terms(self, fn: Callable[[ParamPoly, tuple, ParamPoly], "Expr"]) -> "Expr":
        out = ZERO
        for (powers, rate), c in self._terms.items():
            out = out + fn(c, powers, rate)
        return out

    def filter_terms(self, keep: Callable[[tuple, ParamPoly], bool]) -> "Expr":
        return Expr({k: c for k, c in self._terms.items() if keep(*k)})

    def collect(self, atoms: Iterable[Atom]) -> dict[tuple, "Expr"]:
        """Group terms by their exponents on ``atoms``.

        Returns {exponent-tuple: cofactor} so that the expression equals the
        sum over keys of cofactor * prod(atom^k)."""
        atoms = tuple(atoms)
        chosen = set(atoms)
        groups: dict[tuple, dict] = {}
        for (powers, rate), c in self._terms.items():
            pw = dict(powers)
            sig = tuple(pw.get(a, 0) for a in atoms)
            rest = tuple((a, k) for a, k in powers if a not in chosen)
            groups.setdefault(sig, {})[(rest, rate)] = c
        return {sig: Expr(t) for sig, t in groups.items()}


def _rational_power(c: ParamPoly, n: Fraction) -> ParamPoly:
    if not c.is_constant():
        raise ExprError(f"fractional power of the parameter expression {c}")
    v = c.constant_value()
    if v <= 0:
        raise ExprError(f"fractional power of nonpositive {v}")
    root_n = _exact_root(v.numerator, n.denominator)
    root_d = _exact_root(v.denominator, n.denominator)
    if root_n is None or root_d is None:
        raise ExprError(f"{v}^{n} is irrational")
    return ParamPoly.const(Fraction(root_n, root_d) ** n.numerator)


def _exact_root(value: int, degree: int) -> int | None:
    r = round(value ** (1.0 / degree))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** degree == value:
            return cand
    return None


def _coerce(value):
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, Fraction, ParamPoly)):
        return Expr.const(value)
    return NotImplemented


ZERO = Expr({})
ONE = Expr({((), P_ZERO): P_ONE})


def symbol(name: str) -> Expr:
    """Expr for a coordinate, u, or a parameter name."""
    if name == "u":
        return Expr.atom(U)
    if name in ("x", "y", "t"):
        return Expr.atom(coord(name))
    return Expr.param(name)


def sqrt(e: Expr) -> Expr:
    return e ** Fraction(1, 2)


# -- calculus ------------------------------------------------------------------

_VAR_ATOMS = {"x": X, "y": Y, "t": T, "u": U}


def differentiate(e: Expr, var) -> Expr:
    """Partial derivative with respect to x, y, t, u or a jet atom.

    Jet atoms are independent of the coordinates; opaque atoms depend on
    (x, y, t, u) and differentiate to their derivative-tagged atoms."""
    if isinstance(var, str):
        target = _VAR_ATOMS[var]
        var_name = var
    else:
        target = var
        var_name = None if var.kind == JET else var.name
    out: dict = {}

    def add(key, c):
        prev = out.get(key)
        if prev is None:
            out[key] = c
        else:
            s = prev + c
            if s:
                out[key] = s
            else:
                del out[key]

    for (powers, rate), c in e._terms.items():
        if var_name == "t" and rate:
            add((powers, rate), c * rate)
        for i, (atom, k) in enumerate(powers):
            if atom is target:
                rest = powers[:i] + powers[i + 1:]
                if k == 1:
                    add((rest, rate), c)
                else:
                    add((_merge(rest, ((atom, _norm_exp(k - 1)),)), rate), c * ParamPoly.const(k))
            elif atom.kind == OPAQUE and var_name is not None and target.kind in (COORD, DEP):
                rest = powers[:i] + powers[i + 1:]
                d_atom = atom.derivative(var_name)
                lowered = ((atom, k - 1),) if k > 1 else ()
                new_powers = _merge(_merge(rest, lowered), ((d_atom, 1),))
                add((new_powers, rate), c * ParamPoly.const(k))
    return Expr(out)


def substitute(e: Expr, bindings: Mapping[Atom, Expr] | None = None,
               params: Mapping[str, object] | None = None) -> Expr:
    """Simultaneous substitution of atoms and parameters, then renormalise."""
    bindings = {a: _coerce(v) for a, v in (bindings or {}).items()}
    pbind = param_bindings(params or {})
    t_image = bindings.get(T)
    t_scale = None
    if t_image is not None:
        t_scale = _t_scale(t_image)
    power_cache: dict = {}
    out = ZERO
    for (powers, rate), c in e._terms.items():
        c2 = c.substitute(pbind) if pbind else c
        rate2 = rate.substitute(pbind) if (pbind and rate) else rate
        if rate2 and t_image is not None:
            if t_scale is None:
                raise ExprError(f"exp rate times t -> {t_image} is not representable")
            rate2 = rate2 * t_scale
        if rate2 and not rate2.is_linear():
            raise ExprError(f"exp rate {rate2} is not linear in the parameters")
        term_key_rest = []
        factor = ONE
        for atom, k in powers:
            image = bindings.get(atom)
            if image is None:
                term_key_rest.append((atom, k))
                continue
            ck = (atom, k)
            p = power_cache.get(ck)
            if p is None:
                p = power_cache[ck] = image ** k
            factor = factor * p
        base = Expr({(tuple(term_key_rest), rate2): c2}) if c2 else ZERO
        out = out + base * factor
    return out


def _t_scale(image: Expr) -> ParamPoly | None:
    # exp(r t) with t -> s*t stays representable
    if len(image.terms) != 1:
        return None
    ((powers, rate), c), = image.terms.items()
    if powers == ((T, 1),) and not rate and c.is_constant():
        return c
    return None


def substitute_functions(e: Expr, name: str, value: Expr,
                         variables: tuple[str, ...] = ("x", "y", "t", "u")) -> Expr:
    """Replace the opaque function ``name`` and all its formal derivatives by
    the corresponding derivatives of ``value``."""
    bindings = {}
    for atom in e.atoms():
        if atom.kind == OPAQUE and atom.name == name:
            d = value
            for var, k in zip(("x", "y", "t", "u"), atom.counts):
                for _ in range(k):
                    d = differentiate(d, var)
            bindings[atom] = d
    return substitute(e, bindings) if bindings else e


def is_zero(e: Expr) -> bool:
    return not e.terms


def coefficient(e: Expr, monomial: Mapping[Atom, int]) -> Expr:
    """Cofactor of an exact jet/u monomial (other atoms of those kinds must
    be absent from the selected terms)."""
    atoms = tuple(sorted(monomial, key=lambda a: a.key))
    return e.collect(atoms).get(tuple(monomial[a] for a in atoms), ZERO)


# -- numerics ------------------------------------------------------------------

def eval_numeric(e: Expr, point: Mapping[str, object]):
    """Float (or numpy array) value of ``e``; keys are atom labels and
    parameter names."""
    total = 0.0
    for (powers, rate), c in e.terms.items():
        try:
            val = c.evaluate(point)
            if rate:
                val = val * np.exp(rate.evaluate(point) * _lookup(point, "t"))
        except KeyError as exc:
            raise ExprError(f"missing binding for {exc.args[0]}") from None
        for atom, k in powers:
            v = _lookup(point, atom.label)
            if isinstance(k, Fraction) or k < 0:
                if atom is X or atom is Y:
                    if np.any(np.asarray(v) <= 0):
                        raise DomainError(f"{atom.label} must be positive")
                val = val * np.power(v, float(k))
            else:
                val = val * v ** k
        total = total + val
    if isinstance(total, np.ndarray) and total.ndim == 0:
        return float(total)
    if isinstance(total, np.floating):
        return float(total)
    return total


def _lookup(point, label):
    try:
        return point[label]
    except KeyError:
        raise ExprError(f"missing binding for {label}") from None


# -- printing ------------------------------------------------------------------

def _term_key(key) -> tuple:
    powers, rate = key
    pw = dict(powers)
    jets = tuple((a.key, -k) for a, k in powers if a.kind == JET)
    jet_deg = sum(k for a, k in powers if a.kind == JET)
    opq = tuple((a.key, -k) for a, k in powers if a.kind == OPAQUE)
    return (-jet_deg, jets, opq, -pw.get(U, 0), -pw.get(X, 0), -pw.get(Y, 0),
            -pw.get(T, 0), rate.sort_key())


def _format_power(atom: Atom, k) -> str:
    if atom is X or atom is Y:
        if k == Fraction(1, 2):
            return f"sqrt({atom.label})"
    if k == 1:
        return atom.label
    if isinstance(k, Fraction):
        return f"{atom.label}^({k.numerator}/{k.denominator})"
    return f"{atom.label}^{k}" if k > 0 else f"{atom.label}^({k})"


def _format_rate(rate: ParamPoly) -> str:
    if rate == P_ONE:
        return "exp(t)"
    if rate == -P_ONE:
        return "exp(-t)"
    if len(rate.terms) == 1:
        return f"exp({rate}*t)"
    return f"exp(({rate})*t)"


def _format_factors(powers: tuple, rate: ParamPoly) -> list[str]:
    order = {JET: 0, DEP: 1, COORD: 2, OPAQUE: 4}
    factors = []
    for atom, k in sorted(powers, key=lambda it: (order[it[0].kind], it[0].key)):
        if atom.kind == OPAQUE:
            continue
        factors.append(_format_power(atom, k))
    if rate:
        factors.append(_format_rate(rate))
    for atom, k in powers:
        if atom.kind == OPAQUE:
            factors.append(_format_power(atom, k))
    return factors


def _format_coeff(c: ParamPoly) -> tuple[str, bool]:
    """Return (text, is_unit_sign) where text is '', '-', or 'c*'."""
    if c.is_constant():
        v = c.constant_value()
        if v == 1:
            return "", True
        if v == -1:
            return "-", True
        return format_number(v), False
    if len(c.terms) == 1:
        return str(c), False
    return f"({c})", False


def to_text(e: Expr) -> str:
    if not e.terms:
        return "0"
    parts = []
    for c, powers, rate in e.items():
        factors = _format_factors(powers, rate)
        ctext, unit = _format_coeff(c)
        if not factors:
            parts.append(str(c) if not unit else ("1" if ctext == "" else "-1"))
            if not unit and len(c.terms) > 1:
                parts[-1] = f"({c})"
            continue
        body = "*".join(factors)
        if unit:
            parts.append(ctext + body)
        else:
            parts.append(f"{ctext}*{body}")
    text = parts[0]
    for p in parts[1:]:
        text += " - " + p[1:] if p.startswith("-") else " + " + p
    return text
