"""Hypothesis strategies and a sympy bridge shared by the test modules."""

from fractions import Fraction

import sympy as sp
from hypothesis import strategies as st

from liesym.symexpr import Expr, ParamPoly, T, U, X, Y, jet

RATES = [ParamPoly(), ParamPoly.symbol("b"), -ParamPoly.symbol("b"),
         ParamPoly.symbol("b") * Fraction(1, 2), ParamPoly.symbol("e") * Fraction(-1, 2)]
JETS = [jet((1, 0, 0)), jet((0, 0, 1)), jet((2, 0, 0))]

fractions = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))
half_ints = st.integers(-3, 4).map(lambda k: Fraction(k, 2))


@st.composite
def coeffs(draw):
    c = ParamPoly.const(draw(fractions.filter(bool)))
    for name in draw(st.lists(st.sampled_from("abde"), max_size=2)):
        c = c * ParamPoly.symbol(name)
    if draw(st.booleans()):
        c = c + ParamPoly.symbol(draw(st.sampled_from("abde")))
    return c


@st.composite
def terms(draw, with_jets=True, with_u=True, nonneg=False):
    e = Expr.const(draw(coeffs()))
    lo = 0 if nonneg else -3
    e = e * Expr.atom(X, Fraction(draw(st.integers(lo, 4)), 2))
    e = e * Expr.atom(Y, Fraction(draw(st.integers(lo, 4)), 2))
    e = e * Expr.atom(T, draw(st.integers(0, 2)))
    if with_u:
        e = e * Expr.atom(U, draw(st.integers(0, 2)))
    if with_jets and draw(st.booleans()):
        e = e * Expr.atom(draw(st.sampled_from(JETS)), draw(st.integers(1, 2)))
    return e * Expr.exp(draw(st.sampled_from(RATES)))


@st.composite
def exprs(draw, max_terms=4, **kw):
    out = Expr.const(0)
    for t in draw(st.lists(terms(**kw), min_size=0, max_size=max_terms)):
        out = out + t
    return out


# -- sympy bridge --------------------------------------------------------------

SYM = {n: sp.Symbol(n, positive=True) for n in ("x", "y")}
SYM.update({n: sp.Symbol(n, real=True) for n in ("t", "u", "a", "b", "d", "e")})


def to_sympy(e: Expr):
    total = sp.Integer(0)
    for c, powers, rate in e.items():
        term = sp.sympify(str(c).replace("^", "**"), locals=SYM)
        for atom, k in powers:
            sym = SYM.get(atom.label) or sp.Symbol(atom.label, real=True)
            term *= sym ** sp.Rational(k.numerator, k.denominator) if isinstance(k, Fraction) else sym ** k
        if rate:
            term *= sp.exp(sp.sympify(str(rate).replace("^", "**"), locals=SYM) * SYM["t"])
        total += term
    return total
