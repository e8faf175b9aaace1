import math
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from liesym.symexpr import (
    U,
    X,
    DomainError,
    Expr,
    ExprError,
    ParamPoly,
    ParseError,
    differentiate,
    eval_numeric,
    is_zero,
    jet_from_label,
    parse,
    substitute,
)
from strategies import SYM, exprs, to_sympy


def test_sqrt_exp_term():
    e = parse("sqrt(x)*exp(b*t/2)")
    assert len(e) == 1
    (c, powers, rate), = e.items()
    assert powers == ((X, Fraction(1, 2)),)
    assert rate == ParamPoly.symbol("b") * Fraction(1, 2)


def test_sqrt_squared_is_x():
    assert is_zero(parse("sqrt(x)^2 - x"))
    assert is_zero(parse("sqrt(y)*sqrt(y) - y"))


def test_drift_term_splits():
    e = parse("(a-b*x)*u_x")
    assert e == parse("a*u_x") + parse("-b*x*u_x")
    assert len(e) == 2


@pytest.mark.parametrize("text", ["sqrt(t)", "t^(1/2)", "u^(-1)", "x^(1/3)", "exp(t^2)", "exp(x)",
                                  "exp(b^2*t)", "1/(x+1)", "1/u_x", "sqrt(a)"])
def test_unrepresentable_rejected(text):
    with pytest.raises(ParseError):
        parse(text)


@pytest.mark.parametrize("text,pos", [("x + * 2", 4), ("(x + 1", 6), ("x $ y", 2), ("", 0)])
def test_syntax_error_position(text, pos):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.position == pos


def test_derivative_examples():
    assert differentiate(parse("sqrt(x)*sqrt(y)"), "x") == parse("1/2*x^(-1/2)*sqrt(y)")
    assert differentiate(parse("exp(b*t/2)*sqrt(x)"), "t") == parse("b/2*exp(b*t/2)*sqrt(x)")
    assert differentiate(parse("(a-b*x)*u_x"), "x") == parse("-b*u_x")


def test_opaque_derivative_tags():
    assert differentiate(parse("xi"), "x") == parse("xi_x")
    assert differentiate(parse("phi_x"), "u") == parse("phi_xu")
    assert differentiate(parse("xi^2"), "t") == parse("2*xi*xi_t")


def test_substitution_examples():
    e = parse("u_t + b*u_x")
    got = substitute(e, {jet_from_label("u_t"): parse("-(a-b*x)*u_x")})
    assert got == parse("-(a-b*x)*u_x + b*u_x")
    assert substitute(parse("a-b*x"), {X: Expr.const(0)}) == parse("a")
    assert is_zero(substitute(parse("h*(1/4-a)"), params={"a": Fraction(1, 4), "d": Fraction(1, 4)}))


def test_substitution_rejects_fractional_t():
    from liesym.symexpr import T
    with pytest.raises(ExprError):
        substitute(parse("exp(b*t)"), {T: parse("t^2")})
    assert substitute(parse("exp(b*t)"), {T: parse("2*t")}) == parse("exp(2*b*t)")


def test_zero_tests():
    assert is_zero(parse("exp(b*t/2)*exp(-b*t/2) - 1"))
    assert is_zero(parse("x*y - y*x"))
    assert not is_zero(parse("(b^2-e^2)*tau_t"))


def test_eval_examples():
    assert eval_numeric(parse("sqrt(x)"), {"x": 4.0}) == 2.0
    assert eval_numeric(parse("a-b*x"), {"a": 0.25, "b": 1.0, "x": 0.25}) == 0.0
    lhs = parse("u_t + (a-b*x)*u_x + (d-e*y)*u_y + x/2*u_xx + y/2*u_yy")
    point = {"x": 1.3, "y": 0.7, "t": 0.1, "a": 0.3, "b": 1.0, "d": 0.5, "e": 2.0,
             "u_t": 0.0, "u_x": 0.0, "u_y": 0.0, "u_xx": 0.0, "u_yy": 0.0}
    assert eval_numeric(lhs, point) == 0.0


def test_eval_errors():
    with pytest.raises(ExprError):
        eval_numeric(parse("x*a"), {"x": 1.0})
    with pytest.raises(DomainError):
        eval_numeric(parse("sqrt(x)"), {"x": -1.0})


def test_eval_vectorised():
    xs = np.array([1.0, 4.0, 9.0])
    np.testing.assert_allclose(eval_numeric(parse("sqrt(x)*exp(t)"), {"x": xs, "t": 0.0}), [1, 2, 3])


# -- properties ----------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(exprs(), exprs(), exprs())
def test_ring_laws(e1, e2, e3):
    assert is_zero((e1 + e2) + e3 - (e1 + (e2 + e3)))
    assert is_zero(e1 * e2 - e2 * e1)
    assert is_zero((e1 * e2) * e3 - e1 * (e2 * e3))
    assert is_zero(e1 * (e2 + e3) - e1 * e2 - e1 * e3)


@settings(max_examples=60, deadline=None)
@given(exprs(), exprs(), st.sampled_from("xytu"))
def test_leibniz(e1, e2, var):
    lhs = differentiate(e1 * e2, var)
    rhs = differentiate(e1, var) * e2 + e1 * differentiate(e2, var)
    assert is_zero(lhs - rhs)


@settings(max_examples=60, deadline=None)
@given(exprs())
def test_mixed_partials_commute(e):
    assert differentiate(differentiate(e, "x"), "y") == differentiate(differentiate(e, "y"), "x")
    assert differentiate(differentiate(e, "x"), "t") == differentiate(differentiate(e, "t"), "x")


@settings(max_examples=80, deadline=None)
@given(exprs())
def test_parse_print_roundtrip(e):
    assert parse(str(e)) == e


@settings(max_examples=40, deadline=None)
@given(exprs(max_terms=3), st.sampled_from("xyt"))
def test_derivative_matches_sympy(e, var):
    ours = to_sympy(differentiate(e, var))
    ref = sp.diff(to_sympy(e), SYM[var])
    assert sp.simplify(sp.expand(ours - ref)) == 0


POINT = st.fixed_dictionaries({
    "x": st.floats(0.1, 5), "y": st.floats(0.1, 5), "t": st.floats(-1, 1), "u": st.floats(-2, 2),
    "a": st.floats(-1, 1), "b": st.floats(-1, 1), "d": st.floats(-1, 1), "e": st.floats(-1, 1),
    "u_x": st.floats(-2, 2), "u_t": st.floats(-2, 2), "u_xx": st.floats(-2, 2),
})


@settings(max_examples=80, deadline=None)
@given(exprs(), exprs(), POINT)
def test_eval_is_additive_and_multiplicative(e1, e2, point):
    v1, v2 = eval_numeric(e1, point), eval_numeric(e2, point)
    scale = max(1.0, abs(v1), abs(v2))
    assert abs(eval_numeric(e1 + e2, point) - v1 - v2) < 1e-12 * scale
    assert math.isclose(eval_numeric(e1 * e2, point), v1 * v2, rel_tol=1e-9, abs_tol=1e-9 * scale * scale)


@settings(max_examples=40, deadline=None)
@given(exprs(max_terms=3), POINT)
def test_eval_matches_sympy(e, point):
    ref = float(to_sympy(e).subs({SYM[k]: v for k, v in point.items() if k in SYM}
                                 | {sp.Symbol(k, real=True): v for k, v in point.items() if k.startswith("u_")}))
    ours = eval_numeric(e, point)
    assert math.isclose(ours, ref, rel_tol=1e-9, abs_tol=1e-9)


def test_u_power_negative_rejected():
    with pytest.raises(ExprError):
        Expr.atom(U, -1)
