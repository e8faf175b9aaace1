from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from liesym.cases import ALL_CASE_IDS, ParamCase
from liesym.determining import (
    CandidateError,
    build_determining_system,
    check_candidate,
    heat_family,
    reduced_system,
    solve_reduced,
)
from liesym.generators import basis_for, heat_basis
from liesym.jet import JetError, VectorField
from liesym.liealg import commutator_table
from liesym.symexpr import is_zero, parse, substitute
from liesym.symexpr.atoms import opaque

LS = build_determining_system()
HEAT = build_determining_system(heat_family())


def same_up_to_sign(got, text):
    want = parse(text)
    return is_zero(got - want) or is_zero(got + want)


def test_row_u_xt():
    assert is_zero(LS.coefficient("u_xt") - parse("-x*tau_x"))


def test_row_u_xy_up_to_overall_sign():
    # each row is an equation "= 0", so an overall sign is immaterial
    assert same_up_to_sign(LS.coefficient("u_xy"), "x*gamma_x + y*xi_y")


def test_constant_row():
    want = parse("(a - b*x)*phi_x + (d - e*y)*phi_y + x/2*phi_xx + y/2*phi_yy + phi_t")
    assert is_zero(LS.coefficient("1") - want)


def test_monomial_coverage():
    needed = {"u_x", "u_y", "u_x*u_y", "u_x*u_x", "u_y*u_y", "u_xx", "u_yy", "u_x*u_xx",
              "u_y*u_yy", "u_xy", "u_xt", "u_yt", "1"}
    assert needed <= set(LS.monomials())
    assert len(LS) >= 25


def test_graded_lex_order_is_stable():
    degrees = [m.count("*") + (m != "1") for m in LS.monomials()]
    assert degrees == sorted(degrees)
    assert LS.monomials() == build_determining_system().monomials()


def test_u_xx_row_specialises_to_the_affine_condition():
    # tau = tau(t), xi independent of u
    row = LS.coefficient("u_xx")
    bindings = {opaque("tau", (2, 0, 0, 0)): parse("0"), opaque("tau", (1, 0, 0, 0)): parse("0"),
                opaque("tau", (0, 2, 0, 0)): parse("0"), opaque("tau", (0, 1, 0, 0)): parse("0")}
    reduced = substitute(row, bindings)
    assert is_zero(reduced - parse("xi/2 + x/2*tau_t - x*xi_x"))


def test_heat_fixture_passes():
    for v in heat_basis():
        verdict = check_candidate(v, HEAT)
        assert verdict.symbolic_pass
        assert verdict.numeric_max_residual < 1e-10


def test_zero_field_passes():
    assert check_candidate(VectorField(), LS).passed


def test_x_dx_fails_at_u_xx():
    verdict = check_candidate(VectorField(xi=parse("x")), LS)
    assert not verdict.passed
    failing = {f.monomial: f for f in verdict.failures}
    assert "u_xx" in failing
    # hand oracle: xi/2 - x*xi_x = x/2 - x
    assert is_zero(parse(failing["u_xx"].residual) + parse("x/2"))


def test_jet_dependent_candidate_is_rejected():
    with pytest.raises(JetError):
        VectorField(xi=parse("u_x"))
    with pytest.raises(CandidateError):
        check_candidate(VectorField(xi=parse("xi")), LS)


def test_too_few_points_rejected():
    with pytest.raises(ValueError):
        check_candidate(VectorField(), LS, n_points=10)


@pytest.mark.parametrize("case_id", ALL_CASE_IDS)
def test_catalog_round_trip(case_id):
    case = ParamCase.from_id(case_id)
    for v in basis_for(case):
        verdict = check_candidate(v, LS, case)
        assert verdict.symbolic_pass, [f.monomial for f in verdict.failures]
        assert verdict.numeric_max_residual < 1e-10


@pytest.mark.parametrize("case_id", ALL_CASE_IDS)
def test_reduced_solution_round_trip(case_id):
    case = ParamCase.from_id(case_id)
    basis = solve_reduced(case)
    assert basis.is_independent()
    for v in basis:
        assert check_candidate(v, LS, case, at_sample=True).symbolic_pass
    assert basis.same_span(basis_for(case).numeric())


def test_reduced_generic_case():
    assert reduced_system(ParamCase.from_id("2.1")).as_text() == [
        "h = 0", "l = 0", "k = 0", "tau_t = 0", "s_t = 0"]


def test_reduced_degenerate_case():
    text = reduced_system(ParamCase.from_id("1.4")).as_text()
    assert {"h_t = 0", "tau_ttt = 0", "l_tt = 0", "k_tt = 0", "s_t + 1/2*tau_tt = 0"} == set(text)


def test_reduced_equal_rates_case():
    text = reduced_system(ParamCase.from_id("3.2")).as_text()
    assert {"h = 0", "k = 0", "tau_ttt - b^2*tau_t = 0", "l_tt - 1/4*b^2*l = 0"} <= set(text)


def test_solve_reduced_dimensions():
    assert solve_reduced(ParamCase.from_id("2.1")).dimension == 2
    assert solve_reduced(ParamCase.from_id("1.4")).dimension == 9


ZERO_RATE_3_1 = (Fraction(1, 4), Fraction(0), Fraction(1, 2), Fraction(2))


@pytest.mark.xfail(strict=True, reason="recomputed brackets are not all zero; see the test below")
def test_case_3_1_with_zero_rate_published_abelian_claim():
    basis = solve_reduced(ParamCase.from_id("3.1", sample=ZERO_RATE_3_1))
    assert basis.dimension == 4
    table = commutator_table(basis)
    assert all(table.cell(i, j) == "0" for i in range(4) for j in range(4))


def test_case_3_1_with_zero_rate_structure():
    basis = solve_reduced(ParamCase.from_id("3.1", sample=ZERO_RATE_3_1))
    assert basis.dimension == 4
    # independent oracle: [d/dt, t sqrt(x) d/dx + 2 sqrt(x) u d/du] = sqrt(x) d/dx
    x, t, u = sp.symbols("x t u", positive=True)
    w = (sp.sqrt(x) * t, 2 * sp.sqrt(x) * u)  # (xi, phi) of the second field
    dt_w = [sp.diff(c, t) for c in w]
    assert dt_w == [sp.sqrt(x), 0]
    table = commutator_table(basis)
    nonzero = {(i, j) for i in range(4) for j in range(i + 1, 4) if table.cell(i, j) != "0"}
    assert nonzero == {(0, 1), (1, 2)}


# -- oracle: substitute fields into the equation with sympy ----------------------

X, Y, T = sp.symbols("x y t", positive=True)


def _sympy_symmetry_defect(xi, gamma, tau, lam, params):
    """pr v(Delta) on solutions for an affine field, via the characteristic:
    Q = lam*u - xi*u_x - gamma*u_y - tau*u_t must satisfy the linearised
    equation whenever u does; test with u = exp(kx x + ky y + w t)."""
    a, b, d, e = params
    L = lambda f: (a - b * X) * f.diff(X) + (d - e * Y) * f.diff(Y) + X / 2 * f.diff(X, 2) \
        + Y / 2 * f.diff(Y, 2) + f.diff(T)
    f = sp.Function("f")(X, Y, T)
    Q = lam * f - xi * f.diff(X) - gamma * f.diff(Y) - tau * f.diff(T)
    expr = sp.expand(L(Q))
    # eliminate f_t with the equation itself
    ft = -((a - b * X) * f.diff(X) + (d - e * Y) * f.diff(Y) + X / 2 * f.diff(X, 2) + Y / 2 * f.diff(Y, 2))
    expr = expr.subs(f.diff(T, 2), sp.Derivative(ft, T))
    for var in (X, Y):
        expr = expr.subs(sp.Derivative(f, var, T), ft.diff(var)).subs(sp.Derivative(f, var, var, T), ft.diff(var, 2))
    expr = expr.subs(sp.Derivative(f, X, Y, T), ft.diff(X, Y)).subs(f.diff(T), ft)
    return sp.simplify(expr.doit())


def test_sympy_oracle_agrees_on_a_catalog_field():
    case = ParamCase.from_id("3.2")
    a, b, d, e = (sp.Rational(v.numerator, v.denominator) for v in case.sample)
    # sqrt(x) e^{-bt/2} d/dx, a translation-type generator of this case
    assert _sympy_symmetry_defect(sp.sqrt(X) * sp.exp(-b * T / 2), 0, 0, 0, (a, b, d, e)) == 0
    assert check_candidate(VectorField(xi=parse("sqrt(x)*exp(-b*t/2)")), LS, case, at_sample=True).passed


def test_sympy_oracle_agrees_on_a_rejection():
    assert _sympy_symmetry_defect(X, 0, 0, 0, (sp.Rational(3, 10), 1, sp.Rational(1, 2), 2)) != 0


# -- random perturbations are rejected ---------------------------------------------

@settings(max_examples=20, deadline=None)
@given(st.integers(0, 5), st.sampled_from(["x", "y^2", "t*x", "x*y", "u*x", "exp(t)"]),
       st.sampled_from(["xi", "tau", "phi"]))
def test_perturbed_heat_fields_rejected(i, bump, slot):
    v = heat_basis()[i]
    if slot == "tau":
        bump = bump.replace("y", "x").replace("u*", "")
    w = VectorField(v.xi + (parse(bump.replace("y", "x")) if slot == "xi" else parse("0")),
                    v.gamma,
                    v.tau + (parse(bump.replace("y", "x")) if slot == "tau" else parse("0")),
                    v.phi + (parse(bump.replace("y", "x")) * parse("u^2") if slot == "phi" else parse("0")))
    assert not check_candidate(w, HEAT).passed


def test_numeric_residual_flags_rejection():
    verdict = check_candidate(VectorField(xi=parse("x")), LS, ParamCase.from_id("2.1"))
    assert verdict.numeric_max_residual > 1e-3
    assert np.isfinite(verdict.numeric_max_residual)
