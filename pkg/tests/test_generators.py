from fractions import Fraction

import pytest

from liesym.cases import ALL_CASE_IDS, CaseError, ParamCase, canonical_cases, classify
from liesym.determining import CandidateError, build_determining_system, check_candidate
from liesym.generators import (
    basis_for,
    catalog_json,
    corrected_indices,
    heat_basis,
    published_basis,
    swap_basis,
)
from liesym.jet import VectorField
from liesym.symexpr import parse

F = Fraction
DIMENSIONS = {
    "1.1": 6, "1.2": 9, "1.3": 9, "1.4": 9,
    "2.1": 2, "2.2": 4, "2.3": 4, "2.4": 4,
    "3.1": 4, "3.2": 6, "3.3": 6, "3.4": 6,
    "4.1": 4, "4.2": 6, "4.3": 6, "4.4": 6,
}


@pytest.mark.parametrize("values, case_id", [
    ((F(1, 4), F(1, 4), F(0), F(0)), "1.4"),
    ((F(3, 10), F(1, 2), F(1), F(2)), "2.1"),
    ((F(1, 4), F(1, 2), F(1), F(1)), "3.2"),
])
def test_classify(values, case_id):
    assert classify(*values).case_id == case_id


def test_classify_rejects_floats():
    with pytest.raises(ValueError):
        classify(0.25, 0.25, 0, 0)


@pytest.mark.parametrize("case", canonical_cases(), ids=ALL_CASE_IDS)
def test_classify_inverts_sample(case):
    a, b, d, e = case.sample
    assert classify(a, d, b, e) == case


@pytest.mark.parametrize("case_id", ALL_CASE_IDS)
def test_dimension(case_id):
    assert basis_for(case_id).dimension == DIMENSIONS[case_id]


@pytest.mark.parametrize("case_id", ALL_CASE_IDS)
def test_basis_is_independent(case_id):
    assert basis_for(case_id).is_independent()


def test_case_2_2_time_generator():
    v3 = basis_for("2.2")[2]
    want = VectorField.affine(tau=parse("1"), lam=parse("-b*(a + d)"))
    assert (v3 - want).substitute(params=ParamCase.from_id("2.2").constraints()).is_zero()


def test_case_4_1_fields():
    basis = basis_for("4.1")
    want = VectorField.affine(gamma=parse("sqrt(y)*exp(e*t/2)"), lam=parse("2*e*sqrt(y)*exp(e*t/2)"))
    assert any((v - want).is_zero() for v in basis)
    assert any((v - VectorField(gamma=parse("sqrt(y)*exp(-e*t/2)"))).is_zero() for v in basis)


@pytest.mark.parametrize("case_id", ALL_CASE_IDS)
def test_contains_time_and_scaling_directions(case_id):
    # d/dt up to a multiple of u d/du, and u d/du itself
    basis = basis_for(case_id).numeric()
    assert any(v.tau == parse("1") and v.xi.is_zero() and v.gamma.is_zero() for v in basis)
    assert any((v - VectorField(phi=parse("u"))).is_zero() for v in basis)


@pytest.mark.parametrize("case_id", ALL_CASE_IDS)
def test_swap_symmetry(case_id):
    case = ParamCase.from_id(case_id)
    swapped = swap_basis(basis_for(case))
    assert swapped.case == case.swapped()
    assert swapped.numeric().same_span(basis_for(case.swapped()).numeric())


def test_heat_basis():
    basis = heat_basis()
    assert basis.dimension == 6
    assert basis.coords == ("x", "t")
    assert any((v - VectorField.affine(xi=parse("2*t"), lam=parse("-x"))).is_zero() for v in basis)
    assert any((v - VectorField.affine(xi=parse("x"), tau=parse("2*t"), lam=parse("-1/2"))).is_zero()
               for v in basis)
    assert basis.is_independent()


# printed fields that are not symmetries, by case (1-based index)
PUBLISHED_FAILURES = {"1.4": [1], "2.2": [1], "3.3": [1], "4.2": [4], "4.3": [4], "4.4": [1, 4]}


def test_published_fields_that_fail():
    """Fields printed with typos are rejected; the corrected ones pass."""
    system = build_determining_system()
    rejected = {}
    for case_id in ALL_CASE_IDS:
        case = ParamCase.from_id(case_id)
        for i in corrected_indices(case_id):
            v = published_basis(case)[i]
            try:
                ok = check_candidate(v, system, case).passed
            except CandidateError:  # a free constant left in the printed field
                ok = False
            if not ok:
                rejected.setdefault(case_id, []).append(i + 1)
            assert check_candidate(basis_for(case)[i], system, case).passed
    assert rejected == PUBLISHED_FAILURES


def test_catalog_json_lists_differences():
    out = catalog_json("3.2")
    assert out["dimension"] == 6
    assert set(out["published_differences"]) == {f"v{i + 1}" for i in corrected_indices("3.2")}


def test_constraints_substituted():
    case = ParamCase.from_id("1.4")
    for v in basis_for(case):
        for comp in v.components:
            assert not any(str(c) in ("a", "d") for c in comp.params())


def test_sample_validation():
    with pytest.raises(CaseError):
        ParamCase.from_id("1.4", sample=(F(1, 3), F(0), F(1, 4), F(0)))
    with pytest.raises(CaseError):
        ParamCase.from_id("9.9")
