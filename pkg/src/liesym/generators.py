"""Case classification and generator bases: the published catalog, the
heat-equation fixture, and helpers for comparing bases."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import _catalog
from .cases import (
    ALL_CASE_IDS,
    CaseError,
    ParamCase,
    canonical_cases,
    classify,
)
from .jet import VectorField
from .linalg import rank
from .symexpr import Expr, ParamPoly, X, Y, parse, substitute

__all__ = [
    "ALL_CASE_IDS", "CaseError", "GeneratorBasis", "ParamCase", "basis_for", "canonical_cases",
    "catalog_json", "classify", "heat_basis", "published_basis", "swap_basis", "swap_field",
]


@dataclass(frozen=True)
class GeneratorBasis:
    case: ParamCase | None
    fields: tuple[VectorField, ...]
    labels: tuple[str, ...] = ()
    source: str = "catalog"
    symbolic: bool = True
    notes: dict = field(default_factory=dict)
    coords: tuple[str, ...] = ("x", "y", "t")

    @property
    def dimension(self) -> int:
        return len(self.fields)

    def __len__(self) -> int:
        return len(self.fields)

    def __getitem__(self, i: int) -> VectorField:
        return self.fields[i]

    def __iter__(self):
        return iter(self.fields)

    def numeric(self) -> "GeneratorBasis":
        """Fields with the case sample substituted for every parameter."""
        if self.case is None or not self.symbolic:
            return self
        sample = self.case.sample_map
        return GeneratorBasis(self.case, tuple(f.substitute(params=sample) for f in self.fields),
                              self.labels, self.source, False, self.notes, self.coords)

    def coefficient_vectors(self) -> list[dict]:
        """Each field as an exact sparse vector over (component, monomial)."""
        vecs = []
        for f in self.numeric().fields:
            vec = {}
            for idx, comp in enumerate(f.components):
                for key, c in comp.terms.items():
                    if not c.is_constant():
                        raise CaseError("coefficients still depend on parameters")
                    vec[(idx, key)] = c.constant_value()
            vecs.append(vec)
        return vecs

    def rank(self) -> int:
        return _rank_of(self.coefficient_vectors())

    def is_independent(self) -> bool:
        return self.rank() == self.dimension

    def same_span(self, other: "GeneratorBasis") -> bool:
        a, b = self.coefficient_vectors(), other.coefficient_vectors()
        r = _rank_of(a)
        return r == _rank_of(b) == _rank_of(a + b)

    def to_json(self) -> dict:
        out = {}
        if self.case is not None:
            out.update(self.case.as_dict())
        out["fields"] = [f.as_dict() for f in self.fields]
        out["dimension"] = self.dimension
        out["notes"] = {f"v{i + 1}": n for i, n in sorted(self.notes.items())}
        return out


def _rank_of(vectors: list[dict]) -> int:
    if not vectors:
        return 0
    keys = sorted({k for v in vectors for k in v}, key=repr)
    if not keys:
        return 0
    return rank([[v.get(k, Fraction(0)) for k in keys] for v in vectors])


def _field_from_strings(parts: tuple[str, str, str, str]) -> VectorField:
    xi, gamma, tau, lam = (parse(p) for p in parts)
    return VectorField.affine(xi, gamma, tau, lam)


def basis_for(case: ParamCase | str) -> GeneratorBasis:
    """Catalog basis of a case with its equality constraints applied; call
    ``.numeric()`` for the fields at the case sample."""
    if isinstance(case, str):
        case = ParamCase.from_id(case)
    constraints = case.constraints()
    fields, notes = [], {}
    for i, entry in enumerate(_catalog.BASES[case.case_id]):
        fields.append(_field_from_strings(entry["field"]).substitute(params=constraints))
        if "note" in entry:
            notes[i] = entry["note"]
    labels = tuple(f"v{i + 1}" for i in range(len(fields)))
    return GeneratorBasis(case, tuple(fields), labels, "catalog", True, notes)


def published_basis(case: ParamCase | str) -> GeneratorBasis:
    """The fields exactly as printed, typos included."""
    if isinstance(case, str):
        case = ParamCase.from_id(case)
    constraints = case.constraints()
    fields = []
    for entry in _catalog.BASES[case.case_id]:
        parts = entry.get("published") or entry["field"]
        fields.append(_field_from_strings(parts).substitute(params=constraints))
    labels = tuple(f"v{i + 1}" for i in range(len(fields)))
    return GeneratorBasis(case, tuple(fields), labels, "published", True)


def corrected_indices(case_id: str) -> list[int]:
    return [i for i, e in enumerate(_catalog.BASES[case_id]) if "note" in e]


def heat_basis() -> GeneratorBasis:
    fields = tuple(VectorField.affine(xi=parse(xi), tau=parse(tau), lam=parse(lam))
                   for xi, tau, lam in _catalog.HEAT_BASIS)
    labels = tuple(f"v{i + 1}" for i in range(len(fields)))
    return GeneratorBasis(None, fields, labels, "heat", False, {}, ("x", "t"))


_SWAP_PARAMS = {"a": ParamPoly.symbol("d"), "d": ParamPoly.symbol("a"),
                "b": ParamPoly.symbol("e"), "e": ParamPoly.symbol("b")}


def swap_field(v: VectorField) -> VectorField:
    """Image of a field under x <-> y, a <-> d, b <-> e."""
    bindings = {X: Expr.atom(Y), Y: Expr.atom(X)}
    sw = lambda e: substitute(e, bindings, _SWAP_PARAMS)
    return VectorField(sw(v.gamma), sw(v.xi), sw(v.tau), sw(v.phi))


def swap_basis(basis: GeneratorBasis) -> GeneratorBasis:
    case = basis.case.swapped() if basis.case is not None else None
    fields = tuple(swap_field(f) for f in basis.fields)
    if case is not None and basis.symbolic:
        fields = tuple(f.substitute(params=case.constraints()) for f in fields)
    return GeneratorBasis(case, fields, basis.labels, basis.source + "-swapped", basis.symbolic)


def catalog_json(case: ParamCase | str) -> dict:
    basis = basis_for(case)
    out = basis.to_json()
    out["published_differences"] = {
        f"v{i + 1}": dict(zip(("xi", "gamma", "tau", "lambda"), _catalog.BASES[basis.case.case_id][i]["published"]))
        for i in corrected_indices(basis.case.case_id)
    }
    return out
