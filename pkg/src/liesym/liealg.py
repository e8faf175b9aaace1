"""Lie brackets of vector fields, structure constants, and identification of
the resulting abstract algebras against a small table of references.

Structure constants are kept exact: entries are ``ParamPoly`` values, so a
table computed from a symbolic basis still carries b and e.  Identification
works on rational constants (a table evaluated at a sample point) and always
produces a witness map that is re-checked bracket by bracket.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import _catalog
from .cases import ParamCase
from .generators import GeneratorBasis, basis_for
from .jet import VectorField
from .linalg import (
    SingularError,
    complement,
    coordinates,
    in_span,
    inverse,
    matvec,
    nullspace,
    rank,
    solve,
    span_basis,
)
from .symexpr import ZERO, Expr, ParamPoly, as_fraction, differentiate, parse

__all__ = [
    "ClosureError", "LieAlgebraError", "REFERENCE_NAMES", "StructureConstants", "StructureReport",
    "abelian", "bracket", "case_structure", "change_basis", "check_morphism", "commutator_table",
    "find_isomorphism", "inclusion_check", "instantiate", "published_table", "quotient",
    "reference", "structure_report", "subalgebra", "table_diff",
]

_COORD_NAMES = ("x", "y", "t", "u")
_ZERO = ParamPoly()
_ONE = ParamPoly.const(1)


class LieAlgebraError(ValueError):
    pass


class ClosureError(LieAlgebraError):
    def __init__(self, i: int, j: int, labels: Sequence[str]):
        super().__init__(f"[{labels[i]}, {labels[j]}] is not in the span of the basis")
        self.pair = (i, j)


# -- brackets of vector fields -----------------------------------------------


def _act(v: VectorField, f: Expr) -> Expr:
    out = ZERO
    for name, c in zip(_COORD_NAMES, v.components):
        if c:
            d = differentiate(f, name)
            if d:
                out = out + c * d
    return out


def bracket(v: VectorField, w: VectorField) -> VectorField:
    """Component-wise v(w^i) - w(v^i)."""
    return VectorField(*(_act(v, wc) - _act(w, vc) for vc, wc in zip(v.components, w.components)))


# -- structure constants -----------------------------------------------------


def _pp(value) -> ParamPoly:
    if isinstance(value, ParamPoly):
        return value
    return ParamPoly.const(as_fraction(value))


def _fmt_combo(coeffs: Sequence[ParamPoly], labels: Sequence[str]) -> str:
    parts = []
    for c, label in zip(coeffs, labels):
        if not c:
            continue
        if c == _ONE:
            parts.append(label)
        elif c == -_ONE:
            parts.append(f"-{label}")
        elif c.is_monomial():
            parts.append(f"{c}*{label}")
        else:
            parts.append(f"({c})*{label}")
    if not parts:
        return "0"
    text = " + ".join(parts)
    return text.replace("+ -", "- ")


@dataclass(frozen=True)
class StructureConstants:
    """[v_i, v_j] = sum_k table[i][j][k] v_k."""

    labels: tuple[str, ...]
    table: tuple
    name: str = ""

    @classmethod
    def from_brackets(cls, labels: Sequence[str], brackets: Mapping[tuple[str, str], Mapping[str, object]],
                      name: str = "") -> "StructureConstants":
        """Build from the nonzero brackets of label pairs; the rest are zero."""
        n = len(labels)
        index = {label: i for i, label in enumerate(labels)}
        table = [[[_ZERO] * n for _ in range(n)] for _ in range(n)]
        for (p, q), combo in brackets.items():
            i, j = index[p], index[q]
            for label, c in combo.items():
                c = _pp(c)
                table[i][j][index[label]] = c
                table[j][i][index[label]] = -c
        return cls(tuple(labels), _freeze(table), name)

    @classmethod
    def from_rational(cls, labels: Sequence[str], table, name: str = "") -> "StructureConstants":
        return cls(tuple(labels), _freeze([[[_pp(c) for c in vec] for vec in row] for row in table]), name)

    @property
    def dimension(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def entry(self, i: int, j: int) -> tuple[ParamPoly, ...]:
        return self.table[i][j]

    def params(self) -> set[str]:
        return {s for row in self.table for vec in row for c in vec for s in c.symbols()}

    def is_numeric(self) -> bool:
        return not self.params()

    def substitute(self, params: Mapping[str, object]) -> "StructureConstants":
        bindings = {k: _pp(v) for k, v in params.items()}
        table = [[[c.substitute(bindings) for c in vec] for vec in row] for row in self.table]
        return StructureConstants(self.labels, _freeze(table), self.name)

    def rational(self) -> list[list[list[Fraction]]]:
        if not self.is_numeric():
            raise LieAlgebraError(f"constants depend on {sorted(self.params())}; substitute a sample first")
        return [[[c.constant_value() for c in vec] for vec in row] for row in self.table]

    # -- identities ---------------------------------------------------------

    def check_antisymmetry(self) -> bool:
        n = self.dimension
        return all(self.table[i][j][k] + self.table[j][i][k] == _ZERO
                   for i in range(n) for j in range(n) for k in range(n))

    def jacobi_violations(self) -> list[tuple[int, int, int]]:
        """Triples (i, j, k) with [v_i,[v_j,v_k]] + cyclic != 0."""
        n, c = self.dimension, self.table
        bad = []
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    for m in range(n):
                        total = _ZERO
                        for a, b_, d in ((i, j, k), (j, k, i), (k, i, j)):
                            for l, coeff in enumerate(c[b_][d]):
                                if coeff and c[a][l][m]:
                                    total = total + coeff * c[a][l][m]
                        if total:
                            bad.append((i, j, k))
                            break
        return bad

    def check_jacobi(self) -> bool:
        return not self.jacobi_violations()

    def bracket_vec(self, x: Sequence, y: Sequence) -> list[ParamPoly]:
        n = self.dimension
        out = [_ZERO] * n
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj or i == j:
                    continue
                f = _pp(xi) * _pp(yj)
                for k, c in enumerate(self.table[i][j]):
                    if c:
                        out[k] = out[k] + f * c
        return out

    # -- output -------------------------------------------------------------

    def cell(self, i: int, j: int) -> str:
        return _fmt_combo(self.table[i][j], self.labels)

    def to_text(self) -> str:
        """Aligned grid, row i and column j holding [v_i, v_j]."""
        n = self.dimension
        rows = [["[ , ]", *self.labels]]
        rows += [[self.labels[i], *(self.cell(i, j) for j in range(n))] for i in range(n)]
        widths = [max(len(r[c]) for r in rows) for c in range(n + 1)]
        return "\n".join("  ".join(s.ljust(w) for s, w in zip(r, widths)).rstrip() for r in rows)

    def to_json(self) -> list[dict]:
        out = []
        for i in range(self.dimension):
            for j in range(i + 1, self.dimension):
                coeffs = {self.labels[k]: str(c) for k, c in enumerate(self.table[i][j]) if c}
                out.append({"i": self.labels[i], "j": self.labels[j], "coeffs": coeffs})
        return out


def _freeze(table) -> tuple:
    return tuple(tuple(tuple(vec) for vec in row) for row in table)


# -- commutator tables -------------------------------------------------------


def _field_vector(v: VectorField) -> dict:
    vec = {}
    for idx, comp in enumerate(v.components):
        for key, c in comp.terms.items():
            vec[(idx, key)] = c
    return vec


def _axpy(target: dict, factor: ParamPoly, source: dict) -> None:
    for key, c in source.items():
        value = target.get(key, _ZERO) - factor * c
        if value:
            target[key] = value
        else:
            target.pop(key, None)


class _Echelon:
    """Fully reduced rows over Laurent polynomials in the parameters; only
    single-monomial pivots are used so normalization stays exact."""

    def __init__(self, vectors: Sequence[dict]):
        self.n = len(vectors)
        self.rows: list[tuple[object, dict, dict]] = []  # (pivot key, row, combination)
        for i, vec in enumerate(vectors):
            row, comb = dict(vec), {i: _ONE}
            for key, prow, pcomb in self.rows:
                c = row.get(key)
                if c:
                    _axpy(row, c, prow)
                    _axpy(comb, c, pcomb)
            if not row:
                raise LieAlgebraError(f"basis element {i + 1} is linearly dependent on the others")
            pivot = self._choose_pivot(row)
            inv = row[pivot].inverse()
            row = {k: c * inv for k, c in row.items()}
            comb = {k: c * inv for k, c in comb.items()}
            for idx, (key, prow, pcomb) in enumerate(self.rows):
                c = prow.get(pivot)
                if c:
                    _axpy(prow, c, row)
                    _axpy(pcomb, c, comb)
            self.rows.append((pivot, row, comb))

    @staticmethod
    def _choose_pivot(row: dict):
        monomial = [k for k, c in row.items() if c.is_monomial()]
        if not monomial:
            raise LieAlgebraError("no invertible pivot among the symbolic coefficients")
        constant = [k for k in monomial if row[k].is_constant()]
        return min(constant or monomial, key=repr)

    def express(self, vec: dict) -> list[ParamPoly] | None:
        rest = dict(vec)
        coords = {}
        for key, prow, pcomb in self.rows:
            c = rest.get(key)
            if c:
                _axpy(rest, c, prow)
                for i, w in pcomb.items():
                    coords[i] = coords.get(i, _ZERO) + c * w
        if rest:
            return None
        return [coords.get(i, _ZERO) for i in range(self.n)]


def commutator_table(basis: GeneratorBasis | Sequence[VectorField], labels: Sequence[str] | None = None,
                     name: str = "") -> StructureConstants:
    """Expand every bracket of basis fields in the basis itself.

    Coefficients are matched term by term on the exact canonical forms, so a
    symbolic basis gives constants polynomial in its free parameters.  Raises
    ``ClosureError`` naming the first pair whose bracket leaves the span."""
    fields = list(basis.fields if isinstance(basis, GeneratorBasis) else basis)
    if labels is None:
        labels = basis.labels if isinstance(basis, GeneratorBasis) and basis.labels else \
            tuple(f"v{i + 1}" for i in range(len(fields)))
    if not name and isinstance(basis, GeneratorBasis) and basis.case is not None:
        name = basis.case.case_id
    labels = tuple(labels)
    ech = _Echelon([_field_vector(f) for f in fields])
    n = len(fields)
    table = [[[_ZERO] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            coords = ech.express(_field_vector(bracket(fields[i], fields[j])))
            if coords is None:
                raise ClosureError(i, j, labels)
            table[i][j] = coords
            table[j][i] = [-c for c in coords]
    return StructureConstants(labels, _freeze(table), name)


# -- reference algebras ------------------------------------------------------

_SL2 = {("E", "F"): {"H": 1}, ("H", "E"): {"E": 2}, ("H", "F"): {"F": -2}}


def _reference_table() -> dict[str, StructureConstants]:
    refs = {}
    refs["sl2"] = StructureConstants.from_brackets("EFH", _SL2, "sl2")
    refs["h3"] = StructureConstants.from_brackets("XYZ", {("X", "Y"): {"Z": 1}}, "h3")
    # L(3,2,-1): e3 acts on the abelian ideal <e1, e2> with eigenvalues +1, -1
    refs["iso2"] = StructureConstants.from_brackets(
        ("e1", "e2", "e3"), {("e3", "e1"): {"e1": 1}, ("e3", "e2"): {"e2": -1}}, "iso2")
    refs["sl2_x_R"] = StructureConstants.from_brackets("EFHZ", _SL2, "sl2_x_R")
    refs["sl2_semidirect_h3"] = StructureConstants.from_brackets("EFHXYZ", {
        **_SL2,
        ("E", "Y"): {"X": 1}, ("F", "X"): {"Y": 1},
        ("H", "X"): {"X": 1}, ("H", "Y"): {"Y": -1},
        ("X", "Y"): {"Z": 1},
    }, "sl2_semidirect_h3")
    # sl2 + so2 acting on the 5-dim Heisenberg algebra; R rotates the two
    # sl2 doublets (X1, Y1) and (X2, Y2) into each other
    j6 = dict(_SL2)
    for a, b in (("X1", "Y1"), ("X2", "Y2")):
        j6.update({("E", b): {a: 1}, ("F", a): {b: 1}, ("H", a): {a: 1}, ("H", b): {b: -1},
                   (a, b): {"Z": 1}})
    j6.update({("R", "X1"): {"X2": 1}, ("R", "X2"): {"X1": -1},
               ("R", "Y1"): {"Y2": 1}, ("R", "Y2"): {"Y1": -1}})
    refs["sl2_semidirect_J6"] = StructureConstants.from_brackets(
        ("E", "F", "H", "R", "X1", "Y1", "X2", "Y2", "Z"), j6, "sl2_semidirect_J6")
    # R acting on h3 with weights +1, -1; used to compare solvable cases
    refs["split_oscillator"] = StructureConstants.from_brackets("TPQZ", {
        ("T", "P"): {"P": 1}, ("T", "Q"): {"Q": -1}, ("P", "Q"): {"Z": 1}}, "split_oscillator")
    return refs


_REFERENCES = _reference_table()
REFERENCE_NAMES = ("abelian_n", "iso2", "sl2", "sl2_x_R", "sl2_semidirect_h3", "sl2_semidirect_J6")


def abelian(n: int) -> StructureConstants:
    return StructureConstants.from_brackets(tuple(f"e{i + 1}" for i in range(n)), {}, "abelian_n")


def reference(name: str, dimension: int | None = None) -> StructureConstants:
    if name == "abelian_n":
        if dimension is None:
            raise LieAlgebraError("abelian reference needs a dimension")
        return abelian(dimension)
    try:
        return _REFERENCES[name]
    except KeyError:
        raise LieAlgebraError(f"unknown reference algebra {name!r}") from None


# -- morphisms ---------------------------------------------------------------

_PROBE_POINTS = (
    {"a": Fraction(2, 7), "b": Fraction(3, 5), "d": Fraction(5, 11), "e": Fraction(7, 13)},
    {"a": Fraction(-3, 2), "b": Fraction(11, 3), "d": Fraction(13, 17), "e": Fraction(-5, 9)},
)


def _full_rank(images: list[list[ParamPoly]], sample: Mapping | None) -> bool:
    n = len(images)
    points = [sample] if sample is not None else []
    points += list(_PROBE_POINTS)
    for point in points:
        values = {k: _pp(v) for k, v in point.items()}
        try:
            mat = [[c.substitute(values).constant_value() for c in row] for row in images]
        except (ZeroDivisionError, ValueError):
            continue
        if rank(mat) == n:
            return True
    return False


def check_morphism(images: Sequence[Sequence], src: StructureConstants, dst: StructureConstants,
                   sample: Mapping | None = None) -> bool:
    """True iff the linear map v_i -> sum_k images[i][k] w_k is bijective and
    sends every bracket [v_i, v_j] to [image_i, image_j].

    Bracket preservation is checked as an exact identity in the parameters.
    Invertibility is decided from the rank at ``sample`` or at fixed probe
    points; a full rank anywhere means a nonzero determinant polynomial."""
    n, m = src.dimension, dst.dimension
    if len(images) != n or any(len(row) != m for row in images):
        return False
    if n != m:
        return False
    imgs = [[_pp(c) for c in row] for row in images]
    for i in range(n):
        for j in range(i + 1, n):
            lhs = [_ZERO] * m
            for k, c in enumerate(src.table[i][j]):
                if c:
                    for l, w in enumerate(imgs[k]):
                        if w:
                            lhs[l] = lhs[l] + c * w
            rhs = dst.bracket_vec(imgs[i], imgs[j])
            if any(a != b for a, b in zip(lhs, rhs)):
                return False
    return _full_rank(imgs, sample)


def change_basis(sc: StructureConstants, new_basis: Sequence[Sequence], labels: Sequence[str] | None = None
                 ) -> StructureConstants:
    """Constants in the basis w_a = sum_i new_basis[a][i] v_i (rational)."""
    return subalgebra(sc, new_basis, labels)


def subalgebra(sc: StructureConstants, vectors: Sequence[Sequence], labels: Sequence[str] | None = None
               ) -> StructureConstants:
    """Constants of the subalgebra spanned by ``vectors`` in that basis."""
    c = sc.rational()
    vecs = [[Fraction(v) for v in vec] for vec in vectors]
    if rank(vecs) != len(vecs):
        raise LieAlgebraError("subalgebra vectors are linearly dependent")
    m = len(vecs)
    table = [[[Fraction(0)] * m for _ in range(m)] for _ in range(m)]
    for a in range(m):
        for b in range(a + 1, m):
            br = _br(c, vecs[a], vecs[b])
            try:
                coords = coordinates(vecs, br)
            except SingularError:
                raise LieAlgebraError("span is not closed under the bracket") from None
            table[a][b] = coords
            table[b][a] = [-x for x in coords]
    labels = tuple(labels) if labels else tuple(f"w{a + 1}" for a in range(m))
    return StructureConstants.from_rational(labels, table, sc.name)


def _unit(n: int, i: int) -> list[Fraction]:
    return [Fraction(int(i == j)) for j in range(n)]


def quotient(sc: StructureConstants, ideal: Sequence[Sequence]) -> tuple[StructureConstants, list[int]]:
    """L / ideal on a complement of standard basis vectors.

    Returns the quotient constants and the indices of the basis elements whose
    classes form its basis; labels are written ``[v_i]``."""
    c = sc.rational()
    n = sc.dimension
    ideal = span_basis([[Fraction(v) for v in vec] for vec in ideal])
    for i in range(n):
        for vec in ideal:
            if not in_span(ideal, _br(c, _unit(n, i), vec)):
                raise LieAlgebraError("not an ideal")
    comp = complement(ideal, n)
    kept = [vec.index(1) for vec in comp]
    full = comp + ideal
    m = len(comp)
    table = [[[Fraction(0)] * m for _ in range(m)] for _ in range(m)]
    for a in range(m):
        for b in range(a + 1, m):
            coords = coordinates(full, _br(c, comp[a], comp[b]))[:m]
            table[a][b] = coords
            table[b][a] = [-x for x in coords]
    labels = tuple(f"[{sc.labels[i]}]" for i in kept)
    return StructureConstants.from_rational(labels, table, sc.name), kept


# -- rational helpers --------------------------------------------------------


def _br(c, x, y) -> list[Fraction]:
    n = len(x)
    out = [Fraction(0)] * n
    for i, xi in enumerate(x):
        if not xi:
            continue
        for j, yj in enumerate(y):
            if not yj or i == j:
                continue
            f = xi * yj
            for k, ck in enumerate(c[i][j]):
                if ck:
                    out[k] += f * ck
    return out


def _ad(c, x) -> list[list[Fraction]]:
    """Matrix of ad x: column j is [x, v_j]."""
    n = len(x)
    cols = [_br(c, x, _unit(n, j)) for j in range(n)]
    return [[cols[j][k] for j in range(n)] for k in range(n)]


def _center(c) -> list[list[Fraction]]:
    n = len(c)
    rows = [[c[i][j][k] for i in range(n)] for j in range(n) for k in range(n)]
    rows = [r for r in rows if any(r)]
    return nullspace(rows, n) if rows else [_unit(n, i) for i in range(n)]


def _derived(c) -> list[list[Fraction]]:
    n = len(c)
    return span_basis([list(c[i][j]) for i in range(n) for j in range(i + 1, n) if any(c[i][j])])


def _killing(c) -> list[list[Fraction]]:
    n = len(c)
    ads = [_ad(c, _unit(n, i)) for i in range(n)]
    return [[sum((ads[i][p][q] * ads[j][q][p] for p in range(n) for q in range(n)), Fraction(0))
             for j in range(n)] for i in range(n)]


def _radical(c, derived) -> list[list[Fraction]]:
    """Solvable radical: the Killing-orthogonal complement of [L, L]."""
    n = len(c)
    if not derived:
        return [_unit(n, i) for i in range(n)]
    kill = _killing(c)
    rows = [matvec(kill, d) for d in derived]
    rows = [r for r in rows if any(r)]
    return nullspace(rows, n) if rows else [_unit(n, i) for i in range(n)]


def _derived_of_span(c, vecs) -> list[list[Fraction]]:
    return span_basis([_br(c, vecs[a], vecs[b]) for a in range(len(vecs)) for b in range(a + 1, len(vecs))
                       if any(_br(c, vecs[a], vecs[b]))])


def _combine(coeffs, vecs) -> list[Fraction]:
    n = len(vecs[0])
    out = [Fraction(0)] * n
    for a, v in zip(coeffs, vecs):
        if a:
            for i in range(n):
                out[i] += a * v[i]
    return out


def _restricted_null(c, op_rows, space) -> list[list[Fraction]]:
    """Vectors r in span(space) killed by every operator in op_rows, where
    each operator is a function vector -> vector."""
    if not space:
        return []
    n = len(space[0])
    rows = []
    for op in op_rows:
        images = [op(v) for v in space]
        rows += [[img[k] for img in images] for k in range(n)]
    rows = [r for r in rows if any(r)]
    coeffs = nullspace(rows, len(space)) if rows else [_unit(len(space), a) for a in range(len(space))]
    return [_combine(co, space) for co in coeffs]


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    p, r = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if p * p == q.numerator and r * r == q.denominator:
        return Fraction(p, r)
    return None


# -- Levi decomposition and sl2 triples ---------------------------------------


def _levi(c, radical) -> list[list[Fraction]]:
    """A subalgebra complementary to the radical (Levi factor), obtained by
    correcting lifts of a quotient basis one derived-series layer at a time."""
    n = len(c)
    lifts = complement(radical, n)
    m = len(lifts)
    full = lifts + radical
    quot = [[coordinates(full, _br(c, lifts[a], lifts[b]))[:m] for b in range(m)] for a in range(m)]
    layers = [radical]
    while layers[-1]:
        layers.append(_derived_of_span(c, layers[-1]))
    for p in range(len(layers) - 1):
        layer, below = layers[p], layers[p + 1]
        # unknown corrections r_a = sum_s z[a, s] layer[s]; equations modulo `below`
        quot_basis = complement(below, n) if below else [_unit(n, i) for i in range(n)]
        proj_basis = quot_basis + below
        k = len(quot_basis)

        def project(vec):
            return coordinates(proj_basis, vec)[:k]

        unknowns = m * len(layer)
        rows, rhs = [], []
        for a in range(m):
            for b in range(a + 1, m):
                err = _br(c, lifts[a], lifts[b])
                err = [e - s for e, s in zip(err, _combine(quot[a][b], lifts))]
                cols = []
                for aa in range(m):
                    for s, r in enumerate(layer):
                        term = [Fraction(0)] * n
                        if aa == b:
                            term = [x + y for x, y in zip(term, _br(c, lifts[a], r))]
                        if aa == a:
                            term = [x - y for x, y in zip(term, _br(c, lifts[b], r))]
                        coef = quot[a][b][aa]
                        if coef:
                            term = [x - coef * y for x, y in zip(term, r)]
                        cols.append(project(term))
                perr = project(err)
                for q in range(k):
                    rows.append([cols[u][q] for u in range(unknowns)])
                    rhs.append(-perr[q])
        if not rows:
            continue
        try:
            z = solve(rows, rhs)
        except SingularError:
            raise LieAlgebraError("no Levi complement found") from None
        lifts = [[x + y for x, y in zip(lifts[a], _combine(z[a * len(layer):(a + 1) * len(layer)], layer))]
                 for a in range(m)]
    return lifts


def _squarefree(value: int) -> tuple[int, int]:
    """value = core * root**2 with core squarefree over small primes."""
    sign, value = (-1 if value < 0 else 1), abs(value)
    root, p = 1, 2
    while p * p <= value and p < 2000:
        while value % (p * p) == 0:
            value //= p * p
            root *= p
        p += 1
    return sign * value, root


def _isotropic(form: list[list[Fraction]]) -> list[Fraction] | None:
    """Nonzero rational v with form(v, v) = 0 for a 3x3 symmetric form."""
    n = len(form)

    def q(u, v):
        return sum((u[i] * form[i][j] * v[j] for i in range(n) for j in range(n)), Fraction(0))

    basis = [_unit(n, i) for i in range(n)]
    diag = []
    while basis:
        for w in basis:
            if q(w, w) == 0:
                return w
        w = basis.pop(0)
        qw = q(w, w)
        basis = [[x - q(w, u) / qw * y for x, y in zip(u, w)] for u in basis]
        diag.append((w, qw))
    scale = math.lcm(*(qw.denominator for _, qw in diag))
    coeffs, roots = zip(*(_squarefree(int(qw * scale)) for _, qw in diag))
    A, B, C = coeffs
    if A * B > 0 and B * C > 0:
        return None
    bound_x = min(math.isqrt(abs(B * C)) + 1, 2000)
    bound_y = min(math.isqrt(abs(A * C)) + 1, 2000)
    for xs in range(bound_x + 1):
        for ys in range(-bound_y, bound_y + 1):
            if xs == 0 and ys == 0:
                continue
            num = -(A * xs * xs + B * ys * ys)
            if num * C < 0 or num % C:
                continue
            zs = math.isqrt(num // C)
            if zs * zs * C != num:
                continue
            sol = (Fraction(xs, roots[0]), Fraction(ys, roots[1]), Fraction(zs, roots[2]))
            return _combine(sol, [w for w, _ in diag])
    return None


def _sl2_triple(c, levi) -> tuple[list, list, list] | None:
    """(E, F, H) inside span(levi) with the standard sl2 brackets."""
    sub = [[coordinates(levi, _br(c, levi[a], levi[b])) for b in range(3)] for a in range(3)]
    kill = _killing(sub)
    nil = _isotropic(kill)
    if nil is None:
        return None
    ad_e = _ad(sub, nil)
    ad_e2 = [[sum((ad_e[i][k] * ad_e[k][j] for k in range(3)), Fraction(0)) for j in range(3)] for i in range(3)]
    try:
        xs = solve(ad_e2, [-2 * v for v in nil])
    except SingularError:
        return None
    h = matvec(ad_e, xs)
    ad_h = _ad(sub, h)
    rows = ad_e + [[ad_h[i][j] + 2 * int(i == j) for j in range(3)] for i in range(3)]
    try:
        f = solve(rows, h + [Fraction(0)] * 3)
    except SingularError:
        return None
    lift = lambda v: _combine(v, levi)
    return lift(nil), lift(f), lift(h)


# -- witness construction ----------------------------------------------------


def _witness_from_rows(c, ref: StructureConstants, rows) -> list[list[Fraction]] | None:
    """Given reference elements expressed in L, return images of v_i."""
    if any(not any(r) for r in rows) or rank(rows) != len(rows):
        return None
    try:
        images = inverse(rows)
    except SingularError:
        return None
    src = StructureConstants.from_rational(tuple(f"v{i + 1}" for i in range(len(c))), c)
    return images if check_morphism(images, src, ref) else None


def _eigen(c, h, space, weight: int) -> list[list[Fraction]]:
    return _restricted_null(c, [lambda v: [a - weight * b for a, b in zip(_br(c, h, v), v)]], space)


def _match_levi(c, center, radical, triple):
    e, f, h = triple
    n = len(c)
    dim_r = len(radical)
    if n == 3:
        return "sl2", _witness_from_rows(c, _REFERENCES["sl2"], [e, f, h])
    if dim_r == 1 and len(center) == 1:
        return "sl2_x_R", _witness_from_rows(c, _REFERENCES["sl2_x_R"], [e, f, h, center[0]])
    if dim_r == 3:
        for x in _eigen(c, h, radical, 1):
            y = _br(c, f, x)
            z = _br(c, x, y)
            w = _witness_from_rows(c, _REFERENCES["sl2_semidirect_h3"], [e, f, h, x, y, z])
            if w:
                return "sl2_semidirect_h3", w
    if dim_r == 6 and len(center) == 1:
        w = _match_j6(c, center[0], radical, e, f, h)
        if w:
            return "sl2_semidirect_J6", w
    return "unknown", None


def _match_j6(c, z_center, radical, e, f, h):
    invariant = _restricted_null(c, [lambda v: _br(c, g, v) for g in (e, f, h)], radical)
    rot = next((r for r in invariant if not in_span([z_center], r)), None)
    if rot is None:
        return None
    weight_one = _eigen(c, h, radical, 1)
    if len(weight_one) != 2:
        return None
    images = [coordinates(weight_one, _br(c, rot, w)) for w in weight_one]
    det = images[0][0] * images[1][1] - images[0][1] * images[1][0]
    omega = _rational_sqrt(det)
    if not omega or images[0][0] + images[1][1] != 0:
        return None
    rot = [r / omega for r in rot]
    a, b = weight_one
    for x1 in (a, b, [p + q for p, q in zip(a, b)]):
        y1 = _br(c, f, x1)
        x2 = _br(c, rot, x1)
        y2 = _br(c, f, x2)
        z = _br(c, x1, y1)
        w = _witness_from_rows(c, _REFERENCES["sl2_semidirect_J6"], [e, f, h, rot, x1, y1, x2, y2, z])
        if w:
            return w
    return None


def _match_solvable(c, center, derived):
    n = len(c)
    if n == 3 and len(derived) == 2 and not _derived_of_span(c, derived):
        t = complement(derived, n)[0]
        images = [coordinates(derived, _br(c, t, d)) for d in derived]
        tr = images[0][0] + images[1][1]
        det = images[0][0] * images[1][1] - images[0][1] * images[1][0]
        mu = _rational_sqrt(-det)
        if tr == 0 and mu:
            t = [v / mu for v in t]
            up, down = _eigen(c, t, derived, 1), _eigen(c, t, derived, -1)
            if up and down:
                return "iso2", _witness_from_rows(c, _REFERENCES["iso2"], [up[0], down[0], t])
    if n == 3 and len(derived) == 1 and len(center) == 1 and in_span(center, derived[0]):
        x, y = complement(derived, n)
        return "h3", _witness_from_rows(c, _REFERENCES["h3"], [x, y, _br(c, x, y)])
    if n == 4 and len(center) == 1 and len(derived) == 3:
        t = complement(derived, n)[0]
        mat = [coordinates(derived, _br(c, t, d)) for d in derived]
        # ad t on the derived algebra has eigenvalues mu, -mu, 0
        minors = sum(mat[i][i] * mat[j][j] - mat[i][j] * mat[j][i] for i in range(3) for j in range(i + 1, 3))
        mu = _rational_sqrt(-minors)
        if mu:
            t = [v / mu for v in t]
            up, down = _eigen(c, t, derived, 1), _eigen(c, t, derived, -1)
            if up and down:
                p, q = up[0], down[0]
                return "split_oscillator", _witness_from_rows(
                    c, _REFERENCES["split_oscillator"], [t, p, q, _br(c, p, q)])
    return "unknown", None


# -- structure report --------------------------------------------------------


@dataclass
class StructureReport:
    dimension: int
    labels: tuple[str, ...]
    center_basis: list[list[Fraction]]
    derived_subalgebra_dim: int
    radical_dim: int
    matched: str
    witness: list[list[Fraction]] | None = None
    reference_labels: tuple[str, ...] = ()
    method: str = ""
    normal_form: str = ""
    center_quotient: "StructureReport | None" = None
    radical_quotient: "StructureReport | None" = None
    published_maps: list[dict] = field(default_factory=list)

    @property
    def witness_verified(self) -> bool:
        return self.witness is not None

    def center_text(self) -> list[str]:
        return [_fmt_combo([_pp(v) for v in vec], self.labels) for vec in self.center_basis]

    def witness_text(self) -> dict[str, str]:
        if self.witness is None:
            return {}
        return {label: _fmt_combo([_pp(v) for v in row], self.reference_labels)
                for label, row in zip(self.labels, self.witness)}

    def summary(self) -> str:
        name = self.matched if self.matched != "abelian_n" else f"abelian (dim {self.dimension})"
        return name

    def as_dict(self) -> dict:
        out = {
            "dimension": self.dimension,
            "center_basis": self.center_text(),
            "derived_subalgebra_dim": self.derived_subalgebra_dim,
            "radical_dim": self.radical_dim,
            "matched": self.matched,
            "method": self.method,
            "witness": self.witness_text(),
        }
        if self.normal_form and self.normal_form != self.matched:
            out["normal_form"] = self.normal_form
        if self.center_quotient is not None:
            out["center_quotient"] = self.center_quotient.as_dict()
        if self.radical_quotient is not None:
            out["radical_quotient"] = self.radical_quotient.as_dict()
        if self.published_maps:
            out["published_maps"] = self.published_maps
        return out

    def to_text(self, indent: str = "") -> str:
        lines = [
            f"{indent}dimension: {self.dimension}",
            f"{indent}center: <{', '.join(self.center_text())}>",
            f"{indent}derived subalgebra dimension: {self.derived_subalgebra_dim}",
            f"{indent}radical dimension: {self.radical_dim}",
            f"{indent}matched: {self.summary()}" + (f" ({self.method})" if self.method else ""),
        ]
        if self.normal_form and self.normal_form != self.matched:
            lines.append(f"{indent}normal form: {self.normal_form}")
        for label, image in self.witness_text().items():
            lines.append(f"{indent}  {label} -> {image}")
        if self.center_quotient is not None:
            lines.append(f"{indent}quotient by the center:")
            lines.append(self.center_quotient.to_text(indent + "  "))
        if self.radical_quotient is not None:
            lines.append(f"{indent}quotient by the radical:")
            lines.append(self.radical_quotient.to_text(indent + "  "))
        for entry in self.published_maps:
            status = "verified" if entry["verified"] else "FAILS"
            lines.append(f"{indent}published map ({entry['description']}): {status}")
        return "\n".join(lines)


def _identify(c):
    """(name, witness) over the reference set, including internal forms."""
    n = len(c)
    center = _center(c)
    derived = _derived(c)
    if not derived:
        return "abelian_n", [_unit(n, i) for i in range(n)], center, derived, []
    radical = _radical(c, derived)
    if len(radical) == n:
        name, w = _match_solvable(c, center, derived)
        return (name if w else "unknown"), w, center, derived, radical
    if n - len(radical) != 3:
        return "unknown", None, center, derived, radical
    levi = _levi(c, radical)
    triple = _sl2_triple(c, levi)
    if triple is None:
        return "unknown", None, center, derived, radical
    name, w = _match_levi(c, center, radical, triple)
    return (name if w else "unknown"), w, center, derived, radical


def structure_report(sc: StructureConstants, candidates: Iterable[tuple[str, Sequence[Sequence]]] = (),
                     sample: Mapping | None = None, _depth: int = 0) -> StructureReport:
    """Center, derived and radical dimensions, and a verified match against
    the reference table.  ``candidates`` are (reference name, images) pairs
    tried before the constructive search."""
    if not sc.is_numeric():
        if sample is None:
            raise LieAlgebraError("symbolic constants need a sample point")
        sc = sc.substitute(sample)
    if not sc.check_antisymmetry() or not sc.check_jacobi():
        raise LieAlgebraError("structure constants violate antisymmetry or the Jacobi identity")
    c = sc.rational()
    n = sc.dimension
    name, witness, center, derived, radical = _identify(c)
    method = "constructed" if witness is not None else ""
    for cand_name, images in candidates:
        ref = reference(cand_name, n)
        numeric = [[_pp(v).substitute({k: _pp(x) for k, x in (sample or {}).items()}) for v in row]
                   for row in images]
        if all(v.is_constant() for row in numeric for v in row) and check_morphism(numeric, sc, ref):
            name, witness, method = cand_name, [[v.constant_value() for v in row] for row in numeric], \
                "published map"
            break
    normal_form = name
    public = name if name in REFERENCE_NAMES else "unknown"
    ref_labels = reference(name, n).labels if witness is not None else ()
    report = StructureReport(
        dimension=n, labels=sc.labels, center_basis=center, derived_subalgebra_dim=len(derived),
        radical_dim=len(radical), matched=public, witness=witness if public != "unknown" or
        name == "split_oscillator" or name == "h3" else None,
        reference_labels=ref_labels, method=method if witness is not None else "", normal_form=normal_form,
    )
    if public == "unknown" and report.witness is None:
        report.method = ""
    if _depth == 0 and center and len(center) < n and derived:
        qsc, _ = quotient(sc, center)
        report.center_quotient = structure_report(qsc, _depth=1)
    if _depth == 0 and radical and len(radical) < n:
        qsc, _ = quotient(sc, radical)
        report.radical_quotient = structure_report(qsc, _depth=1)
    return report


# -- case-level helpers ------------------------------------------------------


def _parse_coeff(text: str) -> ParamPoly:
    return parse(text).as_param()


def _candidate_images(spec: Mapping[str, Mapping[str, str]], src_labels, ref: StructureConstants):
    rows = []
    for label in src_labels:
        combo = spec.get(label, {})
        rows.append([_parse_coeff(combo[r]) if r in combo else _ZERO for r in ref.labels])
    return rows


def _published_candidates(case_id: str):
    out = []
    for entry in _catalog.WITNESSES.get(case_id, ()):
        if entry.get("ideal"):
            continue
        ref = reference(entry["reference"])
        labels = [f"v{i + 1}" for i in range(len(entry["images"]))]
        out.append((entry["reference"], _candidate_images(entry["images"], labels, ref)))
    return out


def _quotient_map_results(sc: StructureConstants, case_id: str, sample: Mapping) -> list[dict]:
    """Check the published maps defined on quotients or their subalgebras."""
    results = []
    index = {label: i for i, label in enumerate(sc.labels)}
    n = sc.dimension
    bindings = {k: _pp(v) for k, v in sample.items()}
    for entry in _catalog.WITNESSES.get(case_id, ()):
        if not entry.get("ideal"):
            continue
        ideal = [_unit(n, index[label]) for label in entry["ideal"]]
        try:
            qsc, kept = quotient(sc, ideal)
            ref = reference(entry["reference"])
            sub_labels = entry.get("subalgebra") or [sc.labels[i] for i in kept]
            qindex = {sc.labels[i]: a for a, i in enumerate(kept)}
            vecs = [_unit(len(kept), qindex[label]) for label in sub_labels]
            target = subalgebra(qsc, vecs, [f"[{label}]" for label in sub_labels])
            images = _candidate_images(entry["images"], sub_labels, ref)
            images = [[v.substitute(bindings) for v in row] for row in images]
            ok = check_morphism(images, target, ref)
        except (LieAlgebraError, KeyError):
            ok = False
        results.append({"description": entry["description"], "verified": ok})
    return results


def case_structure(case: ParamCase | str, basis: GeneratorBasis | None = None) -> StructureReport:
    """Structure report of a case at its sample, trying the published witness
    maps first and recording the outcome of every published quotient map."""
    if isinstance(case, str):
        case = ParamCase.from_id(case)
    basis = basis or basis_for(case).numeric()
    sc = commutator_table(basis.numeric())
    candidates = _published_candidates(case.case_id)
    report = structure_report(sc, candidates, sample=case.sample_map)
    report.published_maps = _quotient_map_results(sc, case.case_id, case.sample_map)
    return report


def find_isomorphism(left: StructureConstants, right: StructureConstants) -> list[list[Fraction]] | None:
    """Images of the left basis in the right basis, or None when no common
    normal form was found; the result is verified before it is returned."""
    cl, cr = left.rational(), right.rational()
    name_l, wl, *_ = _identify(cl)
    name_r, wr, *_ = _identify(cr)
    if wl is None or wr is None or name_l != name_r:
        return None
    back = inverse(wr)
    images = [[sum((row[k] * back[k][j] for k in range(len(row))), Fraction(0)) for j in range(len(row))]
              for row in wl]
    return images if check_morphism(images, left, right) else None


def instantiate(basis: GeneratorBasis, sample: Sequence) -> GeneratorBasis:
    """A symbolic basis with another parameter sample substituted."""
    case = basis.case
    values = dict(zip("abde", (as_fraction(v) for v in sample)))
    if case is not None:
        for name, poly in case.constraints().items():
            if poly.substitute({k: _pp(v) for k, v in values.items()}) != _pp(values[name]):
                raise LieAlgebraError(
                    f"sample {tuple(str(v) for v in sample)} violates the constraints of case {case.case_id}")
    fields = tuple(f.substitute(params=values) for f in basis.fields)
    return GeneratorBasis(None, fields, basis.labels, basis.source, False, basis.notes, basis.coords)


def inclusion_check(small: GeneratorBasis, large: GeneratorBasis) -> bool:
    """True iff every field of ``small`` is a combination of ``large``.

    A symbolic ``small`` is first instantiated at the sample of ``large``;
    samples that break the constraints of ``small`` are an error."""
    if small.coords != large.coords:
        raise LieAlgebraError("bases live on different coordinate spaces")
    if large.symbolic:
        large = large.numeric()
    if small.symbolic and small.case is not None and large.case is not None:
        small = instantiate(small, large.case.sample)
    elif small.case is not None and large.case is not None and small.case.sample != large.case.sample:
        raise LieAlgebraError("bases were sampled at different parameter values")
    vecs_small, vecs_large = small.coefficient_vectors(), large.coefficient_vectors()
    keys = sorted({k for v in vecs_small + vecs_large for k in v}, key=repr)
    mat = lambda vs: [[v.get(k, Fraction(0)) for k in keys] for v in vs]
    if not vecs_small:
        return True
    big = mat(vecs_large)
    return rank(big + mat(vecs_small)) == rank(big) if big else False


# -- published tables --------------------------------------------------------


def published_table(case: ParamCase | str, symbolic: bool = True) -> StructureConstants:
    """The transcribed commutator table with the case constraints applied."""
    if isinstance(case, str):
        case = ParamCase.from_id(case)
    rows = _catalog.TABLES[case.case_id]
    n = len(rows)
    labels = tuple(f"v{i + 1}" for i in range(n))
    from .symexpr import opaque
    atoms = [opaque(label) for label in labels]
    constraints = case.constraints()
    table = [[[_ZERO] * n for _ in range(n)] for _ in range(n)]
    for i, row in enumerate(rows):
        for j, text in enumerate(row):
            expr = parse(text)
            for k, atom in enumerate(atoms):
                coeff = expr.collect((atom,)).get((1,))
                if coeff is not None:
                    table[i][j][k] = coeff.as_param().substitute(constraints)
    sc = StructureConstants(labels, _freeze(table), case.case_id)
    return sc if symbolic else sc.substitute(case.sample_map)


def table_diff(case: ParamCase | str) -> list[dict]:
    """Entries where the transcribed table and the recomputed one differ."""
    if isinstance(case, str):
        case = ParamCase.from_id(case)
    ours = commutator_table(basis_for(case))
    theirs = published_table(case)
    diffs = []
    for i in range(ours.dimension):
        for j in range(i + 1, ours.dimension):
            if ours.table[i][j] != theirs.table[i][j]:
                diffs.append({"row": ours.labels[i], "column": ours.labels[j],
                              "published": theirs.cell(i, j), "recomputed": ours.cell(i, j)})
    return diffs
