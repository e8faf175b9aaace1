"""Exact linear algebra over the rationals (lists of Fraction rows)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


class SingularError(ValueError):
    pass


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(v) for v in row] for row in rows]


def rref(rows: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = to_matrix(rows)
    if not m:
        return m, []
    n_rows, n_cols = len(m), len(m[0])
    pivots: list[int] = []
    r = 0
    for col in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if m[i][col]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][col]
        m[r] = [v * inv for v in m[r]]
        for i in range(n_rows):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == n_rows:
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], n_cols: int | None = None) -> Matrix:
    """Basis of {z : rows @ z = 0}, one vector per free column."""
    if not rows:
        if n_cols is None:
            raise ValueError("column count needed for an empty matrix")
        return [[Fraction(int(i == j)) for j in range(n_cols)] for i in range(n_cols)]
    r, pivots = rref(rows)
    n = len(r[0])
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        z = [Fraction(0)] * n
        z[f] = Fraction(1)
        for i, p in enumerate(pivots):
            z[p] = -r[i][f]
        basis.append(z)
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence) -> list[Fraction]:
    """One exact solution of rows @ z = rhs (free variables set to 0)."""
    aug = [list(row) + [b] for row, b in zip(to_matrix(rows), rhs)]
    r, pivots = rref(aug)
    n = len(aug[0]) - 1
    if n in pivots:
        raise SingularError("inconsistent linear system")
    z = [Fraction(0)] * n
    for i, p in enumerate(pivots):
        z[p] = r[i][n]
    return z


def inverse(rows: Sequence[Sequence]) -> Matrix:
    m = to_matrix(rows)
    n = len(m)
    aug = [row + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise SingularError("matrix is singular")
    return [row[n:] for row in r]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list[Fraction]:
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def transpose(a: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*a)]


def span_basis(vectors: Sequence[Sequence]) -> Matrix:
    """Row-reduced basis of the span of ``vectors``."""
    if not vectors:
        return []
    r, pivots = rref(vectors)
    return r[: len(pivots)]


def in_span(vectors: Sequence[Sequence], v: Sequence) -> bool:
    if not vectors:
        return not any(v)
    return rank(list(vectors) + [list(v)]) == rank(vectors)


def coordinates(basis: Sequence[Sequence], v: Sequence) -> list[Fraction]:
    """Coefficients c with sum c_i basis_i = v; raises if v is outside the span."""
    return solve(transpose(basis), list(v))


def complement(basis: Sequence[Sequence], dim: int) -> Matrix:
    """Standard unit vectors completing ``basis`` to a basis of Q^dim."""
    chosen = [list(map(Fraction, b)) for b in basis]
    extra = []
    for i in range(dim):
        e = [Fraction(int(i == j)) for j in range(dim)]
        if not in_span(chosen + extra, e):
            extra.append(e)
    return extra


def det(rows: Sequence[Sequence]) -> Fraction:
    m = to_matrix(rows)
    n = len(m)
    result = Fraction(1)
    for col in range(n):
        pivot = next((i for i in range(col, n) if m[i][col]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            result = -result
        result *= m[col][col]
        for i in range(col + 1, n):
            f = m[i][col] / m[col][col]
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return result
