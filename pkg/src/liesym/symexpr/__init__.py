"""Exact term algebra over x, y, t, u, jets, sqrt(x), sqrt(y), exp(rate*t)."""

from .atoms import T, U, X, Y, Atom, AtomError, coord, jet, jet_from_label, opaque, opaque_from_label
from .expr import (
    ONE,
    ZERO,
    DomainError,
    Expr,
    ExprError,
    coefficient,
    differentiate,
    eval_numeric,
    is_zero,
    sqrt,
    substitute,
    substitute_functions,
    symbol,
    to_text,
)
from .params import PARAMS, ParamError, ParamPoly, as_fraction
from .parser import ParseError, parse

__all__ = [
    "Atom", "AtomError", "DomainError", "Expr", "ExprError", "ONE", "PARAMS", "ParamError",
    "ParamPoly", "ParseError", "T", "U", "X", "Y", "ZERO", "as_fraction", "coefficient",
    "coord", "differentiate", "eval_numeric", "is_zero", "jet", "jet_from_label", "opaque",
    "opaque_from_label", "parse", "sqrt", "substitute", "substitute_functions", "symbol", "to_text",
]
