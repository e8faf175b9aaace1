"""Determining equations for the two-factor backward equation family, the
candidate-generator checker, and the reduced ODE system with its solutions."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .cases import ParamCase
from .jet import VectorField, apply_prolonged, generic_field
from .symexpr import (
    ONE,
    ZERO,
    Expr,
    ParamPoly,
    differentiate,
    eval_numeric,
    jet_from_label,
    opaque,
    parse,
    sqrt,
    substitute,
    symbol,
)
from .symexpr.atoms import JET, OPAQUE, T, Atom

SYM_TOL = 1e-10


class CandidateError(ValueError):
    pass


@dataclass(frozen=True)
class PdeFamily:
    name: str
    delta: Expr
    solve_for: Atom
    replacement: Expr
    coords: tuple[str, ...]

    def __post_init__(self):
        # the replacement must make delta vanish identically
        if substitute(self.delta, {self.solve_for: self.replacement}):
            raise ValueError("replacement does not solve delta for the chosen jet")


def ls_family() -> PdeFamily:
    rhs = parse("-(a - b*x)*u_x - (d - e*y)*u_y - x/2*u_xx - y/2*u_yy")
    return PdeFamily(
        name="ls",
        delta=parse("(a - b*x)*u_x + (d - e*y)*u_y + x/2*u_xx + y/2*u_yy + u_t"),
        solve_for=jet_from_label("u_t"),
        replacement=rhs,
        coords=("x", "y", "t"),
    )


def heat_family() -> PdeFamily:
    return PdeFamily(
        name="heat",
        delta=parse("u_xx - u_t"),
        solve_for=jet_from_label("u_t"),
        replacement=parse("u_xx"),
        coords=("x", "t"),
    )


# -- the raw system ------------------------------------------------------------

def _monomial_key(monomial: tuple) -> tuple:
    degree = sum(k for _, k in monomial)
    return (degree, tuple((a.key, -k) for a, k in monomial))


def monomial_labels(monomial: tuple) -> list[str]:
    return [a.label for a, k in monomial for _ in range(k)]


def monomial_text(monomial: tuple) -> str:
    return "*".join(monomial_labels(monomial)) or "1"


@dataclass(frozen=True)
class DeterminingSystem:
    family: PdeFamily
    entries: tuple[tuple[tuple, Expr], ...]  # (jet monomial, coefficient)

    def __len__(self) -> int:
        return len(self.entries)

    def monomials(self) -> list[str]:
        return [monomial_text(m) for m, _ in self.entries]

    def coefficient(self, monomial: str) -> Expr:
        """Coefficient of a monomial written like 'u_x*u_xx', 'u_x^2' or '1'."""
        target = _parse_monomial(monomial)
        for m, c in self.entries:
            if m == target:
                return c
        return ZERO

    def to_json(self) -> list[dict]:
        return [{"monomial": monomial_labels(m), "coefficient": str(c)} for m, c in self.entries]


def _parse_monomial(text: str) -> tuple:
    if text.strip() in ("", "1"):
        return ()
    e = parse(text)
    (c, powers, rate), = e.items()
    if c != ParamPoly.const(1) or rate or any(a.kind != JET for a, _ in powers):
        raise ValueError(f"not a jet monomial: {text!r}")
    return powers


def build_determining_system(family: PdeFamily | None = None) -> DeterminingSystem:
    family = family or ls_family()
    generic = generic_field(family.coords)
    prolonged = apply_prolonged(generic, family.delta, family.coords)
    reduced = substitute(prolonged, {family.solve_for: family.replacement})
    jets = sorted({a for a in reduced.atoms() if a.kind == JET}, key=lambda a: a.key)
    groups = reduced.collect(jets)
    entries = []
    for sig, coeff in groups.items():
        monomial = tuple((a, k) for a, k in zip(jets, sig) if k)
        entries.append((monomial, coeff))
    if not any(m == () for m, _ in entries):
        entries.append(((), ZERO))
    entries.sort(key=lambda it: _monomial_key(it[0]))
    return DeterminingSystem(family, tuple(entries))


# -- checking candidates -------------------------------------------------------

_COMPONENT_NAMES = {"xi": 0, "gamma": 1, "tau": 2, "phi": 3}


def _opaque_value(v: VectorField, atom: Atom, cache: dict) -> Expr:
    if atom in cache:
        return cache[atom]
    if atom.name not in _COMPONENT_NAMES:
        raise CandidateError(f"unexpected function {atom.name!r} in the determining system")
    d = v.components[_COMPONENT_NAMES[atom.name]]
    for var, k in zip(("x", "y", "t", "u"), atom.counts):
        for _ in range(k):
            d = differentiate(d, var)
    cache[atom] = d
    return d


def specialize(coeff: Expr, v: VectorField, params: dict | None = None, cache: dict | None = None) -> Expr:
    """Replace the opaque coefficient functions by v's derivatives."""
    cache = {} if cache is None else cache
    bindings = {a: _opaque_value(v, a, cache) for a in coeff.atoms() if a.kind == OPAQUE}
    return substitute(coeff, bindings, params)


@dataclass(frozen=True)
class EntryVerdict:
    monomial: str
    symbolic_pass: bool
    numeric_residual: float
    residual: str  # printed specialised coefficient


@dataclass(frozen=True)
class Verdict:
    entries: tuple[EntryVerdict, ...]
    n_points: int

    @property
    def symbolic_pass(self) -> bool:
        return all(e.symbolic_pass for e in self.entries)

    @property
    def passed(self) -> bool:
        return self.symbolic_pass

    @property
    def numeric_max_residual(self) -> float:
        return max((e.numeric_residual for e in self.entries), default=0.0)

    @property
    def failures(self) -> list[EntryVerdict]:
        return [e for e in self.entries if not e.symbolic_pass]

    def as_dict(self) -> dict:
        return {
            "symbolic_pass": self.symbolic_pass,
            "numeric_max_residual": self.numeric_max_residual,
            "n_points": self.n_points,
            "failures": [{"monomial": f.monomial, "residual": f.residual,
                          "numeric_residual": f.numeric_residual} for f in self.failures],
        }


def sample_points(n: int, rng: np.random.Generator, coords: Iterable[str] = ("x", "y", "t")) -> dict:
    coords = tuple(coords)
    pts = {}
    if "x" in coords:
        pts["x"] = rng.uniform(0.1, 10.0, n)
    if "y" in coords:
        pts["y"] = rng.uniform(0.1, 10.0, n)
    if "t" in coords:
        pts["t"] = rng.uniform(-2.0, 2.0, n)
    pts["u"] = rng.uniform(-5.0, 5.0, n)
    return pts


def _numeric_residual(coeff: Expr, v: VectorField, point: dict, cache: dict) -> float:
    """Relative size of the coefficient at the points, with the opaque
    functions evaluated from v's derivatives (no symbolic cancellation)."""
    values = dict(point)
    for atom in coeff.atoms():
        if atom.kind == OPAQUE and atom.label not in values:
            d = _opaque_value(v, atom, cache)
            values[atom.label] = np.broadcast_to(
                np.asarray(eval_numeric(d, point), dtype=float), point["u"].shape)
    total = np.zeros_like(point["u"])
    scale = np.zeros_like(point["u"])
    for c, powers, rate in coeff.items():
        term = eval_numeric(Expr({(powers, rate): c}), values)
        total = total + term
        scale = scale + np.abs(term)
    return float(np.max(np.abs(total) / np.maximum(1.0, scale)))


def check_candidate(v: VectorField, system: DeterminingSystem | None = None,
                    case: ParamCase | None = None, *, at_sample: bool = False,
                    n_points: int = 128, seed: int = 0) -> Verdict:
    """Substitute v into every determining equation and zero-test it.

    Parameters are constrained by ``case`` (its equalities, or its full
    sample when ``at_sample``).  The numeric pass evaluates each raw entry
    at random points with the case sample (or random parameters)."""
    system = system or build_determining_system()
    if n_points < 100:
        raise ValueError("at least 100 sample points are required")
    for comp in v.components:
        if comp.has_kind(JET):
            raise CandidateError("vector field coefficients contain jet variables")
        if comp.has_kind(OPAQUE):
            raise CandidateError("vector field coefficients contain undetermined functions")
    if case is None:
        params = {}
    elif at_sample:
        params = case.sample_map
    else:
        params = case.constraints()
    if params:
        v = v.substitute(params=params)
    rng = np.random.default_rng(seed)
    point = sample_points(n_points, rng, system.family.coords)
    if case is not None:
        point.update({k: float(val) for k, val in case.sample_map.items()})
    else:
        point.update({k: float(rng.uniform(-1, 1)) for k in "abde"})
    cache: dict = {}
    results = []
    for monomial, coeff in system.entries:
        special = specialize(coeff, v, params, cache)
        residual = _numeric_residual(coeff, v, point, cache)
        results.append(EntryVerdict(monomial_text(monomial), special.is_zero(), residual, str(special)))
    return Verdict(tuple(results), n_points)


# -- reduced system ------------------------------------------------------------

UNKNOWNS = ("tau", "h", "l", "k", "s")


def _fn(name: str, nt: int = 0) -> Expr:
    return Expr.atom(opaque(name, (0, 0, nt, 0)))


def _full_reduced_equations() -> list[Expr]:
    """The reduced conditions before any case constraint is imposed."""
    b, e = symbol("b"), symbol("e")
    a, d = symbol("a"), symbol("d")
    bb_ee = b * b - e * e
    quarter = Expr.const(Fraction(1, 4))
    return [
        _fn("h", 1),
        bb_ee * _fn("tau", 1),
        bb_ee * _fn("h"),
        # the x and y coefficients of the tau terms
        _fn("tau", 3) - b * b * _fn("tau", 1),
        _fn("tau", 3) - e * e * _fn("tau", 1),
        _fn("l", 2) - b * b * quarter * _fn("l"),
        _fn("k", 2) - e * e * quarter * _fn("k"),
        (a + d) * _fn("tau", 2) + (a * b + d * e) * _fn("tau", 1) + _fn("s", 1),
    ]


@dataclass
class ReducedSystem:
    case: ParamCase
    equations: list[Expr]
    vanishing: list[str]
    params: dict = field(default_factory=dict)

    def as_text(self) -> list[str]:
        return [f"{name} = 0" for name in self.vanishing] + [f"{eq} = 0" for eq in self.equations]

    def at_sample(self) -> "ReducedSystem":
        sample = self.case.sample_map
        eqs = [substitute(eq, params=sample) for eq in self.equations]
        return ReducedSystem(self.case, [eq for eq in eqs if eq], list(self.vanishing), sample)

    def families(self) -> dict[str, list[Expr]]:
        """Closed-form solution families at the case sample (one entry per
        free constant; s lists its homogeneous constant only)."""
        a, b, d, e = self.case.sample
        out: dict[str, list[Expr]] = {}
        if "tau_t" in self.vanishing:
            out["tau"] = [ONE]
        elif b != 0:
            out["tau"] = [Expr.exp(b), Expr.exp(-b), ONE]
        else:
            out["tau"] = [symbol("t") ** 2, symbol("t"), ONE]
        out["h"] = [] if "h" in self.vanishing else [ONE]
        out["l"] = [] if "l" in self.vanishing else _second_order_family(b)
        out["k"] = [] if "k" in self.vanishing else _second_order_family(e)
        out["s"] = [ONE]
        return out

    def check_families(self) -> bool:
        """Every family member solves its ODE at the sample."""
        specialised = self if self.params else self.at_sample()
        fams = self.families()
        for name in ("tau", "h", "l", "k"):
            for sol in fams[name]:
                for eq in specialised.equations:
                    if {a.name for a in eq.atoms() if a.kind == OPAQUE} != {name}:
                        continue
                    residual = _bind_function(eq, name, sol)
                    if residual:
                        return False
        # s = antiderivative closes the last equation for each tau
        s_eq = _full_reduced_equations()[-1]
        for sol in fams["tau"]:
            s = s_particular(sol, self.case)
            closed = _bind_function(_bind_function(substitute(s_eq, params=self.case.sample_map), "tau", sol), "s", s)
            if closed:
                return False
        return True


def _second_order_family(rate: Fraction) -> list[Expr]:
    if rate != 0:
        return [Expr.exp(ParamPoly.const(rate / 2)), Expr.exp(ParamPoly.const(-rate / 2))]
    return [symbol("t"), ONE]


def _bind_function(expr: Expr, name: str, value: Expr) -> Expr:
    bindings = {}
    for atom in expr.atoms():
        if atom.kind == OPAQUE and atom.name == name:
            d = value
            for _ in range(atom.counts[2]):
                d = differentiate(d, "t")
            bindings[atom] = d
    return substitute(expr, bindings)


def reduced_system(case: ParamCase) -> ReducedSystem:
    """Reduced ODEs for h, k, l, tau, s under the case's equality
    constraints, with the forced vanishings applied."""
    a_q, d_q = case.a_quarter, case.d_quarter
    b_e_equal = case.b_e_relation != "generic"
    vanishing = []
    if not (a_q and d_q and b_e_equal):
        vanishing.append("h")
    if not a_q:
        vanishing.append("l")
    if not d_q:
        vanishing.append("k")
    if not b_e_equal:
        vanishing.append("tau_t")
    zero = {}
    constraints = case.constraints()
    equations = []
    for eq in _full_reduced_equations():
        eq = substitute(eq, params=constraints)
        for atom in eq.atoms():
            if atom.kind != OPAQUE:
                continue
            if atom.name in vanishing or (atom.name == "tau" and atom.counts[2] >= 1 and "tau_t" in vanishing):
                zero[atom] = ZERO
        eq = substitute(eq, zero)
        if eq and eq not in equations:
            equations.append(eq)
    return ReducedSystem(case, equations, vanishing)


def antiderivative(expr: Expr) -> Expr:
    """Exact antiderivative in t of a sum of c * t^m * exp(r t) terms with
    constant rates (zero integration constant)."""
    t = symbol("t")
    result = ZERO
    for c, powers, rate in expr.items():
        pw = dict(powers)
        m = pw.pop(T, 0)
        if pw:
            raise ValueError("antiderivative handles functions of t only")
        if not rate:
            result = result + Expr.const(c) * t ** (m + 1) / Expr.const(m + 1)
            continue
        if not rate.is_constant():
            raise ValueError("antiderivative needs a numeric rate")
        r = rate.constant_value()
        # int t^m e^{rt} = e^{rt} sum_j (-1)^j m!/(m-j)! t^(m-j) / r^(j+1)
        acc = ZERO
        factor = Fraction(1)
        for j in range(m + 1):
            acc = acc + Expr.const(factor * (-1) ** j / r ** (j + 1)) * t ** (m - j)
            factor *= m - j
        result = result + Expr.const(c) * acc * Expr.exp(rate)
    return result


def s_particular(tau: Expr, case: ParamCase) -> Expr:
    a, b, d, e = case.sample
    dt = differentiate(tau, "t")
    rhs = -(Expr.const(a + d) * differentiate(dt, "t") + Expr.const(a * b + d * e) * dt)
    return antiderivative(rhs)


def field_from_reduced(tau: Expr, h: Expr, l: Expr, k: Expr, s: Expr, params: dict) -> VectorField:
    """Assemble (xi, gamma, tau, lambda*u) from the reduced unknowns."""
    x, y = symbol("x"), symbol("y")
    sx, sy = sqrt(x), sqrt(y)
    b, e = Expr.const(params["b"]), Expr.const(params["e"])
    dt = lambda f: differentiate(f, "t")
    tau_t, tau_tt = dt(tau), dt(dt(tau))
    half = Expr.const(Fraction(1, 2))
    xi = tau_t * x + sx * (sy * h + l)
    gamma = tau_t * y + sy * (-sx * h + k)
    lam = ((tau_tt + b * tau_t) * x + h * (b - e) * sx * sy
           + 2 * (dt(l) + b * half * l) * sx + (tau_tt + e * tau_t) * y
           + 2 * (dt(k) + e * half * k) * sy + s)
    return VectorField.affine(xi, gamma, tau, lam)


def solve_reduced(case: ParamCase):
    """Generator basis from the closed-form families, one free constant at a
    time, evaluated at the case sample."""
    from .generators import GeneratorBasis

    system = reduced_system(case).at_sample()
    fams = system.families()
    params = case.sample_map
    fields, labels = [], []
    for sol in fams["tau"]:
        s = s_particular(sol, case)
        fields.append(field_from_reduced(sol, ZERO, ZERO, ZERO, s, params))
        labels.append(f"tau={sol}")
    for sol in fams["h"]:
        fields.append(field_from_reduced(ZERO, sol, ZERO, ZERO, ZERO, params))
        labels.append(f"h={sol}")
    for sol in fams["l"]:
        fields.append(field_from_reduced(ZERO, ZERO, sol, ZERO, ZERO, params))
        labels.append(f"l={sol}")
    for sol in fams["k"]:
        fields.append(field_from_reduced(ZERO, ZERO, ZERO, sol, ZERO, params))
        labels.append(f"k={sol}")
    fields.append(field_from_reduced(ZERO, ZERO, ZERO, ZERO, ONE, params))
    labels.append("s=1")
    return GeneratorBasis(case=case, fields=tuple(fields), labels=tuple(labels),
                          source="reduced", symbolic=False)
