"""Second-order jet space: total derivatives, prolongation coefficients and
the action of a prolonged vector field on a differential expression."""

from __future__ import annotations

from dataclasses import dataclass

from .symexpr import (
    ZERO,
    Expr,
    U,
    differentiate,
    jet,
    opaque,
    parse,
    substitute,
    symbol,
)
from .symexpr.atoms import COORDS, JET, Atom

MAX_ORDER = 3


class JetError(ValueError):
    pass


@dataclass(frozen=True)
class MultiIndex:
    """Derivative counts (n_x, n_y, n_t)."""

    nx: int = 0
    ny: int = 0
    nt: int = 0

    def __post_init__(self):
        if min(self.nx, self.ny, self.nt) < 0:
            raise JetError("multi-index counts must be nonnegative")

    @classmethod
    def parse(cls, text: str) -> "MultiIndex":
        """'xt' or 'u_xt' -> MultiIndex(1, 0, 1)."""
        text = text.removeprefix("u_")
        if not text or any(ch not in COORDS for ch in text):
            raise JetError(f"bad multi-index {text!r}")
        return cls(text.count("x"), text.count("y"), text.count("t"))

    @property
    def counts(self) -> tuple[int, int, int]:
        return (self.nx, self.ny, self.nt)

    @property
    def order(self) -> int:
        return self.nx + self.ny + self.nt

    def letters(self) -> str:
        return "x" * self.nx + "y" * self.ny + "t" * self.nt

    def atom(self) -> Atom:
        return jet(self.counts)

    def __str__(self) -> str:
        return "u_" + self.letters()


def _as_expr(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, str):
        return parse(value)
    return Expr.const(value)


@dataclass(frozen=True)
class VectorField:
    """xi d/dx + gamma d/dy + tau d/dt + phi d/du with jet-free coefficients."""

    xi: Expr = ZERO
    gamma: Expr = ZERO
    tau: Expr = ZERO
    phi: Expr = ZERO

    def __post_init__(self):
        for name in ("xi", "gamma", "tau", "phi"):
            value = _as_expr(getattr(self, name))
            if value.has_kind(JET):
                raise JetError(f"{name} contains jet variables")
            object.__setattr__(self, name, value)

    @classmethod
    def affine(cls, xi=ZERO, gamma=ZERO, tau=ZERO, lam=ZERO, mu=ZERO) -> "VectorField":
        return cls(xi, gamma, tau, _as_expr(lam) * symbol("u") + _as_expr(mu))

    def component(self, var: str) -> Expr:
        return {"x": self.xi, "y": self.gamma, "t": self.tau, "u": self.phi}[var]

    @property
    def components(self) -> tuple[Expr, Expr, Expr, Expr]:
        return (self.xi, self.gamma, self.tau, self.phi)

    def is_affine(self) -> bool:
        if self.phi.has_kind("opaque"):
            return False
        return all(k <= 1 for (k,) in self.phi.collect((U,)))

    @property
    def lam(self) -> Expr:
        return self.phi.collect((U,)).get((1,), ZERO)

    @property
    def mu(self) -> Expr:
        return self.phi.collect((U,)).get((0,), ZERO)

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(*(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField(*(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self) -> "VectorField":
        return VectorField(*(-a for a in self.components))

    def scale(self, factor) -> "VectorField":
        f = _as_expr(factor)
        return VectorField(*(f * a for a in self.components))

    def __rmul__(self, factor) -> "VectorField":
        return self.scale(factor)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def substitute(self, bindings=None, params=None) -> "VectorField":
        return VectorField(*(substitute(c, bindings, params) for c in self.components))

    def as_dict(self) -> dict[str, str]:
        return {"xi": str(self.xi), "gamma": str(self.gamma), "tau": str(self.tau),
                "lambda": str(self.lam), "mu": str(self.mu)}

    def __str__(self) -> str:
        parts = []
        for coeff, name in ((self.xi, "d/dx"), (self.gamma, "d/dy"), (self.tau, "d/dt")):
            if coeff:
                parts.append(f"({coeff})*{name}")
        if self.phi:
            lam, mu = self.lam, self.mu
            if lam:
                parts.append(f"({lam})*u*d/du")
            if mu:
                parts.append(f"({mu})*d/du")
        return " + ".join(parts) or "0"


def generic_field(coords: tuple[str, ...] = ("x", "y", "t")) -> VectorField:
    """Vector field with opaque coefficient functions xi, gamma, tau, phi."""
    atom = lambda name: Expr.atom(opaque(name))
    return VectorField(
        xi=atom("xi") if "x" in coords else ZERO,
        gamma=atom("gamma") if "y" in coords else ZERO,
        tau=atom("tau") if "t" in coords else ZERO,
        phi=atom("phi"),
    )


def jet_order(expr: Expr) -> int:
    return max((a.order for a in expr.atoms() if a.kind == JET), default=0)


def total_derivative(expr: Expr, var: str) -> Expr:
    """D_var P = dP/dvar + sum_J u_{J,var} dP/du_J (J = empty included)."""
    if var not in COORDS:
        raise JetError(f"total derivative needs a coordinate, not {var!r}")
    result = differentiate(expr, var)
    atoms = expr.atoms()
    if U in atoms or any(a.kind == "opaque" for a in atoms):
        du = differentiate(expr, "u")
        if du:
            result = result + Expr.atom(jet(_unit(var))) * du
    for atom in atoms:
        if atom.kind == JET:
            extended = atom.jet_extend(var)
            if extended.order > MAX_ORDER:
                raise JetError(f"jet order would exceed {MAX_ORDER}")
            result = result + Expr.atom(extended) * differentiate(expr, atom)
    return result


def _unit(var: str) -> tuple[int, int, int]:
    counts = [0, 0, 0]
    counts[COORDS.index(var)] = 1
    return tuple(counts)


def _as_multi(index) -> MultiIndex:
    if isinstance(index, MultiIndex):
        return index
    if isinstance(index, str):
        return MultiIndex.parse(index)
    return MultiIndex(*index)


def characteristic(v: VectorField, coords: tuple[str, ...] = COORDS) -> Expr:
    """phi - sum_i xi^i u_i."""
    q = v.phi
    for var in coords:
        c = v.component(var)
        if c:
            q = q - c * Expr.atom(jet(_unit(var)))
    return q


def prolongation_coeff(v: VectorField, index, coords: tuple[str, ...] = COORDS,
                       order: str | None = None) -> Expr:
    """phi^J = D_J(phi - sum xi^i u_i) + sum xi^i u_{J,i} for #J in {1, 2}.

    ``order`` optionally fixes the sequence of total derivatives (e.g. 'yx');
    the result does not depend on it."""
    mi = _as_multi(index)
    if mi.order not in (1, 2):
        raise JetError(f"prolongation is implemented for orders 1 and 2, got {mi.order}")
    letters = order if order is not None else mi.letters()
    if sorted(letters) != sorted(mi.letters()):
        raise JetError("derivative order does not match the multi-index")
    q = characteristic(v, coords)
    for var in letters:
        q = total_derivative(q, var)
    for var in coords:
        c = v.component(var)
        if c:
            counts = list(mi.counts)
            counts[COORDS.index(var)] += 1
            q = q + c * Expr.atom(jet(tuple(counts)))
    return q


def apply_prolonged(v: VectorField, delta: Expr, coords: tuple[str, ...] = COORDS) -> Expr:
    """pr v applied to delta; jets absent from delta are skipped."""
    if jet_order(delta) > 2:
        raise JetError("only second-order expressions are supported")
    result = ZERO
    for var in coords:
        c = v.component(var)
        if c:
            result = result + c * differentiate(delta, var)
    if v.phi:
        result = result + v.phi * differentiate(delta, "u")
    for atom in sorted(delta.atoms(), key=lambda a: a.key):
        if atom.kind != JET:
            continue
        d = differentiate(delta, atom)
        if d:
            result = result + prolongation_coeff(v, MultiIndex(*atom.counts), coords) * d
    return result
