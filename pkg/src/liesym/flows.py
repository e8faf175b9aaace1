"""One-parameter groups of symmetry fields: RK4 integration, closed-form
group actions, transformed solutions and finite-difference PDE residuals.

Closed forms are not transcribed display by display.  Every catalog field
belongs to one of a few shapes (time shift, u-scaling, dilation, square-root
translation, rotation of (sqrt x, sqrt y), and the two projective t-maps);
the shape and its constants are read off the exact field, and the closed
form of that shape is used.  Each ``FlowMap`` keeps its generator, so RK4
comparison is always available.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .cases import ALL_CASE_IDS, ParamCase
from .generators import basis_for, heat_basis
from .jet import VectorField
from .symexpr import ONE, Expr, T, X, Y, parse
from .symexpr.atoms import Atom

__all__ = [
    "DomainExitError", "FlowError", "FlowMap", "SolutionFn", "ValidityError", "cataloged_flows",
    "closed_form_flow", "compile_field", "heat_residual", "integrate_flow", "residual",
    "residual_sweep", "transform_solution",
]

STEP = 1e-3
FD_STEP = 1e-5


class FlowError(ValueError):
    pass


class DomainExitError(FlowError):
    def __init__(self, eps_exit: float, index: int | None = None):
        where = f" (sample {index})" if index is not None else ""
        super().__init__(f"trajectory leaves x, y > 0 at eps = {eps_exit:.6g}{where}")
        self.eps_exit = eps_exit
        self.index = index


class ValidityError(FlowError):
    def __init__(self, point, message: str = "outside the validity domain of the flow"):
        super().__init__(f"{message} at {tuple(float(v) for v in point)}")
        self.point = point


# -- numeric evaluation of expressions ---------------------------------------


def _ld(value: Fraction):
    return np.longdouble(value.numerator) / np.longdouble(value.denominator)


def _compile(expr: Expr) -> Callable:
    """f(x, y, t, u) for a parameter-free expression; keeps the input dtype."""
    terms = []
    for coeff, powers, rate in expr.items():
        if coeff.symbols() or rate.symbols():
            raise FlowError("substitute parameter values before evaluating")
        terms.append((coeff.constant_value(), rate.constant_term(), tuple((a.label, k) for a, k in powers)))

    def f(x, y, t, u):
        env = {"x": x, "y": y, "t": t, "u": u}
        total = 0 * x
        for c, rate, powers in terms:
            val = float(c) if not isinstance(x, np.ndarray) or x.dtype != np.longdouble else _ld(c)
            if rate:
                val = val * np.exp(float(rate) * t)
            for label, k in powers:
                v = env[label]
                val = val * (np.sqrt(v) ** int(2 * k) if isinstance(k, Fraction) else v ** k)
            total = total + val
        return total

    return f


def compile_field(v: VectorField, params: dict | None = None) -> Callable:
    """(x, y, t, u) -> (xi, gamma, tau, phi) evaluated numerically."""
    if params:
        v = v.substitute(params=params)
    parts = [_compile(c) for c in v.components]
    return lambda x, y, t, u: tuple(p(x, y, t, u) for p in parts)


# -- RK4 ---------------------------------------------------------------------


def integrate_flow(v: VectorField, p0, eps, params: dict | None = None, h: float = STEP,
                   positive: tuple[str, ...] = ("x", "y")):
    """Endpoint of the flow of ``v`` after parameter time ``eps``.

    ``p0`` is (x, y, t, u) of scalars or equal-length arrays; ``eps`` may be
    an array.  The step is eps / n with n = ceil(max|eps| / h), so no step
    exceeds h.  Raises ``DomainExitError`` when a trajectory reaches x <= 0
    or y <= 0 (for the coordinates listed in ``positive``).

    When phi = lambda(x, y, t) u, the u-equation is carried as
    d(ln|u|)/d eps = lambda, which keeps fast exponential growth of u from
    inflating the step error."""
    if params:
        v = v.substitute(params=params)
    log_u = v.is_affine() and v.mu.is_zero() and not v.phi.is_zero()
    if log_u:
        rhs = compile_field(VectorField(v.xi, v.gamma, v.tau, v.lam))
    else:
        rhs = compile_field(v)
    state = [np.asarray(c, dtype=float).copy() for c in p0]
    eps = np.asarray(eps, dtype=float)
    scalar = all(s.ndim == 0 for s in state) and eps.ndim == 0
    shape = np.broadcast_shapes(*(s.shape for s in state), eps.shape)
    state = [np.broadcast_to(s, shape).astype(float) for s in state]
    eps = np.broadcast_to(eps, shape)
    if log_u:
        sign = np.sign(state[3])
        with np.errstate(divide="ignore"):
            state[3] = np.log(np.abs(state[3]))
    n = max(1, math.ceil(float(np.max(np.abs(eps))) / h - 1e-12)) if eps.size else 1
    dt = eps / n
    checks = [i for i, name in enumerate(("x", "y")) if name in positive]
    for step in range(n):
        k1 = rhs(*state)
        k2 = rhs(*(s + 0.5 * dt * k for s, k in zip(state, k1)))
        k3 = rhs(*(s + 0.5 * dt * k for s, k in zip(state, k2)))
        k4 = rhs(*(s + dt * k for s, k in zip(state, k3)))
        state = [s + dt / 6 * (a + 2 * b + 2 * c + d) for s, a, b, c, d in zip(state, k1, k2, k3, k4)]
        for i in checks:
            bad = ~(state[i] > 0)
            if np.any(bad):
                idx = int(np.flatnonzero(bad.ravel())[0])
                raise DomainExitError(float(np.ravel(dt)[idx] * (step + 1)), None if scalar else idx)
    if log_u:
        state[3] = sign * np.exp(state[3])
    if scalar:
        return tuple(float(s) for s in state)
    return tuple(state)


# -- closed forms ------------------------------------------------------------


@dataclass(frozen=True)
class FlowMap:
    """exp(eps v) in closed form, with its validity test."""

    kind: str
    params: dict
    generator: VectorField
    label: str
    apply: Callable = field(repr=False, compare=False)
    validity: Callable = field(repr=False, compare=False)
    positive: tuple[str, ...] = ("x", "y")

    def __call__(self, point, eps):
        x, y, t, u = point
        return self.apply(x, y, t, u, eps)

    def valid(self, point, eps):
        x, y, t, u = point
        return self.validity(x, y, t, u, eps)

    def describe(self) -> str:
        consts = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.label}: {self.kind}" + (f" ({consts})" if consts else "")


def _always(x, y, t, u, eps):
    return np.ones(np.broadcast(x, y, t, u, eps).shape, dtype=bool)


def _num(value, like):
    """A Fraction as a float or long double matching ``like``."""
    if isinstance(like, np.ndarray) and like.dtype == np.longdouble:
        return _ld(value)
    return float(value)


def _time_shift(k: Fraction, r: Fraction):
    def apply(x, y, t, u, eps):
        return x, y, t + _num(k, t) * eps, u * np.exp(_num(r, t) * eps)
    return apply, _always


def _dilation(r: Fraction):
    def apply(x, y, t, u, eps):
        s = np.exp(eps)
        return x * s, y * s, t * s, u * np.exp(_num(r, t) * eps)
    return apply, _always


def _sqrt_translation(axis: int, rate: Callable, weight: Callable):
    """d/d(axis) coefficient rate(t) * sqrt(axis), lambda = weight(t) * sqrt(axis)."""

    def moved(x, y, t, eps):
        z = (x, y)[axis]
        return np.sqrt(z) + eps * rate(t) / 2

    def apply(x, y, t, u, eps):
        z = (x, y)[axis]
        s = moved(x, y, t, eps)
        gain = weight(t) * (eps * np.sqrt(z) + eps * eps * rate(t) / 4)
        out = [x, y]
        out[axis] = s * s
        return out[0], out[1], t, u * np.exp(gain)

    def validity(x, y, t, u, eps):
        return moved(x, y, t, eps) > 0

    return apply, validity


def _rotation(rho: Fraction, kappa: Fraction):
    def apply(x, y, t, u, eps):
        angle = _num(rho, t) * eps
        new_x = (x + y) / 2 + (x - y) / 2 * np.cos(angle) + np.sqrt(x) * np.sqrt(y) * np.sin(angle)
        new_y = x + y - new_x
        return new_x, new_y, t, u * np.exp(_num(kappa / rho, t) * (new_x - x))

    def validity(x, y, t, u, eps):
        phase = 2 * np.arctan2(np.sqrt(y), np.sqrt(x)) - _num(rho, t) * eps
        return (phase > 0) & (phase < np.pi)

    return apply, validity


def _tau_exponential(c: Fraction, p: Fraction, q: Fraction, r: Fraction):
    """tau = exp(c t), xi = c x tau, gamma = c y tau, lambda = tau (p x + q y + r)."""

    def denom(t, eps):
        return 1 - _num(c, t) * eps * np.exp(_num(c, t) * t)

    def apply(x, y, t, u, eps):
        d = denom(t, eps)
        e = np.exp(_num(c, t) * t)
        gain = eps * e * (_num(p, t) * x + _num(q, t) * y) / d
        return x / d, y / d, t - np.log(d) / _num(c, t), u * np.exp(gain) * d ** (-_num(r / c, t))

    def validity(x, y, t, u, eps):
        return denom(t, eps) > 0

    return apply, validity


def _tau_quadratic(p: Fraction, q: Fraction, r: Fraction):
    """tau = t^2, xi = 2 t x, gamma = 2 t y, lambda = p x + q y + r t."""

    def apply(x, y, t, u, eps):
        d = 1 - eps * t
        gain = eps * (_num(p, t) * x + _num(q, t) * y) / d
        return x / d ** 2, y / d ** 2, t / d, u * np.exp(gain) * d ** (-_num(r, t))

    def validity(x, y, t, u, eps):
        return 1 - eps * t > 0

    return apply, validity


def _const(e: Expr) -> Fraction | None:
    if not e.is_constant():
        return None
    value = e.as_param()
    return value.constant_value() if value.is_constant() else None


def _t_only(e: Expr) -> bool:
    return e.atoms() <= {T}


def _linear_in(e: Expr, atoms: tuple[Atom, ...]) -> list[Fraction] | None:
    """Coefficients of a combination of the given atoms (and nothing else)."""
    parts = e.collect(atoms)
    out = [Fraction(0)] * len(atoms)
    for sig, cof in parts.items():
        if sum(sig) != 1 or max(sig) != 1:
            return None
        c = _const(cof)
        if c is None:
            return None
        out[sig.index(1)] = c
    return out


def _recognize(v: VectorField):
    """(kind, constants, (apply, validity)) for a parameter-free field."""
    xi, gamma, tau = v.xi, v.gamma, v.tau
    if not v.is_affine() or v.mu:
        raise FlowError("closed forms need phi = lambda * u")
    lam = v.lam
    x, y, t = Expr.atom(X), Expr.atom(Y), Expr.atom(T)
    if not xi and not gamma:
        k, r = _const(tau), _const(lam)
        if k is not None and r is not None:
            if k == 0:
                return "u_scaling", {"rate": r}, _time_shift(Fraction(0), r)
            return "time_shift", {"speed": k, "rate": r}, _time_shift(k, r)
    if xi == x and gamma == y and tau == t and _const(lam) is not None:
        r = _const(lam)
        return "dilation", {"rate": r}, _dilation(r)
    if tau and len(tau) == 1:
        coeff, powers, rate = next(tau.items())
        c = rate.constant_term()
        if not powers and coeff.constant_value() == 1 and c != 0:
            e_up = Expr.exp(rate)
            if xi == Expr.const(c) * x * e_up and gamma == Expr.const(c) * y * e_up:
                rest = lam * Expr.exp(-rate)
                lin = _linear_in(rest - Expr.const(_const_part(rest)), (X, Y))
                if lin is not None:
                    p, q = lin
                    r = _const_part(rest)
                    return "tau_exponential", {"c": c, "p": p, "q": q, "r": r}, _tau_exponential(c, p, q, r)
    if tau == t * t and xi == 2 * t * x and gamma == 2 * t * y:
        lin = _linear_in(lam, (X, Y, T))
        if lin is not None:
            p, q, r = lin
            return "tau_quadratic", {"p": p, "q": q, "r": r}, _tau_quadratic(p, q, r)
    if not tau:
        if xi and not gamma:
            w, m = xi * Expr.atom(X, Fraction(-1, 2)), lam * Expr.atom(X, Fraction(-1, 2))
            if _t_only(w) and _t_only(m):
                return "sqrt_translation_x", {"rate": str(w), "weight": str(m)}, \
                    _sqrt_translation(0, _compile_t(w), _compile_t(m))
        if gamma and not xi:
            w, m = gamma * Expr.atom(Y, Fraction(-1, 2)), lam * Expr.atom(Y, Fraction(-1, 2))
            if _t_only(w) and _t_only(m):
                return "sqrt_translation_y", {"rate": str(w), "weight": str(m)}, \
                    _sqrt_translation(1, _compile_t(w), _compile_t(m))
        if xi and xi == -gamma:
            inv = Expr.atom(X, Fraction(-1, 2)) * Expr.atom(Y, Fraction(-1, 2))
            rho, kappa = _const(xi * inv), _const(lam * inv)
            if rho and kappa is not None:
                return "rotation", {"rho": rho, "kappa": kappa}, _rotation(rho, kappa)
    raise FlowError(f"no closed form for the field {v}")


def _const_part(e: Expr) -> Fraction:
    for coeff, powers, rate in e.items():
        if not powers and not rate:
            return coeff.constant_value()
    return Fraction(0)


def _compile_t(e: Expr) -> Callable:
    f = _compile(e)
    return lambda t: f(0 * t + 1, 0 * t + 1, t, 0 * t)


# heat-equation flows on (x, t, u); y is carried along untouched


def _heat_translation(x, y, t, u, eps):
    return x + eps, y, t, u


def _heat_time(x, y, t, u, eps):
    return x, y, t + eps, u


def _heat_scale(x, y, t, u, eps):
    return x, y, t, u * np.exp(eps)


def _heat_dilation(x, y, t, u, eps):
    return x * np.exp(eps), y, t * np.exp(2 * eps), u * np.exp(-eps / 2)


def _heat_galilean(x, y, t, u, eps):
    return x + 2 * eps * t, y, t, u * np.exp(-eps * x - eps * eps * t)


def _heat_projective(x, y, t, u, eps):
    d = 1 - 4 * eps * t
    return x / d, y, t / d, u * np.sqrt(d) * np.exp(-eps * x * x / d)


def _heat_projective_valid(x, y, t, u, eps):
    return 1 - 4 * eps * t > 0


_HEAT_FLOWS = (
    ("x_translation", _heat_translation, _always),
    ("time_shift", _heat_time, _always),
    ("u_scaling", _heat_scale, _always),
    ("dilation", _heat_dilation, _always),
    ("galilean_boost", _heat_galilean, _always),
    ("projective", _heat_projective, _heat_projective_valid),
)

_SPECIAL = {
    "v_t": VectorField(tau=ONE),
    "v_u": VectorField.affine(lam=ONE),
}


def _resolve(case, gen):
    if isinstance(case, str) and case == "heat":
        return None, heat_basis()
    if isinstance(case, str):
        case = ParamCase.from_id(case)
    return case, basis_for(case).numeric()


def closed_form_flow(case: ParamCase | str, gen) -> FlowMap:
    """Closed-form group action of generator ``gen`` (1-based index, or
    'v_t' / 'v_u') of a case, or of the heat basis when case == 'heat'."""
    if isinstance(gen, str) and gen in _SPECIAL:
        v = _SPECIAL[gen]
        kind, consts, (apply, validity) = _recognize(v)
        return FlowMap(kind, consts, v, gen, apply, validity)
    case_obj, basis = _resolve(case, gen)
    try:
        index = int(str(gen).removeprefix("v"))
    except ValueError:
        raise FlowError(f"unknown generator {gen!r}") from None
    if not 1 <= index <= len(basis):
        raise FlowError(f"generator index {index} outside 1..{len(basis)}")
    v = basis[index - 1]
    if case_obj is None:
        kind, apply, validity = _HEAT_FLOWS[index - 1]
        return FlowMap(kind, {}, v, f"v{index}", apply, validity, positive=())
    kind, consts, (apply, validity) = _recognize(v)
    return FlowMap(kind, consts, v, f"v{index}", apply, validity)


def cataloged_flows() -> list[tuple[str, int]]:
    out = [(cid, i + 1) for cid in ALL_CASE_IDS for i in range(len(basis_for(cid)))]
    return out + [("heat", i + 1) for i in range(len(_HEAT_FLOWS))]




# -- transformed solutions ---------------------------------------------------


@dataclass(frozen=True)
class SolutionFn:
    """u(x, y, t); heat solutions ignore y."""

    fn: Callable
    chain: tuple[str, ...] = ()

    def __call__(self, x, y, t):
        return self.fn(x, y, t)

    @classmethod
    def one(cls) -> "SolutionFn":
        return cls(lambda x, y, t: np.ones(np.broadcast(x, y, t).shape, dtype=np.result_type(x, y, t))
                   if np.ndim(x) or np.ndim(y) or np.ndim(t) else 1.0, ("one",))

    @classmethod
    def from_expr(cls, expr: Expr | str, params: dict | None = None) -> "SolutionFn":
        if isinstance(expr, str):
            text, expr = expr, parse(expr)
        else:
            text = str(expr)
        if params:
            from .symexpr import substitute
            from .symexpr.params import param_bindings
            expr = substitute(expr, None, param_bindings(params))
        f = _compile(expr)
        return cls(lambda x, y, t: f(x, y, t, 0 * x), (text,))

    def shifted(self, dt: float) -> "SolutionFn":
        """(x, y, t) -> u(x, y, t + dt)."""
        return SolutionFn(lambda x, y, t: self.fn(x, y, t + dt), self.chain + (f"t{dt:+g}",))


def _check(valid, point):
    ok = np.asarray(valid)
    if not np.all(ok):
        idx = int(np.flatnonzero(~ok.ravel())[0]) if ok.ndim else 0
        coords = [np.ravel(np.broadcast_to(c, ok.shape))[idx] if ok.ndim else c for c in point]
        raise ValidityError(coords)


def transform_solution(flow: FlowMap | VectorField, u: SolutionFn, eps: float,
                       params: dict | None = None, h: float = STEP) -> SolutionFn:
    """u^{eps}: pull the base point back by the (-eps)-flow, evaluate u
    there, and carry that value forward with the u-rule of the eps-flow."""
    if isinstance(flow, FlowMap):
        def g(x, y, t):
            one = np.ones_like(np.asarray(x + y + t))
            back = (x, y, t, one)
            _check(flow.valid(back, -eps), (x, y, t))
            qx, qy, qt, _ = flow(back, -eps)
            u0 = u(qx, qy, qt)
            start = (qx, qy, qt, u0)
            _check(flow.valid(start, eps), (x, y, t))
            return flow(start, eps)[3]
        label = flow.label
    else:
        def g(x, y, t):
            x, y, t = (np.asarray(c, dtype=float) for c in (x, y, t))
            qx, qy, qt, _ = integrate_flow(flow, (x, y, t, np.ones_like(x)), -eps, params, h)
            u0 = u(qx, qy, qt)
            return integrate_flow(flow, (qx, qy, qt, u0), eps, params, h)[3]
        label = "field"
    return SolutionFn(g, u.chain + (f"exp({eps:g} {label})",))


# -- residuals ---------------------------------------------------------------


def _steps(*coords):
    return [FD_STEP * np.maximum(1, np.abs(c)) for c in coords]


def _as_long(v):
    return np.asarray(v, dtype=np.longdouble)


def residual(pde_params, u: SolutionFn, point) -> float | np.ndarray:
    """|u_t + (a - b x) u_x + (d - e y) u_y + x/2 u_xx + y/2 u_yy| by second
    order central differences with step 1e-5 * max(1, |coord|).

    The stencil is evaluated in long double: with the fixed step, double
    precision roundoff in u_xx alone is of order 1e-6 * |u|."""
    if isinstance(pde_params, dict):
        a, b, d, e = (pde_params[k] for k in "abde")
    else:
        a, b, d, e = pde_params
    a, b, d, e = (float(v) for v in (a, b, d, e))
    x, y, t = (_as_long(c) for c in point)
    hx, hy, ht = _steps(x, y, t)
    u0 = u(x, y, t)
    ux_p, ux_m = u(x + hx, y, t), u(x - hx, y, t)
    uy_p, uy_m = u(x, y + hy, t), u(x, y - hy, t)
    u_t = (u(x, y, t + ht) - u(x, y, t - ht)) / (2 * ht)
    u_x = (ux_p - ux_m) / (2 * hx)
    u_y = (uy_p - uy_m) / (2 * hy)
    u_xx = (ux_p - 2 * u0 + ux_m) / hx ** 2
    u_yy = (uy_p - 2 * u0 + uy_m) / hy ** 2
    res = np.abs(u_t + (a - b * x) * u_x + (d - e * y) * u_y + x / 2 * u_xx + y / 2 * u_yy)
    return res.astype(float) if res.ndim else float(res)


def heat_residual(u: SolutionFn, point) -> float | np.ndarray:
    """|u_t - u_xx| by central differences (point is (x, t))."""
    x, t = (_as_long(c) for c in point)
    hx, ht = _steps(x, t)
    y = np.zeros_like(x)
    u0 = u(x, y, t)
    u_t = (u(x, y, t + ht) - u(x, y, t - ht)) / (2 * ht)
    u_xx = (u(x + hx, y, t) - 2 * u0 + u(x - hx, y, t)) / hx ** 2
    res = np.abs(u_t - u_xx)
    return res.astype(float) if res.ndim else float(res)


def residual_sweep(case: ParamCase | str, gen, eps: float, solution: SolutionFn | None = None,
                   n: int = 10, bounds=((0.5, 5.0), (0.5, 5.0), (-1.0, 1.0)), tol: float = 1e-5,
                   shift_t: float = 0.0) -> dict:
    """Transform ``solution`` (default u = 1) by generator ``gen`` and sweep
    the PDE residual over an n x n x n grid. ``shift_t`` evaluates the
    transformed solution at t + shift_t, itself a solution."""
    if isinstance(case, str) and case != "heat":
        case = ParamCase.from_id(case)
    flow = closed_form_flow(case, gen)
    u = transform_solution(flow, solution or SolutionFn.one(), eps)
    if shift_t:
        u = u.shifted(shift_t)
    axes = [np.linspace(lo, hi, n) for lo, hi in bounds]
    gx, gy, gt = (g.ravel() for g in np.meshgrid(*axes, indexing="ij"))
    if case == "heat":
        res = heat_residual(u, (gx, gt))
        case_id = "heat"
    else:
        res = residual(case.sample, u, (gx, gy, gt))
        case_id = case.case_id
    bad = np.flatnonzero(~(res < tol))
    return {
        "case_id": case_id,
        "generator": flow.label,
        "kind": flow.kind,
        "eps": eps,
        "grid": {"n": n, "bounds": [list(b) for b in bounds]},
        "max_residual": float(np.max(res)),
        "mean_residual": float(np.mean(res)),
        "violations": [[float(gx[i]), float(gy[i]), float(gt[i])] for i in bad[:20]],
    }
