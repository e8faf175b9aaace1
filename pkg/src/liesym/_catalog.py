"""Published generator bases and commutator tables for the sixteen cases.

Each field is (xi, gamma, tau, lambda) in the expression surface syntax, with
phi = lambda * u.  Where a printed field fails the symmetry test, the entry
holds the repaired field, the printed version in ``published`` and a short
``note``.  Tables list row i, column j = [v_i, v_j] over atoms v1..vn.
"""

SX_UP = "sqrt(x)*exp(b*t/2)"
SX_DOWN = "sqrt(x)*exp(-b*t/2)"
SY_UP = "sqrt(y)*exp(b*t/2)"
SY_DOWN = "sqrt(y)*exp(-b*t/2)"

T_UP = ("b*exp(b*t)*x", "b*exp(b*t)*y", "exp(b*t)")
T_DOWN = ("-b*exp(-b*t)*x", "-b*exp(-b*t)*y", "exp(-b*t)")
T_QUAD = ("2*t*x", "2*t*y", "t^2")
DILATION = ("x", "y", "t", "0")
D_T = ("0", "0", "1", "0")
U_SCALE = ("0", "0", "0", "1")
ROTATION = ("sqrt(x)*sqrt(y)", "-sqrt(x)*sqrt(y)", "0", "0")


def _f(xi="0", gamma="0", tau="0", lam="0", note=None, published=None):
    entry = {"field": (xi, gamma, tau, lam)}
    if note:
        entry["note"] = note
        entry["published"] = published
    return entry


def _t(prefix, lam, **kw):
    return _f(*prefix, lam, **kw)


BASES = {
    "1.1": [
        _f(*D_T), _f(*U_SCALE),
        _f(SX_UP, lam="2*b*sqrt(x)*exp(b*t/2)"),
        _f(SX_DOWN),
        _f(gamma="sqrt(y)*exp(e*t/2)", lam="2*e*sqrt(y)*exp(e*t/2)"),
        _f(gamma="sqrt(y)*exp(-e*t/2)"),
    ],
    "1.2": [
        _t(T_UP, "2*b*exp(b*t)*(b*(x+y) - 1/2)"),
        _t(T_DOWN, "0"),
        _f(tau="1", lam="-b/2"),
        _f(*ROTATION),
        _f(SX_UP, lam="2*b*sqrt(x)*exp(b*t/2)"),
        _f(SX_DOWN),
        _f(gamma=SY_UP, lam="2*b*sqrt(y)*exp(b*t/2)"),
        _f(gamma=SY_DOWN),
        _f(*U_SCALE),
    ],
    "1.3": [
        _t(T_UP, "b*exp(b*t)*(4*b*x - 1)/2"),
        _t(T_DOWN, "b*exp(-b*t)*(4*b*y + 1)/2"),
        _f(*D_T),
        _f("sqrt(x)*sqrt(y)", "-sqrt(x)*sqrt(y)", "0", "2*b*sqrt(x)*sqrt(y)"),
        _f(SX_UP, lam="2*b*sqrt(x)*exp(b*t/2)"),
        _f(SX_DOWN),
        _f(gamma=SY_DOWN, lam="-2*b*sqrt(y)*exp(-b*t/2)"),
        _f(gamma=SY_UP),
        _f(*U_SCALE),
    ],
    "1.4": [
        _t(T_QUAD, "2*(x+y) - t",
           note="printed lambda has -t/2; the symmetry test requires -t",
           published=("2*t*x", "2*t*y", "t^2", "2*(x+y) - t/2")),
        _f(*DILATION),
        _f(*D_T),
        _f(*ROTATION),
        _f("sqrt(x)*t", lam="2*sqrt(x)"),
        _f("sqrt(x)"),
        _f(gamma="sqrt(y)*t", lam="2*sqrt(y)"),
        _f(gamma="sqrt(y)"),
        _f(*U_SCALE),
    ],
    "2.1": [_f(*D_T), _f(*U_SCALE)],
    "2.2": [
        _t(T_UP, "2*b*exp(b*t)*(b*(x+y) - (a+d))",
           note="printed field omits the d/dt component exp(b*t)",
           published=("b*exp(b*t)*x", "b*exp(b*t)*y", "0", "2*b*exp(b*t)*(b*(x+y) - (a+d))")),
        _t(T_DOWN, "0"),
        _f(tau="1", lam="-b*(a+d)"),
        _f(*U_SCALE),
    ],
    "2.3": [
        _t(T_UP, "-2*b*(a - b*x)*exp(b*t)"),
        _t(T_DOWN, "2*b*(b*y + d)*exp(-b*t)"),
        _f(tau="1", lam="b*(d*b - a*b)"),
        _f(*U_SCALE),
    ],
    "2.4": [
        _t(T_QUAD, "2*(x+y) - 2*(a+d)*t"),
        _f(*DILATION),
        _f(*D_T),
        _f(*U_SCALE),
    ],
    "3.1": [
        _f(*D_T), _f(*U_SCALE),
        _f(SX_UP, lam="2*b*sqrt(x)*exp(b*t/2)"),
        _f(SX_DOWN),
    ],
    "3.2": [
        _t(T_UP, "2*b*exp(b*t)*(b*(x+y) - (1/4+d))"),
        _t(T_DOWN, "0"),
        _f(tau="1", lam="-b*(1/4+d)"),
        _f(SX_UP, lam="2*b*sqrt(x)*exp(b*t/2)"),
        _f(SX_DOWN),
        _f(*U_SCALE),
    ],
    "3.3": [
        _t(T_UP, "b*(4*b*x - 1)/2*exp(b*t)",
           note="printed lambda carries a stray free-constant factor c1, set to 1",
           published=T_UP + ("b*(4*b*x - 1)/2*exp(b*t)*c1",)),
        _t(T_DOWN, "2*b*(b*y + d)*exp(-b*t)"),
        _f(tau="1", lam="-b*(1/4 - d)"),
        _f(SX_UP, lam="2*b*sqrt(x)*exp(b*t/2)"),
        _f(SX_DOWN),
        _f(*U_SCALE),
    ],
    "3.4": [
        _t(T_QUAD, "2*(x+y) - 2*(1/4+d)*t"),
        _f(*DILATION),
        _f(*D_T),
        _f("sqrt(x)*t", lam="2*sqrt(x)"),
        _f("sqrt(x)"),
        _f(*U_SCALE),
    ],
    "4.1": [
        _f(*D_T), _f(*U_SCALE),
        _f(gamma="sqrt(y)*exp(e*t/2)", lam="2*e*sqrt(y)*exp(e*t/2)"),
        _f(gamma="sqrt(y)*exp(-e*t/2)"),
    ],
    "4.2": [
        _t(T_UP, "2*b*exp(b*t)*(b*(x+y) - (a+1/4))"),
        _t(T_DOWN, "0"),
        _f(tau="1", lam="-b*(1/4+a)"),
        _f(gamma=SY_UP, lam="2*b*sqrt(y)*exp(b*t/2)",
           note="printed with d/dx; the y-translation field is the symmetry",
           published=(SY_UP, "0", "0", "2*b*sqrt(y)*exp(b*t/2)")),
        _f(gamma=SY_DOWN),
        _f(*U_SCALE),
    ],
    "4.3": [
        _t(T_UP, "-2*b*(a - b*x)*exp(b*t)"),
        _t(T_DOWN, "b*(4*b*y + 1)/2*exp(-b*t)"),
        _f(tau="1", lam="b*(1/4 - a)"),
        _f(gamma=SY_DOWN, lam="-2*b*sqrt(y)*exp(-b*t/2)",
           note="printed with d/dx; the y-translation field is the symmetry",
           published=(SY_DOWN, "0", "0", "-2*b*sqrt(y)*exp(-b*t/2)")),
        _f(gamma=SY_UP),
        _f(*U_SCALE),
    ],
    "4.4": [
        _t(T_QUAD, "2*(x+y) - 2*(a+1/4)*t",
           note="printed lambda uses d in place of a",
           published=("2*t*x", "2*t*y", "t^2", "2*(x+y) - 2*(1/4+d)*t")),
        _f(*DILATION),
        _f(*D_T),
        _f(gamma="sqrt(y)*t", lam="2*sqrt(y)",
           note="printed with d/dx; the y-translation field is the symmetry",
           published=("sqrt(y)*t", "0", "0", "2*sqrt(y)")),
        _f(gamma="sqrt(y)"),
        _f(*U_SCALE),
    ],
}

HEAT_BASIS = [
    ("1", "0", "0"),
    ("0", "1", "0"),
    ("0", "0", "1"),
    ("x", "2*t", "-1/2"),
    ("2*t", "0", "-x"),
    ("4*x*t", "4*t^2", "-(x^2 + 2*t)"),
]  # (xi, tau, lambda) over (x, t, u)

# Published witness maps, written as images of basis elements in the
# reference basis.  Entries with "ideal" act on the quotient by that ideal
# (restricted to "subalgebra" when given).
_SL2_QUOTIENT_NEG = {"v1": {"E": "-b"}, "v2": {"F": "b"}, "v3": {"H": "b/2"}}
_J = ["v4", "v5", "v6", "v7", "v8", "v9"]

WITNESSES = {
    "1.1": [
        {"description": "center quotient, <v1, v4, v6> onto iso2, as printed",
         "reference": "iso2", "ideal": ["v2"], "subalgebra": ["v1", "v4", "v6"],
         "images": {"v1": {"e3": "e/2"}, "v4": {"e1": "1"}, "v6": {"e2": "1"}}},
        {"description": "center quotient, <v1, v5, v6> onto iso2, index repaired",
         "reference": "iso2", "ideal": ["v2"], "subalgebra": ["v1", "v5", "v6"],
         "images": {"v1": {"e3": "e/2"}, "v5": {"e1": "1"}, "v6": {"e2": "1"}}},
    ],
    "1.2": [{"description": "quotient by <v4..v9> onto sl2", "reference": "sl2", "ideal": _J,
             "images": _SL2_QUOTIENT_NEG}],
    "1.4": [{"description": "quotient by <v4..v9> onto sl2", "reference": "sl2", "ideal": _J,
             "images": {"v1": {"E": "1"}, "v2": {"H": "1/2"}, "v3": {"F": "-1"}}}],
    "2.2": [{"description": "sl2 x R", "reference": "sl2_x_R",
             "images": {**_SL2_QUOTIENT_NEG, "v4": {"Z": "1"}}}],
    "3.1": [{"description": "center quotient onto iso2", "reference": "iso2", "ideal": ["v2"],
             "images": {"v1": {"e3": "b/2"}, "v3": {"e1": "1"}, "v4": {"e2": "1"}}}],
    "3.2": [{"description": "sl2 semidirect h3", "reference": "sl2_semidirect_h3",
             "images": {"v1": {"E": "1"}, "v2": {"F": "-b^2"}, "v3": {"H": "b/2"},
                        "v4": {"X": "1"}, "v5": {"Y": "-b"}, "v6": {"Z": "1"}}}],
}

# Heat-equation fields realizing the reference algebra M (reference element
# -> combination of v1..v6).
HEAT_M_REALIZATION = {
    "E": {"v6": "1/4"}, "F": {"v2": "-1"}, "H": {"v4": "1"},
    "X": {"v5": "1"}, "Y": {"v1": "-2"}, "Z": {"v3": "-2"},
}


TABLES = {
    "1.1": (
        ('0', '0', '-b/2*v3', '-e/2*v4', 'b/2*v5', 'e/2*v6'),
        ('0', '0', '0', '0', '0', '0'),
        ('b/2*v3', '0', '0', '0', 'b*v2', '0'),
        ('e/2*v4', '0', '0', '0', '0', 'e*v2'),
        ('-b/2*v5', '0', '-b*v2', '0', '0', '0'),
        ('-e/2*v6', '0', '0', '-e*v2', '0', '0'),
    ),
    "1.2": (
        ('0', '-2*b*v3', '-b*v1', '0', '0', '-b*v5', '0', '-b*v7', '0'),
        ('2*b*v3', '0', 'b*v2', '0', 'b*v6', '0', 'b*v8', '0', '0'),
        ('b*v1', '-b*v2', '0', '0', 'b/2*v5', '-b/2*v6', 'b/2*v7', '-b/2*v8', '0'),
        ('0', '0', '0', '0', '1/2*v7', '1/2*v8', '-1/2*v5', '-1/2*v6', '0'),
        ('0', '-b*v6', '-b/2*v5', '-1/2*v7', '0', '-b*v9', '0', '0', '0'),
        ('b*v5', '0', 'b/2*v6', '-1/2*v8', 'b*v9', '0', '0', '0', '0'),
        ('0', '-b*v8', '-b/2*v7', '1/2*v5', '0', '0', '0', '-b*v9', '0'),
        ('b*v7', '0', 'b/2*v8', '1/2*v6', '0', '0', 'b*v9', '0', '0'),
        ('0', '0', '0', '0', '0', '0', '0', '0', '0'),
    ),
    "1.3": (
        ('0', '-2*b*v3', '-b*v1', '0', '0', '-b*v5', '-b*v8', '0', '0'),
        ('2*b*v3', '0', 'b*v2', '0', 'b*v6', '0', '0', 'b*v7', '0'),
        ('b*v1', '-b*v2', '0', '0', 'b/2*v5', '-b/2*v6', '-b/2*v7', 'b/2*v8', '0'),
        ('0', '0', '0', '0', '1/2*v8', '1/2*v7', '-b/2*v6', '-1/2*v5', '0'),
        ('0', '-b*v6', '-b/2*v5', '-1/2*v8', '0', '-b*v9', '0', '0', '0'),
        ('b*v5', '0', 'b/2*v6', '-1/2*v7', 'b*v9', '0', '0', '0', '0'),
        ('b*v8', '0', 'b/2*v7', '1/2*v6', '0', '0', '0', 'b*v9', '0'),
        ('0', '-b*v7', '-b/2*v8', '1/2*v5', '0', '0', '-b*v9', '0', '0'),
        ('0', '0', '0', '0', '0', '0', '0', '0', '0'),
    ),
    "1.4": (
        ('0', '-v1', '-2*v2+1/2*v9', '0', '0', '-v5', '0', '-v7', '0'),
        ('v1', '0', '-v3', '0', '1/2*v5', '-1/2*v6', '1/2*v7', '-1/2*v8', '0'),
        ('2*v2-1/2*v9', 'v3', '0', '0', 'v6', '0', 'v8', '0', '0'),
        ('0', '0', '0', '0', '1/2*v7', '1/2*v8', '-1/2*v5', '-1/2*v6', '0'),
        ('0', '-1/2*v5', '-v6', '-1/2*v7', '0', '-v9', '0', '0', '0'),
        ('0', '1/2*v6', '0', '-1/2*v8', 'v9', '0', '0', '0', '0'),
        ('0', '-1/2*v7', '-v8', '1/2*v5', '0', '0', '0', '-v9', '0'),
        ('-v7', '1/2*v8', '0', '1/2*v6', '0', '0', 'v9', '0', '0'),
        ('0', '0', '0', '0', '0', '0', '0', '0', '0'),
    ),
    "2.1": (
        ('0', '0'),
        ('0', '0'),
    ),
    "2.2": (
        ('0', '-2*b*v3', '-b*v1', '0'),
        ('2*b*v3', '0', 'b*v2', '0'),
        ('b*v1', '-b*v2', '0', '0'),
        ('0', '0', '0', '0'),
    ),
    "2.3": (
        ('0', '-2*b*v3', '-b*v1', '0'),
        ('2*b*v3', '0', '2*b*v2', '0'),
        ('b*v1', '-b*v2', '0', '0'),
        ('0', '0', '0', '0'),
    ),
    "2.4": (
        ('0', '-v1', '-2*v2+2*(a+d)*v4', '0'),
        ('v1', '0', '-v3', '0'),
        ('2*v2-2*(a+d)*v4', 'v3', '0', '0'),
        ('0', '0', '0', '0'),
    ),
    "3.1": (
        ('0', '0', 'b/2*v3', '-b/2*v4'),
        ('0', '0', '0', '0'),
        ('-b/2*v3', '0', '0', '-b*v2'),
        ('b/2*v4', '0', 'b*v2', '0'),
    ),
    "3.2": (
        ('0', '-2*b*v3', '-b*v1', '0', '-b*v4', '0'),
        ('2*b*v3', '0', 'b*v2', 'b*v5', '0', '0'),
        ('b*v1', '-b*v2', '0', 'b/2*v4', '-b/2*v5', '0'),
        ('0', '-b*v5', '-b/2*v4', '0', '-b*v6', '0'),
        ('b*v4', '0', 'b/2*v5', 'b*v6', '0', '0'),
        ('0', '0', '0', '0', '0', '0'),
    ),
    "3.3": (
        ('0', '-2*b*v3', '-b*v1', '0', '-b*v4', '0'),
        ('2*b*v3', '0', 'b*v2', 'b*v5', '0', '0'),
        ('b*v1', '-b*v2', '0', 'b/2*v4', '-b/2*v5', '0'),
        ('0', '-b*v5', '-b/2*v4', '0', '-b*v6', '0'),
        ('b*v4', '0', 'b/2*v5', 'b*v6', '0', '0'),
        ('0', '0', '0', '0', '0', '0'),
    ),
    "3.4": (
        ('0', '-v1', '-2*v2+2*(d+1/4)*v6', '0', '-v4', '0'),
        ('v1', '0', '-v3', '1/2*v4', '-1/2*v5', '0'),
        ('2*v2-2*(d+1/4)*v6', 'v3', '0', 'v5', '0', '0'),
        ('0', '-1/2*v4', '-v5', '0', '-v6', '0'),
        ('v4', '1/2*v5', '0', 'v6', '0', '0'),
        ('0', '0', '0', '0', '0', '0'),
    ),
    "4.1": (
        ('0', '0', 'e/2*v3', '-e/2*v4'),
        ('0', '0', '0', '0'),
        ('-e/2*v3', '0', '0', '-e*v2'),
        ('e/2*v4', '0', 'e*v2', '0'),
    ),
    "4.2": (
        ('0', '-2*b*v3', '-b*v1', '0', '-b*v4', '0'),
        ('2*b*v3', '0', 'b*v2', 'b*v5', '0', '0'),
        ('b*v1', '-b*v2', '0', 'b/2*v4', '-b/2*v5', '0'),
        ('0', '-b*v5', '-b/2*v4', '0', '-b*v6', '0'),
        ('b*v4', '0', 'b/2*v5', 'b*v6', '0', '0'),
        ('0', '0', '0', '0', '0', '0'),
    ),
    "4.3": (
        ('0', '-2*b*v3', '-b*v1', '-b*v5', '0', '0'),
        ('2*b*v3', '0', 'b*v2', '0', 'b*v4', '0'),
        ('b*v1', '-b*v2', '0', '-b/2*v4', 'b/2*v5', '0'),
        ('b*v5', '0', 'b/2*v4', '0', 'b*v6', '0'),
        ('0', '-b*v4', '-b/2*v5', '-b*v6', '0', '0'),
        ('0', '0', '0', '0', '0', '0'),
    ),
    "4.4": (
        ('0', '-v1', '-2*v2+2*(d+1/4)*v6', '0', '-v4', '0'),
        ('v1', '0', '-v3', '1/2*v4', '-1/2*v5', '0'),
        ('2*v2-2*(d+1/4)*v6', '-b*v2', '0', 'v5', '0', '0'),
        ('0', '-1/2*v4', '-v5', '0', '-v6', '0'),
        ('v4', '1/2*v5', '0', '-v6', '0', '0'),
        ('0', '0', '0', '0', '0', '0'),
    ),
}

# Structure each case is expected to have: (matched reference, reference
# matched by the quotient by the center, or None when not checked).
EXPECTED_STRUCTURE = {
    "1.1": ("unknown", None),
    **{f"1.{j}": ("sl2_semidirect_J6", None) for j in (2, 3, 4)},
    "2.1": ("abelian_n", None),
    **{f"2.{j}": ("sl2_x_R", None) for j in (2, 3, 4)},
    "3.1": ("unknown", "iso2"),
    "4.1": ("unknown", "iso2"),
    **{f"{i}.{j}": ("sl2_semidirect_h3", None) for i in (3, 4) for j in (2, 3, 4)},
}
