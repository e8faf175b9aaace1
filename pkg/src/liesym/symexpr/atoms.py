"""Interned symbols: coordinates, the dependent variable, jet variables and
opaque function atoms with formal-derivative bookkeeping."""

from __future__ import annotations

COORD, DEP, JET, OPAQUE = "coordinate", "dependent", "jet", "opaque"

COORDS = ("x", "y", "t")
# formal derivative slots of an opaque atom
DERIV_VARS = ("x", "y", "t", "u")

_KIND_RANK = {JET: 0, DEP: 1, COORD: 2, OPAQUE: 3}
_COORD_RANK = {"x": 0, "y": 1, "t": 2}
_cache: dict = {}


class AtomError(ValueError):
    pass


class Atom:
    """A symbol.  Construct through :func:`coord`, :func:`jet`, :func:`opaque`
    or the ``U`` singleton; instances are interned so identity is equality."""

    __slots__ = ("kind", "name", "counts", "label", "key", "__weakref__")

    def __init__(self, kind: str, name: str, counts: tuple):
        self.kind = kind
        self.name = name
        self.counts = counts
        self.label = _label(kind, name, counts)
        self.key = _sort_key(kind, name, counts)

    def __repr__(self) -> str:
        return f"Atom({self.label})"

    def __str__(self) -> str:
        return self.label

    def __lt__(self, other: "Atom") -> bool:
        return self.key < other.key

    @property
    def order(self) -> int:
        return sum(self.counts)

    def is_coordinate(self, name: str | None = None) -> bool:
        return self.kind == COORD and (name is None or self.name == name)

    def derivative(self, var: str) -> "Atom":
        """Formal derivative of an opaque atom (``xi`` -> ``xi_x``)."""
        if self.kind != OPAQUE:
            raise AtomError(f"{self.label} has no formal derivative")
        idx = DERIV_VARS.index(var)
        counts = list(self.counts)
        counts[idx] += 1
        return opaque(self.name, tuple(counts))

    def jet_extend(self, var: str) -> "Atom":
        """u_J -> u_{J,var}; the dependent variable u extends to u_var."""
        if self.kind == DEP:
            return jet(_unit(var))
        if self.kind != JET:
            raise AtomError(f"{self.label} is not a jet variable")
        counts = list(self.counts)
        counts[COORDS.index(var)] += 1
        return jet(tuple(counts))


def _unit(var: str) -> tuple:
    counts = [0, 0, 0]
    counts[COORDS.index(var)] = 1
    return tuple(counts)


def _suffix(counts: tuple, names: tuple) -> str:
    return "".join(n * k for n, k in zip(names, counts))


def _label(kind: str, name: str, counts: tuple) -> str:
    if kind == JET:
        return "u_" + _suffix(counts, COORDS)
    if kind == OPAQUE and any(counts):
        return f"{name}_{_suffix(counts, DERIV_VARS)}"
    return name


def _sort_key(kind: str, name: str, counts: tuple) -> tuple:
    rank = _KIND_RANK[kind]
    if kind == JET:
        # graded: first-order jets before second-order ones, x before y before t
        return (rank, sum(counts), tuple(-k for k in counts), "")
    if kind == COORD:
        return (rank, _COORD_RANK[name], (), "")
    if kind == DEP:
        return (rank, 0, (), "")
    return (rank, 0, (name,) + tuple(-k for k in counts), "")


def _intern(kind: str, name: str, counts: tuple) -> Atom:
    ident = (kind, name, counts)
    atom = _cache.get(ident)
    if atom is None:
        atom = _cache[ident] = Atom(kind, name, counts)
    return atom


def coord(name: str) -> Atom:
    if name not in COORDS:
        raise AtomError(f"unknown coordinate {name!r}")
    return _intern(COORD, name, ())


def jet(counts) -> Atom:
    counts = tuple(int(k) for k in counts)
    if len(counts) != 3 or min(counts) < 0 or sum(counts) == 0:
        raise AtomError(f"bad jet multi-index {counts}")
    return _intern(JET, "u", counts)


def jet_from_label(label: str) -> Atom:
    """``u_xt`` -> jet atom with counts (1, 0, 1)."""
    if not label.startswith("u_") or len(label) < 3:
        raise AtomError(f"not a jet label: {label!r}")
    counts = [0, 0, 0]
    for ch in label[2:]:
        if ch not in COORDS:
            raise AtomError(f"bad jet label {label!r}")
        counts[COORDS.index(ch)] += 1
    return jet(tuple(counts))


def opaque(name: str, counts=(0, 0, 0, 0)) -> Atom:
    counts = tuple(int(k) for k in counts)
    if len(counts) != 4 or min(counts) < 0:
        raise AtomError(f"bad derivative counts {counts}")
    if name in COORDS or name in ("u", "a", "b", "d", "e", "sqrt", "exp"):
        raise AtomError(f"reserved name {name!r}")
    return _intern(OPAQUE, name, counts)


def opaque_from_label(label: str) -> Atom:
    """``xi_xu`` -> opaque atom xi with counts (1, 0, 0, 1)."""
    name, _, tail = label.partition("_")
    counts = [0, 0, 0, 0]
    for ch in tail:
        if ch not in DERIV_VARS:
            raise AtomError(f"bad derivative tag in {label!r}")
        counts[DERIV_VARS.index(ch)] += 1
    return opaque(name, tuple(counts))


X = coord("x")
Y = coord("y")
T = coord("t")
U = _intern(DEP, "u", ())
