"""The sixteen constraint classes on (a, b, d, e) and their sample points."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .symexpr import ParamPoly, as_fraction

QUARTER = Fraction(1, 4)

# second digit of a case id
B_E_RELATIONS = ("generic", "equal_nonzero", "opposite_nonzero", "both_zero")
# first digit of a case id: (a == 1/4, d == 1/4)
_AD_CLASS = {(True, True): 1, (False, False): 2, (True, False): 3, (False, True): 4}
_AD_FROM_DIGIT = {v: k for k, v in _AD_CLASS.items()}

_AD_SAMPLE = {
    1: (QUARTER, QUARTER),
    2: (Fraction(3, 10), Fraction(1, 2)),
    3: (QUARTER, Fraction(1, 2)),
    4: (Fraction(3, 10), QUARTER),
}
_BE_SAMPLE = {
    1: (Fraction(1), Fraction(2)),
    2: (Fraction(1), Fraction(1)),
    3: (Fraction(1), Fraction(-1)),
    4: (Fraction(0), Fraction(0)),
}


class CaseError(ValueError):
    pass


def _be_relation(b: Fraction, e: Fraction) -> str:
    if b == 0 and e == 0:
        return "both_zero"
    if b == e:
        return "equal_nonzero"
    if b == -e:
        return "opposite_nonzero"
    return "generic"


@dataclass(frozen=True)
class ParamCase:
    a_quarter: bool
    d_quarter: bool
    b_e_relation: str
    sample: tuple[Fraction, Fraction, Fraction, Fraction] = field(default=None)  # (a, b, d, e)

    def __post_init__(self):
        if self.b_e_relation not in B_E_RELATIONS:
            raise CaseError(f"unknown b/e relation {self.b_e_relation!r}")
        if self.sample is None:
            major, minor = self.case_id.split(".")
            (a, d), (b, e) = _AD_SAMPLE[int(major)], _BE_SAMPLE[int(minor)]
            object.__setattr__(self, "sample", (a, b, d, e))
        else:
            object.__setattr__(self, "sample", tuple(as_fraction(v) for v in self.sample))
        self.validate_sample()

    # -- identity ---------------------------------------------------------

    @property
    def major(self) -> int:
        return _AD_CLASS[(self.a_quarter, self.d_quarter)]

    @property
    def minor(self) -> int:
        return B_E_RELATIONS.index(self.b_e_relation) + 1

    @property
    def case_id(self) -> str:
        return f"{self.major}.{self.minor}"

    @classmethod
    def from_id(cls, case_id: str, sample=None) -> "ParamCase":
        try:
            major, minor = (int(p) for p in case_id.split("."))
            a_q, d_q = _AD_FROM_DIGIT[major]
            relation = B_E_RELATIONS[minor - 1]
        except (ValueError, KeyError, IndexError):
            raise CaseError(f"unknown case {case_id!r}") from None
        return cls(a_q, d_q, relation, sample)

    def with_sample(self, sample) -> "ParamCase":
        return ParamCase(self.a_quarter, self.d_quarter, self.b_e_relation, sample)

    # -- constraints ------------------------------------------------------

    @property
    def sample_map(self) -> dict[str, Fraction]:
        return dict(zip("abde", self.sample))

    def constraints(self) -> dict[str, ParamPoly]:
        """Equality constraints as a parameter substitution."""
        subs: dict[str, ParamPoly] = {}
        if self.a_quarter:
            subs["a"] = ParamPoly.const(QUARTER)
        if self.d_quarter:
            subs["d"] = ParamPoly.const(QUARTER)
        b = ParamPoly.symbol("b")
        if self.b_e_relation == "equal_nonzero":
            subs["e"] = b
        elif self.b_e_relation == "opposite_nonzero":
            subs["e"] = -b
        elif self.b_e_relation == "both_zero":
            subs["b"] = ParamPoly.const(0)
            subs["e"] = ParamPoly.const(0)
        return subs

    def free_params(self) -> list[str]:
        fixed = self.constraints()
        return [p for p in "abde" if p not in fixed]

    def describe(self) -> str:
        a = "a=1/4" if self.a_quarter else "a!=1/4"
        d = "d=1/4" if self.d_quarter else "d!=1/4"
        be = {"generic": "b!=+-e", "equal_nonzero": "b=e!=0",
              "opposite_nonzero": "b=-e!=0", "both_zero": "b=e=0"}[self.b_e_relation]
        return f"{be}, {a}, {d}"

    def validate_sample(self) -> None:
        a, b, d, e = self.sample
        if (a == QUARTER) != self.a_quarter or (d == QUARTER) != self.d_quarter:
            raise CaseError(f"sample {self.sample} is outside class {self.case_id}")
        if _be_relation(b, e) != self.b_e_relation:
            raise CaseError(f"sample {self.sample} is outside class {self.case_id}")

    def swapped(self) -> "ParamCase":
        """Image under x <-> y, a <-> d, b <-> e."""
        a, b, d, e = self.sample
        return ParamCase(self.d_quarter, self.a_quarter, self.b_e_relation, (d, e, a, b))

    def as_dict(self) -> dict:
        return {
            "case_id": self.case_id,
            "constraints": self.describe(),
            "sample": {k: _fmt(v) for k, v in self.sample_map.items()},
        }

    def __str__(self) -> str:
        return f"case {self.case_id} ({self.describe()})"


def _fmt(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def classify(a, d, b, e) -> ParamCase:
    a, d, b, e = (as_fraction(v) for v in (a, d, b, e))
    return ParamCase(a == QUARTER, d == QUARTER, _be_relation(b, e), (a, b, d, e))


ALL_CASE_IDS = tuple(f"{i}.{j}" for i in range(1, 5) for j in range(1, 5))


def canonical_cases() -> list[ParamCase]:
    return [ParamCase.from_id(cid) for cid in ALL_CASE_IDS]


def sample_from_mapping(values: Mapping[str, object]) -> tuple[Fraction, ...]:
    return tuple(as_fraction(values[k]) for k in "abde")
