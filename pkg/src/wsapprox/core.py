"""Exact-rational domain types and the approximation-factor algebra.

Objective vectors, bounds, weights and approximation factors are tuples of
arbitrary-precision rationals (``fractions.Fraction``).  Every comparison in
this package is exact; floats are rejected at the boundary so that no binary
rounding can ever leak into a guarantee check.

All types are immutable values and all operations are pure functions, so
everything here is safe to share freely between threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Union

RationalLike = Union[Fraction, int, str]

_RATIONAL_RE = re.compile(r"\A[+-]?\d+(?:/\d+)?\Z")


class ContractViolation(ValueError):
    """A caller broke a documented precondition."""


class MaximizationUnsupported(ContractViolation):
    """Raised when a maximization instance reaches an approximation algorithm.

    Weighted-sum optima of a maximization problem can be worse than an
    unsupported solution by an arbitrarily large factor in all but one
    objective, so no bounded guarantee exists and the algorithms refuse to
    run instead of silently producing one.
    """


def parse_rational(text: str) -> Fraction:
    """Parse ``"7"`` or ``"num/den"``; the denominator must be positive."""
    if not isinstance(text, str) or not _RATIONAL_RE.match(text.strip()):
        raise ContractViolation(f"not a rational literal: {text!r}")
    value = text.strip()
    if "/" in value and value.split("/")[1].lstrip("0") == "":
        raise ContractViolation(f"zero denominator: {text!r}")
    return Fraction(value)


def format_rational(value: Fraction) -> str:
    """Render a Fraction as ``"n"`` or ``"n/d"`` in lowest terms."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def as_rational(value: RationalLike) -> Fraction:
    """Coerce an int, Fraction or rational string to a Fraction.

    Floats (and bools) are rejected: exactness is a package-wide invariant.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise ContractViolation(f"exact rational required, got {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise ContractViolation(f"cannot interpret {value!r} as a rational")


def _rational_tuple(values: Iterable[RationalLike]) -> tuple[Fraction, ...]:
    return tuple(as_rational(v) for v in values)


class Direction(Enum):
    """Optimization sense of an instance; all objectives share it."""

    MIN = "min"
    MAX = "max"


@dataclass(frozen=True)
class ObjectiveVector:
    """Image f(x) of a feasible solution: p >= 2 strictly positive rationals."""

    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _rational_tuple(self.values))
        if len(self.values) < 2:
            raise ContractViolation("objective vectors need p >= 2 components")
        if any(v <= 0 for v in self.values):
            raise ContractViolation("objective values must be strictly positive")

    @classmethod
    def of(cls, *values: RationalLike) -> "ObjectiveVector":
        return cls(tuple(values))

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.values)

    def __getitem__(self, j: int) -> Fraction:
        return self.values[j]


@dataclass(frozen=True)
class Bounds:
    """Per-objective rationals with 0 < lower[j] <= upper[j] sandwiching all images."""

    lower: tuple[Fraction, ...]
    upper: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "lower", _rational_tuple(self.lower))
        object.__setattr__(self, "upper", _rational_tuple(self.upper))
        if len(self.lower) != len(self.upper):
            raise ContractViolation("bound tuples differ in dimension")
        for lo, hi in zip(self.lower, self.upper):
            if not 0 < lo <= hi:
                raise ContractViolation("bounds require 0 < lower <= upper")

    @classmethod
    def of(cls, lower: Iterable[RationalLike], upper: Iterable[RationalLike]) -> "Bounds":
        return cls(tuple(lower), tuple(upper))

    @property
    def p(self) -> int:
        return len(self.lower)

    def contains(self, image: ObjectiveVector) -> bool:
        if len(image) != self.p:
            raise ContractViolation("dimension mismatch")
        return all(lo <= v <= hi for lo, v, hi in zip(self.lower, image, self.upper))


@dataclass(frozen=True)
class WeightVector:
    """Strictly positive weights of a weighted-sum scalarization."""

    weights: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "weights", _rational_tuple(self.weights))
        if not self.weights:
            raise ContractViolation("empty weight vector")
        if any(w <= 0 for w in self.weights):
            raise ContractViolation("weights must be strictly positive")

    @classmethod
    def of(cls, *weights: RationalLike) -> "WeightVector":
        return cls(tuple(weights))

    def __len__(self) -> int:
        return len(self.weights)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.weights)

    def __getitem__(self, j: int) -> Fraction:
        return self.weights[j]

    def scalarize(self, image: ObjectiveVector) -> Fraction:
        """Exact weighted sum of an image under this weight vector."""
        if len(image) != len(self.weights):
            raise ContractViolation("dimension mismatch")
        return sum((w * v for w, v in zip(self.weights, image)), Fraction(0))


@dataclass(frozen=True)
class FactorVector:
    """Componentwise approximation factors, each >= 1."""

    factors: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "factors", _rational_tuple(self.factors))
        if any(f < 1 for f in self.factors):
            raise ContractViolation("approximation factors must be >= 1")

    @classmethod
    def of(cls, *factors: RationalLike) -> "FactorVector":
        return cls(tuple(factors))

    def __len__(self) -> int:
        return len(self.factors)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.factors)

    def __getitem__(self, j: int) -> Fraction:
        return self.factors[j]

    def le(self, other: "FactorVector") -> bool:
        if len(self) != len(other):
            raise ContractViolation("dimension mismatch")
        return all(a <= b for a, b in zip(self.factors, other.factors))

    def excess_sum(self) -> Fraction:
        """Sum of the components that are strictly larger than 1."""
        return sum((f for f in self.factors if f > 1), Fraction(0))


class FamilyKind(Enum):
    MULTI_FACTOR = "multifactor"
    UNIFORM = "uniform"
    DISJUNCTIVE_BIOBJECTIVE = "disjunctive"


@dataclass(frozen=True)
class GuaranteeFamily:
    """Parametric set of factor vectors against which coverage is decided.

    ``bound`` is interpreted per kind:

    * MULTI_FACTOR: the set of all alpha >= 1 with alpha_i <= sigma for at
      least one i and the components above 1 summing to exactly ``bound``.
      The usual parametrization has bound = sigma * p + epsilon; the raw
      constructor admits any positive bound (used by tightness experiments,
      where the bound is a deficit such as p - epsilon).
    * UNIFORM: the single vector (bound, ..., bound).
    * DISJUNCTIVE_BIOBJECTIVE: the pair {(1, bound), (bound, 1)} with
      bound = 2 + epsilon; requires p = 2.
    """

    kind: FamilyKind
    p: int
    sigma: Fraction
    bound: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "sigma", as_rational(self.sigma))
        object.__setattr__(self, "bound", as_rational(self.bound))
        if self.p < 2:
            raise ContractViolation("guarantee families require p >= 2")
        if self.sigma < 1:
            raise ContractViolation("sigma must be >= 1")
        if self.bound <= 0:
            raise ContractViolation("bound must be positive")
        if self.kind is FamilyKind.DISJUNCTIVE_BIOBJECTIVE and self.p != 2:
            raise ContractViolation("disjunctive families are biobjective only")

    @classmethod
    def multi_factor(
        cls, sigma: RationalLike, epsilon: RationalLike, p: int
    ) -> "GuaranteeFamily":
        """Family with escape coordinate <= sigma and excess sum sigma*p + epsilon."""
        sigma = as_rational(sigma)
        epsilon = as_rational(epsilon)
        if epsilon <= 0:
            raise ContractViolation("epsilon must be positive; use multi_factor_raw for deficits")
        return cls(FamilyKind.MULTI_FACTOR, p, sigma, sigma * p + epsilon)

    @classmethod
    def multi_factor_raw(
        cls, sigma: RationalLike, sum_bound: RationalLike, p: int
    ) -> "GuaranteeFamily":
        """Multi-factor family with an explicitly supplied excess-sum bound."""
        return cls(FamilyKind.MULTI_FACTOR, p, as_rational(sigma), as_rational(sum_bound))

    @classmethod
    def uniform(cls, sigma: RationalLike, epsilon: RationalLike, p: int) -> "GuaranteeFamily":
        """Single-vector family (sigma*p + epsilon, ..., sigma*p + epsilon)."""
        sigma = as_rational(sigma)
        epsilon = as_rational(epsilon)
        if epsilon <= 0:
            raise ContractViolation("epsilon must be positive; use uniform_raw for deficits")
        return cls(FamilyKind.UNIFORM, p, sigma, sigma * p + epsilon)

    @classmethod
    def uniform_raw(cls, bound: RationalLike, p: int) -> "GuaranteeFamily":
        return cls(FamilyKind.UNIFORM, p, Fraction(1), as_rational(bound))

    @classmethod
    def disjunctive_biobjective(cls, epsilon: RationalLike) -> "GuaranteeFamily":
        epsilon = as_rational(epsilon)
        if epsilon <= 0:
            raise ContractViolation("epsilon must be positive")
        return cls(FamilyKind.DISJUNCTIVE_BIOBJECTIVE, 2, Fraction(1), 2 + epsilon)

    def contains(self, alpha: FactorVector) -> bool:
        """Exact membership of a factor vector in the family's set."""
        if len(alpha) != self.p:
            raise ContractViolation("dimension mismatch")
        if self.kind is FamilyKind.MULTI_FACTOR:
            return any(a <= self.sigma for a in alpha) and alpha.excess_sum() == self.bound
        if self.kind is FamilyKind.UNIFORM:
            return all(a == self.bound for a in alpha)
        return tuple(alpha) in (
            (Fraction(1), self.bound),
            (self.bound, Fraction(1)),
        )


def dominates(a: ObjectiveVector, b: ObjectiveVector, direction: Direction) -> bool:
    """True iff ``a`` dominates ``b``: distinct and at least as good everywhere."""
    if len(a) != len(b):
        raise ContractViolation("dimension mismatch")
    if a.values == b.values:
        return False
    if direction is Direction.MIN:
        return all(x <= y for x, y in zip(a, b))
    return all(x >= y for x, y in zip(a, b))


def factor_vector(
    candidate: ObjectiveVector, target: ObjectiveVector, direction: Direction
) -> FactorVector:
    """Componentwise factors with which ``candidate`` approximates ``target``.

    Ratios below 1 (candidate strictly better in that objective) clip to 1,
    so the result is the unique minimal factor vector.
    """
    if len(candidate) != len(target):
        raise ContractViolation("dimension mismatch")
    one = Fraction(1)
    if direction is Direction.MIN:
        ratios = (c / t for c, t in zip(candidate, target))
    else:
        ratios = (t / c for c, t in zip(candidate, target))
    return FactorVector(tuple(max(one, r) for r in ratios))


def approximates(
    candidate: ObjectiveVector,
    target: ObjectiveVector,
    alpha: FactorVector,
    direction: Direction,
) -> bool:
    """True iff ``candidate`` alpha-approximates ``target``."""
    if len(candidate) != len(target) or len(alpha) != len(target):
        raise ContractViolation("dimension mismatch")
    if direction is Direction.MIN:
        return all(c <= a * t for c, a, t in zip(candidate, alpha, target))
    return all(a * c >= t for c, a, t in zip(candidate, alpha, target))


def covers(beta: FactorVector, family: GuaranteeFamily) -> bool:
    """Decide whether some alpha in the family dominates ``beta`` componentwise.

    Closed forms (each equivalent to the existence of a witness alpha, see
    ``multi_factor_witness`` and the accompanying tests):

    * MULTI_FACTOR: some beta_i <= sigma and excess sum <= bound.
    * UNIFORM: every component <= bound.
    * DISJUNCTIVE_BIOBJECTIVE: one component equals 1, the other <= bound.
    """
    if len(beta) != family.p:
        raise ContractViolation("dimension mismatch")
    if family.kind is FamilyKind.MULTI_FACTOR:
        return any(b <= family.sigma for b in beta) and beta.excess_sum() <= family.bound
    if family.kind is FamilyKind.UNIFORM:
        return all(b <= family.bound for b in beta)
    b1, b2 = beta
    return (b1 == 1 and b2 <= family.bound) or (b2 == 1 and b1 <= family.bound)


def multi_factor_witness(
    beta: FactorVector, family: GuaranteeFamily
) -> Optional[FactorVector]:
    """Exhibit alpha in the family with beta <= alpha, or None if impossible.

    For MULTI_FACTOR the closed form in ``covers`` is justified by this
    construction: inflate a single coordinate that already exceeds 1 (or
    raise a fresh one) until the excess sum meets the bound exactly, chosen
    so that a coordinate <= sigma survives untouched.  The one regime with
    no witness is an excess-sum bound <= 1, where the family's set is empty
    because any counted component of a member exceeds 1 on its own; the
    closed form still accepts exact matches (all factors equal to 1) there,
    which is the useful reading for deficit-bound tightness checks.
    """
    if not covers(beta, family):
        return None
    if family.kind is FamilyKind.UNIFORM:
        return FactorVector(tuple(family.bound for _ in range(family.p)))
    if family.kind is FamilyKind.DISJUNCTIVE_BIOBJECTIVE:
        b1, b2 = beta
        if b1 == 1 and b2 <= family.bound:
            return FactorVector.of(1, family.bound)
        return FactorVector.of(family.bound, 1)
    factors = list(beta.factors)
    deficit = family.bound - beta.excess_sum()
    big = [j for j, f in enumerate(factors) if f > 1]
    escapes = [j for j, f in enumerate(factors) if f <= family.sigma]
    if big and deficit == 0:
        return FactorVector(tuple(factors))
    if big:
        # Inflating j keeps the family's escape clause as long as some
        # coordinate <= sigma other than j remains; such a j always exists
        # because coordinates equal to 1 are escapes themselves.
        j = next(j for j in big if any(e != j for e in escapes))
        factors[j] += deficit
    else:
        if family.bound <= 1:
            return None
        factors[0] = family.bound
    witness = FactorVector(tuple(factors))
    if not (beta.le(witness) and family.contains(witness)):  # pragma: no cover
        raise AssertionError("witness construction failed")
    return witness
