"""Shared hypothesis strategies: small exact rationals and explicit instances."""

from fractions import Fraction

import hypothesis.strategies as st

from wsapprox import Direction, ExplicitInstance, ObjectiveVector, Solution, WeightVector

LATTICE = 12  # small denominator keeps downstream exact arithmetic cheap


def rationals(low=1, high=8, denominator=LATTICE):
    return st.integers(low * denominator, high * denominator).map(
        lambda n: Fraction(n, denominator)
    )


def objective_vectors(p=2, low=1, high=8):
    return st.lists(rationals(low, high), min_size=p, max_size=p).map(
        lambda vs: ObjectiveVector(tuple(vs))
    )


def weight_vectors(p=2, low=1, high=8):
    return st.lists(rationals(low, high), min_size=p, max_size=p).map(
        lambda vs: WeightVector(tuple(vs))
    )


@st.composite
def explicit_instances(draw, p=2, min_n=1, max_n=10, direction=Direction.MIN, low=1, high=8):
    n = draw(st.integers(min_n, max_n))
    images = draw(st.lists(objective_vectors(p, low, high), min_size=n, max_size=n))
    solutions = tuple(Solution(f"s{i + 1}", img) for i, img in enumerate(images))
    return ExplicitInstance(direction, p, solutions)
