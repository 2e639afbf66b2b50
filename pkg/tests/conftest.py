"""Shared random-instance generators.

Everything is seeded `random.Random`, so failures reproduce exactly. The
generators deliberately produce lattice-friendly coordinates: one denominator
per instance keeps the detected loss grids small enough for the exact solver
while still exercising non-trivial spacings.
"""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from otdp import Marginal, ProductDistribution, TwoPointTarget


def random_probs(rng: random.Random, length: int, unit: int = 16) -> list[Fraction]:
    """`length` nonnegative rationals summing to exactly 1, denominator <= unit."""
    cuts = sorted(rng.randint(0, unit) for _ in range(length - 1))
    parts = []
    prev = 0
    for cut in cuts:
        parts.append(cut - prev)
        prev = cut
    parts.append(unit - prev)
    return [Fraction(part, unit) for part in parts]


def random_instance(
    rng: random.Random,
    k_max: int = 6,
    l_max: int = 3,
    den_max: int = 8,
    coord_abs: int = 5,
    t_den_max: int = 64,
    positive_t: bool = False,
) -> tuple[ProductDistribution, TwoPointTarget]:
    """Random instance with all coordinates on Z/m for one m <= den_max."""
    m = rng.randint(1, den_max)
    k = rng.randint(1, k_max)

    def coord() -> Fraction:
        return Fraction(rng.randint(-coord_abs * m, coord_abs * m), m)

    marginals = []
    for _ in range(k):
        size = rng.randint(1, l_max)
        numerators = rng.sample(range(-coord_abs * m, coord_abs * m + 1), size)
        support = [Fraction(n, m) for n in numerators]
        marginals.append(Marginal(support=support, probs=random_probs(rng, size)))
    mu = ProductDistribution(marginals=marginals)

    t_den = rng.randint(1, t_den_max)
    if positive_t:
        t = Fraction(rng.randint(1, 2 * t_den - 1), 2 * t_den)
    else:
        t = Fraction(rng.randint(0, t_den), t_den)
    target = TwoPointTarget(
        y1=[coord() for _ in range(k)],
        y2=[coord() for _ in range(k)],
        t=t,
    )
    return mu, target


def random_binary_uniform(
    rng: random.Random, k_max: int = 8, den_max: int = 4, coord_abs: int = 3
) -> tuple[ProductDistribution, TwoPointTarget]:
    """Uniform distribution on {0,1}^K with rational targets; t left at 0."""
    k = rng.randint(1, k_max)
    half = Fraction(1, 2)
    binary = Marginal(support=[0, 1], probs=[half, half])
    mu = ProductDistribution(marginals=[binary] * k)

    def coord() -> Fraction:
        m = rng.randint(1, den_max)
        return Fraction(rng.randint(-coord_abs * m, coord_abs * m), m)

    target = TwoPointTarget(
        y1=[coord() for _ in range(k)],
        y2=[coord() for _ in range(k)],
        t=0,
    )
    return mu, target


def random_approx_instance(
    rng: random.Random, eps: Fraction, k_max: int = 3
) -> tuple[ProductDistribution, TwoPointTarget]:
    """Instance whose rounded loss grid stays tractable for ot_approx at `eps`.

    Two families. 'aligned': every denominator divides 8, hence divides
    M = 8*K*U/eps whenever 1/eps is an integer, so rounding is the identity.
    'offgrid': supports have denominators in {3, 5, 7} but the targets are
    integers, so rounded increments live on Z/M and the grid grows linearly
    (not quadratically) in M. Both keep the original instance exactly
    solvable. eps=1/100 capped at K <= 2 to bound the rounded grid size.
    """
    small_eps = eps <= Fraction(1, 100)
    k = rng.randint(1, min(k_max, 2) if small_eps else k_max)
    aligned = rng.random() < 0.5

    marginals = []
    for _ in range(k):
        size = rng.randint(1, 2 if small_eps else 3)
        if aligned:
            q = rng.choice([1, 2, 4, 8])
            numerators = rng.sample(range(-2 * q, 2 * q + 1), size)
        else:
            q = rng.choice([3, 5, 7])
            numerators = rng.sample(range(-q, q + 1), size)
        support = [Fraction(n, q) for n in numerators]
        marginals.append(Marginal(support=support, probs=random_probs(rng, size, unit=8)))
    mu = ProductDistribution(marginals=marginals)

    def target_coord() -> Fraction:
        if aligned:
            return Fraction(rng.randint(-16, 16), 8)
        return Fraction(rng.randint(-2, 2))

    target = TwoPointTarget(
        y1=[target_coord() for _ in range(k)],
        y2=[target_coord() for _ in range(k)],
        t=Fraction(rng.randint(0, 8), 8),
    )
    return mu, target


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240817)
