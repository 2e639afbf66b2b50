"""Lattice rounding: epsilon-accurate transport values in pseudo-polynomial time.

Snapping every support coordinate to the nearest point of Z^K / M moves each
point by at most 1/M in the sup norm, which changes the squared-Euclidean
transport value by at most 8*K*U/M when all supports live in [-U, U]^K.
Choosing M = ceil(8*K*U / eps) therefore makes the exact value of the rounded
instance an eps-approximation of the original one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .dp_solver import ot_exact
from .errors import BadToleranceError
from .model import (
    Marginal,
    OtValue,
    ProductDistribution,
    TwoPointTarget,
    ZERO,
    compute_U,
    validate_instance,
)


@dataclass(frozen=True)
class RoundingReport:
    """What the rounding step did and what error it can have introduced."""

    M: int
    U: int
    max_coordinate_shift: Fraction
    guaranteed_error: Fraction  # 8 K U / M


def round_half_away_from_zero(value: Fraction) -> int:
    """Nearest integer, exact halves rounded away from zero."""
    floor = value.numerator // value.denominator
    remainder = value - floor
    if remainder > Fraction(1, 2):
        return floor + 1
    if remainder < Fraction(1, 2):
        return floor
    return floor + 1 if value > 0 else floor


def _round_coordinate(value: Fraction, m: int) -> Fraction:
    return Fraction(round_half_away_from_zero(value * m), m)


def round_to_lattice(
    mu: ProductDistribution, target: TwoPointTarget, m: int
) -> tuple[ProductDistribution, TwoPointTarget, RoundingReport]:
    """Snap all support and target coordinates to Z/m; probabilities and t stay.

    Support points of a marginal that collide after rounding are merged by
    summing their probabilities, so the result is the same measure the
    coordinatewise rounding induces.
    """
    if m < 1:
        raise ValueError(f"lattice denominator must be >= 1, got {m}")
    max_shift = ZERO

    def rounded(value: Fraction) -> Fraction:
        nonlocal max_shift
        out = _round_coordinate(value, m)
        max_shift = max(max_shift, abs(out - value))
        return out

    marginals = []
    for marginal in mu.marginals:
        merged: dict[Fraction, Fraction] = {}
        for x, p in zip(marginal.support, marginal.probs):
            key = rounded(x)
            merged[key] = merged.get(key, ZERO) + p
        items = sorted(merged.items())
        marginals.append(
            Marginal(support=[x for x, _ in items], probs=[p for _, p in items])
        )
    mu_rounded = ProductDistribution(marginals=marginals)
    target_rounded = TwoPointTarget(
        y1=[rounded(c) for c in target.y1],
        y2=[rounded(c) for c in target.y2],
        t=target.t,
    )
    u = compute_U(mu, target)
    report = RoundingReport(
        M=m,
        U=u,
        max_coordinate_shift=max_shift,
        guaranteed_error=Fraction(8 * mu.dimension * u, m),
    )
    return mu_rounded, target_rounded, report


def error_bound(k: int, u: int, shift: Fraction) -> Fraction:
    """Worst-case change 8*K*U*shift of the transport value under coordinate shifts.

    Valid whenever both the original and the shifted supports stay inside
    [-U, U]^K and shift bounds the sup-norm displacement of every point.
    """
    if shift < 0:
        raise ValueError(f"shift must be nonnegative, got {shift}")
    return 8 * k * u * shift


def ot_approx(
    mu: ProductDistribution,
    target: TwoPointTarget,
    eps: Fraction,
    cap: Optional[int] = None,
) -> tuple[OtValue, RoundingReport]:
    """Transport value within an absolute error of eps, by rounding then solving.

    Picks M = ceil(8*K*U/eps), rounds onto Z^K/M, and runs the exact solver on
    the rounded instance. Raises GridTooLargeError when the rounded loss grid
    exceeds the cap; raising eps (or the cap) shrinks the grid.
    """
    if eps <= 0:
        raise BadToleranceError(f"tolerance must be positive, got {eps}")
    validate_instance(mu, target)
    u = compute_U(mu, target)
    m = math.ceil(Fraction(8 * mu.dimension * u) / eps)
    mu_rounded, target_rounded, report = round_to_lattice(mu, target, m)
    value = ot_exact(mu_rounded, target_rounded, cap=cap)
    return value, report
