"""Regular one-dimensional grids over exact rationals.

A regular grid is an arithmetic progression origin, origin + d, ...,
origin + (count-1)*d. A finite rational set spans such a grid when it lies on
the grid and attains both endpoints; `detect_spanned_grid` finds the coarsest
one via a rational gcd, so callers never have to supply the grid cardinality
themselves.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .errors import EmptyInputError, GridTooLargeError

GRID_CAP_ENV = "OTDP_MAX_GRID"
DEFAULT_GRID_CAP = 1_000_000


def default_grid_cap() -> int:
    """Grid point cap, overridable through the OTDP_MAX_GRID environment variable."""
    raw = os.environ.get(GRID_CAP_ENV)
    if raw is None:
        return DEFAULT_GRID_CAP
    cap = int(raw)
    if cap < 1:
        raise ValueError(f"{GRID_CAP_ENV} must be a positive integer, got {raw!r}")
    return cap


def rational_gcd(a: Fraction, b: Fraction) -> Fraction:
    """gcd extended to rationals: largest d with a/d and b/d both integral."""
    return Fraction(
        math.gcd(abs(a.numerator) * b.denominator, abs(b.numerator) * a.denominator),
        a.denominator * b.denominator,
    )


@dataclass(frozen=True)
class RegularGrid1D:
    """Arithmetic progression with `count` points; spacing 0 iff count == 1."""

    origin: Fraction
    spacing: Fraction
    count: int

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("grid needs at least one point")
        if self.count == 1 and self.spacing != 0:
            raise ValueError("singleton grid must have spacing 0")
        if self.count > 1 and self.spacing <= 0:
            raise ValueError("multi-point grid needs positive spacing")

    def point(self, index: int) -> Fraction:
        """Grid point at 0-based index."""
        if not 0 <= index < self.count:
            raise IndexError(f"grid index {index} out of range [0, {self.count})")
        return self.origin + self.spacing * index

    def points(self) -> list[Fraction]:
        return [self.origin + self.spacing * i for i in range(self.count)]

    def index_of(self, value: Fraction) -> int:
        """Exact 0-based index of a value that lies on the grid.

        Raises ValueError when the value is off-grid.
        """
        if self.spacing == 0:
            if value != self.origin:
                raise ValueError(f"{value} is not on the singleton grid at {self.origin}")
            return 0
        offset = (value - self.origin) / self.spacing
        if offset.denominator != 1 or not 0 <= offset.numerator < self.count:
            raise ValueError(f"{value} is not a point of {self}")
        return offset.numerator

    @property
    def maximum(self) -> Fraction:
        return self.origin + self.spacing * (self.count - 1)


@dataclass(frozen=True)
class GriddedPmf:
    """Probability mass function whose support is a regular grid."""

    grid: RegularGrid1D
    probs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.probs) != self.grid.count:
            raise ValueError(
                f"{len(self.probs)} probabilities for a grid of {self.grid.count} points"
            )

    def total(self) -> Fraction:
        return sum(self.probs, Fraction(0))


def detect_spanned_grid(
    values: Iterable[Fraction], cap: Optional[int] = None
) -> RegularGrid1D:
    """Coarsest regular grid spanned by a finite set of rationals.

    The origin is min(values), the spacing is the rational gcd of all
    differences to the minimum, and the count follows from the range. Every
    input value lands exactly on a grid point. A singleton set yields a
    one-point grid with spacing 0.

    Raises EmptyInputError on no values and GridTooLargeError when the count
    would exceed `cap` (default from OTDP_MAX_GRID or 1,000,000).
    """
    values = list(values)
    if not values:
        raise EmptyInputError("cannot detect a grid from no values")
    if cap is None:
        cap = default_grid_cap()
    low = min(values)
    high = max(values)
    if low == high:
        return RegularGrid1D(origin=low, spacing=Fraction(0), count=1)
    spacing = Fraction(0)
    for v in values:
        diff = v - low
        if diff != 0:
            spacing = diff if spacing == 0 else rational_gcd(spacing, diff)
    count_minus_one = (high - low) / spacing
    assert count_minus_one.denominator == 1
    count = count_minus_one.numerator + 1
    if count > cap:
        raise GridTooLargeError(
            f"spanned grid needs {count} points, above the cap of {cap}"
        )
    return RegularGrid1D(origin=low, spacing=spacing, count=count)


def minkowski_grid(grid: RegularGrid1D, k: int) -> RegularGrid1D:
    """k-fold Minkowski sum of a regular grid.

    The sum is again regular with the same spacing, origin k*origin, and
    k*(count-1)+1 points.
    """
    if k < 1:
        raise ValueError(f"fold count must be >= 1, got {k}")
    return RegularGrid1D(
        origin=grid.origin * k,
        spacing=grid.spacing,
        count=k * (grid.count - 1) + 1,
    )


def minkowski_count(grid_count: int, k: int) -> int:
    """Cardinality k*(N-1)+1 of the k-fold Minkowski sum, without building it."""
    return k * (grid_count - 1) + 1
