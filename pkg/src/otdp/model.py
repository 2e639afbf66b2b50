"""Core data model: exact rationals, distributions, targets, and validation.

All scalars are `fractions.Fraction` values, which are always stored reduced
with a positive denominator. Every container below is immutable after
construction, so instances can be shared freely across threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .errors import (
    BadProbabilitiesError,
    BadRationalError,
    BadTError,
    DimensionMismatchError,
    DuplicateSupportError,
)

RationalLike = Union[Fraction, int, str]

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")

ONE = Fraction(1)
ZERO = Fraction(0)


def parse_rational(text: str) -> Fraction:
    """Parse 'a' or 'a/b' (b > 0) into a reduced Fraction.

    A leading ASCII '-' or U+2212 minus is accepted. Decimal notation is
    rejected so values can never lose exactness on the way in.
    """
    if not isinstance(text, str):
        raise BadRationalError(f"expected a rational string, got {type(text).__name__}")
    normalized = text.strip().replace("−", "-")
    if not _RATIONAL_RE.match(normalized):
        raise BadRationalError(f"not a rational 'a' or 'a/b' with b > 0: {text!r}")
    num_part, _, den_part = normalized.partition("/")
    if den_part and int(den_part) == 0:
        raise BadRationalError(f"zero denominator: {text!r}")
    return Fraction(int(num_part), int(den_part)) if den_part else Fraction(int(num_part))


def format_rational(value: Fraction) -> str:
    """Render a Fraction as 'a' or 'a/b'; inverse of parse_rational."""
    return str(value)


def as_rational(value: RationalLike) -> Fraction:
    """Coerce strings, ints, and Fractions to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise BadRationalError(f"cannot interpret {value!r} as an exact rational")


def _rational_tuple(values: Iterable[RationalLike]) -> tuple[Fraction, ...]:
    return tuple(as_rational(v) for v in values)


@dataclass(frozen=True)
class Marginal:
    """One univariate marginal: finite support points with probabilities."""

    support: tuple[Fraction, ...]
    probs: tuple[Fraction, ...]

    def __init__(self, support: Sequence[RationalLike], probs: Sequence[RationalLike]):
        object.__setattr__(self, "support", _rational_tuple(support))
        object.__setattr__(self, "probs", _rational_tuple(probs))

    def __len__(self) -> int:
        return len(self.support)


@dataclass(frozen=True)
class ProductDistribution:
    """Product of independent univariate marginals on R^K."""

    marginals: tuple[Marginal, ...]

    def __init__(self, marginals: Sequence[Marginal]):
        object.__setattr__(self, "marginals", tuple(marginals))

    @property
    def dimension(self) -> int:
        return len(self.marginals)

    def atom_count(self) -> int:
        """Number of implicit joint atoms, prod_k L_k."""
        n = 1
        for m in self.marginals:
            n *= len(m)
        return n


@dataclass(frozen=True)
class TwoPointTarget:
    """Two-point distribution t*delta_{y1} + (1-t)*delta_{y2}."""

    y1: tuple[Fraction, ...]
    y2: tuple[Fraction, ...]
    t: Fraction

    def __init__(
        self,
        y1: Sequence[RationalLike],
        y2: Sequence[RationalLike],
        t: RationalLike,
    ):
        object.__setattr__(self, "y1", _rational_tuple(y1))
        object.__setattr__(self, "y2", _rational_tuple(y2))
        object.__setattr__(self, "t", as_rational(t))

    @property
    def dimension(self) -> int:
        return len(self.y1)


@dataclass(frozen=True)
class OtValue:
    """A computed transport value plus solver diagnostics.

    `value` is an exact Fraction in exact mode and a binary64 float in float
    mode. Grid diagnostics are absent when the computation path never built
    the loss grid (float mode, enumeration oracle).
    """

    value: Union[Fraction, float]
    mode: str  # "exact" | "float"
    grid_points: Optional[int] = None
    minkowski_points: Optional[int] = None
    critical_index: Optional[int] = None  # 0-based position in the loss grid


def validate_instance(mu: ProductDistribution, target: TwoPointTarget) -> None:
    """Check every model invariant; raise a typed error on the first failure.

    Raises DimensionMismatchError, BadProbabilitiesError,
    DuplicateSupportError, or BadTError.
    """
    if mu.dimension < 1:
        raise DimensionMismatchError("product distribution needs at least one marginal")
    if target.dimension != mu.dimension or len(target.y2) != mu.dimension:
        raise DimensionMismatchError(
            f"target dimension {len(target.y1)}/{len(target.y2)} "
            f"!= distribution dimension {mu.dimension}"
        )
    for k, marginal in enumerate(mu.marginals):
        if len(marginal.support) != len(marginal.probs):
            raise DimensionMismatchError(
                f"marginal {k}: {len(marginal.support)} support points "
                f"but {len(marginal.probs)} probabilities"
            )
        if len(marginal.support) == 0:
            raise BadProbabilitiesError(f"marginal {k} is empty")
        if any(p < 0 for p in marginal.probs):
            raise BadProbabilitiesError(f"marginal {k} has a negative probability")
        if sum(marginal.probs) != ONE:
            raise BadProbabilitiesError(
                f"marginal {k} probabilities sum to {sum(marginal.probs)}, not 1"
            )
        if len(set(marginal.support)) != len(marginal.support):
            raise DuplicateSupportError(f"marginal {k} repeats a support point")
    if not ZERO <= target.t <= ONE:
        raise BadTError(f"t = {target.t} outside [0, 1]")


def compute_U(mu: ProductDistribution, target: TwoPointTarget) -> int:
    """Largest integer appearing in the reduced-fraction encoding of the instance.

    Scans every stored rational (support coordinates, probabilities, target
    coordinates, and t) and returns max(|numerator|, denominator), at least 1.
    Re-reducing the inputs cannot change the result because all values are
    stored reduced.
    """
    u = 1
    values: list[Fraction] = [target.t]
    values.extend(target.y1)
    values.extend(target.y2)
    for marginal in mu.marginals:
        values.extend(marginal.support)
        values.extend(marginal.probs)
    for v in values:
        u = max(u, abs(v.numerator), v.denominator)
    return u
