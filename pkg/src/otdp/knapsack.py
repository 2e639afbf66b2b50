"""Counting knapsack solutions, directly and through a transport oracle.

The number of 0/1 vectors with w.x <= b equals I times the minimizer t* of
the transport value W(t) between the uniform hypercube distribution and the
two-point target (y1 = 0, y2 = 2b w / ||w||^2). Since W is piecewise affine
and convex in t with breakpoints at multiples of 1/I, the count is the
largest index whose slope is nonpositive, found by binary search with at most
2K + 2 oracle evaluations. `count_dp` is the independent tabulation counter
used to cross-check the reduction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .dp_solver import curve_oracle
from .errors import ZeroWeightsError
from .model import Marginal, ProductDistribution

Oracle = Callable[[Fraction], Fraction]
OracleFactory = Callable[
    [ProductDistribution, tuple[Fraction, ...], tuple[Fraction, ...]], Oracle
]

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class KnapsackInstance:
    """Item weights and capacity, all nonnegative integers."""

    weights: tuple[int, ...]
    capacity: int

    def __init__(self, weights: Sequence[int], capacity: int):
        weights = tuple(int(w) for w in weights)
        if any(w < 0 for w in weights):
            raise ValueError(f"weights must be nonnegative, got {weights}")
        if capacity < 0:
            raise ValueError(f"capacity must be nonnegative, got {capacity}")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "capacity", int(capacity))


@dataclass(frozen=True)
class CountResult:
    count: int
    oracle_calls: int


def parity_normalize(inst: KnapsackInstance) -> KnapsackInstance:
    """Double the weights and set capacity 2b+1; the feasible count is unchanged.

    Afterwards no subset weight can equal the capacity, which makes the
    minimizing t unique and keeps every slope away from zero.
    """
    return KnapsackInstance(
        weights=tuple(2 * w for w in inst.weights),
        capacity=2 * inst.capacity + 1,
    )


def reduction_target(
    inst: KnapsackInstance,
) -> tuple[ProductDistribution, tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Uniform hypercube distribution and target pair encoding the instance.

    y1 is the origin and y2 = (2b / sum w_k^2) w, so a subset is feasible
    exactly when its indicator vector is at least as close to y1 as to y2.
    Raises ZeroWeightsError when all weights vanish (the caller should return
    2^K directly). A zero capacity yields the degenerate y1 = y2 = 0.
    """
    sq = sum(w * w for w in inst.weights)
    if sq == 0:
        raise ZeroWeightsError("all weights are zero; count is 2^K for any capacity")
    binary = Marginal(support=(0, 1), probs=(HALF, HALF))
    mu = ProductDistribution(marginals=[binary] * len(inst.weights))
    scale = Fraction(2 * inst.capacity, sq)
    y1 = tuple(Fraction(0) for _ in inst.weights)
    y2 = tuple(scale * w for w in inst.weights)
    return mu, y1, y2


def count_dp(inst: KnapsackInstance) -> int:
    """Number of subsets with total weight <= capacity, by tabulation.

    Runs in O(K * min(b, sum w)) integer additions with arbitrary-precision
    counts.
    """
    total = sum(inst.weights)
    if inst.capacity >= total:
        return 2 ** len(inst.weights)
    counts = [0] * (inst.capacity + 1)
    counts[0] = 1
    for w in inst.weights:
        if w == 0:
            counts = [2 * c for c in counts]
        else:
            for c in range(inst.capacity, w - 1, -1):
                counts[c] += counts[c - w]
    return sum(counts)


def slope(i: int, atom_count: int, oracle: Oracle) -> Fraction:
    """Increment W(i/I) - W((i-1)/I) of the transport value, for 1 <= i <= I."""
    if not 1 <= i <= atom_count:
        raise ValueError(f"slope index {i} outside 1..{atom_count}")
    return oracle(Fraction(i, atom_count)) - oracle(Fraction(i - 1, atom_count))


def exact_oracle_factory(
    mu: ProductDistribution,
    y1: tuple[Fraction, ...],
    y2: tuple[Fraction, ...],
) -> Oracle:
    """Default W(t) oracle: the exact dynamic-programming curve."""
    return curve_oracle(mu, y1, y2)


def with_adversarial_noise(oracle: Oracle, magnitude: Fraction) -> Oracle:
    """Perturb each distinct oracle output by +-magnitude, alternating signs.

    The sign flips between consecutive first-seen t values, which maximally
    distorts the slope a_i = W(i/I) - W((i-1)/I) computed from adjacent
    evaluations. Deterministic, so repeated queries stay consistent.
    """
    signs: dict[Fraction, int] = {}

    def noisy(t: Fraction) -> Fraction:
        if t not in signs:
            signs[t] = 1 if len(signs) % 2 == 0 else -1
        return oracle(t) + signs[t] * magnitude

    return noisy


def count_via_ot(
    inst: KnapsackInstance,
    oracle_factory: Optional[OracleFactory] = None,
) -> CountResult:
    """Count feasible subsets through a transport-value oracle.

    Parity-normalizes the instance, builds the geometric reduction, and binary
    searches the implicit slope array (slope 0 is -infinity by convention) for
    the largest nonpositive entry. Distinct t values are evaluated once; the
    call counter reports actual oracle evaluations, which never exceed 2K + 2.
    The result is exact for any oracle whose error stays below the instance's
    tolerance (a quarter of the smallest slope magnitude).
    """
    k_total = len(inst.weights)
    if all(w == 0 for w in inst.weights):
        return CountResult(count=2**k_total, oracle_calls=0)
    if inst.capacity == 0:
        zeros = sum(1 for w in inst.weights if w == 0)
        return CountResult(count=2**zeros, oracle_calls=0)

    normalized = parity_normalize(inst)
    mu, y1, y2 = reduction_target(normalized)
    base = (oracle_factory or exact_oracle_factory)(mu, y1, y2)

    calls = 0
    values: dict[Fraction, Fraction] = {}

    def w_at(t: Fraction) -> Fraction:
        nonlocal calls
        if t not in values:
            calls += 1
            values[t] = base(t)
        return values[t]

    atom_count = 2**k_total
    slopes: dict[int, Optional[Fraction]] = {0: None}  # None stands for -infinity

    def slope_at(n: int) -> Optional[Fraction]:
        if n not in slopes:
            slopes[n] = w_at(Fraction(n, atom_count)) - w_at(Fraction(n - 1, atom_count))
        return slopes[n]

    def nonpositive(n: int) -> bool:
        s = slope_at(n)
        return s is None or s <= 0

    low, high = 0, atom_count
    for _ in range(k_total):
        mid = (low + high) // 2
        if nonpositive(mid):
            low = mid
        else:
            high = mid
    answer = high if nonpositive(high) else low
    return CountResult(count=answer, oracle_calls=calls)
