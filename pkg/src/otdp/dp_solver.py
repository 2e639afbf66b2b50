"""Exact squared-Euclidean transport to a two-point target via dynamic programming.

The transport value decomposes into closed-form moment terms plus a tail
expectation (a scaled conditional value-at-risk) of the scalar loss
l(x) = x . (y1 - y2). Because the marginals are independent, the distribution
of l(x) is the K-fold convolution of the per-coordinate increment
distributions, and all increments live on one regular rational grid, so the
convolution runs over dense integer-numerator arrays indexed by grid position.

The loss distribution does not depend on t, so `OtCurve` prepares it once and
answers W(t) queries for many t values cheaply; `ot_exact` is the one-shot
wrapper.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Callable, Optional, Sequence

from .errors import BadTError, GridTooLargeError, NotAnAtomError
from .grid import (
    GriddedPmf,
    RegularGrid1D,
    default_grid_cap,
    detect_spanned_grid,
    minkowski_count,
    minkowski_grid,
)
from .model import ONE, ZERO, OtValue, ProductDistribution, TwoPointTarget, validate_instance


@dataclass(frozen=True)
class LossTable:
    """Per-coordinate increment distributions of the scalar loss.

    entries[k] lists the distinct products x * (y1[k] - y2[k]) over the k-th
    marginal support, each with the total marginal probability mapped to it
    (support points whose products collide are merged). Values with zero
    probability are kept: they still shape the spanned grid.
    """

    entries: tuple[tuple[tuple[Fraction, Fraction], ...], ...]

    def all_values(self) -> list[Fraction]:
        return [value for entry in self.entries for value, _ in entry]


def loss_table(mu: ProductDistribution, target: TwoPointTarget) -> LossTable:
    """Increment value/probability pairs per coordinate, collisions merged."""
    entries = []
    for k, marginal in enumerate(mu.marginals):
        gap = target.y1[k] - target.y2[k]
        merged: dict[Fraction, Fraction] = {}
        for x, p in zip(marginal.support, marginal.probs):
            value = x * gap
            merged[value] = merged.get(value, ZERO) + p
        entries.append(tuple(sorted(merged.items())))
    return LossTable(entries=tuple(entries))


def convolve_losses(
    table: LossTable, grid: RegularGrid1D, cap: Optional[int] = None
) -> GriddedPmf:
    """Distribution of the total loss over the K-fold Minkowski sum of `grid`.

    Every table value must lie on `grid`. The K-1 successive convolutions are
    carried out on integer numerators over a running common denominator, so
    the result is exact and sums to exactly one.

    Raises GridTooLargeError when the Minkowski grid would exceed `cap`.
    """
    k_total = len(table.entries)
    out_grid = minkowski_grid(grid, k_total)
    if cap is None:
        cap = default_grid_cap()
    if out_grid.count > cap:
        raise GridTooLargeError(
            f"{k_total}-fold Minkowski grid needs {out_grid.count} points, "
            f"above the cap of {cap}"
        )

    stage: list[int] = []
    denominator = 1
    for k, entry in enumerate(table.entries):
        entry_den = lcm(*(p.denominator for _, p in entry))
        kernel = [
            (grid.index_of(value), p.numerator * (entry_den // p.denominator))
            for value, p in entry
        ]
        if k == 0:
            stage = [0] * grid.count
            for offset, num in kernel:
                stage[offset] = num
        else:
            out = [0] * minkowski_count(grid.count, k + 1)
            for i, weight in enumerate(stage):
                if weight:
                    for offset, num in kernel:
                        out[i + offset] += weight * num
            stage = out
        denominator *= entry_den

    assert sum(stage) == denominator
    probs = tuple(Fraction(num, denominator) if num else ZERO for num in stage)
    return GriddedPmf(grid=out_grid, probs=probs)


def _cumulative(probs: Sequence[Fraction]) -> list[Fraction]:
    out: list[Fraction] = []
    running = ZERO
    for p in probs:
        if p:
            running = running + p
        out.append(running)
    return out


def critical_index(pmf: GriddedPmf, t: Fraction) -> int:
    """0-based index n_t of the left (1-t)-quantile of the loss distribution.

    n_t is the unique position with cum[n_t] >= 1-t > cum[n_t - 1]; the
    comparisons are exact, so no tolerance is involved. Requires 0 < t < 1.
    """
    if not ZERO < t < ONE:
        raise BadTError(f"critical index needs 0 < t < 1, got t = {t}")
    cum = _cumulative(pmf.probs)
    return bisect_left(cum, ONE - t)


def scaled_cvar(pmf: GriddedPmf, t: Fraction) -> Fraction:
    """t times the conditional value-at-risk of the loss at level t.

    Equals (cum[n_t] - (1-t)) * s[n_t] + sum_{n > n_t} p[n] * s[n], the mass
    of the worst t-tail weighted by its loss values.
    """
    n_t = critical_index(pmf, t)
    cum = _cumulative(pmf.probs)
    value = (cum[n_t] - (ONE - t)) * pmf.grid.point(n_t)
    for n in range(n_t + 1, pmf.grid.count):
        p = pmf.probs[n]
        if p:
            value += p * pmf.grid.point(n)
    return value


@dataclass(frozen=True)
class PlanDescriptor:
    """Compact encoding of an optimal transportation plan for 0 < t < 1.

    Atoms with loss above `threshold` send all mass to y1, atoms below send
    all mass to y2, and atoms exactly at the threshold split off a `fraction`
    of their mass to y1.
    """

    threshold: Fraction
    fraction: Fraction
    t: Fraction
    loss_pmf: GriddedPmf


class OtCurve:
    """Prepared evaluator of W(t) for a fixed product distribution and support pair.

    Building the curve runs the convolution once; each subsequent query costs
    a binary search plus O(1) exact arithmetic thanks to precomputed
    cumulative and tail sums.
    """

    def __init__(
        self,
        mu: ProductDistribution,
        y1: Sequence[Fraction],
        y2: Sequence[Fraction],
        cap: Optional[int] = None,
    ):
        target = TwoPointTarget(y1=y1, y2=y2, t=ZERO)
        validate_instance(mu, target)
        self.mu = mu
        self.y1 = target.y1
        self.y2 = target.y2

        self.sq_norm_mean = ZERO  # E ||x||^2
        self.dot_y1_mean = ZERO  # E x . y1
        self.dot_y2_mean = ZERO  # E x . y2
        for k, marginal in enumerate(mu.marginals):
            for x, p in zip(marginal.support, marginal.probs):
                px = p * x
                self.sq_norm_mean += px * x
                self.dot_y1_mean += px * self.y1[k]
                self.dot_y2_mean += px * self.y2[k]
        self.y1_sq = sum((c * c for c in self.y1), ZERO)
        self.y2_sq = sum((c * c for c in self.y2), ZERO)

        self.table = loss_table(mu, target)
        self.base_grid = detect_spanned_grid(self.table.all_values(), cap=cap)
        self.loss_pmf = convolve_losses(self.table, self.base_grid, cap=cap)
        self._cum = _cumulative(self.loss_pmf.probs)
        # tail[n] = sum_{m > n} p[m] * s[m], built backward over nonzero mass
        tail = [ZERO] * self.loss_pmf.grid.count
        running = ZERO
        for n in range(self.loss_pmf.grid.count - 1, -1, -1):
            tail[n] = running
            p = self.loss_pmf.probs[n]
            if p:
                running = running + p * self.loss_pmf.grid.point(n)
        self._tail = tail

    def critical_index_at(self, t: Fraction) -> int:
        if not ZERO < t < ONE:
            raise BadTError(f"critical index needs 0 < t < 1, got t = {t}")
        return bisect_left(self._cum, ONE - t)

    def scaled_cvar_at(self, t: Fraction) -> Fraction:
        n_t = self.critical_index_at(t)
        threshold = self.loss_pmf.grid.point(n_t)
        return (self._cum[n_t] - (ONE - t)) * threshold + self._tail[n_t]

    def value_at(self, t: Fraction) -> Fraction:
        """Exact transport value W(t); reduces to plain expectations at t in {0, 1}."""
        if t == ZERO:
            return self.sq_norm_mean - 2 * self.dot_y2_mean + self.y2_sq
        if t == ONE:
            return self.sq_norm_mean - 2 * self.dot_y1_mean + self.y1_sq
        if not ZERO < t < ONE:
            raise BadTError(f"t = {t} outside [0, 1]")
        return (
            self.sq_norm_mean
            + t * self.y1_sq
            + (ONE - t) * self.y2_sq
            - 2 * self.dot_y2_mean
            - 2 * self.scaled_cvar_at(t)
        )

    def descriptor_at(self, t: Fraction) -> PlanDescriptor:
        if not ZERO < t < ONE:
            raise BadTError(f"plan descriptor needs 0 < t < 1, got t = {t}")
        n_t = self.critical_index_at(t)
        mass = self.loss_pmf.probs[n_t]
        fraction = (t - ONE + self._cum[n_t]) / mass
        return PlanDescriptor(
            threshold=self.loss_pmf.grid.point(n_t),
            fraction=fraction,
            t=t,
            loss_pmf=self.loss_pmf,
        )


def ot_exact(
    mu: ProductDistribution, target: TwoPointTarget, cap: Optional[int] = None
) -> OtValue:
    """Exact squared-Euclidean transport value between mu and the two-point target.

    For t in {0, 1} the value is a plain expectation and the convolution is
    skipped entirely; grid diagnostics are then best-effort. For 0 < t < 1,
    GridTooLargeError is raised when the loss grid would exceed the cap.
    """
    validate_instance(mu, target)
    k_total = mu.dimension
    if target.t == ZERO or target.t == ONE:
        y = target.y2 if target.t == ZERO else target.y1
        value = ZERO
        for k, marginal in enumerate(mu.marginals):
            for x, p in zip(marginal.support, marginal.probs):
                gap = x - y[k]
                value += p * gap * gap
        # grid diagnostics are best-effort here; the value needs no grid
        try:
            base_count = detect_spanned_grid(
                loss_table(mu, target).all_values(), cap=cap
            ).count
            return OtValue(
                value=value,
                mode="exact",
                grid_points=base_count,
                minkowski_points=minkowski_count(base_count, k_total),
            )
        except GridTooLargeError:
            return OtValue(value=value, mode="exact")

    curve = OtCurve(mu, target.y1, target.y2, cap=cap)
    return OtValue(
        value=curve.value_at(target.t),
        mode="exact",
        grid_points=curve.base_grid.count,
        minkowski_points=curve.loss_pmf.grid.count,
        critical_index=curve.critical_index_at(target.t),
    )


def plan_descriptor(
    mu: ProductDistribution, target: TwoPointTarget, cap: Optional[int] = None
) -> PlanDescriptor:
    """Threshold/fraction encoding of an optimal plan; needs 0 < t < 1.

    Raises BadTError for t in {0, 1}, where the plan is the trivial one-sided
    assignment.
    """
    validate_instance(mu, target)
    if target.t == ZERO or target.t == ONE:
        raise BadTError("plan descriptor is undefined at t in {0, 1}; all mass goes one way")
    curve = OtCurve(mu, target.y1, target.y2, cap=cap)
    return curve.descriptor_at(target.t)


def plan_query(
    desc: PlanDescriptor,
    atom: Sequence[Fraction],
    atom_prob: Fraction,
    target: TwoPointTarget,
) -> tuple[Fraction, Fraction]:
    """Mass (to y1, to y2) that the optimal plan moves from one atom of mu.

    The atom is classified by its loss against the descriptor threshold;
    `atom_prob` must be the atom's positive product probability.
    """
    if atom_prob <= 0:
        raise NotAnAtomError(f"point {tuple(atom)} has probability {atom_prob} under mu")
    if len(atom) != len(target.y1):
        raise NotAnAtomError(
            f"atom has {len(atom)} coordinates, target has {len(target.y1)}"
        )
    loss = sum(
        (x * (a - b) for x, a, b in zip(atom, target.y1, target.y2)), ZERO
    )
    if loss > desc.threshold:
        pi1 = atom_prob
    elif loss == desc.threshold:
        pi1 = desc.fraction * atom_prob
    else:
        pi1 = ZERO
    return pi1, atom_prob - pi1


def curve_oracle(
    mu: ProductDistribution,
    y1: Sequence[Fraction],
    y2: Sequence[Fraction],
    cap: Optional[int] = None,
) -> Callable[[Fraction], Fraction]:
    """t -> W(t) callable backed by a prepared OtCurve."""
    curve = OtCurve(mu, y1, y2, cap=cap)
    return curve.value_at
