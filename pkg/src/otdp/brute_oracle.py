"""Small-instance oracle by explicit atom enumeration.

Enumerates all prod_k L_k joint atoms of the product distribution and solves
the two-target transport problem with the sorted greedy: allocate the t-mass
destined for y1 to the atoms where y1 is cheapest relative to y2. This is
independent of the dynamic-programming path and doubles as its
cross-validation oracle; it also supports arbitrary cost exponents p >= 1 in
float mode, while exact mode requires an even integer p.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence, Union

from .errors import OddPExactError, TooManyAtomsError
from .model import ONE, ZERO, OtValue, ProductDistribution, TwoPointTarget, validate_instance

DEFAULT_ATOM_CAP = 2**20

EXACT = "exact"
FLOAT = "float"


class Atom(NamedTuple):
    """One joint support point with its product probability and marginal indices."""

    point: tuple[Fraction, ...]
    prob: Fraction
    indices: tuple[int, ...]


def enumerate_atoms(
    mu: ProductDistribution, cap: Optional[int] = None
) -> list[Atom]:
    """All joint atoms in lexicographic order of their marginal indices.

    Raises TooManyAtomsError when prod_k L_k exceeds `cap` (default 2**20).
    """
    if cap is None:
        cap = DEFAULT_ATOM_CAP
    total = mu.atom_count()
    if total > cap:
        raise TooManyAtomsError(f"{total} atoms exceed the cap of {cap}")
    atoms = []
    ranges = [range(len(m)) for m in mu.marginals]
    for indices in itertools.product(*ranges):
        point = tuple(m.support[i] for m, i in zip(mu.marginals, indices))
        prob = ONE
        for m, i in zip(mu.marginals, indices):
            prob *= m.probs[i]
        atoms.append(Atom(point=point, prob=prob, indices=indices))
    return atoms


def _check_mode(p: Union[int, float, Fraction], mode: str) -> None:
    if mode not in (EXACT, FLOAT):
        raise ValueError(f"mode must be 'exact' or 'float', got {mode!r}")
    if p < 1:
        raise ValueError(f"cost exponent must satisfy p >= 1, got {p}")
    if mode == EXACT and not (isinstance(p, int) and p % 2 == 0):
        raise OddPExactError(
            f"exact mode needs an even integer exponent, got p = {p}; use float mode"
        )


def _cost(
    point: Sequence[Fraction],
    y: Sequence[Fraction],
    p: Union[int, float],
    mode: str,
) -> Union[Fraction, float]:
    """||point - y||^p, exact for even integer p, binary64 otherwise."""
    if mode == EXACT:
        sq = sum(((a - b) * (a - b) for a, b in zip(point, y)), ZERO)
        return sq ** (p // 2)
    sq = sum((float(a) - float(b)) ** 2 for a, b in zip(point, y))
    return sq ** (p / 2)


def ot_closed_form(
    mu: ProductDistribution,
    target: TwoPointTarget,
    p: Union[int, float] = 2,
    mode: str = EXACT,
    cap: Optional[int] = None,
) -> OtValue:
    """Transport value by sorting atoms and filling the y1 budget greedily.

    Atoms are ordered by ||x - y1||^p - ||x - y2||^p ascending (ties keep the
    lexicographic enumeration order); the first t units of probability mass go
    to y1 and the rest to y2. Any tie-break gives the same optimal value.
    """
    validate_instance(mu, target)
    _check_mode(p, mode)
    atoms = enumerate_atoms(mu, cap=cap)
    keyed = []
    for atom in atoms:
        c1 = _cost(atom.point, target.y1, p, mode)
        c2 = _cost(atom.point, target.y2, p, mode)
        keyed.append((c1 - c2, c1, c2, atom.prob))
    keyed.sort(key=lambda item: item[0])

    remaining = target.t
    total: Union[Fraction, float] = ZERO if mode == EXACT else 0.0
    for _, c1, c2, prob in keyed:
        q = min(remaining, prob)
        remaining -= q
        if mode == EXACT:
            total += q * c1 + (prob - q) * c2
        else:
            total += float(q) * c1 + float(prob - q) * c2
    return OtValue(value=total, mode=mode)


def min_of_wasserstein_over_t(
    mu: ProductDistribution,
    y1: Sequence[Fraction],
    y2: Sequence[Fraction],
    p: Union[int, float] = 2,
    mode: str = EXACT,
    cap: Optional[int] = None,
) -> Union[Fraction, float]:
    """min over t in [0,1] of the transport value: each atom picks its cheaper target."""
    _check_mode(p, mode)
    atoms = enumerate_atoms(mu, cap=cap)
    total: Union[Fraction, float] = ZERO if mode == EXACT else 0.0
    for atom in atoms:
        c1 = _cost(atom.point, y1, p, mode)
        c2 = _cost(atom.point, y2, p, mode)
        cheaper = c1 if c1 <= c2 else c2
        total += (atom.prob if mode == EXACT else float(atom.prob)) * cheaper
    return total


def epsilon_bar(
    mu: ProductDistribution,
    y1: Sequence[Fraction],
    y2: Sequence[Fraction],
    p: int = 2,
    cap: Optional[int] = None,
) -> Optional[Fraction]:
    """Quarter of the smallest nonzero per-atom cost gap, divided by the atom count.

    This is the largest oracle error the counting reduction tolerates. Returns
    None when every atom is equidistant from both targets (the tolerance is
    then unbounded). Exact, so p must be an even integer.
    """
    _check_mode(p, EXACT)
    atoms = enumerate_atoms(mu, cap=cap)
    best: Optional[Fraction] = None
    for atom in atoms:
        gap = _cost(atom.point, y1, p, EXACT) - _cost(atom.point, y2, p, EXACT)
        if gap != 0:
            gap = abs(gap)
            if best is None or gap < best:
                best = gap
    if best is None:
        return None
    return best / (4 * len(atoms))
