"""Non-gating benchmark: empirical solver cost against K and the grid size N.

Times ot_exact on two instance families: growing dimension K at fixed grid
cardinality, and growing cardinality N at fixed K. Prints a small table; no
assertions, purely informational.

Usage: python scripts/benchmark_scaling.py
"""

import random
import time
from fractions import Fraction

from otdp import Marginal, ProductDistribution, TwoPointTarget, ot_exact

HALF = Fraction(1, 2)


def time_instance(mu, target, repeats=3):
    best = float("inf")
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = ot_exact(mu, target)
        best = min(best, time.perf_counter() - start)
    return best, result


def sweep_k():
    print("fixed grid (N = 3), growing dimension K")
    print(f"{'K':>5} {'N':>6} {'|N_K|':>8} {'seconds':>10}")
    binary = Marginal(support=[0, 1], probs=[HALF, HALF])
    for k in (4, 8, 16, 32, 64, 128, 256):
        mu = ProductDistribution(marginals=[binary] * k)
        target = TwoPointTarget(y1=[1] * k, y2=[-1] * k, t=Fraction(1, 3))
        seconds, result = time_instance(mu, target)
        print(f"{k:>5} {result.grid_points:>6} {result.minkowski_points:>8} {seconds:>10.4f}")


def sweep_n():
    print("fixed dimension (K = 4), growing grid cardinality N")
    print(f"{'m':>6} {'N':>8} {'|N_K|':>9} {'seconds':>10}")
    rng = random.Random(99)
    for m in (4, 16, 64, 256, 1024, 4096):
        marginals = []
        for _ in range(4):
            numerators = rng.sample(range(-m, m + 1), 3)
            marginals.append(
                Marginal(
                    support=[Fraction(n, m) for n in numerators],
                    probs=[Fraction(1, 3)] * 3,
                )
            )
        mu = ProductDistribution(marginals=marginals)
        target = TwoPointTarget(y1=[1, 0, -1, 2], y2=[0, 1, 1, -1], t=Fraction(2, 5))
        seconds, result = time_instance(mu, target)
        print(f"{m:>6} {result.grid_points:>8} {result.minkowski_points:>9} {seconds:>10.4f}")


if __name__ == "__main__":
    sweep_k()
    print()
    sweep_n()
