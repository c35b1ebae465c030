"""Seeded rational sampling for randomized sweeps and tests.

Each instance draws from its own numpy Generator spawned from the master seed,
so results do not depend on how instances are distributed over workers.
"""

from fractions import Fraction
from typing import List, Sequence

import numpy as np

from inscriber.kernel import Point, add, orientation, scale

DEFAULT_DENOMINATOR = 64


def instance_generator(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def random_rational(rng: np.random.Generator, low: int = -1, high: int = 1, denominator: int = DEFAULT_DENOMINATOR) -> Fraction:
    k = int(rng.integers(low * denominator, high * denominator + 1))
    return Fraction(k, denominator)


def random_point(rng: np.random.Generator, dim: int, low: int = -1, high: int = 1, denominator: int = DEFAULT_DENOMINATOR) -> Point:
    return tuple(random_rational(rng, low, high, denominator) for _ in range(dim))


def random_simplex(rng: np.random.Generator, dim: int, denominator: int = DEFAULT_DENOMINATOR) -> List[Point]:
    while True:
        simplex = [random_point(rng, dim, denominator=denominator) for _ in range(dim + 1)]
        if orientation(simplex) != 0:
            return simplex


def random_interior_point(rng: np.random.Generator, simplex: Sequence[Point], denominator: int = DEFAULT_DENOMINATOR) -> Point:
    """Strictly interior point with random positive barycentric weights."""
    weights = [int(w) for w in rng.integers(1, denominator + 1, size=len(simplex))]
    total = sum(weights)
    point = tuple(Fraction(0) for _ in simplex[0])
    for w, p in zip(weights, simplex):
        point = add(point, scale(Fraction(w, total), p))
    return point


def random_point_set(rng: np.random.Generator, dim: int, n: int, denominator: int = DEFAULT_DENOMINATOR) -> List[Point]:
    return [random_point(rng, dim, low=0, high=1, denominator=denominator) for _ in range(n)]
