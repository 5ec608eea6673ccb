"""Seeded random measure systems for randomized sweeps."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from .measures import MeasureSystem, bernstein_szego, trig_density
from .scalars import GaussRat


def _small_gaussian(rng: random.Random, bound: Fraction, denominators=(2, 3, 4, 5, 7, 8)) -> GaussRat:
    while True:
        q = rng.choice(denominators)
        re = Fraction(rng.randint(-q, q), q) * bound
        im = Fraction(rng.randint(-q, q), q) * bound
        x = GaussRat(re, im)
        if x.abs2() <= bound * bound:
            return x


def random_spec(rng: random.Random):
    """A Bernstein-Szegő parameter with |a| <= 3/4, or a trig density with tiny coefficients.

    Each trig coefficient has modulus at most 3/16 and only k = 1, 2 appear,
    so the density stays at least 1/4 everywhere.
    """
    if rng.random() < 0.5:
        return bernstein_szego(_small_gaussian(rng, Fraction(3, 4)))
    coeffs = {k: _small_gaussian(rng, Fraction(3, 16)) for k in range(1, rng.randint(1, 2) + 1)}
    return trig_density({k: c for k, c in coeffs.items() if c})


def random_system(seed: int, field=None, r: Optional[int] = None) -> MeasureSystem:
    rng = random.Random(seed)
    r = r if r is not None else rng.choice((2, 3))
    return MeasureSystem([random_spec(rng) for _ in range(r)], field)


def random_corpus(count: int = 50, seed: int = 0, field=None) -> list[MeasureSystem]:
    return [random_system(seed * 100_003 + i, field) for i in range(count)]
