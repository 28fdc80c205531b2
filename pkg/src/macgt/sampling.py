"""Seeded rational sample points with pole rejection."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Sequence

from .errors import PoleError

NUM_MAX = 9
DEN_MAX = 7


def random_rational(rng: random.Random, num_max: int = NUM_MAX, den_max: int = DEN_MAX) -> Fraction:
    """A nonzero rational with small numerator and denominator."""
    num = 0
    while num == 0:
        num = rng.randint(-num_max, num_max)
    return Fraction(num, rng.randint(1, den_max))


def random_point(rng: random.Random, dim: int, distinct: bool = True) -> tuple:
    while True:
        pt = tuple(random_rational(rng) for _ in range(dim))
        if not distinct or len(set(pt)) == dim:
            return pt


def admissible_points(seed: int, count: int, dim: int, fn: Callable[[tuple], object],
                      max_tries: int | None = None) -> list:
    """[(point, fn(point))] for the first ``count`` points where fn raises no PoleError.

    The candidate stream depends only on (seed, dim), so results are reproducible.
    """
    rng = random.Random(f"{seed}:{dim}")
    out = []
    tries = 0
    limit = max_tries if max_tries is not None else 50 * count + 100
    while len(out) < count:
        tries += 1
        if tries > limit:
            raise PoleError(f"could not find {count} admissible points in {limit} tries")
        pt = random_point(rng, dim)
        try:
            out.append((pt, fn(pt)))
        except PoleError:
            continue
    return out


def points(seed: int, count: int, dim: int) -> list:
    """Plain seeded points with pairwise distinct coordinates."""
    rng = random.Random(f"{seed}:{dim}")
    return [random_point(rng, dim) for _ in range(count)]


def is_q_power_ratio(a: Fraction, b: Fraction, q: Fraction, span: int) -> bool:
    """True if a = q^k b for some |k| <= span."""
    if b == 0:
        return a == 0
    r = a / b
    for k in range(-span, span + 1):
        if r == q ** k:
            return True
    return False


def avoids_q_lattice(xs: Sequence[Fraction], q: Fraction, span: int) -> bool:
    return not any(is_q_power_ratio(xs[i], xs[j], q, span)
                   for i in range(len(xs)) for j in range(i + 1, len(xs)))
