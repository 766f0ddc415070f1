"""Seeded random rationals and matrices shared by the generators and tests."""
from __future__ import annotations

import random
from fractions import Fraction

from .linalg import Matrix


def random_rational(rng: random.Random, bound: int = 5, nonzero: bool = False) -> Fraction:
    while True:
        x = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        if x or not nonzero:
            return x


def random_matrix(rng: random.Random, rows: int, cols: int, bound: int = 5, density: float = 1.0) -> Matrix:
    zero = Fraction(0)
    return Matrix(rows, cols, [[random_rational(rng, bound) if rng.random() < density else zero
                                for _ in range(cols)] for _ in range(rows)])


def random_invertible(rng: random.Random, n: int, bound: int = 5, steps: int | None = None) -> tuple[Matrix, Matrix]:
    """A random invertible matrix and its exact inverse, built from elementary operations.

    Each step is a row addition ``r_i += c r_j``, a row scaling by a nonzero
    rational, or a row swap; the inverse is accumulated alongside.
    """
    steps = 3 * n if steps is None else steps
    m = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    inv = [row[:] for row in m]
    if n == 0:
        return Matrix(0, 0), Matrix(0, 0)
    for _ in range(steps):
        kind = rng.random()
        if n >= 2 and kind < 0.7:
            i, j = rng.sample(range(n), 2)
            c = random_rational(rng, bound, nonzero=True)
            # m <- E m with E = I + c e_ij ; inv <- inv E^{-1}
            m[i] = [a + c * b for a, b in zip(m[i], m[j])]
            for row in inv:
                row[j] -= c * row[i]
        elif n >= 2 and kind < 0.8:
            i, j = rng.sample(range(n), 2)
            m[i], m[j] = m[j], m[i]
            for row in inv:
                row[i], row[j] = row[j], row[i]
        else:
            i = rng.randrange(n)
            c = random_rational(rng, min(bound, 3), nonzero=True)
            m[i] = [c * a for a in m[i]]
            for row in inv:
                row[i] /= c
    return Matrix(n, n, m), Matrix(n, n, inv)


def random_unitriangular(rng: random.Random, n: int, bound: int = 5) -> Matrix:
    return Matrix(n, n, [[Fraction(1) if i == j else (random_rational(rng, bound) if j > i else Fraction(0))
                          for j in range(n)] for i in range(n)])


def child(rng: random.Random) -> random.Random:
    """An independent stream derived deterministically from ``rng``."""
    return random.Random(rng.getrandbits(64))
