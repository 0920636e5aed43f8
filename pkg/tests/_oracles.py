"""Independent reference computations used only by the tests."""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations

import numpy as np

from casas_alvero.numeric import GaussianRational


def laplace_det(rows):
    """Cofactor expansion along the first row."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    acc = GaussianRational(0)
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * laplace_det(minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def leibniz_det(rows):
    n = len(rows)
    acc = GaussianRational(0)
    for p in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        t = GaussianRational(1)
        for i in range(n):
            t = t * rows[i][p[i]]
        acc = acc + t if inv % 2 == 0 else acc - t
    return acc


def random_gaussian(rng: np.random.Generator, span: int = 4, den: int = 3) -> GaussianRational:
    def q():
        return Fraction(int(rng.integers(-span, span + 1)), int(rng.integers(1, den + 1)))

    return GaussianRational(q(), q())
