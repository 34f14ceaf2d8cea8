import random
from fractions import Fraction

import pytest

from flagseries import ChangeOfVariables, FlagOfLattices, make_series
from flagseries.series import shift


def random_flag(rng, n, max_index=6):
    """A flag whose level-k lattices nest: L^k is spanned by L^{k-1} (padded) and one extra column."""
    bases = {}
    prev = None
    for k in range(1, n):
        while True:
            rows = [[0] * k for _ in range(k)]
            if prev is not None:
                for i in range(k - 1):
                    for j in range(k - 1):
                        rows[i][j] = prev[i][j]
            for i in range(k):
                rows[i][k - 1] = rng.randint(0, 3) if i < k - 1 else rng.randint(1, 3)
            try:
                flag = FlagOfLattices(n, {**bases, k: rows})
            except ValueError:
                continue
            if flag.index(k) <= max_index:
                bases[k] = rows
                prev = rows
                break
    return FlagOfLattices(n, bases)


def random_unit(rng, n, precision):
    terms = {(0,) * n: Fraction(rng.choice([1, -1, 2, -2, 3]))}
    for _ in range(rng.randint(0, 3)):
        e = tuple(rng.randint(0, 2) for _ in range(n))
        if any(e):
            terms[e] = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
    return make_series(terms, precision)


def random_change_of_variables(rng, n, precision=10):
    images = []
    for i in range(n):
        v = tuple(rng.randint(0, 3) if j < i else int(j == i) for j in range(n))
        images.append(shift(random_unit(rng, n, precision), v))
    return ChangeOfVariables(tuple(images))


@pytest.fixture
def rng():
    return random.Random(20261016)
