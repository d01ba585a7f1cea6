import itertools
from fractions import Fraction

import numpy as np
import pytest


def brute_max_matching(support):
    """Largest matching size; each row in turn takes a free column or nothing."""
    support = np.asarray(support, dtype=bool)
    n, m = support.shape

    def best(i, used):
        if i == n:
            return 0
        top = best(i + 1, used)
        for j in range(m):
            if support[i, j] and j not in used:
                top = max(top, 1 + best(i + 1, used | {j}))
        return top

    return best(0, frozenset())


def hall_violator(support):
    """A row subset with fewer neighbours than members, or None."""
    support = np.asarray(support, dtype=bool)
    n = support.shape[0]
    for r in range(1, n + 1):
        for rows in itertools.combinations(range(n), r):
            if support[list(rows)].any(axis=0).sum() < r:
                return rows
    return None


def random_composition(rng, total, parts):
    """``parts`` positive integers summing to ``total``."""
    cuts = np.sort(rng.choice(np.arange(1, total), size=parts - 1, replace=False))
    return np.diff(np.concatenate(([0], cuts, [total]))).tolist()


def equal_mass(rng, n, m, max_den=100):
    """Random positive rationals with denominator <= max_den, both sides of mass 1."""
    den = int(rng.integers(max(n, m, 2), max_den + 1))
    a = [Fraction(int(p), den) for p in random_composition(rng, den, n)]
    b = [Fraction(int(p), den) for p in random_composition(rng, den, m)]
    return a, b


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
