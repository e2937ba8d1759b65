from fractions import Fraction

import numpy as np
import pytest

from mcsv import Instance

ALPHAS = (Fraction(1, 10), Fraction(1, 2), Fraction(9, 10))


def random_instance(rng, n_max=12, q_max=3, coord=3, alpha=None) -> Instance:
    n = int(rng.integers(1, n_max + 1))
    q = int(rng.integers(1, q_max + 1))
    vecs = tuple(
        tuple(int(c) for c in row)
        for row in rng.integers(-coord, coord + 1, size=(n, q))
    )
    if alpha is None:
        alpha = ALPHAS[int(rng.integers(0, len(ALPHAS)))]
    return Instance(vectors=vecs, alpha=alpha)


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
