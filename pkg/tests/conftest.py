import itertools

import numpy as np
import pytest

from pedkit import JointDistribution


def random_joint(rng, alphabet_sizes, zeros=0.0):
    """Random exact pmf over the given alphabets.

    ``zeros`` is the fraction of cells forced to zero (support kept nonempty).
    Positive cells are bounded away from zero so fitting stays well inside
    the feasible region.
    """
    outcomes = list(itertools.product(*(range(k) for k in alphabet_sizes)))
    probs = rng.random(len(outcomes)) + 0.05
    if zeros > 0.0:
        mask = rng.random(len(outcomes)) < zeros
        if mask.all():
            mask[rng.integers(len(outcomes))] = False
        probs[mask] = 0.0
    probs /= probs.sum()
    pmf = {o: float(p) for o, p in zip(outcomes, probs) if p > 0.0}
    return JointDistribution(len(alphabet_sizes), tuple(alphabet_sizes), pmf)


def random_alphabets(rng, n_vars, max_size=3):
    return tuple(int(rng.integers(2, max_size + 1)) for _ in range(n_vars))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
