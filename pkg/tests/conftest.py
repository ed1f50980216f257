import itertools
import sys

import numpy as np
import pytest

from doeblin_occupancy.chains import ERHARDSSON_Q, ERHARDSSON_TARGET, EXAMPLE_3X3, build_erhardsson


def random_stochastic(rng, size, zero_frac=0.3):
    """Dirichlet rows with some entries knocked out, so alpha spans (0, 1)."""
    p = rng.dirichlet(np.ones(size), size=size)
    if zero_frac:
        kill = rng.random((size, size)) < zero_frac
        kill[np.arange(size), rng.integers(0, size, size)] = False
        p = np.where(kill, 0.0, p)
        p /= p.sum(axis=1, keepdims=True)
    return p


def random_positive_stochastic(rng, size):
    return random_stochastic(rng, size, zero_frac=0.0)


def enumerate_occupancy(mu, p, target, n, count_first=False):
    """Law of the number of target visits by summing over all length-n paths.

    Every path ``x_0 .. x_n`` is listed explicitly; result has length n + 2.
    """
    mu = np.asarray(mu, dtype=float)
    p = np.asarray(p, dtype=float)
    size = mu.size
    paths = np.array(list(itertools.product(range(size), repeat=n + 1)), dtype=int).reshape(-1, n + 1)
    prob = mu[paths[:, 0]]
    for t in range(n):
        prob = prob * p[paths[:, t], paths[:, t + 1]]
    inside = np.isin(paths, list(target))
    k = inside[:, 1:].sum(axis=1) + (inside[:, 0] if count_first else 0)
    return np.bincount(k, weights=prob, minlength=n + 2)[: n + 2]


@pytest.fixture
def p3():
    return EXAMPLE_3X3.copy()


@pytest.fixture
def erhardsson():
    def make(beta):
        return build_erhardsson(ERHARDSSON_Q, beta, ERHARDSSON_TARGET)
    return make


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    results = getattr(acceptance, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
