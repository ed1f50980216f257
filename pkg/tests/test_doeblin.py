import math

import numpy as np
import pytest

from doeblin_occupancy.doeblin import (
    check_submultiplicative,
    coefficient_gamma,
    decompose,
    doeblin_alpha,
    doeblin_stationary,
    mixture_weights,
    plan_m,
    planned_state_dist,
    power_plan,
    state_dist_mixture,
)
from doeblin_occupancy.stochastic import mat_pow, stationary_distribution, total_variation

from conftest import random_positive_stochastic, random_stochastic

M2_REFERENCE = np.array([
    [19 / 23, 0.0, 4 / 23],
    [0.0, 1.0, 0.0],
    [16 / 69, 4 / 69, 49 / 69],
])


def iid(e):
    e = np.asarray(e, dtype=float)
    return np.tile(e, (e.size, 1))


def test_alpha_reference_values(p3):
    assert doeblin_alpha(p3) == 0.0
    assert doeblin_alpha(p3 @ p3) == pytest.approx(31 / 100, abs=1e-12)
    assert doeblin_alpha(iid([0.2, 0.5, 0.3])) == pytest.approx(1.0, abs=1e-15)


def test_gamma_coefficients(p3):
    assert coefficient_gamma(p3, "gamma1") == 0.0
    assert coefficient_gamma(iid([0.2, 0.5, 0.3]), "gamma2") == pytest.approx(1.0)
    assert coefficient_gamma(iid([0.2, 0.5, 0.3]), "gamma3") == pytest.approx(1.0)
    with pytest.raises(ValueError):
        coefficient_gamma(p3, "gamma4")


def test_gamma2_alternative_form(rng):
    # min over row pairs of the overlap equals the half-L1 form
    for _ in range(50):
        p = random_stochastic(rng, 5)
        overlap = min(np.minimum(p[i], p[j]).sum() for i in range(5) for j in range(5))
        assert coefficient_gamma(p, 2) == pytest.approx(overlap, abs=1e-12)


def test_gamma_sandwich(rng):
    for _ in range(500):
        p = random_stochastic(rng, int(rng.integers(2, 9)))
        a = doeblin_alpha(p)
        assert coefficient_gamma(p, 1) <= a + 1e-12
        assert a <= coefficient_gamma(p, 2) + 1e-12


def test_decompose_example_square(p3):
    dec = decompose(p3 @ p3)
    assert dec.alpha == pytest.approx(0.31, abs=1e-12)
    assert np.allclose(dec.e, [8 / 31, 14 / 31, 9 / 31], atol=1e-12, rtol=0)
    assert np.allclose(dec.m_matrix, M2_REFERENCE, atol=1e-12, rtol=0)


def test_decompose_iid():
    e = np.array([0.1, 0.2, 0.7])
    dec = decompose(iid(e))
    assert dec.alpha == pytest.approx(1.0)
    assert np.allclose(dec.e, e)
    assert np.allclose(dec.m_matrix, iid(e))


def test_decompose_zero_alpha(p3):
    dec = decompose(p3)
    assert dec.alpha == 0.0
    assert not dec.e_defined
    assert np.array_equal(dec.m_matrix, p3)
    with pytest.raises(ValueError):
        state_dist_mixture(dec, m=3)


def test_decompose_reconstruction(rng):
    for _ in range(1000):
        size = int(rng.integers(2, 13))
        p = random_stochastic(rng, size, zero_frac=rng.choice([0.0, 0.2, 0.5]))
        dec = decompose(p)
        assert np.abs(dec.reconstruct() - p).max() <= 1e-12
        assert np.allclose(dec.m_matrix.sum(axis=1), 1.0, atol=1e-12)
        if dec.alpha < 1.0:
            assert doeblin_alpha(dec.m_matrix) <= 1e-12
        if dec.alpha > 0.0:
            assert np.allclose(dec.e, p.min(axis=0) / dec.alpha, atol=1e-12)


def test_decompose_smaller_alpha(rng):
    p = random_positive_stochastic(rng, 4)
    a = doeblin_alpha(p)
    dec = decompose(p, alpha=a / 2)
    assert np.abs(dec.reconstruct() - p).max() <= 1e-12
    assert dec.m_matrix.min() >= 0.0
    with pytest.raises(ValueError):
        decompose(p, alpha=a + 0.1)


def test_alpha_is_maximal_split(rng):
    for _ in range(200):
        size = int(rng.integers(2, 8))
        a = rng.random()
        e = rng.dirichlet(np.ones(size))
        m = random_stochastic(rng, size)
        p = a * iid(e) + (1 - a) * m
        assert doeblin_alpha(p) >= a - 1e-12


def test_submultiplicative(rng, p3):
    lhs, rhs = check_submultiplicative(np.eye(3), np.eye(3))
    assert lhs == rhs == 1.0
    lhs, rhs = check_submultiplicative(p3, p3)
    assert lhs == pytest.approx(0.69, abs=1e-12) and rhs == 1.0
    for _ in range(500):
        size = int(rng.integers(2, 9))
        lhs, rhs = check_submultiplicative(random_stochastic(rng, size), random_stochastic(rng, size))
        assert lhs <= rhs + 1e-12
    with pytest.raises(ValueError):
        check_submultiplicative(np.eye(2), np.eye(3))


def test_power_split_bound(rng):
    for _ in range(100):
        p = random_stochastic(rng, 5)
        for a, b in [(1, 1), (2, 3), (1, 4)]:
            lower = 1 - (1 - doeblin_alpha(mat_pow(p, a))) * (1 - doeblin_alpha(mat_pow(p, b)))
            assert doeblin_alpha(mat_pow(p, a + b)) >= lower - 1e-12


def test_mixture_weights_sum():
    w = mixture_weights(0.3, 5)
    assert w.sum() == pytest.approx(1.0)
    assert w[0] == pytest.approx(0.3 / (1 - 0.7 ** 6))


def test_mixture_m0_is_e(p3):
    dec = decompose(p3 @ p3)
    assert np.allclose(state_dist_mixture(dec, m=0), dec.e)


def test_mixture_bound_random(rng):
    for _ in range(20):
        p = random_positive_stochastic(rng, 5)
        dec = decompose(p)
        mu = rng.dirichlet(np.ones(5))
        z = state_dist_mixture(dec, mu, m=10)
        bound = (1 - dec.alpha) ** 11
        for n in range(11, 51):
            assert total_variation(mu @ mat_pow(p, n), z) <= bound + 1e-12


def test_planned_mixture_fourth_power(p3):
    mu = np.array([1.0, 0.0, 0.0])
    for n in range(16, 60):
        approx = planned_state_dist(p3, 4, 3, n)
        assert total_variation(mu @ mat_pow(p3, n), approx) <= 0.05


def test_doeblin_stationary(p3):
    dec = decompose(iid([0.3, 0.3, 0.4]))
    assert np.allclose(doeblin_stationary(dec), [0.3, 0.3, 0.4])
    p2 = p3 @ p3
    pi = doeblin_stationary(decompose(p2))
    assert np.allclose(pi, stationary_distribution(p2), atol=1e-10)
    assert np.allclose(pi, stationary_distribution(p3), atol=1e-10)


def test_doeblin_stationary_rate(rng, p3):
    p2 = p3 @ p3
    pi = doeblin_stationary(decompose(p2))
    for _ in range(100):
        mu = rng.dirichlet(np.ones(3))
        row = mu
        for n in range(1, 41):
            row = row @ p2
            assert total_variation(row, pi) <= 2 * 0.69 ** n + 1e-12


def test_plan_m_formula():
    assert plan_m(0.0, 0.05) == math.inf
    assert plan_m(1.0, 0.05) == 0
    assert plan_m(0.31, 0.05) == 8


def test_power_plan_rows(p3):
    rows = power_plan(p3, 7, 0.05)
    assert [r.k for r in rows] == list(range(1, 8))
    assert math.isinf(rows[0].m_k) and math.isinf(rows[0].n_k) and math.isinf(rows[0].c_k)
    r4 = rows[3]
    assert (r4.m_k, r4.n_k, r4.c_k) == (3, 16, 7)
    assert r4.alpha_k == pytest.approx(0.5287, abs=1e-3)
    r7 = rows[6]
    assert (r7.m_k, r7.n_k, r7.c_k) == (2, 21, 9)
    for r in rows[1:]:
        assert r.n_k == r.k * (r.m_k + 1)
        assert r.c_k == r.k + r.m_k


def test_power_plan_alpha_matches_reference_power(p3):
    # alpha of the reference seventh power, summed column minima
    reference_p7 = np.array([
        [0.3444507, 0.3440640, 0.3114853],
        [0.1966080, 0.6114381, 0.1919539],
        [0.3559832, 0.3839078, 0.2601090],
    ])
    assert power_plan(p3, 7)[6].alpha_k == pytest.approx(doeblin_alpha(reference_p7), abs=1e-7)
