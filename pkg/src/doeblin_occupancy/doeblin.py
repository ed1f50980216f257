"""Doeblin's ergodicity coefficient and the decomposition it induces.

Every stochastic matrix splits as ``p = alpha * E + (1 - alpha) * M`` with
``E`` an i.i.d. model (all rows equal to ``e``) and ``M`` stochastic. The
largest admissible ``alpha`` is :func:`doeblin_alpha`; for that choice ``M``
has a zero in every column. A chain driven by ``p`` can be simulated by
tossing a coin at every step and, on the ``E`` side, drawing the next state
from ``e`` regardless of the past. Those "memory-breaker" draws are what the
approximations in this package exploit.
"""

import math
from dataclasses import dataclass

import numpy as np

from .stochastic import mat_pow

ZERO_TOL = 1e-12


def doeblin_alpha(p):
    """Sum over columns of the column minimum."""
    p = np.asarray(p, dtype=float)
    return float(min(1.0, p.min(axis=0).sum()))


def coefficient_gamma(p, which):
    """Classical ergodicity coefficients ``gamma1``, ``gamma2``, ``gamma3``.

    ``gamma1`` is the largest column minimum, ``gamma2`` is Markov's
    coefficient ``1 - max_{i,j} ||p(i,.) - p(j,.)||_TV`` and ``gamma3`` is
    one minus the largest entrywise row discrepancy.
    """
    p = np.asarray(p, dtype=float)
    if which in (1, "gamma1", "γ1"):
        return float(p.min(axis=0).max())
    diff = np.abs(p[:, None, :] - p[None, :, :])
    if which in (2, "gamma2", "γ2"):
        return float(1.0 - 0.5 * diff.sum(axis=2).max())
    if which in (3, "gamma3", "γ3"):
        return float(1.0 - diff.max())
    raise ValueError(f"unknown coefficient {which!r}")


@dataclass(frozen=True)
class DoeblinDecomposition:
    """``source = alpha * outer(1, e) + (1 - alpha) * m_matrix``.

    When ``alpha == 0`` there is no memory-breaker: ``e`` is a uniform
    placeholder and ``e_defined`` is False. Downstream code must check the
    flag (or ``alpha``) instead of dividing by it.
    """

    alpha: float
    e: np.ndarray
    m_matrix: np.ndarray
    source: np.ndarray
    e_defined: bool = True

    @property
    def e_matrix(self):
        return np.tile(self.e, (self.e.size, 1))

    def reconstruct(self):
        return self.alpha * self.e_matrix + (1.0 - self.alpha) * self.m_matrix


def decompose(p, alpha=None):
    """Doeblin decomposition of ``p``.

    Parameters
    ----------
    p : (N, N) ndarray
        Stochastic matrix.
    alpha : float, optional
        Weight of the i.i.d. part. Defaults to ``doeblin_alpha(p)``, the
        maximal choice. A smaller value is accepted for experiments; it
        must lie in ``[0, doeblin_alpha(p)]``. The memory-breaker row is
        then still ``colmin / doeblin_alpha(p)``.

    Returns
    -------
    DoeblinDecomposition
    """
    p = np.asarray(p, dtype=float)
    n = p.shape[0]
    best = doeblin_alpha(p)
    if alpha is None:
        alpha = best
    elif not 0.0 <= alpha <= best + ZERO_TOL:
        raise ValueError(f"alpha={alpha} outside [0, alpha(p)={best}]")
    alpha = float(min(alpha, best))

    if alpha <= 0.0 or best <= 0.0:
        return DoeblinDecomposition(0.0, np.full(n, 1.0 / n), p.copy(), p, e_defined=False)

    e = p.min(axis=0) / best
    e /= e.sum()
    if alpha >= 1.0:
        m = np.tile(e, (n, 1))
    else:
        m = (p - alpha * e[None, :]) / (1.0 - alpha)
        # cancellation can leave -1e-17 where p(i,j) equals its column minimum
        m = np.clip(m, 0.0, None)
        m /= m.sum(axis=1, keepdims=True)
    return DoeblinDecomposition(alpha, e, m, p)


def check_submultiplicative(p, q):
    """Both sides of ``1 - alpha(pq) <= (1 - alpha(p)) (1 - alpha(q))``."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError(f"dimension mismatch: {p.shape} vs {q.shape}")
    lhs = 1.0 - doeblin_alpha(p @ q)
    rhs = (1.0 - doeblin_alpha(p)) * (1.0 - doeblin_alpha(q))
    return lhs, rhs


def _require_breaker(dec):
    if dec.alpha <= 0.0 or not dec.e_defined:
        raise ValueError("alpha = 0: no memory-breaker, the Doeblin bound is vacuous")


def mixture_weights(alpha, m):
    """Truncated geometric weights ``alpha (1-alpha)^t / (1 - (1-alpha)^(m+1))``."""
    t = np.arange(m + 1)
    w = alpha * (1.0 - alpha) ** t
    return w / w.sum()


def state_dist_mixture(dec, mu=None, m=0):
    """Mixture of ``e M^t``, ``t = 0..m``, approximating ``mu p^n`` for ``n > m``.

    The total variation error is at most ``(1 - alpha)^(m+1)`` whatever the
    initial law, so ``mu`` only enters through that bound and is accepted
    for symmetry with the other approximations.
    """
    _require_breaker(dec)
    if m < 0:
        raise ValueError("m must be nonnegative")
    weights = mixture_weights(dec.alpha, m)
    row = dec.e.copy()
    out = weights[0] * row
    for t in range(1, m + 1):
        row = row @ dec.m_matrix
        out += weights[t] * row
    return out


def mixture_error_bound(alpha, m):
    return (1.0 - alpha) ** (m + 1)


def doeblin_stationary(dec):
    """Stationary law from the resolvent ``alpha e (I - (1-alpha) M)^-1``."""
    _require_breaker(dec)
    n = dec.e.size
    a = np.eye(n) - (1.0 - dec.alpha) * dec.m_matrix
    if np.linalg.cond(a) > 1e12:
        raise np.linalg.LinAlgError("resolvent is numerically singular")
    pi = dec.alpha * np.linalg.solve(a.T, dec.e)
    pi = np.clip(pi, 0.0, None)
    return pi / pi.sum()


@dataclass(frozen=True)
class PowerPlanRow:
    """One row of the matrix-power planner. Infinite entries are ``math.inf``."""

    k: int
    alpha_k: float
    m_k: float
    n_k: float
    c_k: float


def plan_m(alpha, epsilon):
    """Smallest ``m`` with ``(1 - alpha)^(m+1) <= epsilon``, as in the planner."""
    if alpha <= 0.0:
        return math.inf
    if alpha >= 1.0:
        return 0
    return max(0, math.ceil(math.log(epsilon) / math.log(1.0 - alpha) - 1.0))


def power_plan(p, k_max, epsilon=0.05):
    """Planner rows for ``p^k``, ``k = 1..k_max``.

    For each power, ``m_k`` mixture terms of ``e_k M_k^t`` (times a trailing
    ``p^(n mod k)``) approximate the law of ``X_n`` within ``epsilon`` for
    every ``n >= n_k = k (m_k + 1)``, at a cost of ``c_k = k + m_k`` matrix
    multiplications.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    p = np.asarray(p, dtype=float)
    rows = []
    pk = np.eye(p.shape[0])
    for k in range(1, k_max + 1):
        pk = pk @ p
        a = doeblin_alpha(pk)
        # column minima that are exactly zero in exact arithmetic stay ~1e-17
        if a < ZERO_TOL:
            a = 0.0
        m = plan_m(a, epsilon)
        if math.isinf(m):
            rows.append(PowerPlanRow(k, a, math.inf, math.inf, math.inf))
        else:
            rows.append(PowerPlanRow(k, a, m, k * (m + 1), k + m))
    return rows


def planned_state_dist(p, k, m, n):
    """Approximate ``law(X_n)`` with the ``p^k`` mixture and trailing ``p^(n mod k)``.

    The mixture is formed once and the trailing factor applied to it, so the
    work is ``k + m`` matrix-vector-sized multiplications at most.
    """
    p = np.asarray(p, dtype=float)
    dec = decompose(mat_pow(p, k))
    approx = state_dist_mixture(dec, m=m)
    return approx @ mat_pow(p, n % k)
