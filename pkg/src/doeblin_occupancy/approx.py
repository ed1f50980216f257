"""Occupancy approximations: the Doeblin piece decomposition and baselines.

Tossing the memory-breaker coin at each of the ``n`` steps cuts a trajectory
into independent pieces. The first piece starts from ``mu`` and runs
``i_0`` steps under ``M``. Every later piece starts with a draw from ``e``
(counted) followed by ``i_l - 1`` steps under ``M``. Capping every run of
``M`` steps at ``m`` and renormalizing by ``ell_n = P[longest run <= m]``
gives an approximation ``W`` whose total variation distance to the exact
occupancy is at most ``(1 - ell_n) / ell_n``.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .occupancy import mark_initial, marking_step
from .stochastic import stationary_distribution, target_mask


class VacuousBoundError(ValueError):
    """Raised when a Doeblin error bound degenerates (alpha = 0 or ell_n = 0)."""


def longest_run_cdf(alpha, n, m):
    """``P[no run of M-sides longer than m in n tosses]``, ``P[M] = 1 - alpha``.

    Run-length dynamic program over the current run, ``O(n m)``.
    """
    if n < 0 or m < 0:
        raise ValueError("n and m must be nonnegative")
    if m >= n or alpha >= 1.0:
        return 1.0
    if alpha <= 0.0:
        raise VacuousBoundError("alpha = 0 with m < n: every toss is an M-side")
    q = 1.0 - alpha
    run = np.zeros(m + 1)
    run[0] = 1.0
    for _ in range(n):
        new = np.empty_like(run)
        new[0] = alpha * run.sum()
        new[1:] = q * run[:-1]
        run = new
    return float(run.sum())


def choose_m(alpha, n, c=2.0):
    """Run cap ``ceil(-c ln(alpha n) / ln(1 - alpha))`` clamped to ``[1, n]``.

    For ``c > 1`` this makes ``1 - ell_n = O(n^(1-c))``.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if alpha * n <= 1.0:
        raise ValueError(f"alpha * n = {alpha * n:.4g} must exceed 1")
    if c <= 1.0:
        raise ValueError("c must exceed 1")
    m = math.ceil(-c * math.log(alpha * n) / math.log(1.0 - alpha))
    return int(min(max(m, 1), n))


@dataclass(frozen=True)
class PieceLaws:
    """Count laws of the pieces, each zero-padded to length ``m + 2``.

    ``u[l]``, ``l = 0..m``: first piece of ``l`` steps from ``mu``.
    ``v[l]``, ``l = 1..m+1``: inner piece of length ``l``; ``v[0]`` is unused.
    """

    u: np.ndarray
    v: np.ndarray


def piece_laws(mu, dec, target, m):
    mu = np.asarray(mu, dtype=float)
    size = mu.size
    mask = target_mask(target, size)
    width = m + 2
    u = np.zeros((m + 1, width))
    v = np.zeros((m + 2, width))
    kernel = dec.m_matrix

    table = mu[:, None]
    u[0, 0] = 1.0
    for l in range(1, m + 1):
        table = marking_step(table, kernel, mask)
        u[l, : l + 1] = table.sum(axis=0)

    table = mark_initial(dec.e, mask)
    v[1, :2] = table.sum(axis=0)
    for l in range(2, m + 2):
        table = marking_step(table, kernel, mask)
        v[l, : l + 1] = table.sum(axis=0)
    return PieceLaws(u, v)


def _conv_into(acc, scale, piece, rest):
    """``acc += scale * (piece * rest)`` for a piece of support ``<= len(piece)``."""
    full = np.convolve(piece, rest)
    k = min(acc.size, full.size)
    acc[:k] += scale * full[:k]


def composition_mass(dec, mu, target, n, m, laws=None):
    """Unnormalized law ``A`` of ``W`` (total mass ``ell_n``).

    Suffix recursion over the remaining length ``r``::

        B(0) = delta_0
        B(r) = sum_{l=1..min(m+1, r)} alpha (1-alpha)^(l-1) v[l] * B(r - l)
        A    = sum_{i=0..min(m, n)} (1-alpha)^i u[i] * B(n - i)
    """
    alpha = dec.alpha
    if laws is None:
        laws = piece_laws(mu, dec, target, m)
    q = 1.0 - alpha
    # trim trailing padding so convolutions stay as short as the support
    vs = [None] + [laws.v[l, : l + 1] for l in range(1, m + 2)]
    us = [laws.u[i, : i + 1] for i in range(m + 1)]

    blocks = [np.array([1.0])]
    for r in range(1, n + 1):
        acc = np.zeros(r + 1)
        for l in range(1, min(m + 1, r) + 1):
            _conv_into(acc, alpha * q ** (l - 1), vs[l], blocks[r - l])
        blocks.append(acc)

    out = np.zeros(n + 1)
    for i in range(min(m, n) + 1):
        _conv_into(out, q ** i, us[i], blocks[n - i])
    return out


def w_i_distribution(mu, dec, target, n, m):
    """Doeblin approximation of the occupancy law and its error bound.

    Parameters
    ----------
    mu : (N,) ndarray
        Initial distribution.
    dec : DoeblinDecomposition
        Decomposition of the one-step kernel, ``0 < alpha < 1``.
    target : sequence of int
        Target state indices.
    n : int
        Horizon, ``n >= 1``.
    m : int
        Cap on the number of ``M`` steps in a piece.

    Returns
    -------
    law : (n + 1,) ndarray
    bound : float
        ``(1 - ell_n) / ell_n``.
    """
    if dec.alpha <= 0.0 or not dec.e_defined:
        raise VacuousBoundError("alpha = 0: no memory-breaker")
    if n < 1 or m < 0:
        raise ValueError("need n >= 1 and m >= 0")
    ell = longest_run_cdf(dec.alpha, n, m)
    if ell <= 0.0:
        raise VacuousBoundError(f"ell_n = 0 for alpha={dec.alpha}, n={n}, m={m}")
    mass = composition_mass(dec, mu, target, n, m)
    return mass / ell, (1.0 - ell) / ell


def normal_approx(mean, variance, n):
    """Continuity-corrected Normal law on ``{0..n}``; the end cells take the tails."""
    out = np.zeros(n + 1)
    if variance <= 0.0:
        out[min(max(int(math.floor(mean + 0.5)), 0), n)] = 1.0
        return out
    sd = math.sqrt(variance)
    edges = (np.arange(n) + 0.5 - mean) / sd
    cdf = np.concatenate(([0.0], ndtr(edges), [1.0]))
    return np.diff(cdf)


def polya_aeppli(lam, rho, n):
    """Pólya-Aeppli law (Poisson number of geometric clumps) on ``{0..n}``.

    Uses the compound Poisson (Panjer) recursion
    ``P(k) = lam / k * sum_j j q_j P(k - j)`` with clump law
    ``q_j = (1 - rho) rho^(j-1)``; mass above ``n`` is put in the last cell.
    """
    if lam < 0.0 or not 0.0 <= rho < 1.0:
        raise ValueError("need lam >= 0 and 0 <= rho < 1")
    out = np.zeros(n + 1)
    out[0] = math.exp(-lam)
    if n == 0:
        out[0] = 1.0
        return out
    j = np.arange(1, n + 1)
    jq = j * (1.0 - rho) * rho ** (j - 1)
    for k in range(1, n + 1):
        out[k] = lam / k * (jq[:k] @ out[k - 1 :: -1][:k])
    out[n] = max(0.0, 1.0 - out[:n].sum())
    return out


def polya_aeppli_params(p, target, n, pi=None):
    """Declumping parameters ``(lam, rho)`` for a singleton target ``{s}``.

    ``rho = p[s, s]`` is the chance a visit is followed by another and
    ``lam = n pi[s] (1 - rho)`` the expected number of clumps.
    """
    idx = list(target)
    if len(idx) != 1:
        raise ValueError("explicit (lambda, rho) required for a non-singleton target")
    s = int(idx[0])
    p = np.asarray(p, dtype=float)
    if pi is None:
        pi = stationary_distribution(p)
    rho = float(p[s, s])
    return float(n * pi[s] * (1.0 - rho)), rho
