"""Exact occupancy distributions by transfer-kernel dynamic programming.

The occupancy of a target set ``T`` after ``n`` steps is
``T_n = sum_{t=1..n} [X_t in T]``; the initial state is not counted. Its
generating function is ``mu p(z)^n 1`` with the transfer matrix
``p(z)[i, j] = p[i, j] * z**[j in T]``. Instead of powering a polynomial
matrix we carry a state-resolved table ``f[s, k] = P[X_t = s, T_t = k]``
and advance it one transition at a time.
"""

import numpy as np

from .stochastic import target_mask


def marking_step(table, kernel, mask):
    """Advance a state-resolved count table by one marked transition.

    ``table`` has shape ``(N, K)``; the result has shape ``(N, K + 1)`` so
    that a visit to ``T`` on the last column never falls off the end.
    """
    moved = kernel.T @ table
    out = np.zeros((table.shape[0], table.shape[1] + 1))
    out[~mask, :-1] = moved[~mask]
    out[mask, 1:] = moved[mask]
    return out


def mark_initial(dist, mask):
    """Table for a single draw from ``dist`` whose state *is* counted."""
    table = np.zeros((dist.size, 2))
    table[~mask, 0] = dist[~mask]
    table[mask, 1] = dist[mask]
    return table


def exact_occupancy(mu, p, target, n):
    """Exact law of ``T_n`` as a length ``n + 1`` array.

    Costs ``O(n^2 |S|^2)`` time and ``O(n |S|)`` memory.
    """
    mu = np.asarray(mu, dtype=float)
    p = np.asarray(p, dtype=float)
    mask = target_mask(target, mu.size)
    # preallocate the full width and shift in place rather than growing
    table = np.zeros((mu.size, n + 1))
    table[:, 0] = mu
    pt = p.T
    for t in range(1, n + 1):
        moved = pt @ table[:, :t]
        table[~mask, :t] = moved[~mask]
        table[mask, 0] = 0.0
        table[mask, 1:t + 1] = moved[mask]
    return table.sum(axis=0)


def occupancy_moments(mu, p, target, n, dist=None):
    """Mean and variance of ``T_n``.

    The variance is read off the exact distribution (computed here unless
    ``dist`` is passed); the mean is the sum of the marginal target masses
    and is checked against the distribution's mean.
    """
    mu = np.asarray(mu, dtype=float)
    p = np.asarray(p, dtype=float)
    mask = target_mask(target, mu.size)
    mean = 0.0
    row = mu
    for _ in range(n):
        row = row @ p
        mean += row[mask].sum()
    if dist is None:
        dist = exact_occupancy(mu, p, target, n)
    k = np.arange(dist.size)
    dmean = float(k @ dist)
    var = float(((k - dmean) ** 2) @ dist)
    return float(mean), max(var, 0.0)
