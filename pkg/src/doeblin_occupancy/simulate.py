"""Monte Carlo samplers for the coin-toss construction and the plain chain.

Both samplers run all paths of a batch in lockstep with numpy. Each batch
draws from its own ``PCG64`` stream seeded by ``SeedSequence([seed, batch])``,
so output depends only on ``(seed, samples, batch_size)`` and not on how
batches are scheduled.
"""

from dataclasses import dataclass

import numpy as np
from scipy import stats

from .stochastic import target_mask

DEFAULT_BATCH = 100_000


@dataclass(frozen=True)
class SimConfig:
    seed: int
    samples: int
    n: int
    batch_size: int = DEFAULT_BATCH


@dataclass
class SimResult:
    """Aggregated output of a sampler.

    ``occupancy`` is the empirical law of ``T_n`` (length ``n + 1``),
    ``transitions[i, j]`` counts observed ``i -> j`` steps over all paths and
    ``final_pairs[i, j]`` counts paths with ``(X_{n-1}, X_n) = (i, j)``; the
    latter are independent across paths, which the chi-square tests need.
    The coin sampler also fills ``longest_run`` (per-path longest run of
    ``M``-sides) and ``breakers`` (per-path number of memory-breakers).
    """

    occupancy: np.ndarray
    counts: np.ndarray
    transitions: np.ndarray
    final_pairs: np.ndarray
    longest_run: np.ndarray = None
    breakers: np.ndarray = None


def _rng(seed, batch):
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, batch])))


def _draw_rows(rng, cum, states):
    """One categorical draw per path from rows ``cum[states]`` of a row-CDF."""
    u = rng.random(states.size)
    idx = (u[:, None] >= cum[states]).sum(axis=1)
    return np.minimum(idx, cum.shape[1] - 1)


def _draw_from(rng, cum_row, size):
    idx = np.searchsorted(cum_row, rng.random(size), side="right")
    return np.minimum(idx, cum_row.size - 1)


def _batches(cfg):
    done = 0
    b = 0
    while done < cfg.samples:
        size = min(cfg.batch_size, cfg.samples - done)
        yield b, size
        done += size
        b += 1


def _run(mu, n, target, cfg, step):
    mu = np.asarray(mu, dtype=float)
    size = mu.size
    mask = target_mask(target, size)
    counts = np.zeros(n + 1, dtype=np.int64)
    trans = np.zeros(size * size, dtype=np.int64)
    final = np.zeros(size * size, dtype=np.int64)
    runs, breaks = [], []
    mu_cum = np.cumsum(mu)
    for b, nb in _batches(cfg):
        rng = _rng(cfg.seed, b)
        state = _draw_from(rng, mu_cum, nb)
        occ = np.zeros(nb, dtype=np.int64)
        run = np.zeros(nb, dtype=np.int64)
        longest = np.zeros(nb, dtype=np.int64)
        nbreak = np.zeros(nb, dtype=np.int64)
        for t in range(n):
            nxt, breaker = step(rng, state)
            pairs = np.bincount(state * size + nxt, minlength=size * size)
            trans += pairs
            if t == n - 1:
                final += pairs
            occ += mask[nxt]
            if breaker is not None:
                nbreak += breaker
                run = np.where(breaker, 0, run + 1)
                np.maximum(longest, run, out=longest)
            state = nxt
        counts += np.bincount(occ, minlength=n + 1)
        runs.append(longest)
        breaks.append(nbreak)
    shape = (size, size)
    return counts, trans.reshape(shape), final.reshape(shape), np.concatenate(runs), np.concatenate(breaks)


def sample_coin_chain(mu, dec, n, cfg, target=()):
    """Sample the chain through the memory-breaker coin.

    At each step a coin shows the ``E`` side with probability ``alpha``; the
    next state is then drawn from ``e``, otherwise from ``M[state]``.
    """
    alpha = dec.alpha
    e_cum = np.cumsum(dec.e)
    m_cum = np.cumsum(dec.m_matrix, axis=1)

    def step(rng, state):
        breaker = rng.random(state.size) < alpha
        from_e = _draw_from(rng, e_cum, state.size)
        from_m = _draw_rows(rng, m_cum, state)
        return np.where(breaker, from_e, from_m), breaker

    counts, trans, final, runs, breaks = _run(mu, n, target, cfg, step)
    return SimResult(counts / cfg.samples, counts, trans, final, runs, breaks)


def sample_direct_chain(mu, p, n, cfg, target=()):
    """Sample the chain by drawing each transition from ``p`` directly."""
    p_cum = np.cumsum(np.asarray(p, dtype=float), axis=1)

    def step(rng, state):
        return _draw_rows(rng, p_cum, state), None

    counts, trans, final, _, _ = _run(mu, n, target, cfg, step)
    return SimResult(counts / cfg.samples, counts, trans, final)


def sigma_bands(probs, samples, k=3.0):
    """Half-width of a ``k``-sigma binomial band around each cell probability."""
    probs = np.asarray(probs, dtype=float)
    return k * np.sqrt(probs * (1.0 - probs) / samples)


def within_bands(empirical, probs, samples, k=3.0):
    """Per-cell check ``|empirical - probs| <= k sigma``."""
    empirical = np.asarray(empirical, dtype=float)
    return np.abs(empirical - probs) <= sigma_bands(probs, samples, k)


def two_sample_chisquare(counts_a, counts_b):
    """Chi-square homogeneity test of two count vectors; empty cells are dropped.

    Returns ``(statistic, dof)``.
    """
    table = np.vstack([np.ravel(counts_a), np.ravel(counts_b)]).astype(float)
    table = table[:, table.sum(axis=0) > 0]
    if table.shape[1] < 2:
        return 0.0, 0
    stat, _, dof, _ = stats.chi2_contingency(table, correction=False)
    return float(stat), int(dof)


def aggregate_chisquare(results):
    """Pool ``(statistic, dof)`` pairs into one statistic and its p-value."""
    stat = sum(s for s, _ in results)
    dof = sum(d for _, d in results)
    return stat, dof, float(stats.chi2.sf(stat, dof)) if dof else 1.0
