"""Experiment drivers: the matrix-power planner table and the baseline comparison."""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .approx import (
    VacuousBoundError,
    choose_m,
    normal_approx,
    polya_aeppli,
    polya_aeppli_params,
    w_i_distribution,
)
from .doeblin import decompose
from .occupancy import exact_occupancy, occupancy_moments
from .stochastic import stationary_distribution, total_variation

# (n, beta) cells of the reference comparison; n = 10 uses 0.2 where the others use 0.25
REFERENCE_GRID = [
    (n, b)
    for n in (10, 100, 1000)
    for b in (1.0, 0.5, 0.2 if n == 10 else 0.25, 0.1, 0.01, 0.0)
]

DEFAULT_C = 2.0


def default_m(alpha, n, c=DEFAULT_C):
    """Run cap from :func:`choose_m`, or ``n`` (exact) when ``alpha * n <= 1``."""
    if alpha * n <= 1.0:
        return n
    return choose_m(alpha, n, c)


@dataclass(frozen=True)
class CompareRow:
    n: int
    beta: float
    tv_normal: float
    tv_cp: float
    tv_doeblin: float
    bound: float
    m: int


def compare_cell(p, mu, target, n, beta=float("nan"), m=None, c=DEFAULT_C):
    """TV distance of the three approximations to the exact occupancy law."""
    exact = exact_occupancy(mu, p, target, n)
    mean, var = occupancy_moments(mu, p, target, n, dist=exact)
    tv_normal = total_variation(exact, normal_approx(mean, var, n))

    if len(target) == 1:
        lam, rho = polya_aeppli_params(p, target, n, pi=stationary_distribution(p))
        tv_cp = total_variation(exact, polya_aeppli(lam, rho, n))
    else:
        tv_cp = float("nan")

    dec = decompose(p)
    if dec.alpha <= 0.0:
        raise VacuousBoundError("alpha(p) = 0: no memory-breaker for the Doeblin approximation")
    if m is None:
        m = default_m(dec.alpha, n, c)
    m = min(int(m), n)
    law, bound = w_i_distribution(mu, dec, target, n, m)
    return CompareRow(n, beta, tv_normal, tv_cp, total_variation(exact, law), bound, m)


def _spec_cell(args):
    spec, n, beta, m, c = args
    p = spec.kernel(beta=beta)
    mu = spec.initial_distribution(p)
    return compare_cell(p, mu, spec.target_indices(), n, beta, m=m, c=c)


def compare_grid(spec, cells, m=None, c=DEFAULT_C, jobs=1):
    """Evaluate ``compare_cell`` over ``(n, beta)`` cells, in input order.

    The initial law is resolved per cell, so ``initial: stationary`` follows
    each ``beta``.
    """
    work = [(spec, n, beta, m, c) for n, beta in cells]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_spec_cell, work))
    return [_spec_cell(w) for w in work]
