"""Occupancy distributions of finite Markov chains via Doeblin's ergodicity coefficient."""

from .approx import (
    PieceLaws,
    VacuousBoundError,
    choose_m,
    composition_mass,
    longest_run_cdf,
    normal_approx,
    piece_laws,
    polya_aeppli,
    polya_aeppli_params,
    w_i_distribution,
)
from .chains import ERHARDSSON_Q, ERHARDSSON_TARGET, EXAMPLE_3X3, build_erhardsson
from .doeblin import (
    DoeblinDecomposition,
    PowerPlanRow,
    check_submultiplicative,
    coefficient_gamma,
    decompose,
    doeblin_alpha,
    doeblin_stationary,
    power_plan,
    state_dist_mixture,
)
from .occupancy import exact_occupancy, occupancy_moments
from .stochastic import (
    StochasticError,
    check_distribution,
    check_stochastic,
    mat_mul,
    mat_pow,
    stationary_distribution,
    total_variation,
)

__version__ = "0.1.0"
