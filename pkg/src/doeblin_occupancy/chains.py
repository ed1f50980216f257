"""Reference chains used in the examples and tests."""

import numpy as np

from .stochastic import check_stochastic, check_target

EXAMPLE_3X3 = np.array([
    [0.3, 0.0, 0.7],
    [0.0, 0.9, 0.1],
    [0.8, 0.2, 0.0],
])

# eight-state kernel of Erhardsson's compound Poisson example; target is state 8
ERHARDSSON_Q = np.array([
    [0.334, 0.215, 0.173, 0.119, 0.065, 0.086, 0.003, 0.005],
    [0.289, 0.133, 0.211, 0.133, 0.067, 0.156, 0.007, 0.004],
    [0.356, 0.184, 0.075, 0.043, 0.151, 0.183, 0.002, 0.006],
    [0.41, 0.162, 0.108, 0.075, 0.14, 0.097, 0.005, 0.003],
    [0.316, 0.239, 0.044, 0.218, 0.076, 0.098, 0.004, 0.005],
    [0.44, 0.176, 0.044, 0.242, 0.088, 0.0, 0.005, 0.005],
    [0.18, 0.06, 0.19, 0.09, 0.13, 0.1, 0.13, 0.12],
    [0.2, 0.16, 0.07, 0.1, 0.14, 0.1, 0.09, 0.14],
])
ERHARDSSON_TARGET = (7,)


def build_erhardsson(q, beta, target):
    """Thin the transitions of ``q`` into ``target`` by ``beta``.

    From outside the target, moves into it are scaled by ``beta`` and the
    freed mass is spread over the non-target states proportionally to ``q``.
    Rows inside the target are copied from ``q``.
    """
    q = check_stochastic(q)
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must lie in [0, 1], got {beta}")
    size = q.shape[0]
    idx = check_target(target, size)
    inside = np.zeros(size, dtype=bool)
    inside[idx] = True
    q_in = q[:, inside].sum(axis=1)
    if np.any(q_in[~inside] >= 1.0):
        raise ValueError("a non-target row of q moves into the target with probability 1")
    if beta == 1.0:
        return q.copy()
    p = q.copy()
    outside = ~inside
    scale = (1.0 - beta * q_in[outside]) / (1.0 - q_in[outside])
    p[np.ix_(outside, outside)] = scale[:, None] * q[np.ix_(outside, outside)]
    p[np.ix_(outside, inside)] = beta * q[np.ix_(outside, inside)]
    return p
