"""Dense stochastic matrices and probability vectors.

Matrices are plain ``(N, N)`` float ndarrays and distributions are ``(N,)``
float ndarrays. The ``check_*`` helpers validate (and lightly repair) user
input; every other function assumes validated arguments.
"""

import numpy as np

ROW_SUM_TOL = 1e-9
NEG_TOL = 1e-12


class StochasticError(ValueError):
    """Raised when an array is not a valid stochastic object."""


def check_stochastic(p, tol=ROW_SUM_TOL):
    """Validate a row-stochastic matrix and return it as a float array.

    Rows summing to within ``tol`` of one are renormalized, tiny negative
    round-off (above ``-1e-12``) is clipped to zero. Anything else raises
    :class:`StochasticError`.
    """
    p = np.array(p, dtype=float)
    if p.ndim != 2 or p.shape[0] != p.shape[1] or p.shape[0] == 0:
        raise StochasticError(f"expected a non-empty square matrix, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise StochasticError("matrix has non-finite entries")
    if p.min() < -NEG_TOL:
        raise StochasticError(f"negative entry {p.min():.3g}")
    if p.max() > 1.0 + tol:
        raise StochasticError(f"entry {p.max():.6g} exceeds 1")
    p = np.clip(p, 0.0, None)
    sums = p.sum(axis=1)
    bad = np.flatnonzero(np.abs(sums - 1.0) > tol)
    if bad.size:
        i = bad[0]
        raise StochasticError(f"row {i} sums to {sums[i]:.12g}, not 1")
    return p / sums[:, None]


def check_distribution(v, size=None, tol=ROW_SUM_TOL):
    """Validate a probability vector, optionally of a given length."""
    v = np.array(v, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise StochasticError(f"expected a non-empty vector, got shape {v.shape}")
    if size is not None and v.size != size:
        raise StochasticError(f"expected length {size}, got {v.size}")
    if not np.all(np.isfinite(v)) or v.min() < -NEG_TOL:
        raise StochasticError("distribution has negative or non-finite entries")
    v = np.clip(v, 0.0, None)
    total = v.sum()
    if abs(total - 1.0) > tol:
        raise StochasticError(f"distribution sums to {total:.12g}, not 1")
    return v / total


def check_target(target, size, allow_empty=True):
    """Return the target set as a sorted int array of valid state indices."""
    idx = np.unique(np.asarray(list(target), dtype=int))
    if idx.size and (idx.min() < 0 or idx.max() >= size):
        raise StochasticError(f"target indices {idx.tolist()} out of range for {size} states")
    if not allow_empty and idx.size == 0:
        raise StochasticError("target set is empty")
    return idx


def target_mask(target, size):
    """Boolean membership mask of the target set over ``size`` states."""
    mask = np.zeros(size, dtype=bool)
    mask[check_target(target, size)] = True
    return mask


def mat_mul(a, b):
    """Product of two stochastic matrices of matching size."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise StochasticError(f"dimension mismatch: {a.shape} x {b.shape}")
    return a @ b


def mat_pow(p, k):
    """``p**k`` by repeated squaring; ``k = 0`` gives the identity."""
    if k < 0:
        raise ValueError("power must be nonnegative")
    p = np.asarray(p, dtype=float)
    return np.linalg.matrix_power(p, int(k))


def total_variation(u, v):
    r"""Total variation distance :math:`\frac12\sum_i |u_i - v_i|`.

    Vectors of different lengths are an error; pad count distributions
    explicitly if their supports differ.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise ValueError(f"length mismatch: {u.shape} vs {v.shape}")
    return 0.5 * float(np.abs(u - v).sum())


def stationary_distribution(p):
    """Stationary distribution of an irreducible aperiodic chain.

    Solves ``pi (I - p) = 0`` with the normalization ``sum(pi) = 1``
    replacing the last balance equation.

    Raises
    ------
    StochasticError
        If the system is singular, i.e. the stationary law is not unique.
    """
    p = np.asarray(p, dtype=float)
    n = p.shape[0]
    a = np.eye(n) - p.T
    a[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    try:
        pi = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise StochasticError("stationary system is singular (reducible chain?)") from exc
    if np.linalg.cond(a) > 1e12:
        raise StochasticError("stationary system is ill-conditioned (reducible chain?)")
    if pi.min() < -1e-10:
        raise StochasticError("stationary solution has negative mass (reducible chain?)")
    pi = np.clip(pi, 0.0, None)
    return pi / pi.sum()
