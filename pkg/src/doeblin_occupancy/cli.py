"""Command line front end.

    doeblin-occupancy <command> --config <path> [--out <path>] [options]

Every command writes CSV (header row, fixed column order) to ``--out`` or
stdout. Exit status: 0 on success, 2 for configuration errors, 3 when a
mathematical precondition fails (e.g. the Doeblin coefficient is zero).
"""

import argparse
import csv
import math
import sys

import numpy as np

from . import approx, doeblin, occupancy, simulate, tables
from .config import ConfigError, load_spec
from .stochastic import mat_pow, stationary_distribution, total_variation

EXIT_CONFIG = 2
EXIT_PRECONDITION = 3

MODES = ("exact", "doeblin", "normal", "polya-aeppli")


class PreconditionError(Exception):
    pass


def fmt(x):
    """12 significant digits, shortest round-trip spelling."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(float(f"{x:.12g}"))


def _label(x):
    return str(x)


def _decompose_or_fail(p):
    dec = doeblin.decompose(p)
    if dec.alpha <= 0.0:
        raise PreconditionError("alpha(p) = 0: the kernel has a zero in every column, no memory-breaker")
    return dec


def cmd_decompose(spec, args):
    p = mat_pow(spec.kernel(), spec.power)
    dec = doeblin.decompose(p)
    rows = [("alpha", "", "", fmt(dec.alpha))]
    if dec.e_defined:
        rows += [("e", "", _label(s), fmt(v)) for s, v in zip(spec.states, dec.e)]
    for i, si in enumerate(spec.states):
        for j, sj in enumerate(spec.states):
            rows.append(("M", _label(si), _label(sj), fmt(dec.m_matrix[i, j])))
    return ["quantity", "from", "to", "value"], rows


def cmd_power_plan(spec, args):
    eps = args.epsilon or spec.epsilon or 0.05
    k_max = args.k_max or spec.k_max or 7
    plan = doeblin.power_plan(spec.kernel(), k_max, eps)
    rows = [(r.k, fmt(r.alpha_k), fmt(r.m_k), fmt(r.n_k), fmt(r.c_k)) for r in plan]
    return ["k", "alpha_k", "m_k", "n_k", "c_k"], rows


def cmd_stationary(spec, args):
    p = spec.kernel()
    pk = mat_pow(p, spec.power)
    pi = stationary_distribution(pk)
    dec = _decompose_or_fail(pk)
    pi_d = doeblin.doeblin_stationary(dec)
    rows = [("pi_linear", _label(s), fmt(v), "") for s, v in zip(spec.states, pi)]
    rows += [("pi_doeblin", _label(s), fmt(v), "") for s, v in zip(spec.states, pi_d)]
    steps = spec.n
    cur = np.eye(pk.shape[0])
    for t in range(1, steps + 1):
        cur = cur @ pk
        worst = max(total_variation(row, pi) for row in cur)
        rows.append(("tv_to_pi", t, fmt(worst), fmt(2.0 * (1.0 - dec.alpha) ** t)))
    return ["quantity", "index", "value", "bound"], rows


def occupancy_law(spec, mode, m=None, c=None):
    p = spec.kernel()
    mu = spec.initial_distribution(p)
    target = spec.target_indices()
    n = spec.n
    if mode == "exact":
        return occupancy.exact_occupancy(mu, p, target, n)
    if mode == "normal":
        mean, var = occupancy.occupancy_moments(mu, p, target, n)
        return approx.normal_approx(mean, var, n)
    if mode == "polya-aeppli":
        if len(target) != 1:
            raise PreconditionError("polya-aeppli needs a singleton target")
        lam, rho = approx.polya_aeppli_params(p, target, n)
        return approx.polya_aeppli(lam, rho, n)
    dec = _decompose_or_fail(p)
    if dec.alpha >= 1.0:
        # i.i.d. chain, no M steps: the exact law is cheap and is the answer
        return occupancy.exact_occupancy(mu, p, target, n)
    if n == 0:
        return np.array([1.0])
    if m is None:
        m = tables.default_m(dec.alpha, n, c or tables.DEFAULT_C)
    law, _ = approx.w_i_distribution(mu, dec, target, n, min(m, n))
    return law


def cmd_occupancy(spec, args):
    mode = args.mode or "exact"
    law = occupancy_law(spec, mode, m=args.m if args.m is not None else spec.m, c=args.c or spec.c)
    rows = [(k, fmt(v)) for k, v in enumerate(law) if v != 0.0]
    return ["count", "probability"], rows


def cmd_compare(spec, args):
    grid = spec.grid or {}
    if "cells" in grid:
        cells = [(int(n), float(b)) for n, b in grid["cells"]]
    elif "n" in grid or "beta" in grid:
        ns = grid.get("n", [spec.n])
        betas = grid.get("beta", [spec.beta])
        cells = [(int(n), float("nan") if b is None else float(b)) for n in ns for b in betas]
    elif spec.q is not None:
        cells = tables.REFERENCE_GRID
    else:
        cells = [(spec.n, float("nan"))]
    m = args.m if args.m is not None else spec.m
    c = args.c or spec.c or tables.DEFAULT_C
    rows = tables.compare_grid(spec, cells, m=m, c=c, jobs=args.jobs)
    header = ["n", "beta", "tv_normal", "tv_cp", "tv_doeblin", "bound", "m"]
    out = [
        (r.n, "" if math.isnan(r.beta) else fmt(r.beta), fmt(r.tv_normal), fmt(r.tv_cp),
         fmt(r.tv_doeblin), fmt(r.bound), r.m)
        for r in rows
    ]
    return header, out


def cmd_simulate(spec, args):
    p = spec.kernel()
    mu = spec.initial_distribution(p)
    target = spec.target_indices()
    dec = _decompose_or_fail(p)
    seed = args.seed if args.seed is not None else (spec.seed if spec.seed is not None else 0)
    samples = args.samples or spec.samples or 100_000
    cfg = simulate.SimConfig(seed=seed, samples=samples, n=spec.n)
    coin = simulate.sample_coin_chain(mu, dec, spec.n, cfg, target)
    direct = simulate.sample_direct_chain(mu, p, spec.n, simulate.SimConfig(seed + 1, samples, spec.n), target)
    exact = occupancy.exact_occupancy(mu, p, target, spec.n)

    stat, dof = simulate.two_sample_chisquare(coin.final_pairs, direct.final_pairs)
    _, _, pval = simulate.aggregate_chisquare([(stat, dof)])
    print(f"final_pair_chi2={stat:.6g} dof={dof} p_value={pval:.6g}", file=sys.stderr)
    print(f"tv_coin_exact={total_variation(coin.occupancy, exact):.6g} "
          f"tv_direct_exact={total_variation(direct.occupancy, exact):.6g}", file=sys.stderr)

    rows = [(k, fmt(exact[k]), fmt(coin.occupancy[k]), fmt(direct.occupancy[k])) for k in range(spec.n + 1)]
    return ["count", "exact", "coin", "direct"], rows


COMMANDS = {
    "decompose": cmd_decompose,
    "power-plan": cmd_power_plan,
    "stationary": cmd_stationary,
    "occupancy": cmd_occupancy,
    "compare": cmd_compare,
    "simulate": cmd_simulate,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="doeblin-occupancy",
        description="Occupancy distributions of finite Markov chains via Doeblin's ergodicity coefficient.",
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True, help="YAML/JSON problem file")
    parser.add_argument("--out", help="CSV output path (default: stdout)")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--samples", type=int)
    parser.add_argument("--epsilon", type=float)
    parser.add_argument("--m", type=int)
    parser.add_argument("--c", type=float)
    parser.add_argument("--k-max", type=int)
    parser.add_argument("--mode", choices=MODES)
    parser.add_argument("--jobs", type=int, default=1, help="worker processes for compare")
    return parser


def _write(header, rows, out):
    if out:
        with open(out, "w", newline="") as fh:
            _emit(header, rows, fh)
    else:
        _emit(header, rows, sys.stdout)


def _emit(header, rows, fh):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        spec = load_spec(args.config)
        header, rows = COMMANDS[args.command](spec, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (PreconditionError, ValueError, np.linalg.LinAlgError) as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    _write(header, rows, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
