"""Command-line interface: ``infogain <command> [flags]``.

Every command writes one document, CSV (default) or JSON, to stdout or to
``--out``. Exit status is 0 on success, 1 for invalid usage and 2 when a
verification command finds a check outside tolerance.
"""

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import analysis, oracle
from .analysis import AlphaGrid, Measure
from .errors import BracketError, ConvergenceError, DomainError
from .gains import diff_gain, expected_gain, expected_gain_values, gain_report, rel_gain
from .model import BetaPrior, Outcome, TossSummary

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY_FAILED = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# documents


def _csv_cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _json_value(value):
    if isinstance(value, dict):
        return {k: _json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def render(command, params, rows, fmt):
    if fmt == "json":
        doc = {"command": command, "params": params, "rows": rows}
        return json.dumps(_json_value(doc), sort_keys=True, indent=2, allow_nan=False) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = list(rows[0].keys()) if rows else []
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_cell(row[k]) for k in header])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# validation helpers; each failure names the offending flag


def _require(cond, flag, constraint):
    if not cond:
        raise UsageError(f"{flag}: {constraint}")


def _alpha(value, flag="--alpha"):
    _require(math.isfinite(value) and value > -1.0, flag, "must be a finite number > -1")
    return BetaPrior(value)


def _count(value, flag, minimum=0):
    _require(value >= minimum, flag, f"must be an integer >= {minimum}")
    return value


def _grid(args):
    _require(math.isfinite(args.alpha_start) and args.alpha_start > -1.0, "--alpha-start", "must be > -1")
    _require(math.isfinite(args.alpha_stop) and args.alpha_stop >= args.alpha_start, "--alpha-stop", "must be >= --alpha-start")
    _require(math.isfinite(args.alpha_step) and args.alpha_step > 0.0, "--alpha-step", "must be > 0")
    _require((args.alpha_stop - args.alpha_start) / args.alpha_step <= 1e6, "--alpha-step", "grid must have at most 1e6 steps")
    return AlphaGrid(args.alpha_start, args.alpha_stop, args.alpha_step)


def _workers(args):
    threads = getattr(args, "threads", None)
    if threads is None:
        return os.cpu_count() or 1
    _require(threads >= 1, "--threads", "must be >= 1")
    return threads


# ---------------------------------------------------------------------------
# commands; each returns (params, rows, exit_code)


def cmd_gain(args):
    prior = _alpha(args.alpha)
    _count(args.n, "--n")
    _require(0 <= args.h <= args.n, "--h", "must satisfy 0 <= h <= n")
    report = gain_report(prior, TossSummary(args.n, args.h), Outcome(args.next))
    params = {"alpha": args.alpha, "n": args.n, "h": args.h, "next": args.next}
    return params, [report.as_dict()], EXIT_OK


def cmd_fon(args):
    grid = _grid(args)
    for n in args.n:
        _count(n, "--n")
    rows = analysis.fon_sweep(grid, args.n, Outcome(args.next), _workers(args))
    params = {"alpha_start": args.alpha_start, "alpha_stop": args.alpha_stop,
              "alpha_step": args.alpha_step, "n": sorted(args.n), "next": args.next}
    return params, [analysis.as_record(r) for r in rows], EXIT_OK


def cmd_critical_alpha(args):
    grid = _grid(args)
    _require(args.tol > 0.0, "--tol", "must be > 0")
    rows = []
    for n in sorted(args.n):
        _count(n, "--n")
        try:
            value = analysis.critical_alpha(n, grid, args.tol, Outcome(args.next))
        except BracketError as exc:
            raise UsageError(f"--alpha-start/--alpha-stop: {exc}") from None
        rows.append({"n": n, "critical_alpha": value})
    params = {"alpha_start": args.alpha_start, "alpha_stop": args.alpha_stop,
              "alpha_step": args.alpha_step, "n": sorted(args.n), "next": args.next, "tol": args.tol}
    return params, rows, EXIT_OK


def cmd_robustness(args):
    grid = _grid(args)
    for n in args.n:
        _count(n, "--n", 1)
    rows = analysis.robustness_sweep(grid, args.n, Measure(args.measure), Outcome(args.next), _workers(args))
    params = {"alpha_start": args.alpha_start, "alpha_stop": args.alpha_stop, "alpha_step": args.alpha_step,
              "n": sorted(args.n), "measure": args.measure, "next": args.next}
    return params, [analysis.as_record(r) for r in rows], EXIT_OK


def cmd_expected(args):
    prior = _alpha(args.alpha)
    rows = []
    for n in sorted(args.n):
        _count(n, "--n", 1)
        h = np.arange(n + 1)
        values = expected_gain_values(prior.alpha, n, h)
        for hi, v in zip(h.tolist(), values.tolist()):
            rows.append({"alpha": prior.alpha, "n": n, "h": hi, "i_expected": v, "i_expected_asym": 1.0 / (2.0 * n)})
    return {"alpha": args.alpha, "n": sorted(args.n)}, rows, EXIT_OK


def cmd_black_swan(args):
    prior = _alpha(args.alpha)
    _count(args.n, "--n", 1)
    report = analysis.black_swan_report(prior, args.n)
    return {"alpha": args.alpha, "n": args.n}, [report.as_dict()], EXIT_OK


def cmd_trajectory(args):
    prior = _alpha(args.alpha)
    _require(0.0 < args.p < 1.0, "--p", "must lie strictly between 0 and 1")
    _count(args.steps, "--steps", 1)
    _require(args.seed >= 0, "--seed", "must be a non-negative integer")
    rows = analysis.trajectory(prior, args.p, args.steps, args.seed)
    params = {"alpha": args.alpha, "p": args.p, "steps": args.steps, "seed": args.seed}
    return params, [analysis.as_record(r) for r in rows], EXIT_OK


def cmd_table1(args):
    _count(args.n, "--n")
    alphas = tuple(args.alpha) if args.alpha else analysis.TABLE1_ALPHAS
    for a in alphas:
        _alpha(a)
    rows = analysis.table1(args.n, alphas)
    return {"n": args.n, "alpha": list(alphas)}, [analysis.as_record(r) for r in rows], EXIT_OK


def run_verification(tol, samples, seed, max_n=500, digamma_samples=50, digamma_tol=1e-9):
    """Oracle suite: closed forms against quadrature.

    Returns a list of row dicts, one per check, each with ``abs_err`` and
    ``passed``.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    rows = []

    def record(check, closed, numeric, limit, **where):
        err = abs(closed - numeric)
        rows.append({"check": check, **where, "closed_form": closed, "oracle": numeric,
                     "abs_err": err, "tol": limit, "passed": bool(err <= limit)})

    blank = {"alpha": None, "n": None, "h": None, "outcome": None}
    for _ in range(samples):
        alpha = float(rng.uniform(-0.95, 3.0))
        n = int(rng.integers(0, max_n + 1))
        h = int(rng.integers(0, n + 1))
        outcome = Outcome.HEAD if rng.random() < 0.5 else Outcome.TAIL
        prior, data = BetaPrior(alpha), TossSummary(n, h)
        where = {"alpha": alpha, "n": n, "h": h, "outcome": outcome.value}
        record("diff_gain", diff_gain(prior, data, outcome),
               oracle.diff_gain_by_quadrature(prior, data, outcome), tol, **where)
        record("rel_gain", rel_gain(prior, data, outcome),
               oracle.rel_gain_by_quadrature(prior, data, outcome), tol, **where)

    for _ in range(digamma_samples):
        a = float(rng.uniform(0.01, 20.0))
        b = float(rng.uniform(0.01, 20.0))
        lhs, rhs = oracle.digamma_integral_check(a, b)
        record("digamma_integral", rhs, lhs, digamma_tol, **{**blank, "alpha": a, "n": None, "h": None})
        rows[-1]["a"] = rows[-1].pop("alpha")

    for name, prior_tab, data in equality_cases():
        exp_diff, exp_rel = oracle.expected_equality_check(prior_tab, data)
        record(f"expected_equality[{name}]", exp_diff, exp_rel, tol,
               **{**blank, "n": data.n, "h": data.h})
    # normalise keys so every row has the same columns
    keys = ["check", "alpha", "a", "n", "h", "outcome", "closed_form", "oracle", "abs_err", "tol", "passed"]
    return [{k: r.get(k) for k in keys} for r in rows]


def equality_cases():
    """Three non-beta priors used by the expected-gain equality check."""
    triangular = oracle.TabulatedPrior.from_function(lambda p: 2.0 * p)
    bimodal = oracle.TabulatedPrior.from_function(
        lambda p: math.exp(-((p - 0.2) ** 2) / 0.005) + math.exp(-((p - 0.8) ** 2) / 0.005)
    )
    skewed = oracle.TabulatedPrior.from_function(lambda p: math.exp(3.0 * p) * (1.2 - math.sin(6.0 * p)))
    return [
        ("triangular", triangular, TossSummary(5, 5)),
        ("bimodal", bimodal, TossSummary(0, 0)),
        ("skewed", skewed, TossSummary(12, 4)),
    ]


def cmd_verify(args):
    _require(args.tol >= 1e-12, "--tol", "must be >= 1e-12")
    _count(args.samples, "--samples", 0)
    _require(args.seed >= 0, "--seed", "must be a non-negative integer")
    try:
        rows = run_verification(args.tol, args.samples, args.seed)
    except ConvergenceError as exc:
        print(f"verify: {exc}", file=sys.stderr)
        return {"tol": args.tol, "samples": args.samples, "seed": args.seed}, [], EXIT_VERIFY_FAILED
    failures = sum(not r["passed"] for r in rows)
    max_err = max((r["abs_err"] for r in rows), default=0.0)
    print(f"checks={len(rows)} failures={failures} max_err={max_err:.3e}", file=sys.stderr)
    params = {"tol": args.tol, "samples": args.samples, "seed": args.seed}
    return params, rows, EXIT_VERIFY_FAILED if failures else EXIT_OK


def cmd_malus_check(args):
    _count(args.grid_size, "--grid-size", 3)
    _require(args.tol > 0.0, "--tol", "must be > 0")
    g = analysis.malus_grid(args.grid_size)
    keys = ["theta", "p", "scaled_spread", "transformed_density", "jeffreys_density"]
    rows = [dict(zip(keys, vals)) for vals in zip(*(g[k].tolist() for k in keys))]
    deviation = analysis.malus_mapping_check(args.grid_size)
    print(f"max_deviation={deviation:.3e}", file=sys.stderr)
    code = EXIT_OK if deviation <= args.tol else EXIT_VERIFY_FAILED
    return {"grid_size": args.grid_size, "tol": args.tol}, rows, code


# ---------------------------------------------------------------------------
# parser


def _add_output(p):
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", default=None, help="write the document here instead of stdout")


def _add_grid(p, start=-0.9, stop=3.0, step=0.1):
    p.add_argument("--alpha-start", type=float, default=start)
    p.add_argument("--alpha-stop", type=float, default=stop)
    p.add_argument("--alpha-step", type=float, default=step)


def _add_next(p):
    p.add_argument("--next", choices=["head", "tail"], default="head")


def build_parser():
    parser = _Parser(prog="infogain", description="Bayesian information gain of coin tosses under beta priors.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gain", help="all gains for one (alpha, n, h, next)")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    _add_next(p)
    p.set_defaults(func=cmd_gain)

    p = sub.add_parser("fon", help="fraction of negative differential gains over an alpha grid")
    _add_grid(p)
    p.add_argument("--n", type=int, nargs="+", default=[1000])
    _add_next(p)
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=cmd_fon)

    p = sub.add_parser("critical-alpha", help="largest alpha with no negative differential gain")
    _add_grid(p, -0.9, 0.5, 0.05)
    p.add_argument("--n", type=int, nargs="+", default=[30])
    p.add_argument("--tol", type=float, default=1e-3)
    _add_next(p)
    p.set_defaults(func=cmd_critical_alpha)

    p = sub.add_parser("robustness", help="spread of a gain over all head counts")
    _add_grid(p, -0.9, 0.5, 0.05)
    p.add_argument("--n", type=int, nargs="+", default=[1000])
    p.add_argument("--measure", choices=[m.value for m in Measure], default="diff")
    _add_next(p)
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=cmd_robustness)

    p = sub.add_parser("expected", help="expected gain of the next toss for every h")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.set_defaults(func=cmd_expected)

    p = sub.add_parser("black-swan", help="gains of a head after n straight tails")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_black_swan)

    p = sub.add_parser("trajectory", help="simulate one run of tosses and report per-toss gains")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--p", type=float, required=True, help="true head probability")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_trajectory)

    p = sub.add_parser("table1", help="FoN at fixed n against its large-n limit")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--alpha", type=float, action="append", default=None)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("verify", help="check closed forms against quadrature")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("malus-check", help="Malus-law spread and Jeffreys-density identities")
    p.add_argument("--grid-size", type=int, default=1001)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_malus_check)

    for action in sub.choices.values():
        _add_output(action)
    return parser


def main(argv=None, stdout=None):
    stdout = sys.stdout if stdout is None else stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        params, rows, code = args.func(args)
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render(args.command, params, rows, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
