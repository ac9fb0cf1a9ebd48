"""Command-line entry point.

::

    alphaebt test --file1 a.csv --file2 b.csv --alpha 0.1,1 --permutations 999
    alphaebt simulate type1 --family dirichlet --dims 3,5 --sizes 50,100 --out t1.csv
    alphaebt simulate power --scenario 1 --dims 30 --sizes 100 --out s1.csv --plot s1.svg

Exit status is 0 on success, 2 for bad input and 3 for numerical failures.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time

import numpy as np

from .energy import permutation_test
from .experiments import K_GRID, ScenarioConfig, run_power_scenario, run_type1_experiment
from .plotting import emit_power_plot
from .results import write_results
from .rpbt import rpbt_test
from .simplex import CompositionError, read_csv

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3

log = logging.getLogger("alphaebt")


class InputError(Exception):
    pass


def _floats(text):
    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text):
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _k_grid(text):
    if ":" not in text:
        return _floats(text)
    try:
        a, b, step = (float(t) for t in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected start:stop:step, got {text!r}") from None
    if step <= 0 or b < a:
        raise argparse.ArgumentTypeError(f"empty k grid {text!r}")
    count = int(np.floor((b - a) / step + 1e-9)) + 1
    return tuple(round(a + i * step, 10) for i in range(count))


def _seed(text):
    s = int(text)
    if not 0 <= s < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return s


def build_parser():
    parser = argparse.ArgumentParser(
        prog="alphaebt",
        description="Equality-of-distributions tests for compositional data.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("test", help="test two CSV samples for equal distributions")
    t.add_argument("--file1", required=True)
    t.add_argument("--file2", required=True)
    t.add_argument("--method", choices=("alpha-ebt", "rpbt", "euclidean-ebt"), default="alpha-ebt")
    t.add_argument("--alpha", type=_floats, default=(1.0,), help="comma-separated alpha values")
    t.add_argument("--permutations", type=int, default=999)
    t.add_argument("--projections", type=int, default=100)
    t.add_argument("--combine", choices=("bh", "bonferroni"), default="bh")
    t.add_argument("--standardize", action="store_true")
    t.add_argument("--seed", type=_seed, default=0)
    t.add_argument("--out")
    t.add_argument("--format", choices=("json", "csv"), default="json")

    s = sub.add_parser("simulate", help="Monte Carlo size and power studies")
    ssub = s.add_subparsers(dest="study", required=True)

    def common(p):
        p.add_argument("--sizes", type=_ints, default=(100,))
        p.add_argument("--alpha", type=_floats, default=(0.1, 1.0))
        p.add_argument("--reps", type=int, default=500)
        p.add_argument("--permutations", type=int, default=299)
        p.add_argument("--projections", type=int, default=100)
        p.add_argument("--level", type=float, default=0.05)
        p.add_argument("--standardize", action="store_true")
        p.add_argument("--seed", type=_seed, default=0)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--out", required=True)
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    t1 = ssub.add_parser("type1", help="size under equal distributions")
    t1.add_argument("--family", choices=("dirichlet", "normal"), required=True)
    t1.add_argument("--dims", type=_ints, default=(3,))
    common(t1)

    pw = ssub.add_parser("power", help="power along a scenario's k grid")
    pw.add_argument("--scenario", type=int, choices=(1, 2, 3, 4, 5), required=True)
    pw.add_argument("--dims", type=int, default=30)
    pw.add_argument("--k-grid", type=_k_grid, default=K_GRID)
    pw.add_argument("--plot")
    common(pw)
    return parser


def _run_test(args):
    started = time.perf_counter()
    X = read_csv(args.file1)
    Y = read_csv(args.file2)
    if X.D != Y.D:
        raise InputError(f"{args.file1} has D={X.D} but {args.file2} has D={Y.D}")
    if args.method == "rpbt":
        res = rpbt_test(X, Y, args.projections, args.seed, combine=args.combine)
    else:
        alpha = None if args.method == "euclidean-ebt" else args.alpha
        res = permutation_test([X, Y], alpha, args.permutations, args.seed, args.standardize)
    doc = {
        "method": res.method,
        "alpha": None if res.alpha is None else list(res.alpha),
        "statistic": list(res.statistic),
        "p_value": list(res.p_value),
        "replications": res.replications,
        "seed": res.seed,
        "n": list(res.sizes),
        "D": X.D,
        "standardize": bool(args.standardize) if res.method != "rpbt" else None,
        "runtime_seconds": round(time.perf_counter() - started, 6),
    }
    text = _render_test(doc, args.format)
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    return EXIT_OK


def _render_test(doc, fmt):
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["method", "alpha", "statistic", "p_value", "replications", "seed", "n1", "n2", "D"])
    alphas = doc["alpha"] or [None] * len(doc["statistic"])
    for a, stat, p in zip(alphas, doc["statistic"], doc["p_value"]):
        w.writerow([
            doc["method"],
            "" if a is None else format(a, ".17g"),
            format(stat, ".17g"),
            format(p, ".17g"),
            doc["replications"],
            doc["seed"],
            *doc["n"],
            doc["D"],
        ])
    return buf.getvalue()


def _config(args, scenario_id, D, n, k_grid=K_GRID):
    return ScenarioConfig(
        scenario_id=scenario_id,
        D=D,
        n=n,
        k_grid=k_grid,
        alpha_values=args.alpha,
        mc_reps=args.reps,
        R_permutations=args.permutations,
        B_projections=args.projections,
        level=args.level,
        seed=args.seed,
        standardize=args.standardize,
    )


def _run_simulate(args):
    rows = []
    if args.study == "type1":
        for D in args.dims:
            for n in args.sizes:
                log.info("type I: %s D=%d n=%d", args.family, D, n)
                rows.extend(run_type1_experiment(_config(args, 1, D, n), args.family, args.workers))
    else:
        for n in args.sizes:
            log.info("power: scenario %d D=%d n=%d", args.scenario, args.dims, n)
            cfg = _config(args, args.scenario, args.dims, n, args.k_grid)
            rows.extend(run_power_scenario(cfg, args.workers))
    write_results(rows, args.out, args.format)
    if getattr(args, "plot", None):
        emit_power_plot(rows, args.plot, level=args.level)
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.command == "test":
            return _run_test(args)
        return _run_simulate(args)
    except (np.linalg.LinAlgError, FloatingPointError, ArithmeticError) as exc:
        print(f"alphaebt: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (InputError, CompositionError, ValueError, OSError) as exc:
        print(f"alphaebt: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
