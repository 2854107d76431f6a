"""Command-line front end: ``subsel select|eval|diagnose|synth|bench|suite``.

Exit codes: 0 success, 1 data error, 2 usage error.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import io
from .baselines import (
    cluster_pick_select,
    det_greedy_select,
    kmedoids_select,
    qrcp_select,
    random_select,
    uniform_select,
    volume_select,
)
from .bench import random_baseline_error, run_grid, write_rows
from .datagen import SynthSpec, generate
from .metrics import best_rank_k_error, check_lemma1, projection_error, spectrum_diagnostics
from .selection import CompoundOptions, StoppingRule, ipm_select, ipm_select_compound
from .suites import SUITES, run_suite

METHOD_CHOICES = ["ipm", "random", "uniform", "kmedoids", "volume", "detgreedy", "qrcp",
                  "clusterpick", "ipm-compound"]


ROUNDOFF_REL = 1e-12


class UsageError(Exception):
    pass


def _load(path, has_header):
    return io.read_matrix(path, has_header=has_header)


def cmd_select(args):
    if args.k is None and args.residual_frac is None:
        raise UsageError("select needs --k, --residual-frac or both")
    if args.method == "ipm-compound" and args.scores is None:
        raise UsageError("--method ipm-compound requires --scores")
    if args.method not in ("ipm", "ipm-compound") and args.k is None:
        raise UsageError(f"--method {args.method} requires --k")
    if args.residual_frac is not None and args.method != "ipm":
        raise UsageError("--residual-frac is only supported by --method ipm")
    A = _load(args.input, args.has_header)
    K, seed = args.k, args.seed
    m = args.method
    if m == "ipm":
        res = ipm_select(A, StoppingRule(K, args.residual_frac), seed=seed)
    elif m == "ipm-compound":
        q = io.read_csv(args.scores).ravel()
        res = ipm_select_compound(A, K, CompoundOptions(q, args.alpha0, args.decay), seed=seed)
    elif m == "random":
        res = random_select(A, K, seed=seed)
    elif m == "uniform":
        res = uniform_select(A.shape[0], K)
    elif m == "kmedoids":
        res = kmedoids_select(A, K, seed=seed, max_swaps=args.max_swaps)
    elif m == "volume":
        res = volume_select(A, K, seed=seed)
    elif m == "detgreedy":
        res = det_greedy_select(A, K)
    elif m == "qrcp":
        res = qrcp_select(A, K)
    else:
        res = cluster_pick_select(A, K, inner=args.inner, seed=seed)
    if args.output:
        io.write_result(res, args.output)
    else:
        sys.stdout.write(io.dumps_result(res))
    return 0


def cmd_eval(args):
    A = _load(args.input, args.has_header)
    res = io.read_result(args.result)
    K = len(res.indices)
    # errors at roundoff level of ||A||_F^2 count as exact zeros
    floor = ROUNDOFF_REL * float(np.sum(A * A))
    err = projection_error(A, res.indices)
    err = 0.0 if err <= floor else err
    base = random_baseline_error(A, K, args.seed, args.trials)
    base = 0.0 if base <= floor else base
    ratio = err / base if base > 0 else 0.0
    print(f"projection_error: {err:.12g}")
    print(f"random_error_mean: {base:.12g}")
    print(f"error_ratio_vs_random: {ratio:.12g}")
    if min(A.shape) <= 2000:
        best = best_rank_k_error(A, K)
        print(f"best_rank_k_error: {0.0 if best <= floor else best:.12g}")
    return 0


def cmd_diagnose(args):
    A = _load(args.input, args.has_header)
    if not np.any(A):
        raise ValueError("matrix is identically zero")
    diag = spectrum_diagnostics(A)
    print(f"rom: {diag.rom:.12g}")
    print("eigenvalues: " + " ".join(f"{x:.12g}" for x in diag.eigenvalues))
    if diag.sensitivities is None:
        print("sensitivities: undefined (repeated eigenvalues)")
    else:
        print("sensitivities: " + " ".join(f"{x:.12g}" for x in diag.sensitivities))
    print(f"lemma1_margin: {check_lemma1(A):.12g}")
    return 0


def cmd_synth(args):
    fields = {}
    if args.config:
        fields.update(json.loads(Path(args.config).read_text()))
    for name in ("kind", "M", "N", "n_subspaces", "subspace_dim", "n_clusters",
                 "cluster_spread", "noise_sigma", "outlier_count", "outlier_scale", "seed"):
        val = getattr(args, name)
        if val is not None:
            fields[name] = val
    if args.singular_values:
        fields["singular_values"] = [float(x) for x in args.singular_values.split(",")]
    A, labels = generate(SynthSpec.from_dict(fields))
    io.write_matrix(A, args.output)
    labels_path = args.labels or str(args.output) + ".labels.csv"
    Path(labels_path).write_text("".join(f"{int(x)}\n" for x in labels))
    print(f"wrote {A.shape[0]}x{A.shape[1]} matrix to {args.output}, labels to {labels_path}")
    return 0


def cmd_bench(args):
    config = json.loads(Path(args.config).read_text())
    if args.workers is not None:
        config["workers"] = args.workers
    rows = run_grid(config)
    if args.output:
        write_rows(rows, args.output)
    else:
        write_rows(rows, sys.stdout)
    return 0


def cmd_suite(args):
    report = run_suite(args.name)
    print(report.to_table())
    if args.output:
        Path(args.output).write_text(report.to_json())
    return 0 if report.passed else 1


def build_parser():
    p = argparse.ArgumentParser(prog="subsel", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add_input(sp):
        sp.add_argument("--input", "-i", required=True, help="matrix file (.csv or binary)")
        sp.add_argument("--has-header", action="store_true", help="skip first CSV line")

    s = sub.add_parser("select", help="select rows and write a result JSON")
    add_input(s)
    s.add_argument("--output", "-o")
    s.add_argument("--method", choices=METHOD_CHOICES, default="ipm")
    s.add_argument("--k", type=int)
    s.add_argument("--residual-frac", type=float)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--scores", help="CSV with one uncertainty score per row")
    s.add_argument("--alpha0", type=float, default=1.0)
    s.add_argument("--decay", type=float, default=0.95)
    s.add_argument("--max-swaps", type=int, default=100)
    s.add_argument("--inner", choices=["random", "medoid", "ipm"], default="medoid")
    s.set_defaults(func=cmd_select)

    e = sub.add_parser("eval", help="score a result against random selection")
    add_input(e)
    e.add_argument("--result", "-r", required=True)
    e.add_argument("--trials", type=int, default=20)
    e.add_argument("--seed", type=int, default=0)
    e.set_defaults(func=cmd_eval)

    d = sub.add_parser("diagnose", help="ROM, spectrum, sensitivities, Lemma 1 margin")
    add_input(d)
    d.set_defaults(func=cmd_diagnose)

    y = sub.add_parser("synth", help="write a synthetic matrix and labels")
    y.add_argument("--output", "-o", required=True)
    y.add_argument("--labels")
    y.add_argument("--config", help="JSON file with SynthSpec fields")
    y.add_argument("--kind", choices=["subspace_union", "gaussian_clusters",
                                      "controlled_spectrum"])
    y.add_argument("--m", dest="M", type=int)
    y.add_argument("--n", dest="N", type=int)
    y.add_argument("--n-subspaces", type=int)
    y.add_argument("--subspace-dim", type=int)
    y.add_argument("--n-clusters", type=int)
    y.add_argument("--cluster-spread", type=float)
    y.add_argument("--singular-values", help="comma-separated")
    y.add_argument("--noise-sigma", type=float)
    y.add_argument("--outlier-count", type=int)
    y.add_argument("--outlier-scale", type=float)
    y.add_argument("--seed", type=int)
    y.set_defaults(func=cmd_synth)

    b = sub.add_parser("bench", help="run a benchmark grid from a JSON config")
    b.add_argument("--config", "-c", required=True)
    b.add_argument("--output", "-o")
    b.add_argument("--workers", type=int)
    b.set_defaults(func=cmd_bench)

    t = sub.add_parser("suite", help="run a curated acceptance suite")
    t.add_argument("name", choices=SUITES)
    t.add_argument("--output", "-o", help="write the report as JSON")
    t.set_defaults(func=cmd_suite)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"subsel: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"subsel: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
