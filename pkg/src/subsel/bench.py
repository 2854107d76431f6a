"""Method x size x K x trial benchmark grid with a flat CSV output."""

import csv
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .baselines import run_method
from .datagen import SynthSpec, generate
from .metrics import projection_error

COLUMNS = ["method", "M", "N", "K", "trial", "seed", "error",
           "error_ratio_vs_random", "elapsed_seconds"]


def cell_seed(seed, size_index, trial):
    return int(np.random.SeedSequence([seed, size_index, trial]).generate_state(1)[0])


def random_baseline_error(A, K, seed, draws=10):
    """Mean projection error of ``draws`` uniformly random K-subsets."""
    if K == 0:
        return projection_error(A, [])
    rng = np.random.default_rng(seed)
    M = A.shape[0]
    return float(np.mean([projection_error(A, rng.choice(M, K, replace=False))
                          for _ in range(draws)]))


def timed(method, A, K, seed, warmup=True):
    if warmup:
        run_method(method, A, K, seed=seed)
    t0 = time.perf_counter()
    res = run_method(method, A, K, seed=seed)
    return res, time.perf_counter() - t0


def _run_cell(args):
    config, size_index, trial = args
    size = config["sizes"][size_index]
    seed = cell_seed(config.get("seed", 0), size_index, trial)
    gen = dict(config.get("generator", {}))
    spec = SynthSpec.from_dict({**gen, "M": size["M"], "N": size["N"], "seed": seed})
    A, _ = generate(spec)
    draws = config.get("random_draws", 10)
    rows = []
    for K in config["ks"]:
        base = random_baseline_error(A, K, seed, draws)
        for method in config["methods"]:
            res, elapsed = timed(method, A, K, seed, config.get("warmup", True))
            err = projection_error(A, res.indices)
            rows.append({
                "method": method, "M": size["M"], "N": size["N"], "K": K,
                "trial": trial, "seed": seed, "error": err,
                "error_ratio_vs_random": err / base if base > 0 else 0.0,
                "elapsed_seconds": elapsed,
            })
    return rows


def run_grid(config):
    """Run every (size, trial) cell of ``config`` and return sorted row dicts.

    ``config`` keys: ``methods``, ``sizes`` (list of ``{"M", "N"}``), ``ks``,
    ``trials``, ``seed``, ``generator`` (SynthSpec fields other than M, N and
    seed); optional ``random_draws`` (default 10), ``workers`` (default 1)
    and ``warmup`` (default true).
    """
    for key in ("methods", "sizes", "ks", "trials"):
        if key not in config:
            raise ValueError(f"bench config missing {key!r}")
    jobs = [(config, si, t) for si in range(len(config["sizes"]))
            for t in range(config["trials"])]
    workers = int(config.get("workers", 1))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_cell, jobs))
    else:
        chunks = [_run_cell(j) for j in jobs]
    rows = [r for chunk in chunks for r in chunk]
    rows.sort(key=lambda r: (r["method"], r["M"], r["N"], r["K"], r["trial"]))
    return rows


def write_rows(rows, path_or_file):
    def _write(fh):
        w = csv.DictWriter(fh, fieldnames=COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})

    if hasattr(path_or_file, "write"):
        _write(path_or_file)
    else:
        with open(path_or_file, "w", newline="") as fh:
            _write(fh)
