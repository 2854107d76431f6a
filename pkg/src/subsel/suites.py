"""Checked-in benchmark and property sweeps.

Each sweep returns one or more :class:`Check` records carrying the measured
value next to its threshold; :func:`run_suite` bundles them into a
:class:`SuiteReport`.
"""

import json
import math
import os
import platform
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from ._accel import backend_name
from .baselines import det_greedy_select, kmedoids_select, qrcp_select, random_select
from .bench import random_baseline_error
from .datagen import SynthSpec, generate
from .metrics import (
    check_eigvec_perturbation,
    check_lemma1,
    check_prop1,
    check_vs_bound,
    projection_error,
    sensitivity_coeffs,
)
from .selection import ipm_select

NUMERIC_SLACK = 1e-9


@dataclass
class Check:
    name: str
    passed: bool
    measured: object
    threshold: object
    detail: str = ""


@dataclass
class SuiteReport:
    suite: str
    checks: list = field(default_factory=list)
    environment: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def to_dict(self):
        return {"suite": self.suite, "passed": self.passed, "elapsed_seconds": self.elapsed,
                "environment": self.environment, "checks": [asdict(c) for c in self.checks]}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, default=_jsonable)

    def to_table(self):
        lines = [f"suite {self.suite}: {'PASS' if self.passed else 'FAIL'}"]
        width = max((len(c.name) for c in self.checks), default=10)
        for c in self.checks:
            status = "pass" if c.passed else "FAIL"
            lines.append(f"  {status}  {c.name:<{width}}  measured={_fmt(c.measured)}  "
                         f"threshold={_fmt(c.threshold)}  {c.detail}".rstrip())
        return "\n".join(lines)


def _jsonable(x):
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(type(x))


def _fmt(x):
    if isinstance(x, float):
        return f"{x:.6g}"
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in x) + "]"
    return str(x)


def environment_stamp():
    return {
        "backend": backend_name(),
        "threads": os.cpu_count(),
        "python": platform.python_version(),
        "numpy": np.__version__,
        "build": __version__,
    }


# -- random matrices for property sweeps ------------------------------------

def sweep_matrix(seed, max_m=40, max_n=40):
    """A seeded random matrix of random shape and random structure."""
    rng = np.random.default_rng(seed)
    M = int(rng.integers(1, max_m + 1))
    N = int(rng.integers(1, max_n + 1))
    kind = seed % 4
    if kind == 0:
        return rng.standard_normal((M, N))
    if kind == 1:
        r = int(rng.integers(1, min(M, N) + 1))
        return rng.standard_normal((M, r)) @ rng.standard_normal((r, N))
    if kind == 2:
        return rng.standard_normal((M, N)) * rng.exponential(1.0, (M, 1))
    return rng.standard_normal((M, N)) + 3.0 * rng.standard_normal(N)


def _ipm_residual_checks(seed, fn):
    """Apply ``fn`` to the live residual rows at every IPM step of one run."""
    A = sweep_matrix(seed)
    values = []

    def cb(step, R, trip, corr, live):
        if live.any():
            values.append(fn(R[live]))

    ipm_select(A, min(A.shape), seed=seed, callback=cb)
    return values


def lemma1_sweep(n_matrices=1000, n_runs=100, seed=0):
    margins = [check_lemma1(sweep_matrix(seed + i)) for i in range(n_matrices)]
    steps = []
    for r in range(n_runs):
        steps.extend(_ipm_residual_checks(seed + 10_000 + r, check_lemma1))
    worst = float(min(margins + steps))
    return Check("lemma1_margin", worst >= -NUMERIC_SLACK, worst, -NUMERIC_SLACK,
                 f"{len(margins)} matrices, {len(steps)} IPM steps")


def prop1_sweep(n_matrices=1000, n_runs=100, seed=0):
    margins = [check_prop1(sweep_matrix(seed + i)) for i in range(n_matrices)]
    steps = []
    for r in range(n_runs):
        steps.extend(_ipm_residual_checks(seed + 10_000 + r, check_prop1))
    worst = float(min(margins + steps))
    return Check("prop1_margin", worst >= -NUMERIC_SLACK, worst, -NUMERIC_SLACK,
                 f"{len(margins)} matrices, {len(steps)} IPM steps")


def volume_bound_sweep(n_matrices=200, seed=0, max_m=8, max_k=3):
    """Exhaustive check of E||A - pi_T(A)||^2 <= (K+1)||A - A_K||^2."""
    worst = -math.inf
    cases = 0
    for i in range(n_matrices):
        rng = np.random.default_rng(seed + 20_000 + i)
        M = 1 + i % max_m
        N = int(rng.integers(1, 7))
        A = rng.standard_normal((M, N))
        if i % 3 == 1:
            r = int(rng.integers(1, min(M, N) + 1))
            A = rng.standard_normal((M, r)) @ rng.standard_normal((r, N))
        elif i % 3 == 2:
            A *= rng.exponential(1.0, (M, 1))
        rank = np.linalg.matrix_rank(A)
        for K in range(1, min(max_k, M) + 1):
            if K > rank:
                continue
            lhs, rhs = check_vs_bound(A, K)
            worst = max(worst, lhs - rhs)
            cases += 1
    return Check("volume_sampling_bound", worst <= NUMERIC_SLACK, float(worst), NUMERIC_SLACK,
                 f"max(lhs - rhs) over {cases} (matrix, K) cases")


def random_spectrum_pair(rng, min_gap=0.1):
    n = int(rng.integers(3, 9))
    gaps = rng.uniform(min_gap, 2.0, n - 1)
    lam = (np.concatenate([[0.0], np.cumsum(gaps)]) + rng.uniform(0.0, 1.0))[::-1]
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    C = (Q * lam) @ Q.T
    C = 0.5 * (C + C.T)
    S = rng.standard_normal((n, n))
    S = 0.5 * (S + S.T)
    return C, S / np.linalg.norm(S)


def _first_order_motion(C, S, i):
    lam, V = np.linalg.eigh(C)
    order = np.argsort(lam)[::-1]
    lam, V = lam[order], V[:, order]
    coef = np.array([0.0 if j == i else (V[:, j] @ S @ V[:, i]) / (lam[i] - lam[j])
                     for j in range(lam.size)])
    return float(np.linalg.norm(coef)), sensitivity_coeffs(lam)[i]


def lemma2_sweep(n_pairs=200, seed=0, eps=1e-6, eps_small=1e-7, slack=0.05):
    """Three checks on every eigenvector of every (C, dC) pair:

    * ``||dv_i|| <= s_i ||dC||_F (1 + slack)`` at ``eps``;
    * ratio ``||dv_i|| / (s_i ||dC||_F)`` at ``eps_small`` <= the ratio at
      ``eps``, per eigenvector;
    * mean distance of that ratio from its first-order value shrinks when
      going from ``eps`` to ``eps_small``.
    """
    rng = np.random.default_rng(seed)
    worst_ratio = 0.0
    order_viol = 0
    total = 0
    dev = np.zeros(2)
    for _ in range(n_pairs):
        C, S = random_spectrum_pair(rng)
        for i in range(C.shape[0]):
            lhs, bound = check_eigvec_perturbation(C, eps * S, i)
            lhs_s, bound_s = check_eigvec_perturbation(C, eps_small * S, i)
            r, r_s = lhs / bound, lhs_s / bound_s
            worst_ratio = max(worst_ratio, r)
            order_viol += int(r_s > r)
            motion, s_i = _first_order_motion(C, S, i)
            r0 = motion / s_i
            dev += (abs(r - r0), abs(r_s - r0))
            total += 1
    dev /= total
    return [
        Check("lemma2_bound", worst_ratio <= 1.0 + slack, worst_ratio, 1.0 + slack,
              f"max ||dv||/(s||dC||) at eps={eps:g} over {total} eigenvectors"),
        Check("lemma2_ratio_ordering", order_viol == 0, int(order_viol), 0,
              f"eigenvectors whose ratio at eps={eps_small:g} exceeds the ratio at "
              f"eps={eps:g}, of {total}"),
        Check("lemma2_first_order_convergence", bool(dev[1] <= dev[0]), float(dev[1]), float(dev[0]),
              "mean |ratio - first-order ratio| at the smaller eps vs the larger"),
    ]


def decreasing_gap_spectrum(rng):
    n = int(rng.integers(3, 13))
    gaps = np.sort(rng.uniform(0.05, 3.0, n - 1))[::-1]
    gaps = gaps + np.linspace(1e-3 * (n - 1), 0.0, n - 1)  # make strictly decreasing
    lam = np.concatenate([[0.0], np.cumsum(gaps[::-1])])[::-1] + rng.uniform(0.0, 2.0)
    return lam


def prop2_sweep(n_spectra=100, seed=0):
    rng = np.random.default_rng(seed)
    violations = 0
    for _ in range(n_spectra):
        lam = decreasing_gap_spectrum(rng)
        g = -np.diff(lam)
        assert np.all(np.diff(g) < 0), "generator must give strictly decreasing gaps"
        s = sensitivity_coeffs(lam)
        violations += int(not np.all(s[0] < s[1:]))
    return Check("prop2_s1_smallest", violations == 0, violations, 0,
                 f"spectra with some s_i <= s_1, of {n_spectra}")


# -- Fig. 4 style experiments ---------------------------------------------

ERROR_RATIO_DATA = dict(kind="subspace_union", M=200, N=50, n_subspaces=5, subspace_dim=5,
                        noise_sigma=0.05)


def error_ratio_table(trials=100, ks=range(1, 11), seed=0, random_draws=10, data=None):
    """Mean (over trials) of method error / mean random error, per K.

    IPM and det-greedy are run once with the largest K; both are greedy, so
    their K-prefixes are exactly the K-selections.
    """
    data = dict(ERROR_RATIO_DATA if data is None else data)
    ks = list(ks)
    kmax = max(ks)
    ratios = {m: np.zeros(len(ks)) for m in ("ipm", "kmedoids", "detgreedy", "random")}
    for t in range(trials):
        A, _ = generate(SynthSpec(**data, seed=seed + t))
        ipm = ipm_select(A, kmax, seed=seed + t).indices
        dg = det_greedy_select(A, kmax).indices
        for j, K in enumerate(ks):
            base = random_baseline_error(A, K, seed + t, random_draws)
            ratios["ipm"][j] += projection_error(A, ipm[:K]) / base
            ratios["detgreedy"][j] += projection_error(A, dg[:K]) / base
            ratios["kmedoids"][j] += projection_error(A, kmedoids_select(A, K).indices) / base
            rnd = random_select(A, K, seed=seed + t + 7_919).indices
            ratios["random"][j] += projection_error(A, rnd) / base
    return ks, {m: (v / trials).tolist() for m, v in ratios.items()}


def error_ratio_checks(trials=100, seed=0):
    ks, r = error_ratio_table(trials=trials, seed=seed)
    ipm = np.array(r["ipm"])
    km = np.array(r["kmedoids"])
    big = np.array(ks) >= 5
    return [
        Check("ipm_ratio_below_random", bool(np.all(ipm < 1.0)), ipm.tolist(), 1.0,
              f"mean IPM/random error ratio for K={ks[0]}..{ks[-1]}"),
        Check("ipm_ratio_vs_kmedoids", bool(np.all(ipm[big] <= km[big])),
              ipm[big].tolist(), km[big].tolist(), "IPM ratio <= k-medoids ratio for K >= 5"),
    ], r


RUNTIME_SIZES = (500, 1000, 2000, 4000, 8000)


def runtime_data(M, N=64, seed=0):
    spec = SynthSpec(kind="controlled_spectrum", M=M, N=N,
                     singular_values=(0.85 ** np.arange(N)).tolist(), seed=seed)
    return generate(spec)[0]


def _best_time(fn, repeats):
    fn()  # warm-up, discarded
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def runtime_checks(sizes=RUNTIME_SIZES, N=64, K=10, repeats=5, pam_at=4000,
                   slope_band=(0.8, 1.3), seed=0):
    """IPM wall-clock vs M (log-log slope) and IPM vs PAM at one size."""
    times = [_best_time(lambda A=runtime_data(M, N, seed): ipm_select(A, K, seed=seed), repeats)
             for M in sizes]
    slope = float(np.polyfit(np.log(sizes), np.log(times), 1)[0])
    A = runtime_data(pam_at, N, seed)
    t_ipm = _best_time(lambda: ipm_select(A, K, seed=seed), repeats)
    t0 = time.perf_counter()
    kmedoids_select(A, K)
    t_pam = time.perf_counter() - t0
    lo, hi = slope_band
    return [
        Check("ipm_time_slope", bool(lo <= slope <= hi), slope, list(slope_band),
              "least-squares slope of log(time) vs log(M); times " +
              ", ".join(f"{M}:{t:.4f}s" for M, t in zip(sizes, times))),
        Check("ipm_faster_than_pam", bool(t_ipm < t_pam), t_ipm, t_pam,
              f"wall-clock seconds at M={pam_at}, N={N}, K={K}"),
    ]


def outlier_checks(trials=20, M=200, N=50, K=10, seed=0):
    """Count selected outliers per method on data with 5% outliers at 5x scale."""
    n_out = max(1, round(0.05 * M))
    counts = {"ipm": 0, "kmedoids": 0, "detgreedy": 0, "qrcp": 0, "random": 0}
    for t in range(trials):
        spec = SynthSpec(kind="subspace_union", M=M, N=N, n_subspaces=5, subspace_dim=5,
                         noise_sigma=0.05, outlier_count=n_out, outlier_scale=5.0,
                         seed=seed + t)
        A, labels = generate(spec)
        picks = {
            "ipm": ipm_select(A, K, seed=seed + t).indices,
            "kmedoids": kmedoids_select(A, K).indices,
            "detgreedy": det_greedy_select(A, K).indices,
            "qrcp": qrcp_select(A, K).indices,
            "random": random_select(A, K, seed=seed + t).indices,
        }
        for m, idx in picks.items():
            counts[m] += int(np.sum(labels[idx] == -1))
    mean = {m: c / trials for m, c in counts.items()}
    return [Check("ipm_fewer_outliers_than_detgreedy", bool(mean["ipm"] <= mean["detgreedy"]),
                  mean["ipm"], mean["detgreedy"],
                  "mean outliers selected per run: " +
                  ", ".join(f"{m}={v:.2f}" for m, v in mean.items()))]


def run_suite(name, **kwargs):
    """Run one of ``lemma``, ``error-ratio``, ``runtime``, ``outlier``."""
    t0 = time.perf_counter()
    if name == "lemma":
        seed = kwargs.get("seed", 0)
        checks = [lemma1_sweep(seed=seed), prop1_sweep(seed=seed),
                  volume_bound_sweep(seed=seed), *lemma2_sweep(seed=seed),
                  prop2_sweep(seed=seed)]
    elif name == "error-ratio":
        checks, _ = error_ratio_checks(**kwargs)
    elif name == "runtime":
        checks = runtime_checks(**kwargs)
    elif name == "outlier":
        checks = outlier_checks(**kwargs)
    else:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITES}")
    return SuiteReport(name, checks, environment_stamp(), time.perf_counter() - t0)


SUITES = ("lemma", "error-ratio", "runtime", "outlier")
