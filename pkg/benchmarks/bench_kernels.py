"""Time the numba and numpy flavours of each hot kernel side by side.

    python3 benchmarks/bench_kernels.py [--repeats 5]

Also times a full IPM selection under each backend (in a subprocess, since
the backend is fixed at import time by SUBSEL_NUMBA).
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np
from scipy.spatial.distance import cdist

from subsel import _kernels as K
from subsel.suites import runtime_data


def best_of(fn, repeats):
    fn()  # warm-up (includes JIT compilation for the numba flavour)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def kernel_cases():
    rng = np.random.default_rng(0)
    A = runtime_data(4000, 64)  # decaying spectrum, so power iteration converges
    v0 = rng.standard_normal(64)
    v0 /= np.linalg.norm(v0)
    d = rng.standard_normal(64)
    d /= np.linalg.norm(d)
    X = rng.standard_normal((1500, 8))
    D = cdist(X, X)
    med = np.asarray(K.pam_build_np(D, 10))
    sq = np.empty(A.shape[0])
    return {
        "power_iterate (4000x64)": (
            lambda: K.power_iterate_nb(A, v0.copy(), 1e-9, 1000),
            lambda: K.power_iterate_np(A, v0.copy(), 1e-9, 1000)),
        "deflate_inplace (4000x64)": (
            lambda: K.deflate_inplace_nb(A.copy(), d, sq),
            lambda: K.deflate_inplace_np(A.copy(), d, sq)),
        "pam_build (M=1500, K=10)": (
            lambda: K.pam_build_nb(D, 10), lambda: K.pam_build_np(D, 10)),
        "pam_best_swap (M=1500, K=10)": (
            lambda: K.pam_best_swap_nb(D, med), lambda: K.pam_best_swap_np(D, med)),
    }


SELECT_SNIPPET = """
import time, numpy as np
from subsel import ipm_select
from subsel.suites import runtime_data
A = runtime_data(8000, 64)
ipm_select(A, 10)
best = min((lambda t0: (ipm_select(A, 10), time.perf_counter() - t0)[1])(time.perf_counter())
           for _ in range({repeats}))
print(best)
"""


def selection_time(flag, repeats):
    env = {**os.environ, "SUBSEL_NUMBA": flag}
    out = subprocess.run([sys.executable, "-c", SELECT_SNIPPET.format(repeats=repeats)],
                         env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args(argv)
    print(f"{'kernel':<32}{'numba s':>12}{'numpy s':>12}{'numpy/numba':>14}")
    for name, (nb, np_) in kernel_cases().items():
        t_nb, t_np = best_of(nb, args.repeats), best_of(np_, args.repeats)
        print(f"{name:<32}{t_nb:>12.5f}{t_np:>12.5f}{t_np / t_nb:>14.2f}")
    t_nb, t_np = selection_time("1", args.repeats), selection_time("0", args.repeats)
    print(f"{'ipm_select (8000x64, K=10)':<32}{t_nb:>12.5f}{t_np:>12.5f}{t_np / t_nb:>14.2f}")


if __name__ == "__main__":
    main()
