"""Iterative projection and matching (IPM) row selection."""

import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .linalg import (
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    as_data_matrix,
    leading_singular_triplet,
)

DEAD_ROW_EPS = 1e-8


class SelectionWarning(UserWarning):
    pass


@dataclass
class SelectionResult:
    """Outcome of a selection run.

    ``indices`` keeps selection order.  ``sigmas`` holds the leading singular
    value of the residual matrix at each step (IPM only) and
    ``residual_energies[k]`` the squared Frobenius norm of what the first
    ``k + 1`` picks leave unexplained.
    """

    indices: list
    sigmas: list = field(default_factory=list)
    residual_energies: list = field(default_factory=list)
    elapsed: float = 0.0
    method: str = ""
    params: dict = field(default_factory=dict)
    info: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.indices)


@dataclass(frozen=True)
class StoppingRule:
    """Stop after ``k_max`` picks or once the residual energy drops to
    ``residual_fraction * ||A||_F^2``, whichever comes first."""

    k_max: int = None
    residual_fraction: float = None

    def __post_init__(self):
        if self.k_max is None and self.residual_fraction is None:
            raise ValueError("set k_max, residual_fraction or both")
        if self.k_max is not None and self.k_max < 0:
            raise ValueError("k_max must be >= 0")
        if self.residual_fraction is not None and not 0.0 < self.residual_fraction <= 1.0:
            raise ValueError("residual_fraction must lie in (0, 1]")


@dataclass(frozen=True)
class CompoundOptions:
    """Blend weights for the IPM + uncertainty criterion.

    ``scores`` are consumed as given; put them on a scale comparable to a
    correlation in [0, 1] before calling.
    """

    scores: np.ndarray
    alpha0: float = 1.0
    decay: float = 0.95

    def __post_init__(self):
        scores = np.asarray(self.scores, dtype=np.float64).ravel()
        if not np.all(np.isfinite(scores)):
            raise ValueError("uncertainty scores must be finite")
        if np.any(scores < 0):
            raise ValueError("uncertainty scores must be non-negative")
        if not 0.0 <= self.alpha0 <= 1.0:
            raise ValueError("alpha0 must lie in [0, 1]")
        if not 0.0 < self.decay <= 1.0:
            raise ValueError("decay must lie in (0, 1]")
        object.__setattr__(self, "scores", scores)


def _as_rule(stop):
    if isinstance(stop, StoppingRule):
        return stop
    return StoppingRule(k_max=int(stop))


def ipm_select(A, stop, *, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER, seed=0,
               eps=DEAD_ROW_EPS, callback=None):
    """Greedy row selection by iterative projection and matching.

    Each step finds the leading right singular vector ``v`` of the current
    residual matrix, picks the live row whose normalised residual has the
    largest ``|v . r|`` (lowest index on ties), and projects every row onto
    the orthogonal complement of that normalised residual row.  A row dies
    once its residual norm falls to ``eps`` times its original norm.

    ``stop`` is a :class:`StoppingRule` or an int ``K``.  ``callback``, if
    given, is called before each deflation as
    ``callback(step, residual, triplet, correlations, live)``.
    """
    return _run(A, _as_rule(stop), None, tol, max_iter, seed, eps, callback, "ipm")


def ipm_select_compound(A, K, copts, *, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER,
                        seed=0, eps=DEAD_ROW_EPS, callback=None):
    """IPM with the matching score ``alpha |v . r| + (1 - alpha) q``.

    ``alpha`` starts at ``copts.alpha0`` and is multiplied by ``copts.decay``
    after every pick.
    """
    A = as_data_matrix(A)
    if copts.scores.shape[0] != A.shape[0]:
        raise ValueError(
            f"expected {A.shape[0]} uncertainty scores, got {copts.scores.shape[0]}"
        )
    return _run(A, _as_rule(K), copts, tol, max_iter, seed, eps, callback, "ipm-compound")


def _run(A, rule, copts, tol, max_iter, seed, eps, callback, method):
    A = as_data_matrix(A)
    t0 = time.perf_counter()
    M, _ = A.shape
    params = {"k": rule.k_max, "residual_fraction": rule.residual_fraction,
              "tol": tol, "max_iter": max_iter, "seed": seed}
    if copts is not None:
        params.update(alpha0=copts.alpha0, decay=copts.decay)
    info = {}

    k_max = M if rule.k_max is None else rule.k_max
    if k_max > M:
        warnings.warn(f"requested {k_max} rows but the matrix has only {M}; "
                      "selection truncated", SelectionWarning, stacklevel=3)
        info["truncated"] = True
        k_max = M

    R = A.copy()
    orig_sq = np.einsum("ij,ij->i", A, A)
    sq = orig_sq.copy()
    total = float(orig_sq.sum())
    floor = (eps * eps) * orig_sq
    live = orig_sq > 0.0
    threshold = None if rule.residual_fraction is None else rule.residual_fraction * total
    alpha = None if copts is None else float(copts.alpha0)

    indices, sigmas, energies, unconverged = [], [], [], []
    energy = total
    for step in range(k_max):
        if not live.any() or energy == 0.0:
            break
        if threshold is not None and energy <= threshold:
            break
        trip = leading_singular_triplet(R, tol=tol, max_iter=max_iter, seed=seed + step)
        if trip.zero:
            break
        if not trip.converged:
            unconverged.append(step)

        norms = np.sqrt(sq)
        corr = np.zeros(M)
        corr[live] = np.abs(R[live] @ trip.right) / norms[live]
        if alpha is None:
            score = corr
        else:
            score = alpha * corr + (1.0 - alpha) * copts.scores
        score = np.where(live, score, -np.inf)
        pick = int(np.argmax(score))
        if callback is not None:
            callback(step, R, trip, corr, live.copy())

        d = R[pick] / norms[pick]
        _kernels.deflate_inplace(R, d, sq)
        live &= sq > floor
        live[pick] = False
        energy = float(sq.sum())

        indices.append(pick)
        sigmas.append(trip.sigma)
        energies.append(energy)
        if alpha is not None:
            alpha *= copts.decay

    if unconverged:
        info["unconverged_steps"] = unconverged
    return SelectionResult(indices, sigmas, energies, time.perf_counter() - t0,
                           method, params, info)
