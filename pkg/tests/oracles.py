"""Independent reference computations used only by the tests.

None of these touch the deflation kernels or power iteration: they work
from explicit projectors, LAPACK SVDs and brute-force enumeration.
"""

import itertools

import numpy as np


def span_projector_residual(A, indices):
    """A (I - P) with P the orthogonal projector onto span of A[indices]."""
    if len(indices) == 0:
        return A.copy()
    B = A[list(indices)].T
    U, s, _ = np.linalg.svd(B, full_matrices=False)
    U = U[:, s > 1e-10 * s[0]]
    return A - (A @ U) @ U.T


def ipm_step_scores(A, picks, eps=1e-8):
    """Matching scores |v . r_m| / ||r_m|| after ``picks``; -inf for rows
    already picked or with (numerically) zero residual."""
    A = np.asarray(A, dtype=float)
    orig = np.linalg.norm(A, axis=1)
    R = span_projector_residual(A, picks)
    norms = np.linalg.norm(R, axis=1)
    _, _, vt = np.linalg.svd(R)
    v = vt[0]
    scores = np.full(A.shape[0], -np.inf)
    for m in range(A.shape[0]):
        if m not in picks and norms[m] > eps * orig[m]:
            scores[m] = abs(v @ R[m]) / norms[m]
    return scores


def ipm_step_oracle(A, K, eps=1e-8):
    """Greedy picks from a full SVD of the span-projected residual and an
    exhaustive scan of normalised residual rows."""
    picks = []
    for _ in range(K):
        scores = ipm_step_scores(A, picks, eps)
        if not np.isfinite(scores).any():
            break
        best, best_m = -1.0, None
        for m, c in enumerate(scores):
            if c > best:
                best, best_m = c, m
        picks.append(best_m)
    return picks


def nondegenerate_k(M, N):
    """Largest K whose IPM steps never face a rank-one residual with several
    live rows (where every correlation is exactly 1 and rounding picks)."""
    return M if M < N else max(1, N - 1)


def compound_step_oracle(A, K, scores, alpha0, decay, eps=1e-8):
    A = np.asarray(A, dtype=float)
    orig = np.linalg.norm(A, axis=1)
    picks = []
    alpha = alpha0
    for _ in range(K):
        R = span_projector_residual(A, picks)
        norms = np.linalg.norm(R, axis=1)
        _, _, vt = np.linalg.svd(R)
        v = vt[0]
        best, best_m = -np.inf, None
        for m in range(A.shape[0]):
            if m in picks or norms[m] <= eps * orig[m]:
                continue
            c = alpha * abs(v @ R[m]) / norms[m] + (1 - alpha) * scores[m]
            if c > best:
                best, best_m = c, m
        if best_m is None:
            break
        picks.append(best_m)
        alpha *= decay
    return picks


def gram_det(A, idx):
    S = A[list(idx)]
    return float(np.linalg.det(S @ S.T)) if len(idx) else 1.0


def det_greedy_oracle(A, K):
    """Each step: the row that maximises det of the enlarged Gram matrix."""
    picks = []
    for _ in range(K):
        best, best_m = -np.inf, None
        for m in range(A.shape[0]):
            if m in picks:
                continue
            d = gram_det(A, picks + [m])
            if d > best:
                best, best_m = d, m
        picks.append(best_m)
    return picks


def pam_objective(A, medoids):
    D = np.linalg.norm(A[:, None, :] - A[None, :, :], axis=2)
    return D[list(medoids)].min(axis=0).sum()


def best_medoid_set(A, K):
    """Exhaustive k-medoids optimum (only for tiny M)."""
    best, best_set = np.inf, None
    for T in itertools.combinations(range(A.shape[0]), K):
        c = pam_objective(A, T)
        if c < best - 1e-12:
            best, best_set = c, T
    return best_set, best


def brute_projection_error(A, indices):
    R = span_projector_residual(A, indices)
    return float(np.sum(R ** 2))
