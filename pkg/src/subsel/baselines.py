"""Comparison selectors: random, uniform, k-medoids (PAM), volume sampling,
determinant-greedy, pivoted QR and cluster-then-pick."""

import itertools
import math
import time
import warnings

import numpy as np
from scipy.spatial.distance import cdist

from . import _kernels
from .linalg import as_data_matrix
from .selection import SelectionResult, SelectionWarning, ipm_select

VOLUME_ENUMERATION_CAP = 200_000
_ZERO_PIVOT = 1e-12


def _check_k(K, M):
    if K < 0:
        raise ValueError("K must be non-negative")
    if K > M:
        raise ValueError(f"cannot select {K} rows out of {M}")


def residual_trajectory(A, indices):
    """Residual energy after each successive pick in ``indices``."""
    R = np.array(A, dtype=np.float64, copy=True)
    sq = np.einsum("ij,ij->i", R, R)
    orig = sq.copy()
    out = []
    for i in indices:
        if sq[i] > 1e-16 * orig[i]:
            _kernels.deflate_inplace(R, R[i] / math.sqrt(sq[i]), sq)
        out.append(float(sq.sum()))
    return out


def _result(A, indices, method, t0, params, info=None):
    energies = residual_trajectory(A, indices) if A is not None else []
    return SelectionResult([int(i) for i in indices], [], energies,
                           time.perf_counter() - t0, method, params, info or {})


def random_select(A, K, seed=0):
    """K distinct rows drawn uniformly without replacement."""
    t0 = time.perf_counter()
    A = as_data_matrix(A)
    _check_k(K, A.shape[0])
    rng = np.random.default_rng(seed)
    idx = rng.choice(A.shape[0], size=K, replace=False)
    return _result(A, idx, "random", t0, {"k": K, "seed": seed})


def uniform_select(M, K):
    """Evenly spaced indices ``round(i (M-1)/(K-1))``, duplicates dropped."""
    t0 = time.perf_counter()
    if M < 1:
        raise ValueError("M must be >= 1")
    if K < 0:
        raise ValueError("K must be non-negative")
    if K == 0:
        idx = []
    elif K == 1:
        idx = [0]
    else:
        raw = np.floor(np.arange(K) * (M - 1) / (K - 1) + 0.5).astype(int)
        idx = list(dict.fromkeys(raw.tolist()))
    return _result(None, idx, "uniform", t0, {"k": K, "m": M})


def pam_cost(D, medoids):
    return float(D[np.asarray(medoids)].min(axis=0).sum())


def kmedoids_select(A, K, seed=0, max_swaps=100):
    """PAM k-medoids on Euclidean row distances: BUILD then best-improvement
    SWAP until no swap lowers the cost or ``max_swaps`` swaps were made.

    PAM is deterministic; ``seed`` is accepted for interface uniformity.
    """
    t0 = time.perf_counter()
    A = as_data_matrix(A)
    M = A.shape[0]
    _check_k(K, M)
    params = {"k": K, "seed": seed, "max_swaps": max_swaps}
    if K == 0:
        return _result(A, [], "kmedoids", t0, params)
    if K == M:
        return _result(A, range(M), "kmedoids", t0, params, {"cost": 0.0, "swaps": 0})

    D = cdist(A, A)
    medoids = _kernels.pam_build(D, K)
    cost = pam_cost(D, medoids)
    swaps = 0
    while swaps < max_swaps:
        delta, i, h = _kernels.pam_best_swap(D, medoids)
        if not delta < -1e-12 * max(cost, 1.0):
            break
        medoids[i] = h
        cost = pam_cost(D, medoids)
        swaps += 1
    return _result(A, medoids, "kmedoids", t0, params, {"cost": cost, "swaps": swaps})


def subset_volumes(A, K):
    """All K-subsets of rows with their Gram determinants ``det(A_T A_T^T)``.

    Determinants below ``1e-12`` times the Hadamard bound are set to 0.
    """
    A = as_data_matrix(A)
    M = A.shape[0]
    subsets = np.array(list(itertools.combinations(range(M), K)), dtype=np.int64)
    if K == 0:
        return subsets.reshape(1, 0), np.ones(1)
    G = A @ A.T
    sub = G[subsets[:, :, None], subsets[:, None, :]]
    dets = np.linalg.det(sub)
    hadamard = np.prod(np.diagonal(sub, axis1=1, axis2=2), axis=1)
    dets = np.where(dets > 1e-12 * hadamard, dets, 0.0)
    return subsets, dets


def volume_select(A, K, seed=0, enumeration_cap=VOLUME_ENUMERATION_CAP):
    """Exact volume sampling: one K-subset drawn with probability proportional
    to ``det(A_T A_T^T)``.  Falls back to :func:`det_greedy_select` (flagged
    ``info["mode"] == "det_greedy"``) when there are more than
    ``enumeration_cap`` subsets."""
    t0 = time.perf_counter()
    A = as_data_matrix(A)
    M = A.shape[0]
    _check_k(K, M)
    params = {"k": K, "seed": seed, "enumeration_cap": enumeration_cap}
    if math.comb(M, K) > enumeration_cap:
        res = det_greedy_select(A, K)
        return _result(A, res.indices, "volume", t0, params, {"mode": "det_greedy"})
    subsets, dets = subset_volumes(A, K)
    total = dets.sum()
    if total <= 0:
        raise ValueError(f"every {K}-subset has zero volume; rank(A) < K")
    rng = np.random.default_rng(seed)
    pick = rng.choice(len(subsets), p=dets / total)
    return _result(A, subsets[pick], "volume", t0, params, {"mode": "exact"})


def det_greedy_select(A, K):
    """Repeatedly add the row with the largest residual norm against the span
    of the rows chosen so far (the greedy Gram-determinant maximiser)."""
    t0 = time.perf_counter()
    A = as_data_matrix(A)
    M = A.shape[0]
    _check_k(K, M)
    R = A.copy()
    sq = np.einsum("ij,ij->i", R, R)
    cut = (_ZERO_PIVOT ** 2) * sq.max()
    taken = np.zeros(M, dtype=bool)
    idx = []
    for _ in range(K):
        score = np.where(taken | (sq <= cut), 0.0, sq)
        score[taken] = -1.0
        i = int(np.argmax(score))
        idx.append(i)
        taken[i] = True
        if score[i] > 0:
            _kernels.deflate_inplace(R, R[i] / math.sqrt(sq[i]), sq)
    return _result(A, idx, "detgreedy", t0, {"k": K})


def qrcp_select(A, K):
    """Householder QR with column pivoting on ``A^T``; returns the first K
    pivots.  Column norms are recomputed from the trailing block each step
    rather than downdated, so pivot ties resolve exactly (lowest index)."""
    t0 = time.perf_counter()
    A = as_data_matrix(A)
    M, N = A.shape
    _check_k(K, M)
    W = A.T.copy()  # columns are samples
    perm = np.arange(M)
    cut = None
    for k in range(K):
        if k < N:
            norms = np.einsum("ij,ij->j", W[k:, k:], W[k:, k:])
        else:
            norms = np.zeros(M - k)
        if cut is None:
            cut = (_ZERO_PIVOT ** 2) * norms.max()
        norms = np.where(norms <= cut, 0.0, norms)
        # ties go to the lowest original index among the remaining columns
        best = norms.max()
        cands = np.flatnonzero(norms == best)
        j = k + int(cands[np.argmin(perm[k + cands])])
        if j != k:
            W[:, [k, j]] = W[:, [j, k]]
            perm[[k, j]] = perm[[j, k]]
        if k < N and best > 0:
            x = W[k:, k]
            alpha = -math.copysign(np.linalg.norm(x), x[0] if x[0] != 0 else 1.0)
            v = x.copy()
            v[0] -= alpha
            vn = np.linalg.norm(v)
            if vn > 0:
                v /= vn
                W[k:, k:] -= 2.0 * np.outer(v, v @ W[k:, k:])
    return _result(A, perm[:K], "qrcp", t0, {"k": K})


def cluster_pick_select(A, K, inner="medoid", seed=0, max_iter=100):
    """k-means++ into K clusters, then one representative per cluster chosen
    by ``inner``: ``"random"``, ``"medoid"`` or ``"ipm"``.

    Picks are ordered by cluster label; empty clusters are skipped.
    """
    from sklearn.cluster import KMeans

    t0 = time.perf_counter()
    A = as_data_matrix(A)
    M = A.shape[0]
    _check_k(K, M)
    if inner not in ("random", "medoid", "ipm"):
        raise ValueError(f"unknown inner method {inner!r}")
    params = {"k": K, "inner": inner, "seed": seed, "max_iter": max_iter}
    if K == 0:
        return _result(A, [], "clusterpick", t0, params)
    if K == M:
        labels = np.arange(M)
    else:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            km = KMeans(n_clusters=K, init="k-means++", n_init=1, max_iter=max_iter,
                        random_state=seed).fit(A)
        labels = km.labels_
    rng = np.random.default_rng(seed)
    idx, empty = [], []
    for c in range(K):
        members = np.flatnonzero(labels == c)
        if members.size == 0:
            empty.append(c)
            continue
        if inner == "random":
            idx.append(int(rng.choice(members)))
        elif inner == "medoid":
            d = cdist(A[members], A[members]).sum(axis=1)
            idx.append(int(members[np.argmin(d)]))
        else:
            sub = ipm_select(A[members], 1, seed=seed)
            idx.append(int(members[sub.indices[0]]) if sub.indices else int(members[0]))
    info = {}
    if empty:
        info["empty_clusters"] = empty
        warnings.warn(f"{len(empty)} empty clusters skipped", SelectionWarning, stacklevel=2)
    return _result(A, idx, "clusterpick", t0, params, info)


METHODS = {
    "random": random_select,
    "uniform": uniform_select,
    "kmedoids": kmedoids_select,
    "volume": volume_select,
    "detgreedy": det_greedy_select,
    "qrcp": qrcp_select,
    "clusterpick": cluster_pick_select,
}


def run_method(name, A, K, seed=0, **kwargs):
    """Dispatch by method name, supplying ``seed`` where the method takes one."""
    if name == "ipm":
        return ipm_select(A, K, seed=seed, **kwargs)
    if name == "uniform":
        return uniform_select(np.asarray(A).shape[0], K)
    if name in ("detgreedy", "qrcp"):
        return METHODS[name](A, K)
    if name not in METHODS:
        raise ValueError(f"unknown method {name!r}")
    return METHODS[name](A, K, seed=seed, **kwargs)
