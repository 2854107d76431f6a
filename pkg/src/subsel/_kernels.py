"""Hot inner loops, each in a numba flavour and a numpy flavour.

The ``*_nb`` functions are explicit loops compiled by numba; the ``*_np``
functions are their vectorised numpy counterparts.  Both are importable
directly so they can be cross-checked and benchmarked; the unsuffixed names
at the bottom are what the rest of the package calls.
"""

import math

import numpy as np

from ._accel import USE_NUMBA, njit


# -- power iteration on the Gram direction ---------------------------------

@njit
def power_iterate_nb(A, v, tol, max_iter):
    M, N = A.shape
    v = v.copy()
    u = np.empty(M)
    w = np.empty(N)
    converged = False
    zero = False
    it = 0
    while it < max_iter:
        it += 1
        for m in range(M):
            s = 0.0
            for n in range(N):
                s += A[m, n] * v[n]
            u[m] = s
        for n in range(N):
            w[n] = 0.0
        for m in range(M):
            um = u[m]
            if um != 0.0:
                for n in range(N):
                    w[n] += um * A[m, n]
        nrm = 0.0
        dot = 0.0
        for n in range(N):
            nrm += w[n] * w[n]
            dot += w[n] * v[n]
        nrm = math.sqrt(nrm)
        if nrm == 0.0:
            zero = True
            break
        if dot < 0.0:
            nrm = -nrm
        diff = 0.0
        for n in range(N):
            w[n] /= nrm
            diff += (w[n] - v[n]) ** 2
            v[n] = w[n]
        if math.sqrt(diff) <= tol:
            converged = True
            break
    return v, it, converged, zero


def power_iterate_np(A, v, tol, max_iter):
    v = np.array(v, dtype=np.float64)
    converged = False
    zero = False
    it = 0
    while it < max_iter:
        it += 1
        w = A.T @ (A @ v)
        nrm = math.sqrt(float(w @ w))
        if nrm == 0.0:
            zero = True
            break
        if float(w @ v) < 0.0:
            nrm = -nrm
        w /= nrm
        diff = math.sqrt(float((w - v) @ (w - v)))
        v = w
        if diff <= tol:
            converged = True
            break
    return v, it, converged, zero


# -- rank-one deflation of every row ----------------------------------------

@njit
def deflate_inplace_nb(R, d, sqnorms):
    M, N = R.shape
    for m in range(M):
        c = 0.0
        for n in range(N):
            c += R[m, n] * d[n]
        s = 0.0
        for n in range(N):
            R[m, n] -= c * d[n]
            s += R[m, n] * R[m, n]
        sqnorms[m] = s


def deflate_inplace_np(R, d, sqnorms):
    c = R @ d
    R -= np.outer(c, d)
    sqnorms[:] = np.einsum("ij,ij->i", R, R)


# -- PAM k-medoids ------------------------------------------------------------

@njit
def pam_build_nb(D, K):
    M = D.shape[0]
    medoids = np.empty(K, dtype=np.int64)
    chosen = np.zeros(M, dtype=np.bool_)
    nearest = np.empty(M)
    best = -1
    best_cost = np.inf
    for c in range(M):
        s = 0.0
        for j in range(M):
            s += D[c, j]
        if s < best_cost:
            best_cost = s
            best = c
    medoids[0] = best
    chosen[best] = True
    for j in range(M):
        nearest[j] = D[best, j]
    for k in range(1, K):
        best = -1
        best_gain = -1.0
        for c in range(M):
            if chosen[c]:
                continue
            g = 0.0
            for j in range(M):
                diff = nearest[j] - D[c, j]
                if diff > 0.0:
                    g += diff
            if g > best_gain:
                best_gain = g
                best = c
        medoids[k] = best
        chosen[best] = True
        for j in range(M):
            if D[best, j] < nearest[j]:
                nearest[j] = D[best, j]
    return medoids


def pam_build_np(D, K):
    M = D.shape[0]
    medoids = np.empty(K, dtype=np.int64)
    chosen = np.zeros(M, dtype=bool)
    first = int(np.argmin(D.sum(axis=1)))
    medoids[0] = first
    chosen[first] = True
    nearest = D[first].copy()
    for k in range(1, K):
        gains = np.maximum(nearest[None, :] - D, 0.0).sum(axis=1)
        gains[chosen] = -1.0
        best = int(np.argmax(gains))
        medoids[k] = best
        chosen[best] = True
        np.minimum(nearest, D[best], out=nearest)
    return medoids


@njit
def _nearest_two_nb(D, medoids):
    M = D.shape[0]
    K = medoids.shape[0]
    slot = np.empty(M, dtype=np.int64)
    d1 = np.empty(M)
    d2 = np.empty(M)
    for j in range(M):
        a = np.inf
        b = np.inf
        s = -1
        for i in range(K):
            dist = D[medoids[i], j]
            if dist < a:
                b = a
                a = dist
                s = i
            elif dist < b:
                b = dist
        slot[j] = s
        d1[j] = a
        d2[j] = b
    return slot, d1, d2


@njit
def pam_best_swap_nb(D, medoids):
    """Most negative cost change over all (medoid slot, non-medoid) swaps."""
    M = D.shape[0]
    K = medoids.shape[0]
    is_med = np.zeros(M, dtype=np.bool_)
    for i in range(K):
        is_med[medoids[i]] = True
    slot, d1, d2 = _nearest_two_nb(D, medoids)
    best = np.inf
    bi = -1
    bh = -1
    for i in range(K):
        for h in range(M):
            if is_med[h]:
                continue
            delta = 0.0
            for j in range(M):
                dh = D[j, h]
                if slot[j] == i:
                    delta += (dh if dh < d2[j] else d2[j]) - d1[j]
                elif dh < d1[j]:
                    delta += dh - d1[j]
            if delta < best:
                best = delta
                bi = i
                bh = h
    return best, bi, bh


def pam_best_swap_np(D, medoids):
    M = D.shape[0]
    K = medoids.shape[0]
    sub = D[medoids]  # K x M
    order = np.argsort(sub, axis=0, kind="stable")
    slot = order[0]
    d1 = sub[slot, np.arange(M)]
    d2 = sub[order[1], np.arange(M)] if K > 1 else np.full(M, np.inf)
    is_med = np.zeros(M, dtype=bool)
    is_med[medoids] = True
    # contribution of points not owned by the removed medoid does not depend on i
    gain_other = np.minimum(D - d1[:, None], 0.0)  # j x h
    table = np.empty((K, M))
    for i in range(K):
        own = slot == i
        owned = (np.minimum(D[own], d2[own, None]) - d1[own, None]).sum(axis=0)
        table[i] = owned + gain_other[~own].sum(axis=0)
    table[:, is_med] = np.inf
    flat = int(np.argmin(table))
    bi, bh = divmod(flat, M)
    return float(table[bi, bh]), bi, bh


if USE_NUMBA:
    power_iterate = power_iterate_nb
    deflate_inplace = deflate_inplace_nb
    pam_build = pam_build_nb
    pam_best_swap = pam_best_swap_nb
else:
    power_iterate = power_iterate_np
    deflate_inplace = deflate_inplace_np
    pam_build = pam_build_np
    pam_best_swap = pam_best_swap_np
