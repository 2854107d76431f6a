"""Dense linear-algebra building blocks.

A data matrix is a plain 2-D float64 ndarray whose rows are samples; use
:func:`as_data_matrix` to validate input.  Orthonormal bases are ``(k, N)``
arrays whose rows are the basis vectors.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels

DEFAULT_TOL = 1e-9
DEFAULT_MAX_ITER = 1000
SMALL_MATRIX_CAP = 2000


@dataclass(frozen=True)
class SingularTriplet:
    """Leading singular value and unit singular vectors of a matrix.

    ``converged`` is False when power iteration hit ``max_iter``; the vectors
    are then the last iterate.  ``zero`` flags a numerically zero matrix, in
    which case ``sigma`` is 0 and the vectors are arbitrary unit vectors.
    """

    sigma: float
    left: np.ndarray
    right: np.ndarray
    iterations: int = 0
    converged: bool = True
    zero: bool = False


def as_data_matrix(A):
    """Return ``A`` as a finite, C-contiguous float64 matrix with M, N >= 1."""
    A = np.ascontiguousarray(A, dtype=np.float64)
    if A.ndim != 2:
        raise ValueError(f"data matrix must be 2-D, got shape {A.shape}")
    if A.shape[0] < 1 or A.shape[1] < 1:
        raise ValueError(f"data matrix must be non-empty, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("data matrix contains NaN or Inf")
    return A


def canonical_sign(x):
    """Flip ``x`` so that its first non-negligible coordinate is positive."""
    x = np.asarray(x, dtype=np.float64)
    scale = np.max(np.abs(x)) if x.size else 0.0
    if scale == 0.0:
        return x
    nz = np.flatnonzero(np.abs(x) > 1e-12 * scale)
    if x[nz[0]] < 0:
        return -x
    return x


def normalize_rows(A, eps=1e-12):
    """Scale rows to unit 2-norm.

    Returns ``(normalized, norms, live)``; rows with norm <= ``eps`` are left
    as zeros and flagged ``live == False``.
    """
    A = as_data_matrix(A)
    norms = np.linalg.norm(A, axis=1)
    live = norms > eps
    out = np.zeros_like(A)
    out[live] = A[live] / norms[live, None]
    return out, norms, live


def leading_singular_triplet(A, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER, seed=0):
    """Leading singular triplet by power iteration on ``A^T A``.

    Starts from a seeded Gaussian vector and stops once successive right
    vectors differ by at most ``tol`` in 2-norm.  The right vector is
    returned with its first non-negligible entry positive.
    """
    A = as_data_matrix(A)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    M, N = A.shape
    fro = np.sqrt(np.einsum("ij,ij->", A, A))
    if fro == 0.0:
        return _zero_triplet(M, N)

    rng = np.random.default_rng(seed)
    v0 = rng.standard_normal(N)
    v0 /= np.linalg.norm(v0)
    v, iters, converged, zero = _kernels.power_iterate(A, v0, float(tol), int(max_iter))
    if zero:
        # start vector orthogonal to the row space; only happens for tiny ranks
        v0 = A[np.argmax(np.linalg.norm(A, axis=1))]
        v0 = v0 / np.linalg.norm(v0)
        v, more, converged, zero = _kernels.power_iterate(A, v0, float(tol), int(max_iter))
        iters += more
        if zero:
            return _zero_triplet(M, N)

    v = canonical_sign(v / np.linalg.norm(v))
    Av = A @ v
    sigma = float(np.linalg.norm(Av))
    if sigma <= 1e-300:
        return _zero_triplet(M, N)
    return SingularTriplet(sigma, Av / sigma, v, iters, bool(converged), False)


def _zero_triplet(M, N):
    left = np.zeros(M)
    left[0] = 1.0
    right = np.zeros(N)
    right[0] = 1.0
    return SingularTriplet(0.0, left, right, 0, True, True)


def _check_unit(d, N):
    d = np.ascontiguousarray(d, dtype=np.float64)
    if d.shape != (N,):
        raise ValueError(f"direction must have shape ({N},), got {d.shape}")
    if abs(np.linalg.norm(d) - 1.0) > 1e-8:
        raise ValueError("direction must be a unit vector")
    return d


def deflate_rows(A, d):
    """Return ``A (I - d d^T)`` for a unit vector ``d``."""
    A = as_data_matrix(A)
    d = _check_unit(d, A.shape[1])
    R = A.copy()
    sq = np.empty(A.shape[0])
    _kernels.deflate_inplace(R, d, sq)
    return R


def empty_basis(N):
    return np.zeros((0, N))


def extend_orthonormal_basis(Q, w, eps=1e-8):
    """Gram-Schmidt step with one re-orthogonalisation pass.

    Returns ``(Q_new, accepted)``.  ``w`` is rejected (``Q`` returned as is)
    when its residual against ``span(Q)`` is at most ``eps * ||w||``.
    """
    Q = np.asarray(Q, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    wn = np.linalg.norm(w)
    if wn == 0.0:
        return Q, False
    r = w.copy()
    if Q.shape[0]:
        for _ in range(2):
            r -= Q.T @ (Q @ r)
    rn = np.linalg.norm(r)
    if rn <= eps * wn:
        return Q, False
    return np.vstack([Q, (r / rn)[None, :]]), True


def project_residual(A, Q):
    """Residual of the rows of ``A`` after projecting onto ``span(Q)``.

    Returns ``(R, energy)`` with ``energy = ||R||_F^2``.
    """
    A = as_data_matrix(A)
    Q = np.asarray(Q, dtype=np.float64).reshape(-1, A.shape[1])
    if Q.shape[0] > A.shape[1]:
        raise ValueError("basis has more vectors than the ambient dimension")
    R = A - (A @ Q.T) @ Q if Q.shape[0] else A.copy()
    return R, float(np.einsum("ij,ij->", R, R))


def full_spectrum(A, cap=SMALL_MATRIX_CAP):
    """All singular values (descending) and right singular vectors of ``A``.

    Right vectors are the columns of the returned ``(N, min(M, N))`` array,
    each sign-canonicalised.  Refuses matrices whose smaller side exceeds
    ``cap``; use :func:`leading_singular_triplet` for those.
    """
    A = as_data_matrix(A)
    if min(A.shape) > cap:
        raise ValueError(
            f"min(M, N) = {min(A.shape)} exceeds the dense-spectrum cap {cap}; "
            "use leading_singular_triplet (power iteration) instead"
        )
    _, s, vt = np.linalg.svd(A, full_matrices=False)
    V = np.column_stack([canonical_sign(row) for row in vt])
    return s, V
