"""Objective evaluation and numerical checks of the theory behind IPM."""

from dataclasses import dataclass

import numpy as np

from .baselines import VOLUME_ENUMERATION_CAP, subset_volumes
from .linalg import (
    as_data_matrix,
    canonical_sign,
    empty_basis,
    extend_orthonormal_basis,
    full_spectrum,
    normalize_rows,
    project_residual,
)

_GAP_EPS = 1e-10


@dataclass
class SpectrumDiagnostics:
    eigenvalues: np.ndarray
    rom: float
    sensitivities: np.ndarray = None  # None when eigenvalues repeat


def selection_basis(A, indices):
    A = as_data_matrix(A)
    Q = empty_basis(A.shape[1])
    for i in indices:
        Q, _ = extend_orthonormal_basis(Q, A[i])
    return Q


def projection_error(A, indices):
    """``||A - pi_T(A)||_F^2`` for the row subset ``indices``."""
    A = as_data_matrix(A)
    indices = list(indices)
    if len(set(indices)) != len(indices):
        raise ValueError("indices must be distinct")
    if any(i < 0 or i >= A.shape[0] for i in indices):
        raise ValueError("index out of range")
    _, energy = project_residual(A, selection_basis(A, indices))
    return energy


def best_rank_k_error(A, K):
    """Squared Frobenius error of the best rank-K approximation."""
    s, _ = full_spectrum(A)
    return float(np.sum(s[K:] ** 2))


def rom(A):
    """Rank-oneness measure ``sigma_1 / ||A||_F``."""
    A = as_data_matrix(A)
    fro = np.linalg.norm(A)
    if fro == 0.0:
        raise ValueError("ROM is undefined for the zero matrix")
    s, _ = full_spectrum(A)
    return float(s[0] / fro)


def sensitivity_coeffs(eigenvalues):
    """``s_i = sqrt(sum_{j != i} 1 / (lambda_i - lambda_j)^2)``.

    Raises ``ValueError`` if two eigenvalues are closer than 1e-10.
    """
    lam = np.asarray(eigenvalues, dtype=np.float64).ravel()
    diff = lam[:, None] - lam[None, :]
    off = ~np.eye(lam.size, dtype=bool)
    if np.any(np.abs(diff[off]) <= _GAP_EPS):
        raise ValueError("eigenvalues must be distinct for sensitivity coefficients")
    inv = np.zeros_like(diff)
    inv[off] = 1.0 / diff[off] ** 2
    return np.sqrt(inv.sum(axis=1))


def spectrum_diagnostics(A):
    """Eigenvalues of ``A^T A`` (descending), ROM and sensitivity coefficients."""
    A = as_data_matrix(A)
    s, _ = full_spectrum(A)
    lam = np.zeros(A.shape[1])
    lam[: s.size] = s ** 2
    try:
        sens = sensitivity_coeffs(lam)
    except ValueError:
        sens = None
    return SpectrumDiagnostics(lam, rom(A), sens)


def check_lemma1(A):
    """``max_m |v . a_m| - sigma_1 / sqrt(M)`` on the rows as given."""
    A = as_data_matrix(A)
    s, V = full_spectrum(A)
    return float(np.max(np.abs(A @ V[:, 0])) - s[0] / np.sqrt(A.shape[0]))


def check_prop1(A):
    """Largest correlation of a unit-normalised row with the leading right
    singular vector, minus ROM of the normalised matrix.  Zero rows are
    dropped first."""
    An, _, live = normalize_rows(A)
    An = An[live]
    if An.shape[0] == 0:
        raise ValueError("matrix has no nonzero rows")
    s, V = full_spectrum(An)
    return float(np.max(np.abs(An @ V[:, 0])) - s[0] / np.linalg.norm(An))


def check_vs_bound(A, K, enumeration_cap=VOLUME_ENUMERATION_CAP):
    """Expected volume-sampling projection error against ``(K+1)`` times the
    best rank-K error, by exhaustive enumeration of the K-subsets.

    Returns ``(lhs, rhs)``.
    """
    import math

    A = as_data_matrix(A)
    if math.comb(A.shape[0], K) > enumeration_cap:
        raise ValueError("too many subsets to enumerate")
    subsets, dets = subset_volumes(A, K)
    total = dets.sum()
    if total <= 0:
        raise ValueError(f"every {K}-subset has zero volume")
    errs = np.array([projection_error(A, T) if w > 0 else 0.0
                     for T, w in zip(subsets, dets)])
    lhs = float(np.dot(dets / total, errs))
    rhs = (K + 1) * best_rank_k_error(A, K)
    return lhs, rhs


def _sorted_eigh(C):
    lam, V = np.linalg.eigh(C)
    order = np.argsort(lam)[::-1]
    return lam[order], V[:, order]


def check_eigvec_perturbation(C, delta, i):
    """Motion of the i-th eigenvector (0-based, descending order) of the
    symmetric matrix ``C`` under the perturbation ``delta``.

    Returns ``(lhs, bound)`` with ``lhs = ||v_i(C + delta) - v_i(C)||`` after
    sign alignment and ``bound = s_i ||delta||_F``.
    """
    C = np.asarray(C, dtype=np.float64)
    delta = np.asarray(delta, dtype=np.float64)
    lam, V = _sorted_eigh(C)
    _, W = _sorted_eigh(C + delta)
    v = canonical_sign(V[:, i])
    w = W[:, i]
    if np.dot(v, w) < 0:
        w = -w
    lhs = float(np.linalg.norm(w - v))
    bound = float(sensitivity_coeffs(lam)[i] * np.linalg.norm(delta))
    return lhs, bound
