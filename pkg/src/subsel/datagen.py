"""Seeded synthetic data: unions of subspaces, Gaussian clusters and
matrices with a prescribed singular spectrum, optionally with outliers."""

from dataclasses import asdict, dataclass, field

import numpy as np

KINDS = ("subspace_union", "gaussian_clusters", "controlled_spectrum")


@dataclass
class SynthSpec:
    """Recipe for a synthetic data matrix.

    ``M`` counts every row, outliers included; outliers are the last
    ``outlier_count`` rows and carry label -1.  Outlier rows are isotropic
    Gaussian with their expected norm equal to ``outlier_scale`` times the RMS
    norm of the inlier rows.
    """

    kind: str = "subspace_union"
    M: int = 200
    N: int = 50
    n_subspaces: int = 5
    subspace_dim: int = 5
    n_clusters: int = 5
    cluster_spread: float = 0.1
    center_scale: float = 1.0
    singular_values: list = field(default_factory=list)
    noise_sigma: float = 0.0
    outlier_count: int = 0
    outlier_scale: float = 5.0
    seed: int = 0

    def validate(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        if self.M < 1 or self.N < 1:
            raise ValueError("M and N must be >= 1")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")
        if not 0 <= self.outlier_count < self.M:
            raise ValueError("outlier_count must be in [0, M)")
        inliers = self.M - self.outlier_count
        if self.kind == "subspace_union":
            if self.n_subspaces < 1 or self.subspace_dim < 1:
                raise ValueError("need at least one subspace of dimension >= 1")
            if self.subspace_dim > self.N:
                raise ValueError(f"subspace_dim {self.subspace_dim} exceeds N = {self.N}")
            if self.n_subspaces > inliers:
                raise ValueError("more subspaces than inlier rows")
        elif self.kind == "gaussian_clusters":
            if not 1 <= self.n_clusters <= inliers:
                raise ValueError("n_clusters must lie in [1, number of inlier rows]")
        else:
            sv = np.asarray(self.singular_values, dtype=np.float64)
            if sv.size == 0:
                raise ValueError("controlled_spectrum needs singular_values")
            if sv.size > min(inliers, self.N):
                raise ValueError("more singular values than min(inlier rows, N)")
            if np.any(sv < 0):
                raise ValueError("singular values must be non-negative")

    @classmethod
    def from_dict(cls, d):
        known = set(cls.__dataclass_fields__)
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown SynthSpec fields: {sorted(extra)}")
        return cls(**d)

    def to_dict(self):
        return asdict(self)


def _orthonormal(rng, n, k):
    q, r = np.linalg.qr(rng.standard_normal((n, k)))
    return q * np.sign(np.diag(r))


def generate(spec):
    """Build ``(A, labels)`` for ``spec``; identical output for identical specs."""
    spec.validate()
    structure, coeffs, noise, outl = (
        np.random.default_rng(s) for s in np.random.SeedSequence(spec.seed).spawn(4)
    )
    m_in = spec.M - spec.outlier_count
    N = spec.N

    if spec.kind == "subspace_union":
        sizes = np.full(spec.n_subspaces, m_in // spec.n_subspaces)
        sizes[: m_in % spec.n_subspaces] += 1
        blocks, labels = [], []
        for g, size in enumerate(sizes):
            basis = _orthonormal(structure, N, spec.subspace_dim)
            blocks.append(coeffs.standard_normal((size, spec.subspace_dim)) @ basis.T)
            labels.append(np.full(size, g))
        A = np.vstack(blocks)
        labels = np.concatenate(labels)
    elif spec.kind == "gaussian_clusters":
        centers = spec.center_scale * structure.standard_normal((spec.n_clusters, N))
        labels = np.arange(m_in) % spec.n_clusters
        A = centers[labels] + spec.cluster_spread * coeffs.standard_normal((m_in, N))
    else:
        sv = np.asarray(spec.singular_values, dtype=np.float64)
        r = sv.size
        U = _orthonormal(structure, m_in, r)
        V = _orthonormal(structure, N, r)
        A = (U * sv) @ V.T
        labels = np.zeros(m_in, dtype=int)

    if spec.noise_sigma > 0:
        A = A + spec.noise_sigma * noise.standard_normal(A.shape)

    if spec.outlier_count:
        rms = np.sqrt(np.mean(np.einsum("ij,ij->i", A, A)))
        scale = spec.outlier_scale * (rms if rms > 0 else 1.0) / np.sqrt(N)
        A = np.vstack([A, scale * outl.standard_normal((spec.outlier_count, N))])
        labels = np.concatenate([labels, np.full(spec.outlier_count, -1)])

    return np.ascontiguousarray(A), labels.astype(np.int64)
