import numpy as np
import pytest

from subsel.datagen import SynthSpec, generate
from subsel.linalg import full_spectrum
from subsel.metrics import projection_error


def test_controlled_spectrum_recovered():
    A, _ = generate(SynthSpec(kind="controlled_spectrum", M=20, N=8, singular_values=[3.0, 2.0, 1.0]))
    s, _ = full_spectrum(A)
    np.testing.assert_allclose(s[:3], [3, 2, 1], atol=1e-8)
    assert np.all(s[3:] < 1e-8)


def test_subspace_union_rank():
    A, labels = generate(SynthSpec(M=40, N=10, n_subspaces=2, subspace_dim=2))
    assert np.linalg.matrix_rank(A, tol=1e-8 * np.linalg.norm(A)) == 4
    assert list(np.bincount(labels)) == [20, 20]


@pytest.mark.parametrize("kind", ["subspace_union", "gaussian_clusters"])
def test_deterministic(kind):
    spec = SynthSpec(kind=kind, M=30, N=6, noise_sigma=0.1, outlier_count=3, seed=9)
    a, la = generate(spec)
    b, lb = generate(SynthSpec.from_dict(spec.to_dict()))
    assert np.array_equal(a, b) and np.array_equal(la, lb)
    c, _ = generate(SynthSpec(kind=kind, M=30, N=6, noise_sigma=0.1, outlier_count=3, seed=10))
    assert not np.array_equal(a, c)


def test_noiseless_group_rows_project_to_zero():
    A, labels = generate(SynthSpec(M=60, N=20, n_subspaces=3, subspace_dim=4))
    for g in range(3):
        rows = np.flatnonzero(labels == g)
        sub = A[rows]
        # four generic rows of a group span its whole subspace
        err = projection_error(sub, list(range(4)))
        assert err <= 1e-18 * max(1.0, np.sum(sub ** 2)) + 1e-18


def test_outliers_appended_and_scaled():
    spec = SynthSpec(M=110, N=50, outlier_count=10, outlier_scale=5.0, seed=1)
    A, labels = generate(spec)
    assert A.shape == (110, 50)
    assert np.all(labels[-10:] == -1) and np.all(labels[:-10] >= 0)
    inlier_rms = np.sqrt(np.mean(np.sum(A[:100] ** 2, axis=1)))
    outlier_rms = np.sqrt(np.mean(np.sum(A[100:] ** 2, axis=1)))
    assert 3.5 < outlier_rms / inlier_rms < 6.5


def test_gaussian_clusters_labels():
    A, labels = generate(SynthSpec(kind="gaussian_clusters", M=12, N=3, n_clusters=4, cluster_spread=0.0))
    for g in range(4):
        rows = A[labels == g]
        assert np.allclose(rows, rows[0])


@pytest.mark.parametrize("kwargs,msg", [
    (dict(kind="bogus"), "unknown kind"),
    (dict(subspace_dim=60, N=50), "exceeds N"),
    (dict(noise_sigma=-1.0), "noise_sigma"),
    (dict(outlier_count=200, M=200), "outlier_count"),
    (dict(kind="controlled_spectrum"), "singular_values"),
    (dict(kind="controlled_spectrum", M=3, N=3, singular_values=[1, 1, 1, 1]), "more singular"),
    (dict(kind="controlled_spectrum", singular_values=[1, -1]), "non-negative"),
    (dict(kind="gaussian_clusters", M=3, n_clusters=5), "n_clusters"),
])
def test_infeasible_specs(kwargs, msg):
    with pytest.raises(ValueError, match=msg):
        generate(SynthSpec(**kwargs))


def test_from_dict_rejects_unknown():
    with pytest.raises(ValueError, match="unknown"):
        SynthSpec.from_dict({"kind": "subspace_union", "colour": 3})
