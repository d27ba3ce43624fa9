import numpy as np
import pytest

from netcv import (
    CompletedMatrix,
    InvalidInputError,
    InvalidParameterError,
    KmeansConfig,
    Labels,
    align_labels,
    build_prob,
    kmeans,
    normalize_theta,
    spectral_cluster,
    top_k_eigen,
)
from netcv.models import DcbmParams, SbmParams


def exact_sbm_p(b, labels):
    return build_prob(SbmParams(b.shape[0], b, labels)).p


class TestSpectralCluster:
    def test_k_one(self):
        m = CompletedMatrix(np.eye(5), 1)
        labels = spectral_cluster(m, 1)
        assert labels.k == 1
        assert np.all(labels.assignments == 0)

    def test_exact_two_block_recovery(self):
        b = np.array([[0.6, 0.1], [0.1, 0.5]])
        truth = np.repeat([0, 1], [7, 9])
        p = exact_sbm_p(b, truth)
        est = spectral_cluster(CompletedMatrix(p, 2), 2)
        _, err = align_labels(est, Labels(truth, 2))
        assert err == 0.0

    def test_exact_three_block_recovery(self):
        b = np.array([[0.7, 0.1, 0.2], [0.1, 0.6, 0.1], [0.2, 0.1, 0.5]])
        truth = np.repeat([0, 1, 2], [5, 6, 7])
        p = exact_sbm_p(b, truth)
        est = spectral_cluster(CompletedMatrix(p, 3), 3)
        _, err = align_labels(est, Labels(truth, 3))
        assert err == 0.0

    def test_spherical_rows_constant_within_blocks(self):
        # on an exact DCBM matrix the normalized eigenvector rows coincide
        # within each community
        rng = np.random.default_rng(0)
        truth = np.repeat([0, 1, 2], 8)
        theta = normalize_theta(rng.uniform(0.5, 1.5, size=24), truth)
        b = np.array([[0.6, 0.1, 0.15], [0.1, 0.5, 0.1], [0.15, 0.1, 0.55]])
        # keep the exact low-rank structure: theta_i theta_j B, diagonal kept
        p = np.outer(theta, theta) * b[np.ix_(truth, truth)]
        pack = top_k_eigen(p, 3)
        rows = pack.vectors / np.linalg.norm(pack.vectors, axis=1, keepdims=True)
        for c in range(3):
            block = rows[truth == c]
            spread = np.abs(block - block[0]).max()
            assert spread < 1e-8
        est = spectral_cluster(CompletedMatrix(p, 3), 3, spherical=True)
        _, err = align_labels(est, Labels(truth, 3))
        assert err == 0.0

    def test_sign_flip_invariance(self):
        b = np.array([[0.6, 0.1], [0.1, 0.5]])
        truth = np.repeat([0, 1], 8)
        p = exact_sbm_p(b, truth)
        pack = top_k_eigen(p, 2)
        flipped = pack.vectors * np.array([-1.0, 1.0])
        from netcv.completion import EigenPack
        est1 = spectral_cluster(None, 2, eigen=pack)
        est2 = spectral_cluster(None, 2, eigen=EigenPack(pack.values, flipped))
        _, err = align_labels(est1, est2)
        assert err == 0.0

    def test_deterministic(self):
        rng = np.random.default_rng(3)
        m = rng.standard_normal((20, 20))
        m = (m + m.T) / 2
        l1 = spectral_cluster(CompletedMatrix(m, 3), 3)
        l2 = spectral_cluster(CompletedMatrix(m, 3), 3)
        np.testing.assert_array_equal(l1.assignments, l2.assignments)

    def test_k_out_of_range(self):
        m = CompletedMatrix(np.eye(4), 1)
        with pytest.raises(InvalidParameterError):
            spectral_cluster(m, 5)


class TestKmeans:
    def test_separated_clusters(self):
        rng = np.random.default_rng(1)
        x = np.vstack([rng.normal(0, 0.05, (10, 2)),
                       rng.normal(5, 0.05, (12, 2))])
        labels, centers = kmeans(x, 2, KmeansConfig())
        assert len(set(labels[:10])) == 1
        assert len(set(labels[10:])) == 1
        assert labels[0] != labels[-1]

    def test_no_empty_clusters(self):
        rng = np.random.default_rng(2)
        x = rng.standard_normal((30, 3))
        labels, _ = kmeans(x, 4, KmeansConfig())
        assert len(np.unique(labels)) == 4


class TestAlignLabels:
    def test_identical(self):
        a = Labels(np.array([0, 1, 2, 0]), 3)
        _, err = align_labels(a, a)
        assert err == 0.0

    def test_global_swap(self):
        est = Labels(np.array([0, 0, 1, 1]), 2)
        truth = Labels(np.array([1, 1, 0, 0]), 2)
        _, err = align_labels(est, truth)
        assert err == 0.0

    def test_one_flip(self):
        est = Labels(np.array([0, 0, 0, 1, 1, 1, 1, 0]), 2)
        truth = Labels(np.array([0, 0, 0, 1, 1, 1, 1, 1]), 2)
        _, err = align_labels(est, truth)
        assert err == pytest.approx(1 / 8)

    def test_length_mismatch(self):
        with pytest.raises(InvalidInputError):
            align_labels(Labels(np.array([0, 1]), 2), Labels(np.array([0]), 1))
