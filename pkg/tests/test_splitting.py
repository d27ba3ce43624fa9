import numpy as np
import pytest

from netcv import (
    DegenerateSplitError,
    Graph,
    InvalidInputError,
    InvalidParameterError,
    partial_matrix,
    sample_split,
    v_fold_splits,
)


def random_graph(n, p, seed):
    rng = np.random.default_rng(seed)
    iu = np.triu_indices(n, k=1)
    adj = np.zeros((n, n), dtype=np.uint8)
    adj[iu] = rng.random(len(iu[0])) < p
    adj += adj.T
    return Graph(adj)


class TestSampleSplit:
    def test_deterministic(self):
        s1 = sample_split(30, 0.7, 5)
        s2 = sample_split(30, 0.7, 5)
        np.testing.assert_array_equal(s1.training_mask, s2.training_mask)

    def test_symmetric_zero_diag(self):
        s = sample_split(25, 0.8, 1)
        np.testing.assert_array_equal(s.training_mask, s.training_mask.T)
        assert not np.any(np.diag(s.training_mask))

    def test_hoeffding_bound(self):
        s = sample_split(200, 0.9, 2)
        count = s.training_mask.sum() // 2
        assert abs(count - 0.9 * 19900) <= np.sqrt(19900 * np.log(200))

    def test_w_out_of_range(self):
        for w in (0.0, 1.0, -0.1, 1.5):
            with pytest.raises(InvalidParameterError):
                sample_split(10, w, 0)

    def test_eval_fraction_across_seeds(self):
        n, w = 40, 0.75
        npairs = n * (n - 1) // 2
        fracs = [sample_split(n, w, s).n_eval_pairs() / npairs for s in range(100)]
        sigma = np.sqrt(w * (1 - w) / npairs)
        assert abs(np.mean(fracs) - (1 - w)) <= 3 * sigma

    def test_tiny_n_can_degenerate(self):
        # with 1 pair, any draw leaves one set empty
        with pytest.raises(DegenerateSplitError):
            for seed in range(10):
                sample_split(2, 0.5, seed)


class TestVFoldSplits:
    def test_partition_n3_v2(self):
        splits = v_fold_splits(3, 2, 0)
        sizes = sorted(s.n_eval_pairs() for s in splits)
        assert sizes == [1, 2]
        union = np.zeros((3, 3), dtype=int)
        for s in splits:
            union += s.eval_mask()
        np.testing.assert_array_equal(union, np.ones((3, 3)) - np.eye(3))

    def test_training_fraction_ten_folds(self):
        for s in v_fold_splits(30, 10, 1):
            assert s.w == pytest.approx(0.9, abs=0.01)

    def test_every_pair_in_one_eval_fold(self):
        n, v = 12, 5
        total = np.zeros((n, n), dtype=int)
        for s in v_fold_splits(n, v, 3):
            total += s.eval_mask()
        np.testing.assert_array_equal(total, np.ones((n, n)) - np.eye(n))

    def test_fold_sizes_balanced(self):
        sizes = [s.n_eval_pairs() for s in v_fold_splits(13, 7, 2)]
        assert max(sizes) - min(sizes) <= 1

    def test_too_many_folds(self):
        with pytest.raises(InvalidParameterError):
            v_fold_splits(3, 5, 0)

    def test_v_below_two(self):
        with pytest.raises(InvalidParameterError):
            v_fold_splits(10, 1, 0)


class TestPartialMatrix:
    def test_all_training_gives_a(self):
        a = random_graph(10, 0.5, 0)
        mask = np.ones((10, 10), dtype=bool)
        np.fill_diagonal(mask, False)
        from netcv import EdgeSplit
        y = partial_matrix(a, EdgeSplit(mask, 0.99))
        np.testing.assert_array_equal(y.y, a.adj)

    def test_no_training_gives_zero(self):
        a = random_graph(10, 0.5, 0)
        from netcv import EdgeSplit
        y = partial_matrix(a, EdgeSplit(np.zeros((10, 10), dtype=bool), 0.01))
        assert np.all(y.y == 0)

    def test_entrywise_mix(self):
        a = random_graph(15, 0.4, 1)
        s = sample_split(15, 0.6, 2)
        y = partial_matrix(a, s).y
        np.testing.assert_array_equal(y[s.training_mask], a.adj[s.training_mask])
        assert np.all(y[~s.training_mask] == 0)

    def test_complement_reassembles_a(self):
        a = random_graph(15, 0.4, 1)
        s = sample_split(15, 0.6, 2)
        y = partial_matrix(a, s).y
        yc = partial_matrix(a, s.complement()).y
        np.testing.assert_array_equal(y + yc, a.adj)

    def test_dimension_mismatch(self):
        a = random_graph(10, 0.5, 0)
        s = sample_split(12, 0.5, 0)
        with pytest.raises(InvalidInputError):
            partial_matrix(a, s)
