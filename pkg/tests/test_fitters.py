import numpy as np
import pytest

from netcv import (
    EdgeSplit,
    Graph,
    InvalidInputError,
    Labels,
    PartialMatrix,
    complete_lowrank,
    default_ns_bandwidth,
    fit_affiliation,
    fit_dcbm,
    fit_graphon_ns,
    fit_sbm,
    partial_matrix,
    sample_split,
)


def graph_from_edges(n, edges):
    adj = np.zeros((n, n), dtype=np.uint8)
    for i, j in edges:
        adj[i, j] = adj[j, i] = 1
    return Graph(adj)


def full_training_split(n):
    mask = np.ones((n, n), dtype=bool)
    np.fill_diagonal(mask, False)
    return EdgeSplit(mask, 0.999)


def mask_from_pairs(n, pairs, w=0.5):
    mask = np.zeros((n, n), dtype=bool)
    for i, j in pairs:
        mask[i, j] = mask[j, i] = True
    return EdgeSplit(mask, w)


class TestFitSbm:
    def test_single_block_averaging(self):
        # training pairs (0,1),(0,2),(1,2) carry values 1,0,1
        a = graph_from_edges(4, [(0, 1), (1, 2)])
        split = mask_from_pairs(4, [(0, 1), (0, 2), (1, 2)])
        fit = fit_sbm(a, split, Labels(np.zeros(4, dtype=int), 1))
        off = ~np.eye(4, dtype=bool)
        np.testing.assert_allclose(fit.phat[off], 2 / 3)

    def test_two_block_matches_bruteforce(self):
        n = 6
        labels = np.array([0, 0, 0, 1, 1, 1])
        a = graph_from_edges(n, [(0, 1), (0, 3), (1, 4), (2, 5), (3, 4), (4, 5)])
        split = sample_split(n, 0.7, 1)
        fit = fit_sbm(a, split, Labels(labels, 2))
        for q in range(2):
            for r in range(2):
                num = den = 0
                for i in range(n):
                    for j in range(n):
                        if i != j and split.training_mask[i, j] \
                                and labels[i] == q and labels[j] == r:
                            num += a.adj[i, j]
                            den += 1
                if den:
                    assert fit.params["b"][q, r] == pytest.approx(num / den)

    def test_empty_block_pair_fallback(self):
        # community 2 pairs never in training -> entry = training density
        a = graph_from_edges(5, [(0, 1), (2, 3)])
        labels = Labels(np.array([0, 0, 0, 1, 1]), 2)
        split = mask_from_pairs(5, [(0, 1), (0, 2), (1, 2)])
        fit = fit_sbm(a, labels=labels, split=split)
        density = 1 / 3  # one edge among three training pairs
        assert fit.params["b"][1, 1] == pytest.approx(density)
        assert fit.params["b"][0, 1] == pytest.approx(density)

    def test_label_permutation_invariance(self):
        a = graph_from_edges(6, [(0, 1), (1, 2), (3, 4), (0, 5)])
        split = sample_split(6, 0.6, 3)
        c = np.array([0, 1, 0, 1, 0, 1])
        p1 = fit_sbm(a, split, Labels(c, 2)).phat
        p2 = fit_sbm(a, split, Labels(1 - c, 2)).phat
        np.testing.assert_allclose(p1, p2, atol=1e-14)

    def test_all_training_equals_full_block_average(self):
        rng = np.random.default_rng(4)
        n = 12
        adj = (rng.random((n, n)) < 0.4).astype(np.uint8)
        adj = np.triu(adj, 1)
        a = Graph(adj + adj.T)
        labels = np.array([0, 1] * 6)
        fit = fit_sbm(a, full_training_split(n), Labels(labels, 2))
        for q in range(2):
            sel_q = labels == q
            for r in range(2):
                sel_r = labels == r
                block = a.adj[np.ix_(sel_q, sel_r)]
                if q == r:
                    cnt = sel_q.sum() * (sel_q.sum() - 1)
                else:
                    cnt = sel_q.sum() * sel_r.sum()
                assert fit.params["b"][q, r] == pytest.approx(block.sum() / cnt)


class TestFitAffiliation:
    def test_single_community(self):
        a = graph_from_edges(5, [(0, 1), (0, 2)])
        split = mask_from_pairs(5, [(0, 1), (0, 2), (0, 3), (0, 4)])
        with pytest.warns(UserWarning):
            fit = fit_affiliation(a, split, Labels(np.zeros(5, dtype=int), 1))
        assert fit.degenerate
        assert fit.params["p_wc"] == pytest.approx(1 / 2)
        assert fit.params["p_bc"] == pytest.approx(1 / 2)

    def test_perfectly_assortative(self):
        labels = np.array([0, 0, 1, 1])
        a = graph_from_edges(4, [(0, 1), (2, 3)])
        fit = fit_affiliation(a, full_training_split(4), Labels(labels, 2))
        assert fit.params["p_wc"] == pytest.approx(1.0)
        assert fit.params["p_bc"] == pytest.approx(0.0)

    def test_hand_case_matches_bruteforce(self):
        n = 5
        labels = np.array([0, 0, 0, 1, 1])
        a = graph_from_edges(n, [(0, 1), (0, 3), (1, 2), (3, 4), (2, 4)])
        split = sample_split(n, 0.7, 2)
        fit = fit_affiliation(a, split, Labels(labels, 2))
        same_num = same_den = diff_num = diff_den = 0
        for i in range(n):
            for j in range(i + 1, n):
                if split.training_mask[i, j]:
                    if labels[i] == labels[j]:
                        same_num += a.adj[i, j]
                        same_den += 1
                    else:
                        diff_num += a.adj[i, j]
                        diff_den += 1
        assert fit.params["p_wc"] == pytest.approx(same_num / same_den)
        assert fit.params["p_bc"] == pytest.approx(diff_num / diff_den)


class TestFitDcbm:
    def test_complete_graph_rank_one(self):
        n = 8
        adj = np.ones((n, n), dtype=np.uint8) - np.eye(n, dtype=np.uint8)
        a = Graph(adj)
        split = full_training_split(n)
        y = partial_matrix(a, split)
        ahat = complete_lowrank(y, 1, 1.0)
        fit = fit_dcbm(a, split, ahat, 1, Labels(np.zeros(n, dtype=int), 1))
        off = ~np.eye(n, dtype=bool)
        np.testing.assert_allclose(fit.phat[off], 1.0, atol=1e-8)

    def test_rank_one_matches_independent_oracle(self):
        rng = np.random.default_rng(5)
        n = 10
        adj = (rng.random((n, n)) < 0.5).astype(np.uint8)
        adj = np.triu(adj, 1)
        a = Graph(adj + adj.T)
        split = sample_split(n, 0.8, 6)
        y = partial_matrix(a, split)
        ahat = complete_lowrank(y, 1, split.w)
        fit = fit_dcbm(a, split, ahat, 1, Labels(np.zeros(n, dtype=int), 1))
        # oracle: theta' = |top eigvec| row norms, bhat = ratio of training sums
        vals, vecs = np.linalg.eigh(ahat.ahat)
        top = vecs[:, np.argmax(np.abs(vals))]
        theta = np.abs(top)
        m = split.training_mask
        bhat = (a.adj * m).sum() / (np.outer(theta, theta) * m).sum()
        expect = np.clip(np.outer(theta, theta) * bhat, 0, 1)
        np.fill_diagonal(expect, 0)
        np.testing.assert_allclose(fit.phat, expect, atol=1e-10)

    def test_known_theta_one_equals_sbm(self):
        rng = np.random.default_rng(7)
        n = 14
        adj = (rng.random((n, n)) < 0.4).astype(np.uint8)
        adj = np.triu(adj, 1)
        a = Graph(adj + adj.T)
        labels = Labels(np.array([0, 1] * 7), 2)
        split = sample_split(n, 0.7, 8)
        p_sbm = fit_sbm(a, split, labels).phat
        y = partial_matrix(a, split)
        ahat = complete_lowrank(y, 2, split.w)
        p_dcbm = fit_dcbm(a, split, ahat, 2, labels, known_theta=np.ones(n)).phat
        np.testing.assert_allclose(p_dcbm, p_sbm, atol=1e-10)

    def test_output_in_unit_interval(self):
        rng = np.random.default_rng(9)
        n = 12
        adj = (rng.random((n, n)) < 0.6).astype(np.uint8)
        adj = np.triu(adj, 1)
        a = Graph(adj + adj.T)
        split = sample_split(n, 0.6, 10)
        y = partial_matrix(a, split)
        ahat = complete_lowrank(y, 2, split.w)
        fit = fit_dcbm(a, split, ahat, 2, Labels(np.array([0, 1] * 6), 2))
        assert fit.phat.min() >= 0 and fit.phat.max() <= 1
        np.testing.assert_array_equal(fit.phat, fit.phat.T)
        assert np.all(np.diag(fit.phat) == 0)


def ns_bruteforce(y, w, h):
    """Independent O(n^3) implementation of the neighborhood-smoothing fit."""
    n = y.shape[0]
    d2 = np.zeros((n, n))
    for i in range(n):
        for ip in range(n):
            if ip == i:
                d2[i, ip] = np.inf
                continue
            best = 0.0
            for k in range(n):
                if k == i or k == ip:
                    continue
                val = abs(np.dot(y[i] - y[ip], y[k])) / n
                best = max(best, val)
            d2[i, ip] = best
    dist = np.sqrt(np.where(np.isinf(d2), np.inf, np.maximum(d2, 0)))
    q_idx = max(int(np.ceil(h * (n - 1))), 1)
    ptilde = np.zeros((n, n))
    for i in range(n):
        others = np.sort(np.delete(dist[i], i))
        thr = others[q_idx - 1]
        nbrs = [ip for ip in range(n) if ip != i and dist[i, ip] <= thr]
        ptilde[i] = y[nbrs].mean(axis=0)
    out = np.clip(((ptilde + ptilde.T) / 2) / w, 0, 1)
    np.fill_diagonal(out, 0)
    return out


class TestFitGraphonNs:
    def test_complete_graph_value(self):
        n = 10
        y = np.ones((n, n)) - np.eye(n)
        fit = fit_graphon_ns(PartialMatrix(y), 1.0)
        off = ~np.eye(n, dtype=bool)
        # neighbor averages include the zero diagonal of Y
        np.testing.assert_allclose(fit.phat[off], (n - 2) / (n - 1), atol=1e-12)

    def test_symmetry(self):
        rng = np.random.default_rng(11)
        y = (rng.random((12, 12)) < 0.5).astype(float)
        y = np.triu(y, 1)
        y = y + y.T
        fit = fit_graphon_ns(PartialMatrix(y), 0.9)
        np.testing.assert_array_equal(fit.phat, fit.phat.T)

    def test_matches_bruteforce_oracle(self):
        rng = np.random.default_rng(12)
        for seed in range(3):
            y = (np.random.default_rng(seed).random((8, 8)) < 0.5).astype(float)
            y = np.triu(y, 1)
            y = y + y.T
            for w, h in ((1.0, 0.4), (0.8, 0.25), (0.9, None)):
                hh = default_ns_bandwidth(8) if h is None else h
                fit = fit_graphon_ns(PartialMatrix(y), w, h=hh)
                oracle = ns_bruteforce(y, w, hh)
                np.testing.assert_allclose(fit.phat, oracle, atol=1e-12)

    def test_too_small(self):
        with pytest.raises(InvalidInputError):
            fit_graphon_ns(PartialMatrix(np.zeros((2, 2))), 1.0)

    def test_default_bandwidth(self):
        assert default_ns_bandwidth(100) == pytest.approx(
            np.sqrt(np.log(100) / 100))
