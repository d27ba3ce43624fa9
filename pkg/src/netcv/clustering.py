"""Spectral clustering on the completed matrix, plus label alignment.

Clustering runs k-means on the rows of the top-k eigenvector matrix.  The
spherical variant normalizes each nonzero row to unit length first, which
removes per-node degree scaling before grouping.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .completion import CompletedMatrix, top_k_eigen
from .errors import InvalidInputError, InvalidParameterError

__all__ = ["Labels", "KmeansConfig", "spectral_cluster", "kmeans", "align_labels"]


@dataclass(frozen=True)
class Labels:
    """Community assignments with values in 0..k-1."""

    assignments: np.ndarray
    k: int

    def __post_init__(self):
        a = np.asarray(self.assignments, dtype=int)
        if a.min(initial=0) < 0 or a.max(initial=-1) >= self.k:
            raise InvalidInputError("assignments must take values in 0..k-1")
        object.__setattr__(self, "assignments", a)

    @property
    def n(self):
        return len(self.assignments)


@dataclass(frozen=True)
class KmeansConfig:
    restarts: int = 10
    max_iter: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1 or self.max_iter < 1:
            raise InvalidParameterError("restarts and max_iter must be positive")


def _sq_dists(x, centers, x2):
    d = x2[:, None] - 2.0 * (x @ centers.T) + (centers ** 2).sum(axis=1)[None, :]
    return np.maximum(d, 0.0)


def _kmeans_single(x, k, rng, max_iter):
    n = x.shape[0]
    x2 = (x ** 2).sum(axis=1)
    centers = np.empty((k, x.shape[1]))
    # greedy farthest-point seeding from a random start
    centers[0] = x[rng.integers(n)]
    d2 = ((x - centers[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        centers[j] = x[int(np.argmax(d2))]
        d2 = np.minimum(d2, ((x - centers[j]) ** 2).sum(axis=1))
    labels = np.zeros(n, dtype=int)
    for _ in range(max_iter):
        dists = _sq_dists(x, centers, x2)
        new_labels = dists.argmin(axis=1)
        for j in range(k):
            sel = new_labels == j
            if sel.any():
                centers[j] = x[sel].mean(axis=0)
        empty = [j for j in range(k) if not (new_labels == j).any()]
        if empty:
            # one repair pass: move each empty center to the point farthest
            # from its current centroid
            far = dists[np.arange(n), new_labels]
            for j in empty:
                idx = int(np.argmax(far))
                centers[j] = x[idx]
                new_labels[idx] = j
                far[idx] = -1.0
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
    wcss = float(((x - centers[labels]) ** 2).sum())
    return labels, centers, wcss


def kmeans(x, k, cfg: KmeansConfig):
    """Best-of-restarts Lloyd k-means; returns (labels, centers)."""
    rng = np.random.default_rng(cfg.seed)
    best = None
    for _ in range(cfg.restarts):
        labels, centers, wcss = _kmeans_single(x, k, rng, cfg.max_iter)
        if best is None or wcss < best[2]:
            best = (labels, centers, wcss)
    return best[0], best[1]


def spectral_cluster(ahat: CompletedMatrix, k: int, cfg: KmeansConfig = KmeansConfig(),
                     spherical: bool = False, eigen=None) -> Labels:
    """Cluster nodes by k-means on the top-k eigenvector rows of ``ahat``.

    ``eigen`` may supply a precomputed EigenPack with at least k columns, in
    which case ``ahat`` may be None.
    """
    if eigen is not None and eigen.vectors.shape[1] >= k:
        u = eigen.vectors[:, :k]
        n = u.shape[0]
    else:
        if ahat is None:
            raise InvalidInputError("need either a completed matrix or eigenpairs")
        u = None
        n = ahat.n
    if not 1 <= k <= n:
        raise InvalidParameterError(f"k must lie in 1..{n}")
    if k == 1:
        return Labels(np.zeros(n, dtype=int), 1)
    if u is None:
        u = top_k_eigen(ahat.ahat, k).vectors
    if spherical:
        norms = np.linalg.norm(u, axis=1)
        nonzero = norms > 0
        rows = u[nonzero] / norms[nonzero, None]
        labels_nz, centers = kmeans(rows, k, cfg)
        assignments = np.empty(n, dtype=int)
        assignments[nonzero] = labels_nz
        if not nonzero.all():
            # zero rows carry no direction; fall back to raw-space distance
            zero_rows = u[~nonzero]
            d = ((zero_rows[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
            assignments[~nonzero] = d.argmin(axis=1)
        return Labels(assignments, k)
    assignments, _ = kmeans(u, k, cfg)
    return Labels(assignments, k)


def align_labels(est: Labels, truth: Labels):
    """Best label matching between two clusterings.

    Returns ``(perm, error_rate)`` where ``perm[j]`` is the truth label
    assigned to estimated label j and ``error_rate`` is the minimal mismatch
    fraction over all matchings (exact min-cost assignment).
    """
    if est.n != truth.n:
        raise InvalidInputError("label vectors have different lengths")
    k = max(est.k, truth.k)
    confusion = np.zeros((k, k), dtype=int)
    np.add.at(confusion, (est.assignments, truth.assignments), 1)
    rows, cols = linear_sum_assignment(-confusion)
    perm = np.empty(k, dtype=int)
    perm[rows] = cols
    matched = confusion[rows, cols].sum()
    return perm, 1.0 - matched / est.n
