"""Per-family estimation of the edge-probability matrix from training pairs.

All fitters return a FitResult whose ``phat`` is symmetric, clamped to [0, 1]
only at the very end of the fit, and has a zero diagonal.
"""

import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .completion import CompletedMatrix, top_k_eigen
from .errors import DegenerateFitError, InvalidInputError, InvalidParameterError
from .clustering import Labels
from .models import Graph
from .splitting import EdgeSplit, PartialMatrix

__all__ = [
    "FitResult",
    "fit_sbm",
    "fit_affiliation",
    "fit_dcbm",
    "fit_graphon_ns",
    "default_ns_bandwidth",
]


@dataclass(frozen=True)
class FitResult:
    phat: np.ndarray
    family_tag: str
    labels: Optional[Labels] = None
    params: dict = field(default_factory=dict)
    degenerate: bool = False


def _finalize(phat):
    phat = np.clip((phat + phat.T) / 2.0, 0.0, 1.0)
    np.fill_diagonal(phat, 0.0)
    return phat


def _one_hot(labels: Labels):
    z = np.zeros((labels.n, labels.k))
    z[np.arange(labels.n), labels.assignments] = 1.0
    return z


def _training_density(a, mask):
    total = mask.sum()
    if total == 0:
        raise DegenerateFitError("no training pairs available")
    return float((a.adj * mask).sum()) / total


def fit_sbm(a: Graph, split: EdgeSplit, labels: Labels) -> FitResult:
    """Block-averaged SBM fit on the training pairs."""
    mask = split.training_mask
    z = _one_hot(labels)
    am = a.adj * mask
    num = z.T @ am @ z
    den = z.T @ mask @ z
    fallback = _training_density(a, mask)
    bhat = np.where(den > 0, num / np.where(den > 0, den, 1.0), fallback)
    bhat = (bhat + bhat.T) / 2.0
    c = labels.assignments
    phat = _finalize(bhat[np.ix_(c, c)])
    return FitResult(phat, "sbm", labels=labels, params={"b": bhat})


def fit_affiliation(a: Graph, split: EdgeSplit, labels: Labels) -> FitResult:
    """Two-parameter planted-partition fit on the training pairs."""
    mask = split.training_mask
    c = labels.assignments
    same = (c[:, None] == c[None, :]) & mask
    diff = (c[:, None] != c[None, :]) & mask
    if same.sum() + diff.sum() == 0:
        raise DegenerateFitError("no training pairs available")
    degenerate = False
    p_wc = float((a.adj * same).sum()) / same.sum() if same.sum() else 0.0
    if diff.sum():
        p_bc = float((a.adj * diff).sum()) / diff.sum()
    else:
        p_bc = p_wc
        degenerate = True
        warnings.warn("no between-community training pairs; p_bc set to p_wc")
    phat = np.where(c[:, None] == c[None, :], p_wc, p_bc)
    phat = _finalize(phat.astype(float))
    return FitResult(phat, "affiliation", labels=labels,
                     params={"p_wc": p_wc, "p_bc": p_bc}, degenerate=degenerate)


def fit_dcbm(a: Graph, split: EdgeSplit, ahat: Optional[CompletedMatrix], k: int,
             labels: Labels, known_theta=None, eigen=None) -> FitResult:
    """Degree-corrected fit: scaled per-node weights times block ratios.

    The scaled weights come from the row norms of the top-k eigenvectors of
    the completed matrix (``ahat`` may be None when ``eigen`` supplies the
    eigenpairs), or from a known weight vector rescaled by the estimated
    community sizes.
    """
    if k < 1:
        raise InvalidParameterError("k must be at least 1")
    mask = split.training_mask
    c = labels.assignments
    if known_theta is not None:
        theta = np.asarray(known_theta, dtype=float)
        if theta.shape != c.shape:
            raise InvalidInputError("known theta length does not match the graph")
        sizes = np.bincount(c, minlength=labels.k).astype(float)
        theta_s = theta / np.sqrt(sizes[c])
    else:
        if eigen is not None and eigen.vectors.shape[1] >= k:
            u = eigen.vectors[:, :k]
        elif ahat is not None:
            u = top_k_eigen(ahat.ahat, k).vectors
        else:
            raise InvalidInputError("need either a completed matrix or eigenpairs")
        theta_s = np.linalg.norm(u, axis=1)
        if not np.any(theta_s > 0):
            raise DegenerateFitError("all eigenvector row norms are zero")
    z = _one_hot(labels)
    outer = np.outer(theta_s, theta_s)
    num = z.T @ (a.adj * mask) @ z
    den = z.T @ (outer * mask) @ z
    mean_pair = float(theta_s.mean()) ** 2
    if mean_pair > 0:
        fallback = _training_density(a, mask) / mean_pair
    else:
        fallback = _training_density(a, mask)
    bhat = np.where(den > 0, num / np.where(den > 0, den, 1.0), fallback)
    bhat = (bhat + bhat.T) / 2.0
    phat = _finalize(outer * bhat[np.ix_(c, c)])
    return FitResult(phat, "dcbm", labels=labels,
                     params={"b_scaled": bhat, "theta_scaled": theta_s})


def default_ns_bandwidth(n: int) -> float:
    """Neighborhood-quantile bandwidth sqrt(log n / n)."""
    return float(np.sqrt(np.log(n) / n))


def fit_graphon_ns(y: PartialMatrix, w: float, h: float = None) -> FitResult:
    """Neighborhood-smoothing graphon fit on the partially observed matrix.

    Distance between nodes i and i' is the largest |<Y_i - Y_i', Y_k>| / n
    over reference nodes k distinct from both.  Each node averages its row
    over the neighbors within its h-quantile distance, the result is
    symmetrized and rescaled by 1/w.
    """
    n = y.n
    if n < 3:
        raise InvalidInputError("neighborhood smoothing needs at least 3 nodes")
    if h is None:
        h = default_ns_bandwidth(n)
    if not 0 < h < 1:
        raise InvalidParameterError("bandwidth h must lie in (0, 1)")
    if not 0 < w <= 1:
        raise InvalidParameterError("training proportion w must lie in (0, 1]")
    ymat = np.asarray(y.y, dtype=float)
    d = ymat @ ymat / n
    dist2 = np.empty((n, n))
    for i in range(n):
        diffs = np.abs(d[i][None, :] - d)
        diffs[:, i] = -1.0  # reference k = i excluded
        np.fill_diagonal(diffs, -1.0)  # reference k = i' excluded
        dist2[i] = diffs.max(axis=1)
    dist2[np.arange(n), np.arange(n)] = np.inf
    dist = np.sqrt(np.maximum(dist2, 0.0))
    member = np.zeros((n, n), dtype=bool)
    q_idx = max(int(np.ceil(h * (n - 1))), 1)
    for i in range(n):
        others = np.delete(dist[i], i)
        thr = np.sort(others)[q_idx - 1]
        member[i] = dist[i] <= thr  # ties included; diagonal is +inf
    counts = member.sum(axis=1)
    ptilde = (member @ ymat) / counts[:, None]
    phat = _finalize(((ptilde + ptilde.T) / 2.0) / w)
    return FitResult(phat, "graphon-ns", params={"bandwidth": h})
