"""Random edge-pair splitting into training/evaluation sets.

A split is a symmetric boolean mask over off-diagonal pairs: ``True`` marks
training pairs, the complement is the evaluation set.  The partially observed
matrix Y keeps the adjacency entries on training pairs and zeroes the rest.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSplitError, InvalidInputError, InvalidParameterError
from .models import Graph

__all__ = ["EdgeSplit", "PartialMatrix", "sample_split", "v_fold_splits", "partial_matrix"]


@dataclass(frozen=True)
class EdgeSplit:
    """Training mask over unordered node pairs plus the training proportion."""

    training_mask: np.ndarray
    w: float

    def __post_init__(self):
        mask = np.asarray(self.training_mask, dtype=bool)
        if mask.ndim != 2 or mask.shape[0] != mask.shape[1]:
            raise InvalidInputError("training mask must be square")
        if not np.array_equal(mask, mask.T):
            raise InvalidInputError("training mask must be symmetric")
        if np.any(np.diag(mask)):
            raise InvalidInputError("diagonal pairs are excluded from the split")
        object.__setattr__(self, "training_mask", mask)

    @property
    def n(self):
        return self.training_mask.shape[0]

    def eval_mask(self):
        """Symmetric boolean mask of evaluation pairs (off-diagonal complement)."""
        out = ~self.training_mask
        np.fill_diagonal(out, False)
        return out

    def n_eval_pairs(self):
        """Number of unordered evaluation pairs."""
        return int(self.eval_mask().sum()) // 2

    def complement(self):
        """Split with training and evaluation sets swapped."""
        return EdgeSplit(self.eval_mask(), 1.0 - self.w)


@dataclass(frozen=True)
class PartialMatrix:
    """Adjacency restricted to training pairs, zero elsewhere."""

    y: np.ndarray

    @property
    def n(self):
        return self.y.shape[0]


def sample_split(n: int, w: float, seed) -> EdgeSplit:
    """Assign each unordered pair to training independently with probability w."""
    if not 0 < w < 1:
        raise InvalidParameterError("training proportion w must lie in (0, 1)")
    if n < 2:
        raise InvalidParameterError("need at least two nodes to split")
    rng = np.random.default_rng(seed)
    iu = np.triu_indices(n, k=1)
    draws = rng.random(len(iu[0])) < w
    mask = np.zeros((n, n), dtype=bool)
    mask[iu] = draws
    mask |= mask.T
    split = EdgeSplit(mask, w)
    if split.n_eval_pairs() == 0 or split.n_eval_pairs() == len(iu[0]):
        raise DegenerateSplitError("split left the training or evaluation set empty")
    return split


def v_fold_splits(n: int, v: int, seed) -> list:
    """Partition all unordered pairs into v evaluation folds of near-equal size.

    Returns one split per fold; each split's training set is the union of the
    other folds, so every pair is evaluated exactly once.
    """
    if v < 2:
        raise InvalidParameterError("fold count must be at least 2")
    iu = np.triu_indices(n, k=1)
    npairs = len(iu[0])
    if v > npairs:
        raise InvalidParameterError(f"cannot make {v} folds out of {npairs} pairs")
    rng = np.random.default_rng(seed)
    order = rng.permutation(npairs)
    fold_of = np.empty(npairs, dtype=int)
    # contiguous chunks of the shuffled pair list; sizes differ by at most 1
    bounds = np.linspace(0, npairs, v + 1).round().astype(int)
    for f in range(v):
        fold_of[order[bounds[f]:bounds[f + 1]]] = f
    splits = []
    for f in range(v):
        mask = np.zeros((n, n), dtype=bool)
        mask[iu] = fold_of != f
        mask |= mask.T
        w = 1.0 - (bounds[f + 1] - bounds[f]) / npairs
        splits.append(EdgeSplit(mask, w))
    return splits


def partial_matrix(a: Graph, split: EdgeSplit) -> PartialMatrix:
    """Zero out the held-out pairs of the adjacency matrix."""
    if a.n != split.n:
        raise InvalidInputError("graph and split sizes differ")
    y = np.where(split.training_mask, a.adj, 0).astype(float)
    return PartialMatrix(y)
