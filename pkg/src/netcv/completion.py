"""Low-rank completion of the partially observed matrix.

The completion keeps the k largest singular values of Y and rescales by 1/w
to debias the missing pairs.  Because Y is symmetric, the truncated SVD is
computed from a symmetric eigendecomposition: keeping the k largest-magnitude
eigenvalue components equals the rank-k SVD truncation.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .errors import InvalidInputError, InvalidParameterError
from .splitting import PartialMatrix

__all__ = [
    "CompletedMatrix",
    "EigenPack",
    "EigenCache",
    "complete_lowrank",
    "top_k_eigen",
]

_SYM_RTOL = 1e-9

# eigsh needs a start vector; a fixed one keeps every run bit-reproducible.
_V0_SEED = 0x5EED

# below this size a full dense eigendecomposition is cheaper than Lanczos
_DENSE_CUTOFF = 64


@dataclass(frozen=True)
class CompletedMatrix:
    """Rank-limited reconstruction of the full adjacency matrix."""

    ahat: np.ndarray
    rank_used: int

    @property
    def n(self):
        return self.ahat.shape[0]


@dataclass(frozen=True)
class EigenPack:
    """Top eigenpairs ordered by descending absolute eigenvalue."""

    values: np.ndarray
    vectors: np.ndarray


def _check_symmetric(m):
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidInputError("matrix must be square")
    scale = max(np.abs(m).max(initial=0.0), 1.0)
    if np.abs(m - m.T).max(initial=0.0) > _SYM_RTOL * scale:
        raise InvalidInputError("matrix is not symmetric within tolerance")
    return m


def _fix_signs(vectors):
    """Flip columns so the first non-negligible component is nonnegative."""
    out = vectors.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        big = np.abs(col) > 1e-12 * max(np.abs(col).max(), 1e-300)
        idx = np.argmax(big)
        if big[idx] and col[idx] < 0:
            out[:, j] = -col
    return out


def _top_abs_eigen(m, k):
    """k eigenpairs of symmetric m with largest |eigenvalue|, ties by spectrum order."""
    n = m.shape[0]
    if n <= _DENSE_CUTOFF or k >= n - 1:
        values, vectors = scipy.linalg.eigh(m)
    else:
        op = m
        if np.count_nonzero(m) < 0.25 * m.size:
            op = scipy.sparse.csr_array(m)
        v0 = np.random.default_rng(_V0_SEED).standard_normal(n)
        values, vectors = scipy.sparse.linalg.eigsh(op, k=k, which="LM", v0=v0)
    order = np.argsort(-np.abs(values), kind="stable")[:k]
    return values[order], _fix_signs(vectors[:, order])


def top_k_eigen(m, k: int) -> EigenPack:
    """Top-k eigenpairs of a symmetric matrix by absolute eigenvalue."""
    m = _check_symmetric(m)
    n = m.shape[0]
    if not 1 <= k <= n:
        raise InvalidParameterError(f"k must lie in 1..{n}")
    values, vectors = _top_abs_eigen(m, k)
    return EigenPack(values, vectors)


def complete_lowrank(y: PartialMatrix, k: int, w: float) -> CompletedMatrix:
    """Rank-k truncated-SVD completion of Y, rescaled by 1/w."""
    n = y.n
    if not 1 <= k <= n:
        raise InvalidParameterError(f"rank k must lie in 1..{n}")
    if not 0 < w <= 1:
        raise InvalidParameterError("training proportion w must lie in (0, 1]")
    values, vectors = _top_abs_eigen(np.asarray(y.y, dtype=float), k)
    ahat = (vectors * values) @ vectors.T / w
    ahat = (ahat + ahat.T) / 2.0
    return CompletedMatrix(ahat, k)


class EigenCache:
    """Reuses eigenpairs of one Y across the ranks tried within a split.

    The adaptive community-count search asks for completions at ranks
    1, 2, 3, ... of the same partially observed matrix; recomputing the
    decomposition per rank would dominate the runtime.
    """

    def __init__(self, y: PartialMatrix, w: float):
        self._y = np.asarray(y.y, dtype=float)
        self._w = w
        self._values = None
        self._vectors = None

    def _ensure(self, k):
        have = 0 if self._values is None else len(self._values)
        if k > have:
            target = min(self._y.shape[0], max(2 * k, 16))
            self._values, self._vectors = _top_abs_eigen(self._y, target)

    def completion(self, k: int) -> CompletedMatrix:
        if not 1 <= k <= self._y.shape[0]:
            raise InvalidParameterError(f"rank k must lie in 1..{self._y.shape[0]}")
        self._ensure(k)
        vals = self._values[:k]
        vecs = self._vectors[:, :k]
        ahat = (vecs * vals) @ vecs.T / self._w
        return CompletedMatrix((ahat + ahat.T) / 2.0, k)

    def eigenpack(self, k: int) -> EigenPack:
        self._ensure(k)
        return EigenPack(self._values[:k], self._vectors[:, :k])
