"""Model parameter types, probability-matrix construction and Bernoulli sampling.

Four nested model families are supported: the affiliation (planted-partition)
block model, the general stochastic block model (SBM), the degree-corrected
block model (DCBM) and the graphon model.  Each family has a parameter
dataclass; ``build_prob`` turns any of them into the edge-probability matrix
that drives Bernoulli sampling.
"""

from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .errors import InvalidInputError, InvalidParameterError

__all__ = [
    "Graph",
    "ProbMatrix",
    "SbmParams",
    "AffiliationParams",
    "DcbmParams",
    "GraphonSpec",
    "ModelSpec",
    "build_prob",
    "sample_adjacency",
    "normalize_theta",
    "edge_density",
]

_SYM_TOL = 1e-9


def _check_labels(labels, k):
    labels = np.asarray(labels, dtype=int)
    if labels.ndim != 1:
        raise InvalidParameterError("labels must be a 1-d vector")
    if labels.min(initial=0) < 0 or labels.max(initial=-1) >= k:
        raise InvalidParameterError(f"labels must take values in 0..{k - 1}")
    if len(np.unique(labels)) != k:
        raise InvalidParameterError("labels must cover every community")
    return labels


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph as a symmetric 0/1 adjacency matrix."""

    adj: np.ndarray

    def __post_init__(self):
        adj = np.asarray(self.adj)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise InvalidInputError("adjacency matrix must be square")
        if not np.array_equal(adj, adj.T):
            raise InvalidInputError("adjacency matrix must be symmetric")
        if np.any(np.diag(adj) != 0):
            raise InvalidInputError("adjacency matrix must have a zero diagonal")
        if not np.isin(adj, (0, 1)).all():
            raise InvalidInputError("adjacency entries must be 0 or 1")
        object.__setattr__(self, "adj", adj.astype(np.uint8))

    @property
    def n(self):
        return self.adj.shape[0]


@dataclass(frozen=True)
class ProbMatrix:
    """Symmetric edge-probability matrix with zero diagonal."""

    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise InvalidInputError("probability matrix must be square")
        scale = max(np.abs(p).max(initial=0.0), 1.0)
        if np.abs(p - p.T).max(initial=0.0) > _SYM_TOL * scale:
            raise InvalidInputError("probability matrix must be symmetric")
        if np.any(np.diag(p) != 0):
            raise InvalidInputError("probability matrix must have a zero diagonal")
        if p.min(initial=0.0) < 0 or p.max(initial=0.0) > 1:
            raise InvalidInputError("probabilities must lie in [0, 1]")
        object.__setattr__(self, "p", p)

    @property
    def n(self):
        return self.p.shape[0]


@dataclass(frozen=True)
class SbmParams:
    """General SBM: block matrix ``b`` (k x k, symmetric) and node labels."""

    k: int
    b: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.b, dtype=float)
        if b.shape != (self.k, self.k):
            raise InvalidParameterError("block matrix must be k x k")
        if not np.allclose(b, b.T):
            raise InvalidParameterError("block matrix must be symmetric")
        if b.min() < 0 or b.max() > 1:
            raise InvalidParameterError("block probabilities must lie in [0, 1]")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "labels", _check_labels(self.labels, self.k))


@dataclass(frozen=True)
class AffiliationParams:
    """Planted-partition model: one within- and one between-block probability."""

    k: int
    p_wc: float
    p_bc: float
    labels: np.ndarray

    def __post_init__(self):
        for name, v in (("p_wc", self.p_wc), ("p_bc", self.p_bc)):
            if not 0 <= v <= 1:
                raise InvalidParameterError(f"{name} must lie in [0, 1]")
        object.__setattr__(self, "labels", _check_labels(self.labels, self.k))

    def block_matrix(self):
        return np.full((self.k, self.k), self.p_bc) + (self.p_wc - self.p_bc) * np.eye(self.k)


@dataclass(frozen=True)
class DcbmParams:
    """Degree-corrected block model with per-node weights ``theta``.

    ``theta`` must satisfy the identifiability constraint: within each
    community the sum of squared weights equals the community size.
    """

    k: int
    b: np.ndarray
    labels: np.ndarray
    theta: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.b, dtype=float)
        if b.shape != (self.k, self.k):
            raise InvalidParameterError("block matrix must be k x k")
        if not np.allclose(b, b.T):
            raise InvalidParameterError("block matrix must be symmetric")
        if b.min() < 0 or b.max() > 1:
            raise InvalidParameterError("block probabilities must lie in [0, 1]")
        labels = _check_labels(self.labels, self.k)
        theta = np.asarray(self.theta, dtype=float)
        if theta.shape != labels.shape:
            raise InvalidParameterError("theta and labels must have the same length")
        if theta.min() <= 0:
            raise InvalidParameterError("theta entries must be strictly positive")
        for c in range(self.k):
            mask = labels == c
            if not np.isclose(np.sum(theta[mask] ** 2), mask.sum(), atol=1e-8):
                raise InvalidParameterError(
                    "theta violates the per-community sum-of-squares constraint; "
                    "run normalize_theta first"
                )
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "theta", theta)


@dataclass(frozen=True)
class GraphonSpec:
    """Graphon model: symmetric function on [0,1]^2 plus latent positions."""

    f: Callable[[np.ndarray, np.ndarray], np.ndarray]
    xi: np.ndarray = field(default=None)

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=float)
        if xi.ndim != 1:
            raise InvalidParameterError("latent positions must be a 1-d vector")
        if xi.min() < 0 or xi.max() > 1:
            raise InvalidParameterError("latent positions must lie in [0, 1]")
        object.__setattr__(self, "xi", xi)


ModelSpec = Union[SbmParams, AffiliationParams, DcbmParams, GraphonSpec]


def build_prob(spec: ModelSpec) -> ProbMatrix:
    """Edge-probability matrix of a model specification (zero diagonal)."""
    if isinstance(spec, AffiliationParams):
        spec = SbmParams(spec.k, spec.block_matrix(), spec.labels)
    if isinstance(spec, SbmParams):
        p = spec.b[np.ix_(spec.labels, spec.labels)]
    elif isinstance(spec, DcbmParams):
        p = spec.b[np.ix_(spec.labels, spec.labels)]
        p = p * np.outer(spec.theta, spec.theta)
        off = ~np.eye(len(spec.labels), dtype=bool)
        if p[off].max(initial=0.0) > 1 + 1e-12:
            raise InvalidParameterError(
                "theta_i * theta_j * B exceeds 1 for some node pair"
            )
        p = np.clip(p, 0.0, 1.0)
    elif isinstance(spec, GraphonSpec):
        p = np.asarray(spec.f(spec.xi[:, None], spec.xi[None, :]), dtype=float)
        p = (p + p.T) / 2.0
    else:
        raise InvalidParameterError(f"unknown model spec type {type(spec).__name__}")
    p = p.copy()
    np.fill_diagonal(p, 0.0)
    return ProbMatrix(p)


def sample_adjacency(p: ProbMatrix, seed) -> Graph:
    """Sample a graph with independent Bernoulli edges above the diagonal."""
    rng = np.random.default_rng(seed)
    n = p.n
    iu = np.triu_indices(n, k=1)
    draws = (rng.random(len(iu[0])) < p.p[iu]).astype(np.uint8)
    adj = np.zeros((n, n), dtype=np.uint8)
    adj[iu] = draws
    adj += adj.T
    return Graph(adj)


def normalize_theta(theta_raw, labels) -> np.ndarray:
    """Rescale ``theta_raw`` per community so each sum of squares equals n_k.

    Ratios within a community are preserved; the result is a valid DCBM
    ``theta``.  Idempotent.
    """
    theta = np.asarray(theta_raw, dtype=float)
    if theta.min(initial=np.inf) <= 0:
        raise InvalidParameterError("theta entries must be strictly positive")
    labels = np.asarray(labels, dtype=int)
    if theta.shape != labels.shape:
        raise InvalidParameterError("theta and labels must have the same length")
    out = theta.copy()
    for c in np.unique(labels):
        mask = labels == c
        out[mask] *= np.sqrt(mask.sum() / np.sum(theta[mask] ** 2))
    return out


def edge_density(a: Graph) -> float:
    """Observed edge density: ordered-pair edge count over n(n-1)."""
    n = a.n
    if n < 2:
        raise InvalidInputError("edge density needs at least two nodes")
    return float(a.adj.sum()) / (n * (n - 1))
