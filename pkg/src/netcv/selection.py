"""Penalized cross-validated model selection over nested network models.

The engine evaluates each candidate on held-out pairs after fitting on the
training pairs, adds a complexity penalty d * lambda, and aggregates across
replicated splits.  It also houses the adaptive community-count search and
the Bethe-Hessian plug-in estimator of the community count.
"""

import warnings
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
import scipy.linalg

from .clustering import KmeansConfig, Labels, spectral_cluster
from .completion import EigenCache
from .errors import (
    DegenerateFitError,
    DegenerateSplitError,
    EstimationError,
    InvalidParameterError,
    SelectionError,
)
from .fitters import fit_affiliation, fit_dcbm, fit_graphon_ns, fit_sbm
from .models import Graph, edge_density
from .splitting import partial_matrix, sample_split, v_fold_splits

__all__ = [
    "CandidateModel",
    "PenaltyConfig",
    "CvConfig",
    "SelectionResult",
    "penalized_loss",
    "model_complexity",
    "default_lambda",
    "run_selection",
    "adaptive_k",
    "bhmc_k",
    "class_selection",
]

FAMILIES = ("affiliation", "sbm", "dcbm", "graphon-ns")
_FAMILY_ORDER = {f: i for i, f in enumerate(FAMILIES)}

BLOCK_CONTEXTS = ("within-sbm", "affiliation-vs-sbm", "sbm-vs-dcbm")
GRAPHON_CONTEXTS = ("block-vs-graphon", "sbm-vs-graphon", "dcbm-vs-graphon")


@dataclass(frozen=True)
class CandidateModel:
    family: str
    k: Optional[int] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidParameterError(f"unknown model family {self.family!r}")
        if self.family == "graphon-ns":
            if self.k is not None:
                raise InvalidParameterError("the graphon candidate takes no k")
        elif self.k is None or self.k < 1:
            raise InvalidParameterError("block candidates need k >= 1")

    def label(self):
        if self.family == "graphon-ns":
            return "graphon"
        short = {"affiliation": "am", "sbm": "sbm", "dcbm": "dcbm"}[self.family]
        return f"{short}-{self.k}"


@dataclass(frozen=True)
class PenaltyConfig:
    """Penalty scale: an explicit value, or a data-driven rule.

    rule "block" is 0.001 * density^2 / sqrt(log n); rule "graphon" is
    coefficient * density^2 / n^(3/4) with coefficient 0.1 ("graphon-supp"
    uses 0.3).  "auto" picks block or graphon by the comparison context.
    """

    lam: Optional[float] = None
    rule: str = "auto"

    def __post_init__(self):
        if self.lam is not None and self.lam < 0:
            raise InvalidParameterError("lambda must be nonnegative")
        if self.rule not in ("auto", "block", "graphon", "graphon-supp"):
            raise InvalidParameterError(f"unknown penalty rule {self.rule!r}")

    def resolve(self, a: Graph, comparison: str) -> float:
        if self.lam is not None:
            return self.lam
        rule = self.rule
        if rule == "auto":
            rule = "graphon" if comparison in GRAPHON_CONTEXTS else "block"
        if rule == "block":
            return default_lambda(a, "block")
        coef = 0.3 if rule == "graphon-supp" else 0.1
        return default_lambda(a, "graphon", coefficient=coef)


@dataclass(frozen=True)
class CvConfig:
    """Cross-validation scheme.

    - ``bernoulli``: S independent Bernoulli(w) splits.
    - ``vfold``: one V-fold pass.
    - ``vote``: ``reps`` independent V-fold passes, winner by mode.
    - ``average``: ``reps`` independent V-fold passes, pooled mean loss.
    """

    scheme: str = "vfold"
    w: float = 0.9
    s: int = 10
    v: int = 10
    reps: int = 5
    seed: object = 0
    kmeans: KmeansConfig = field(default_factory=KmeansConfig)

    def __post_init__(self):
        if self.scheme not in ("bernoulli", "vfold", "vote", "average"):
            raise InvalidParameterError(f"unknown CV scheme {self.scheme!r}")
        if not 0 < self.w < 1:
            raise InvalidParameterError("w must lie in (0, 1)")
        if min(self.s, self.v, self.reps) < 1:
            raise InvalidParameterError("S, V and reps must be positive")


@dataclass(frozen=True)
class SelectionResult:
    chosen: CandidateModel
    table: dict
    per_replicate: np.ndarray  # (replications, candidates) mean penalized loss
    k_hat: Optional[int] = None
    trace: Optional[list] = None


def penalized_loss(a: Graph, split, phat, d: float, lam: float) -> float:
    """Held-out mean squared prediction error plus d * lambda."""
    emask = np.triu(split.eval_mask(), k=1)
    count = int(emask.sum())
    if count == 0:
        raise DegenerateSplitError("evaluation set is empty")
    diff = (a.adj - phat)[emask]
    return float((diff ** 2).sum()) / count + d * lam


def model_complexity(candidate: CandidateModel, comparison: str, n: int) -> float:
    """Complexity d of a candidate in a given comparison context."""
    k = candidate.k
    if comparison not in BLOCK_CONTEXTS + GRAPHON_CONTEXTS:
        raise InvalidParameterError(f"unknown comparison context {comparison!r}")
    if candidate.family == "graphon-ns":
        if comparison not in GRAPHON_CONTEXTS:
            raise InvalidParameterError("graphon candidate outside a graphon comparison")
        return n ** 0.75 / np.sqrt(np.log(n))
    if candidate.family == "affiliation":
        return 2.0
    if candidate.family == "sbm":
        return k * (k + 1) / 2.0
    # dcbm
    return k * (k + 3) / 2.0


def default_lambda(a: Graph, comparison: str, coefficient: float = None) -> float:
    """Recommended data-driven penalty scale from the observed density."""
    n = a.n
    rho = edge_density(a)
    if comparison in ("block",) + BLOCK_CONTEXTS:
        return 0.001 * rho ** 2 / np.sqrt(np.log(n))
    if comparison in ("graphon",) + GRAPHON_CONTEXTS:
        coef = 0.1 if coefficient is None else coefficient
        return coef * rho ** 2 / n ** 0.75
    raise InvalidParameterError(f"unknown comparison context {comparison!r}")


def _seed_seq(seed):
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(seed)


def _make_replications(n, cv: CvConfig):
    """List of replications, each a list of EdgeSplits, seeded deterministically."""
    root = _seed_seq(cv.seed)
    if cv.scheme == "bernoulli":
        seeds = root.spawn(cv.s)
        return [[sample_split(n, cv.w, s) for s in seeds]]
    if cv.scheme == "vfold":
        return [v_fold_splits(n, cv.v, root.spawn(1)[0])]
    seeds = root.spawn(cv.reps)
    return [v_fold_splits(n, cv.v, s) for s in seeds]


def _infer_comparison(candidates):
    fams = {c.family for c in candidates}
    if "graphon-ns" in fams:
        return "dcbm-vs-graphon" if "dcbm" in fams else "sbm-vs-graphon"
    if "dcbm" in fams:
        return "sbm-vs-dcbm"
    if "affiliation" in fams:
        return "affiliation-vs-sbm"
    return "within-sbm"


def _tie_key(candidate, comparison, n):
    return (
        model_complexity(candidate, comparison, n),
        candidate.k if candidate.k is not None else n + 1,
        _FAMILY_ORDER[candidate.family],
    )


def _argmin_with_ties(values, candidates, comparison, n):
    best = np.nanmin(values)
    tied = [i for i, v in enumerate(values) if np.isclose(v, best, rtol=0, atol=0)]
    return min(tied, key=lambda i: _tie_key(candidates[i], comparison, n))


class _SplitWorkspace:
    """Shared per-split state: Y, cached eigenpairs and cached clusterings."""

    def __init__(self, a, split, kmeans_cfg):
        self.a = a
        self.split = split
        self.y = partial_matrix(a, split)
        self.cache = EigenCache(self.y, split.w)
        self.kmeans_cfg = kmeans_cfg
        self._labels = {}
        self._stats = None

    def labels(self, k, spherical):
        key = (k, spherical)
        if key not in self._labels:
            pack = self.cache.eigenpack(k)
            self._labels[key] = spectral_cluster(
                None, k, self.kmeans_cfg, spherical=spherical, eigen=pack
            )
        return self._labels[key]

    def fit(self, candidate, spherical=None, known_theta=None):
        if candidate.family == "graphon-ns":
            return fit_graphon_ns(self.y, self.split.w)
        k = candidate.k
        flavor = spherical if spherical is not None else candidate.family == "dcbm"
        labels = self.labels(k, flavor)
        if candidate.family == "sbm":
            return fit_sbm(self.a, self.split, labels)
        if candidate.family == "affiliation":
            return fit_affiliation(self.a, self.split, labels)
        return fit_dcbm(
            self.a, self.split, None, k, labels,
            known_theta=known_theta, eigen=self.cache.eigenpack(k),
        )

    def _pair_stats(self):
        if self._stats is None:
            emask = np.triu(self.split.eval_mask(), k=1)
            ev_i, ev_j = np.nonzero(emask)
            ed_i, ed_j = np.nonzero(np.triu(self.a.adj, k=1))
            on_eval = emask[ed_i, ed_j]
            n_train_pairs = self.a.n * (self.a.n - 1) // 2 - len(ev_i)
            if n_train_pairs == 0:
                raise DegenerateSplitError("training set is empty")
            rho_train = (~on_eval).sum() / n_train_pairs
            self._stats = (ev_i, ev_j, ed_i[~on_eval], ed_j[~on_eval],
                           ed_i[on_eval], ed_j[on_eval], float(rho_train))
        return self._stats

    def sbm_eval_mse(self, k):
        """Held-out MSE of the block-averaged SBM fit, via block statistics.

        Equals scoring fit_sbm's probability matrix with penalized_loss at
        lambda = 0, but runs on per-block-pair counts instead of n x n
        matrices.
        """
        c = self.labels(k, False).assignments
        ev_i, ev_j, ti, tj, ei, ej, rho_train = self._pair_stats()
        if len(ev_i) == 0:
            raise DegenerateSplitError("evaluation set is empty")

        def _block_counts(ii, jj):
            flat = np.bincount(c[ii] * k + c[jj], minlength=k * k)
            m = flat.reshape(k, k).astype(float)
            return m + m.T  # ordered-pair counts, symmetric

        sizes = np.bincount(c, minlength=k).astype(float)
        cnt_tot = np.outer(sizes, sizes) - np.diag(sizes)
        cnt_eval = _block_counts(ev_i, ev_j)
        cnt_train = cnt_tot - cnt_eval
        sum_train = _block_counts(ti, tj)
        sum_eval = _block_counts(ei, ej)
        bhat = np.where(cnt_train > 0,
                        sum_train / np.where(cnt_train > 0, cnt_train, 1.0),
                        rho_train)
        sse = (sum_eval * (1.0 - 2.0 * bhat) + bhat ** 2 * cnt_eval).sum()
        return float(sse / cnt_eval.sum())


def _evaluate_replications(a, candidates, replications, comparison, lam,
                           kmeans_base, spherical, known_theta):
    """Penalized loss per (replication, candidate), meaned over usable splits."""
    n = a.n
    d = [model_complexity(c, comparison, n) for c in candidates]
    per_rep = np.full((len(replications), len(candidates)), np.nan)
    any_ok = False
    for r, splits in enumerate(replications):
        losses = []
        for s, split in enumerate(splits):
            cfg = replace(kmeans_base, seed=kmeans_base.seed + 1009 * r + s)
            try:
                ws = _SplitWorkspace(a, split, cfg)
                row = [
                    penalized_loss(
                        a, split,
                        ws.fit(c, spherical=spherical, known_theta=known_theta).phat,
                        d[i], lam,
                    )
                    for i, c in enumerate(candidates)
                ]
            except (DegenerateSplitError, DegenerateFitError) as exc:
                warnings.warn(f"replicate skipped: {exc}")
                continue
            losses.append(row)
        if losses:
            per_rep[r] = np.mean(losses, axis=0)
            any_ok = True
    if not any_ok:
        raise SelectionError("every replicate produced a degenerate split or fit")
    return per_rep


def run_selection(a: Graph, candidates, cv: CvConfig, pen: PenaltyConfig,
                  comparison: str = None, spherical: bool = None,
                  known_theta=None) -> SelectionResult:
    """Penalized CV over a candidate list; aggregation follows the scheme.

    ``spherical`` forces one clustering flavor for every block candidate (a
    pairwise comparison against the DCBM shares the spherical labels);
    ``None`` applies the per-family rule.
    """
    if not candidates:
        raise InvalidParameterError("need at least one candidate")
    n = a.n
    if comparison is None:
        comparison = _infer_comparison(candidates)
    lam = pen.resolve(a, comparison)
    replications = _make_replications(n, cv)
    per_rep = _evaluate_replications(
        a, candidates, replications, comparison, lam, cv.kmeans, spherical, known_theta
    )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        pooled = np.nanmean(per_rep, axis=0)
    if cv.scheme == "vote":
        winners = [
            _argmin_with_ties(row, candidates, comparison, n)
            for row in per_rep if not np.isnan(row).all()
        ]
        counts = np.bincount(winners, minlength=len(candidates))
        tied = np.flatnonzero(counts == counts.max())
        chosen_idx = min(tied, key=lambda i: _tie_key(candidates[i], comparison, n))
    else:
        chosen_idx = _argmin_with_ties(pooled, candidates, comparison, n)
    table = {c.label(): float(pooled[i]) for i, c in enumerate(candidates)}
    return SelectionResult(candidates[chosen_idx], table, per_rep)


def adaptive_search(loss_for_k, k_max: int, patience: int = 5):
    """Ascending search over k with a consecutive-no-improvement stop rule."""
    best_k, best_loss = None, np.inf
    strikes = 0
    trace = []
    for k in range(1, k_max + 1):
        loss = loss_for_k(k)
        trace.append((k, float(loss)))
        if loss < best_loss:
            best_k, best_loss = k, loss
            strikes = 0
        else:
            strikes += 1
            if strikes >= patience:
                break
    return best_k, trace


def adaptive_k(a: Graph, cv: CvConfig, pen: PenaltyConfig, k_max: int = None,
               patience: int = 5, family: str = "sbm"):
    """Community-count search by penalized CV over ascending k (SBM fits)."""
    if family != "sbm":
        raise InvalidParameterError("the adaptive k search runs over SBM fits")
    n = a.n
    if k_max is None:
        k_max = n
    k_max = min(k_max, n)
    lam = pen.resolve(a, "within-sbm")
    replications = _make_replications(n, cv)
    workspaces = []
    for r, splits in enumerate(replications):
        for s, split in enumerate(splits):
            cfg = replace(cv.kmeans, seed=cv.kmeans.seed + 1009 * r + s)
            workspaces.append(_SplitWorkspace(a, split, cfg))

    def loss_for_k(k):
        d = model_complexity(CandidateModel("sbm", k), "within-sbm", n)
        losses = []
        for ws in workspaces:
            try:
                losses.append(ws.sbm_eval_mse(k) + d * lam)
            except (DegenerateSplitError, DegenerateFitError) as exc:
                warnings.warn(f"replicate skipped: {exc}")
        if not losses:
            raise SelectionError("every replicate failed in the k search")
        return float(np.mean(losses))

    return adaptive_search(loss_for_k, k_max, patience)


def bhmc_k(a: Graph, k_max: int) -> int:
    """Community count from the Bethe-Hessian negative-eigenvalue count.

    H(r) = (r^2 - 1) I - r A + D with r the square root of the mean degree.
    """
    if k_max < 1:
        raise InvalidParameterError("k_max must be at least 1")
    adj = a.adj.astype(float)
    degrees = adj.sum(axis=1)
    if degrees.sum() == 0:
        raise EstimationError("graph has no edges")
    r = float(np.sqrt(degrees.mean()))
    h = (r * r - 1.0) * np.eye(a.n) - r * adj + np.diag(degrees)
    eigvals = scipy.linalg.eigvalsh(h)
    count = int((eigvals < 0).sum())
    return min(max(count, 1), k_max)


_PAIRS = {
    "affiliation-vs-sbm": ("affiliation", "sbm"),
    "sbm-vs-dcbm": ("sbm", "dcbm"),
    "sbm-vs-graphon": ("sbm", "graphon-ns"),
    "dcbm-vs-graphon": ("dcbm", "graphon-ns"),
}

_DEFAULT_BHMC_KMAX = 15


def class_selection(a: Graph, pair: str, cv: CvConfig, pen: PenaltyConfig,
                    known_theta=None, k_max: int = None,
                    fixed_k: int = None) -> SelectionResult:
    """Two-stage pairwise selection: estimate K, then compare the two families.

    Step 1 uses the adaptive CV search for comparisons among SBM-like fits and
    the Bethe-Hessian estimator when the DCBM is involved.  ``fixed_k`` skips
    step 1 (e.g. when ground-truth K is assumed).
    """
    if pair not in _PAIRS:
        raise InvalidParameterError(f"unknown comparison pair {pair!r}")
    if pair == "dcbm-vs-graphon" and known_theta is None:
        raise InvalidParameterError("dcbm-vs-graphon needs known_theta")
    root = _seed_seq(cv.seed)
    seed1, seed2 = root.spawn(2)
    trace = None
    if fixed_k is not None:
        k_hat = fixed_k
    elif pair in ("affiliation-vs-sbm", "sbm-vs-graphon"):
        k_hat, trace = adaptive_k(a, replace(cv, seed=seed1), pen, k_max=k_max)
    else:
        k_hat = bhmc_k(a, k_max if k_max is not None else _DEFAULT_BHMC_KMAX)
    fam1, fam2 = _PAIRS[pair]
    candidates = [
        CandidateModel(fam, None if fam == "graphon-ns" else k_hat)
        for fam in (fam1, fam2)
    ]
    spherical = True if "dcbm" in (fam1, fam2) else None
    result = run_selection(
        a, candidates, replace(cv, seed=seed2), pen,
        comparison=pair, spherical=spherical,
        known_theta=known_theta if pair == "dcbm-vs-graphon" else None,
    )
    return replace(result, k_hat=k_hat, trace=trace)
