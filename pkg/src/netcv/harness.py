"""Simulation scenarios, Monte-Carlo frequency tables, and graph file input.

Scenario names follow the benchmark configurations: ``am-3`` (affiliation),
``sbm-3``/``sbm-5`` (balanced), ``sbm-imbalanced-3``/``sbm-imbalanced-5``,
``dcbm-3``/``dcbm-5`` (imbalanced, r=0.1), ``dcbm-e2`` (r=0.3) and
``graphon-ns`` (a smooth sinusoidal graphon).
"""

import csv
import io
import json
import re
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import EstimationError, FormatError, InvalidParameterError, SelectionError
from .models import (
    AffiliationParams,
    DcbmParams,
    Graph,
    GraphonSpec,
    SbmParams,
    build_prob,
    normalize_theta,
    sample_adjacency,
)
from .selection import (
    CandidateModel,
    CvConfig,
    PenaltyConfig,
    adaptive_k,
    class_selection,
)

__all__ = [
    "Scenario",
    "MethodConfig",
    "FrequencyTable",
    "SCENARIO_NAMES",
    "make_scenario",
    "monte_carlo",
    "frequency_csv",
    "frequency_json",
    "load_graph",
    "write_edgelist",
]

SCENARIO_NAMES = (
    "am-3", "sbm-3", "sbm-5", "sbm-imbalanced-3", "sbm-imbalanced-5",
    "dcbm-3", "dcbm-5", "dcbm-e2", "graphon-ns",
)

_IMBALANCED_PI = {
    3: np.array([1 / 6, 1 / 3, 1 / 2]),
    5: np.array([1 / 10, 1 / 10, 1 / 5, 3 / 10, 3 / 10]),
}

_LABEL_RETRIES = 100


def _draw_labels(rng, n, pi):
    """Multinomial community labels; redraws if any community comes out empty."""
    k = len(pi)
    if n < k:
        raise InvalidParameterError(f"need n >= {k} nodes for {k} communities")
    for _ in range(_LABEL_RETRIES):
        labels = rng.choice(k, size=n, p=pi)
        if len(np.unique(labels)) == k:
            return labels
    raise EstimationError("could not draw labels covering every community")


def _graphon_f(u, v):
    return 0.3 * (np.sin(5 * np.pi * (u + v - 1) + 1) / 2 + 0.5)


def _draw_sbm_b(rng, k, r, diag_lo, diag_hi, off_lo, off_hi):
    b0 = np.empty((k, k))
    iu = np.triu_indices(k, k=1)
    off = rng.uniform(off_lo, off_hi, size=len(iu[0]))
    b0[iu] = off
    b0.T[iu] = off
    np.fill_diagonal(b0, rng.uniform(diag_lo, diag_hi, size=k))
    return r * b0


def make_scenario(name: str, n: int, seed):
    """Draw one parameter configuration; returns (model spec, expected model)."""
    if name not in SCENARIO_NAMES:
        raise InvalidParameterError(f"unknown scenario {name!r}")
    rng = np.random.default_rng(seed)
    if name == "graphon-ns":
        xi = rng.uniform(0.0, 1.0, size=n)
        return GraphonSpec(_graphon_f, xi), CandidateModel("graphon-ns")
    if name == "am-3":
        labels = _draw_labels(rng, n, np.full(3, 1 / 3))
        # r=0.1, out-in ratio beta=0.4: within 0.10, between 0.04
        spec = AffiliationParams(3, 0.10, 0.04, labels)
        return spec, CandidateModel("affiliation", 3)
    if name.startswith("sbm"):
        k = int(name.rsplit("-", 1)[1])
        pi = _IMBALANCED_PI[k] if "imbalanced" in name else np.full(k, 1 / k)
        labels = _draw_labels(rng, n, pi)
        b = _draw_sbm_b(rng, k, 0.1, 0.6, 1.0, 0.1, 0.3)
        return SbmParams(k, b, labels), CandidateModel("sbm", k)
    # dcbm-3, dcbm-5, dcbm-e2
    k = 3 if name == "dcbm-e2" else int(name.rsplit("-", 1)[1])
    r = 0.3 if name == "dcbm-e2" else 0.1
    labels = _draw_labels(rng, n, _IMBALANCED_PI[k])
    b = _draw_sbm_b(rng, k, r, 0.8, 1.0, 0.2, 0.4)
    theta = normalize_theta(rng.uniform(0.1, 1.0, size=n), labels)
    return DcbmParams(k, b, labels, theta), CandidateModel("dcbm", k)


@dataclass(frozen=True)
class Scenario:
    name: str
    n: int

    def __post_init__(self):
        if self.name not in SCENARIO_NAMES:
            raise InvalidParameterError(f"unknown scenario {self.name!r}")
        if self.n < 2:
            raise InvalidParameterError("n must be at least 2")

    def draw(self, seed):
        return make_scenario(self.name, self.n, seed)


@dataclass(frozen=True)
class MethodConfig:
    """One configured selection procedure for the Monte-Carlo harness.

    ``pair`` is a pairwise comparison tag, or ``within-sbm`` for the
    community-count search alone.  ``known_theta_from_truth`` feeds the drawn
    degree weights (ones for non-DCBM truths) into the DCBM-vs-graphon fit.
    """

    pair: str
    cv: CvConfig = field(default_factory=CvConfig)
    pen: PenaltyConfig = field(default_factory=PenaltyConfig)
    k_max: int = None
    fixed_k: int = None
    name: str = "pnn-cv"
    known_theta_from_truth: bool = True


@dataclass(frozen=True)
class FrequencyTable:
    reps: int
    counts: dict
    failures: int

    def __post_init__(self):
        if sum(self.counts.values()) + self.failures != self.reps:
            raise InvalidParameterError("counts plus failures must equal reps")


def _run_one(args):
    scenario, method, rep_seed = args
    draw_seed, sample_seed, cv_seed = rep_seed.spawn(3)
    spec, _ = scenario.draw(draw_seed)
    p = build_prob(spec)
    a = sample_adjacency(p, sample_seed)
    cv = replace(method.cv, seed=cv_seed)
    if method.pair == "within-sbm":
        k_hat, _ = adaptive_k(a, cv, method.pen, k_max=method.k_max)
        return f"sbm-{k_hat}"
    known_theta = None
    if method.pair == "dcbm-vs-graphon" and method.known_theta_from_truth:
        if isinstance(spec, DcbmParams):
            known_theta = spec.theta
        else:
            known_theta = np.ones(scenario.n)
    result = class_selection(
        a, method.pair, cv, method.pen,
        known_theta=known_theta, k_max=method.k_max, fixed_k=method.fixed_k,
    )
    return result.chosen.label()


def monte_carlo(scenario: Scenario, method: MethodConfig, reps: int, seed,
                threads: int = 1) -> FrequencyTable:
    """Repeated draw-sample-select trials; per-trial seeds derive from ``seed``."""
    if reps < 1:
        raise InvalidParameterError("reps must be at least 1")
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    jobs = [(scenario, method, s) for s in root.spawn(reps)]
    counts = {}
    failures = 0

    def _tally(outcome):
        nonlocal failures
        if outcome is None:
            warnings.warn("trial failed; counted as a failure")
            failures += 1
        else:
            counts[outcome] = counts.get(outcome, 0) + 1

    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for outcome in pool.map(_run_trial, jobs):
                _tally(outcome)
    else:
        for job in jobs:
            _tally(_run_trial(job))
    return FrequencyTable(reps, counts, failures)


def _run_trial(job):
    """Top-level worker so the parallel path can pickle it."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        try:
            return _run_one(job)
        except (SelectionError, EstimationError):
            return None


def frequency_csv(table: FrequencyTable, scenario: Scenario, method_name: str) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["scenario", "n", "method", "model", "count", "reps"])
    for model in sorted(table.counts):
        writer.writerow([scenario.name, scenario.n, method_name, model,
                         table.counts[model], table.reps])
    if table.failures:
        writer.writerow([scenario.name, scenario.n, method_name, "__failed__",
                         table.failures, table.reps])
    return buf.getvalue()


def frequency_json(table: FrequencyTable, scenario: Scenario, method_name: str) -> str:
    payload = {
        "scenario": scenario.name,
        "n": scenario.n,
        "method": method_name,
        "reps": table.reps,
        "counts": {k: table.counts[k] for k in sorted(table.counts)},
        "failures": table.failures,
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _compact_edges(raw_edges, raw_ids=None):
    """Map arbitrary node ids to 0..n-1 by first appearance; dedup pairs."""
    index = {}
    if raw_ids is not None:
        for rid in raw_ids:
            if rid in index:
                raise FormatError(f"duplicate node id {rid!r}")
            index[rid] = len(index)
    edges = set()
    loops = 0
    for u, v in raw_edges:
        for node in (u, v):
            if node not in index:
                if raw_ids is not None:
                    raise FormatError(f"edge endpoint {node!r} has no node entry")
                index[node] = len(index)
        if u == v:
            loops += 1
            continue
        i, j = index[u], index[v]
        edges.add((min(i, j), max(i, j)))
    if loops:
        warnings.warn(f"dropped {loops} self-loop(s)")
    n = len(index)
    if n < 1:
        raise FormatError("file contains no nodes")
    adj = np.zeros((n, n), dtype=np.uint8)
    for i, j in edges:
        adj[i, j] = adj[j, i] = 1
    ids = [None] * n
    for rid, i in index.items():
        ids[i] = rid
    return Graph(adj), ids


def _load_edgelist(path):
    raw_edges = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            parts = body.split()
            if len(parts) != 2:
                raise FormatError("expected two node ids per line", line=lineno)
            raw_edges.append((parts[0], parts[1]))
    graph, ids = _compact_edges(raw_edges)
    return graph, {"ids": ids}


_GML_TOKEN = re.compile(r'"[^"]*"|\[|\]|[^\s\[\]"]+')


def _tokenize_gml(text):
    tokens = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        for tok in _GML_TOKEN.findall(line):
            tokens.append((tok, lineno))
    return tokens


def _parse_gml_block(tokens, pos):
    """Parse key/value pairs until the closing bracket; values may nest."""
    items = []
    while pos < len(tokens):
        tok, lineno = tokens[pos]
        if tok == "]":
            return items, pos + 1
        if tok == "[":
            raise FormatError("unexpected '['", line=lineno)
        key = tok
        pos += 1
        if pos >= len(tokens):
            raise FormatError(f"key {key!r} has no value", line=lineno)
        val, vline = tokens[pos]
        if val == "[":
            sub, pos = _parse_gml_block(tokens, pos + 1)
            items.append((key, sub, lineno))
        else:
            if val == "]":
                raise FormatError(f"key {key!r} has no value", line=vline)
            if val.startswith('"'):
                val = val[1:-1]
            items.append((key, val, lineno))
            pos += 1
    return items, pos


def _gml_find(items, key):
    return [(v, line) for k, v, line in items if k == key]


def _load_gml(path):
    with open(path) as fh:
        tokens = _tokenize_gml(fh.read())
    top, _ = _parse_gml_block(tokens, 0)
    graphs = [v for v, _ in _gml_find(top, "graph") if isinstance(v, list)]
    if not graphs:
        raise FormatError("no 'graph [ ... ]' block found", line=1)
    body = graphs[0]
    raw_ids, labels, values = [], {}, {}
    for node, line in _gml_find(body, "node"):
        if not isinstance(node, list):
            raise FormatError("node entry is not a block", line=line)
        ids = _gml_find(node, "id")
        if not ids:
            raise FormatError("node block without id", line=line)
        nid = ids[0][0]
        raw_ids.append(nid)
        lab = _gml_find(node, "label")
        if lab:
            labels[nid] = lab[0][0]
        val = _gml_find(node, "value")
        if val:
            values[nid] = val[0][0]
    raw_edges = []
    for edge, line in _gml_find(body, "edge"):
        if not isinstance(edge, list):
            raise FormatError("edge entry is not a block", line=line)
        src = _gml_find(edge, "source")
        tgt = _gml_find(edge, "target")
        if not src or not tgt:
            raise FormatError("edge block needs source and target", line=line)
        raw_edges.append((src[0][0], tgt[0][0]))
    graph, ids = _compact_edges(raw_edges, raw_ids=raw_ids)
    attrs = {"ids": ids}
    if labels:
        attrs["labels"] = [labels.get(rid) for rid in ids]
    if values:
        attrs["values"] = [values.get(rid) for rid in ids]
    return graph, attrs


def load_graph(path, format: str = "edgelist"):
    """Read an undirected simple graph; returns (Graph, node attribute map).

    Duplicate edges collapse to one; self-loops are dropped with a warning.
    Node ids are compacted to 0..n-1 in first-appearance order, with the
    original ids kept in the attribute map.
    """
    if format == "edgelist":
        return _load_edgelist(path)
    if format == "gml":
        return _load_gml(path)
    raise InvalidParameterError(f"unknown graph format {format!r}")


def write_edgelist(path, graph: Graph, ids=None):
    """Write one 'u v' line per undirected edge."""
    n = graph.n
    names = ids if ids is not None else list(range(n))
    with open(path, "w") as fh:
        iu, ju = np.nonzero(np.triu(graph.adj, k=1))
        for i, j in zip(iu, ju):
            fh.write(f"{names[i]} {names[j]}\n")
