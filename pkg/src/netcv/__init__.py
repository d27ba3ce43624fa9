"""Penalized cross-validated selection among nested network models.

The pipeline: split node pairs into training and evaluation sets, complete
the partially observed adjacency matrix at low rank, fit each candidate
family (affiliation, SBM, DCBM, neighborhood-smoothing graphon) on the
training pairs, and pick the candidate minimizing held-out squared error
plus a complexity penalty.
"""

from .clustering import KmeansConfig, Labels, align_labels, kmeans, spectral_cluster
from .completion import (
    CompletedMatrix,
    EigenCache,
    EigenPack,
    complete_lowrank,
    top_k_eigen,
)
from .errors import (
    DegenerateFitError,
    DegenerateSplitError,
    EstimationError,
    FormatError,
    InvalidInputError,
    InvalidParameterError,
    NetcvError,
    SelectionError,
)
from .fitters import (
    FitResult,
    default_ns_bandwidth,
    fit_affiliation,
    fit_dcbm,
    fit_graphon_ns,
    fit_sbm,
)
from .harness import (
    FrequencyTable,
    MethodConfig,
    SCENARIO_NAMES,
    Scenario,
    frequency_csv,
    frequency_json,
    load_graph,
    make_scenario,
    monte_carlo,
    write_edgelist,
)
from .models import (
    AffiliationParams,
    DcbmParams,
    Graph,
    GraphonSpec,
    ProbMatrix,
    SbmParams,
    build_prob,
    edge_density,
    normalize_theta,
    sample_adjacency,
)
from .selection import (
    CandidateModel,
    CvConfig,
    PenaltyConfig,
    SelectionResult,
    adaptive_k,
    bhmc_k,
    class_selection,
    default_lambda,
    model_complexity,
    penalized_loss,
    run_selection,
)
from .splitting import EdgeSplit, PartialMatrix, partial_matrix, sample_split, v_fold_splits

__version__ = "0.1.0"

__all__ = [
    "AffiliationParams", "CandidateModel", "CompletedMatrix", "CvConfig",
    "DcbmParams", "DegenerateFitError", "DegenerateSplitError", "EdgeSplit",
    "EigenCache", "EigenPack", "EstimationError", "FitResult", "FormatError",
    "FrequencyTable", "Graph", "GraphonSpec", "InvalidInputError",
    "InvalidParameterError", "KmeansConfig", "Labels", "MethodConfig",
    "NetcvError", "PartialMatrix", "PenaltyConfig", "ProbMatrix",
    "SCENARIO_NAMES", "SbmParams", "Scenario", "SelectionError",
    "SelectionResult", "adaptive_k", "align_labels", "bhmc_k", "build_prob",
    "class_selection", "complete_lowrank", "default_lambda",
    "default_ns_bandwidth", "edge_density", "fit_affiliation", "fit_dcbm",
    "fit_graphon_ns", "fit_sbm", "frequency_csv", "frequency_json", "kmeans",
    "load_graph", "make_scenario", "model_complexity", "monte_carlo",
    "normalize_theta", "partial_matrix", "penalized_loss", "run_selection",
    "sample_adjacency", "sample_split", "spectral_cluster", "top_k_eigen",
    "v_fold_splits", "write_edgelist",
]
