"""Link prediction for egocentrically sampled networks.

The core estimator recovers the row space of the underlying probability
matrix from the sampled rows and extends it to the full matrix through a
pseudo-inverse plug-in. Benchmarks, synthetic generators, ranking metrics,
and a reproducible experiment harness round out the package.
"""
from .baselines import MaskedMatrix, cur_estimate, mc_nuclear_estimate, ns_estimate, usvt_estimate
from .errors import (
    ConvergenceWarning,
    DegenerateCVError,
    DegenerateSampleError,
    EgolinkError,
    IngestionError,
    InvalidArgumentError,
    UndefinedMetricError,
    UndefinedValueError,
)
from .fileio import load_edge_list, load_matrix_csv, save_edge_list, save_matrix_csv
from .generators import ModelSpec, calibrate_phi, generate_probability, kernel_matrix, sample_adjacency
from .harness import ExperimentSpec, ResultRow, load_experiment_spec, run_experiment, summarize
from .linalg import SvdTriple, best_rank_r, pseudo_inverse, truncated_svd
from .metrics import (
    EvalResult,
    evaluate,
    predictive_auc,
    predictive_auc_bruteforce,
    predictive_kendall_tau,
    predictive_kendall_tau_bruteforce,
)
from .network import (
    AdjacencyMatrix,
    EgoSample,
    ProbabilityMatrix,
    ScoreMatrix,
    numerical_rank,
    sample_ego,
    unobserved_pairs,
)
from .subspace import Embedding, SeConfig, extract_embedding, se_estimate, select_rank

__version__ = "0.1.0"

__all__ = [
    "AdjacencyMatrix", "ProbabilityMatrix", "ScoreMatrix", "EgoSample",
    "sample_ego", "numerical_rank", "unobserved_pairs",
    "SvdTriple", "truncated_svd", "best_rank_r", "pseudo_inverse",
    "SeConfig", "Embedding", "se_estimate", "select_rank", "extract_embedding",
    "MaskedMatrix", "cur_estimate", "usvt_estimate", "mc_nuclear_estimate", "ns_estimate",
    "ModelSpec", "kernel_matrix", "calibrate_phi", "generate_probability", "sample_adjacency",
    "EvalResult", "evaluate", "predictive_auc", "predictive_kendall_tau",
    "predictive_auc_bruteforce", "predictive_kendall_tau_bruteforce",
    "ExperimentSpec", "ResultRow", "load_experiment_spec", "run_experiment", "summarize",
    "load_edge_list", "save_edge_list", "load_matrix_csv", "save_matrix_csv",
    "EgolinkError", "InvalidArgumentError", "UndefinedValueError", "DegenerateSampleError",
    "DegenerateCVError", "UndefinedMetricError", "IngestionError", "ConvergenceWarning",
]
