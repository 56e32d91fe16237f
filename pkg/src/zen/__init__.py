"""Parameter-free linear hypergraph node classification.

Pipeline: build degree-normalized hop adjacencies with redundant
self-information removed, mix them with simplex weights, propagate raw
features once, and read class weights directly off the labeled rows. No
trained parameters anywhere; every step is a closed form over sparse matrix
products, so runs are fast and exactly reproducible from their seeds.
"""

from .classifier import (
    Prediction,
    SpectralComponents,
    Split,
    TrainingParams,
    embed,
    exact_weights,
    make_assumption_data,
    normalize_cols,
    normalize_rows,
    predict,
    sse_gradient,
    sse_loss,
    tcs_error_bound,
    tcs_weights,
    train_weights_gd,
)
from .errors import (
    ConfigError,
    DatasetError,
    DivergenceError,
    GuardError,
    HypergraphParseError,
    IsolatedNodeError,
    SplitError,
    ZenError,
)
from .harness import (
    Dataset,
    RunResult,
    SeedResult,
    SimplexGrid,
    WeightReport,
    config_weights,
    evaluate_accuracy,
    explain_weights,
    grid_search,
    load_dataset,
    make_kshot_split,
    run_config,
    simplex_grid,
)
from .hypergraph import (
    DegreeProfile,
    Hypergraph,
    LabelSet,
    degrees,
    incidence_matrix,
    load_features,
    load_hypergraph,
    load_labels,
    parse_hypergraph,
    serialize_hypergraph,
)
from .propagation import (
    BaselineRecipe,
    NormalizationKind,
    PropagationConfig,
    build_A1_hat,
    build_A1_star,
    build_A2_hat,
    build_A2_star,
    build_baseline_adjacency,
    build_P_star,
    plain_adjacency,
    restart_coefficients,
    rsi_diag_1,
    rsi_diag_2,
)
from .rsi_approx import (
    HutchinsonParams,
    WalkParams,
    dense_diag_oracle,
    hutchinson_diag,
    random_walk_return_prob,
    walk_transition_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "BaselineRecipe",
    "ConfigError",
    "Dataset",
    "DatasetError",
    "DegreeProfile",
    "DivergenceError",
    "GuardError",
    "HutchinsonParams",
    "Hypergraph",
    "HypergraphParseError",
    "IsolatedNodeError",
    "LabelSet",
    "NormalizationKind",
    "Prediction",
    "PropagationConfig",
    "RunResult",
    "SeedResult",
    "SimplexGrid",
    "SpectralComponents",
    "Split",
    "SplitError",
    "TrainingParams",
    "WalkParams",
    "WeightReport",
    "ZenError",
    "build_A1_hat",
    "build_A1_star",
    "build_A2_hat",
    "build_A2_star",
    "build_P_star",
    "build_baseline_adjacency",
    "config_weights",
    "degrees",
    "dense_diag_oracle",
    "embed",
    "evaluate_accuracy",
    "exact_weights",
    "explain_weights",
    "grid_search",
    "hutchinson_diag",
    "incidence_matrix",
    "load_dataset",
    "load_features",
    "load_hypergraph",
    "load_labels",
    "make_assumption_data",
    "make_kshot_split",
    "normalize_cols",
    "normalize_rows",
    "parse_hypergraph",
    "plain_adjacency",
    "predict",
    "random_walk_return_prob",
    "restart_coefficients",
    "rsi_diag_1",
    "rsi_diag_2",
    "run_config",
    "serialize_hypergraph",
    "simplex_grid",
    "sse_gradient",
    "sse_loss",
    "tcs_error_bound",
    "tcs_weights",
    "train_weights_gd",
    "walk_transition_matrix",
]
