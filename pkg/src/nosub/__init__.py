"""Online no-substitution k-means for arbitrary arrival order.

The main entry points are :func:`run_online` (the online algorithm),
:func:`oc_bracket` (the Online Center measure OC_k), the data generators in
:mod:`nosub.datagen` and the experiment harness in :mod:`nosub.harness`.
"""

from .datagen import (
    ComponentSpec,
    MixtureSpec,
    OrderingSpec,
    apply_ordering,
    exponential_adversary,
    hard_sequence_factor,
    make_hard_sequence,
    sample_mixture,
)
from .errors import InvalidInputError, NosubError, UndefinedRatioError, UnsupportedInstanceError
from .harness import ExperimentReport, ExperimentSpec, run_experiment, run_scaling
from .metric import (
    Clustering,
    Dataset,
    DiameterPartition,
    aspect_ratio,
    cost_with_center,
    diam_ell,
    exact_kmeans,
    good_points,
    log2_aspect_ratio,
    min_max_diameter_partition,
    nearest_center_cost,
    one_means_cost,
    opt_kmeans_cost_oracle,
)
from .offline import OfflineResult, SolverSpec, kmeanspp_seed, lloyd_refine, solve
from .online import OnlineConfig, OnlineRun, OnlineState, StepRecord, merge_index, merged_cost, plan_online, run_online
from .sequences import (
    AnalysisGraph,
    OcEstimate,
    SequenceCertificate,
    SequenceVerdict,
    build_analysis_graph,
    extract_beta_subsequence,
    greedy_independent_set,
    lower_bound_centers,
    oc_bracket,
    oc_exact,
    oc_greedy_lower,
    oc_upper_bound_aspect,
    verify_alpha_k_sequence,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisGraph",
    "Clustering",
    "ComponentSpec",
    "Dataset",
    "DiameterPartition",
    "ExperimentReport",
    "ExperimentSpec",
    "InvalidInputError",
    "MixtureSpec",
    "NosubError",
    "OcEstimate",
    "OfflineResult",
    "OnlineConfig",
    "OnlineRun",
    "OnlineState",
    "OrderingSpec",
    "SequenceCertificate",
    "SequenceVerdict",
    "SolverSpec",
    "StepRecord",
    "UndefinedRatioError",
    "UnsupportedInstanceError",
    "apply_ordering",
    "aspect_ratio",
    "build_analysis_graph",
    "cost_with_center",
    "diam_ell",
    "exact_kmeans",
    "exponential_adversary",
    "extract_beta_subsequence",
    "good_points",
    "log2_aspect_ratio",
    "greedy_independent_set",
    "hard_sequence_factor",
    "kmeanspp_seed",
    "lloyd_refine",
    "lower_bound_centers",
    "make_hard_sequence",
    "merge_index",
    "merged_cost",
    "min_max_diameter_partition",
    "nearest_center_cost",
    "oc_bracket",
    "oc_exact",
    "oc_greedy_lower",
    "oc_upper_bound_aspect",
    "one_means_cost",
    "opt_kmeans_cost_oracle",
    "plan_online",
    "run_experiment",
    "run_online",
    "run_scaling",
    "sample_mixture",
    "solve",
    "verify_alpha_k_sequence",
]
