"""writelab: batch analytics for GAI-assisted writing session logs.

The toolkit replays keystroke-level session logs into provenance-annotated
documents, derives behavioral treatments and essay-quality outcomes, and
estimates causal treatment effects with identification, robustness checks,
Shapley attributions, and subgroup trend reports.
"""

from .behavior import (
    BehaviorProfile,
    binarize_treatments,
    extract_behavior_profile,
    TREATMENTS,
)
from .errors import (
    ConfigError,
    DataError,
    EstimationError,
    GraphError,
    LogConsistencyError,
    ParseError,
    ReplayError,
    UndefinedMetricError,
    ValidationError,
    WritelabError,
)
from .estimate import (
    AnalysisDataset,
    BootstrapInterval,
    EstimationResult,
    LearnerConfig,
    bootstrap_ci,
    build_analysis_dataset,
    estimate_baseline,
    estimate_x_learner,
)
from .explain import (
    ShapMatrix,
    emit_beeswarm_data,
    render_beeswarm_svg,
    sample_background,
    shapley_attributions,
)
from .graph import (
    CausalGraph,
    CONFOUNDERS,
    backdoor_sets,
    d_separated,
    default_graph,
    format_edge_list,
    parse_edge_list,
    validate_dag,
)
from .ingest import (
    DocumentReplayer,
    DocumentState,
    EditDelta,
    EventRecord,
    ProvenanceSpan,
    Resolution,
    SessionLog,
    SessionMeta,
    SpanOrigin,
    SuggestionEpisode,
    load_session_log,
    load_session_metadata,
    parse_session_log,
    reconstruct_document,
    segment_suggestion_episodes,
)
from .learners import (
    BoostedTreesRegressor,
    LogisticPropensity,
    RidgeRegressor,
    fit_propensity,
    fit_regressor,
)
from .lexicons import Lexicons, load_lexicons
from .metrics import (
    OUTCOMES,
    QualityVector,
    advanced_guiraud,
    compute_quality,
    genbit_score,
    jaccard_similarity,
    mean_length_tunit,
    semantic_overlap,
)
from .pipeline import (
    PipelineConfig,
    load_config,
    run_estimate,
    run_explain,
    run_ingest,
    run_metrics,
    run_pipeline,
    run_refute,
    run_report,
)
from .refute import (
    RefutationReport,
    refute_data_subset,
    refute_placebo,
    refute_random_common_cause,
)
from .trends import TrendRules, TrendTable, classify_trends

__version__ = "0.1.0"

__all__ = [
    "AnalysisDataset",
    "BehaviorProfile",
    "BoostedTreesRegressor",
    "BootstrapInterval",
    "CONFOUNDERS",
    "CausalGraph",
    "ConfigError",
    "DataError",
    "DocumentReplayer",
    "DocumentState",
    "EditDelta",
    "EstimationError",
    "EstimationResult",
    "EventRecord",
    "GraphError",
    "LearnerConfig",
    "Lexicons",
    "LogConsistencyError",
    "LogisticPropensity",
    "OUTCOMES",
    "ParseError",
    "PipelineConfig",
    "ProvenanceSpan",
    "QualityVector",
    "RefutationReport",
    "ReplayError",
    "Resolution",
    "RidgeRegressor",
    "SessionLog",
    "SessionMeta",
    "ShapMatrix",
    "SpanOrigin",
    "SuggestionEpisode",
    "TREATMENTS",
    "TrendRules",
    "TrendTable",
    "UndefinedMetricError",
    "ValidationError",
    "WritelabError",
    "advanced_guiraud",
    "backdoor_sets",
    "binarize_treatments",
    "bootstrap_ci",
    "build_analysis_dataset",
    "classify_trends",
    "compute_quality",
    "d_separated",
    "default_graph",
    "emit_beeswarm_data",
    "estimate_baseline",
    "estimate_x_learner",
    "extract_behavior_profile",
    "fit_propensity",
    "fit_regressor",
    "format_edge_list",
    "genbit_score",
    "jaccard_similarity",
    "load_config",
    "load_lexicons",
    "load_session_log",
    "load_session_metadata",
    "mean_length_tunit",
    "parse_edge_list",
    "parse_session_log",
    "reconstruct_document",
    "refute_data_subset",
    "refute_placebo",
    "refute_random_common_cause",
    "render_beeswarm_svg",
    "run_estimate",
    "run_explain",
    "run_ingest",
    "run_metrics",
    "run_pipeline",
    "run_refute",
    "run_report",
    "sample_background",
    "segment_suggestion_episodes",
    "semantic_overlap",
    "shapley_attributions",
    "validate_dag",
]
