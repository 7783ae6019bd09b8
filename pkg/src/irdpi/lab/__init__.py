"""Encoder evaluation, optimization and audits on top of the exact engine."""
from .audits import (
    HOLDS,
    HYPOTHESIS_NOT_MET,
    VIOLATED,
    Prop1Report,
    Prop2Report,
    check_prop1,
    check_prop2,
)
from .enumerate import (
    ENUMERATION_CAP,
    enumerate_deterministic_optimum,
    score_deterministic_maps,
)
from .evaluate import (
    Encoder,
    InformationReport,
    Predictor,
    batch_scores,
    bayes_predictor,
    evaluate_encoder,
    extend_with_encoder,
)
from .optimize import (
    EncoderObjective,
    Frontier,
    OptimizerOptions,
    TradeoffPoint,
    default_lambda_grid,
    lagrangian_optimize,
    pareto_filter,
    project_rows_to_simplex,
    sweep_frontier,
)
from .search import (
    SCANNER_FAMILIES,
    CatalogEntry,
    SearchConfig,
    SearchResult,
    counterexample_search,
    search_instance,
)
