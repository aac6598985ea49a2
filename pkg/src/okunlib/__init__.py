"""okunlib: piecewise Okun's-law estimation on annual macro series.

The package splits into five parts: ``series`` (annual series types and
growth/normalization primitives), ``breaks`` (CPI vs GDP-deflator
definitional-break diagnostics), ``model`` (the piecewise integral
estimator), ``sources`` (cross-provider GDP auditing) and ``cli`` (the
``okunlaw`` batch front end over bundled or user-supplied CSV snapshots).
"""

from .breaks import (
    BreakCandidate,
    BridgeSegment,
    InflationBridge,
    bridge_fit,
    candidate_breaks,
    difference_curve,
    fitted_difference,
    scale_chain,
    suggest_dummy_years,
)
from .errors import (
    ConstraintError,
    DataIOError,
    DegenerateRegressionError,
    DomainError,
    GapError,
    GapWarning,
    MissingYearError,
    NoOverlapError,
    OkunlibError,
    OkunSignWarning,
    RefusedError,
    SingularFitError,
    ValidationError,
)
from .model import (
    FitReport,
    FitStats,
    PiecewiseOkun,
    SegmentSpec,
    evaluate,
    exclude_years,
    fit_report,
    fit_segments,
    implied_quarterly_growth,
    predict,
    predict_extended,
    predict_quarterly,
    search_breaks,
    synthesize,
)
from .series import (
    AnnualSeries,
    GrowthSeries,
    QuarterlySeries,
    Unit,
    VariableKind,
    align,
    cumulative_inflation,
    from_pairs,
    log_growth,
    normalize,
    quarterly_log_growth,
    rates_from_index,
)
from .sources import PairDrift, SourceComparison, compare, total_growth_factor

__version__ = "0.1.0"

__all__ = [
    "AnnualSeries",
    "BreakCandidate",
    "BridgeSegment",
    "ConstraintError",
    "DataIOError",
    "DegenerateRegressionError",
    "DomainError",
    "FitReport",
    "FitStats",
    "GapError",
    "GapWarning",
    "GrowthSeries",
    "InflationBridge",
    "MissingYearError",
    "NoOverlapError",
    "OkunSignWarning",
    "OkunlibError",
    "PairDrift",
    "PiecewiseOkun",
    "QuarterlySeries",
    "RefusedError",
    "SegmentSpec",
    "SingularFitError",
    "SourceComparison",
    "Unit",
    "ValidationError",
    "VariableKind",
    "align",
    "bridge_fit",
    "candidate_breaks",
    "compare",
    "cumulative_inflation",
    "difference_curve",
    "evaluate",
    "exclude_years",
    "fit_report",
    "fit_segments",
    "fitted_difference",
    "from_pairs",
    "implied_quarterly_growth",
    "log_growth",
    "normalize",
    "predict",
    "predict_extended",
    "predict_quarterly",
    "quarterly_log_growth",
    "rates_from_index",
    "scale_chain",
    "search_breaks",
    "suggest_dummy_years",
    "synthesize",
    "total_growth_factor",
]
