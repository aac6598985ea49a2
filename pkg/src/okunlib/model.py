"""Piecewise integral Okun model: fit, break search, evaluation, prediction.

The model links unemployment levels to cumulative log growth of real GDP
per capita. Within a segment starting at year s with anchor level A,

    u_p(t) = A + b * sum(dlnG(s+1..t)) + a * (t - s)

so the intercept is never a free parameter: it is pinned by the anchor,
and the per-segment residual at the segment-start year is exactly zero in
measured-anchor mode.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    ConstraintError,
    DegenerateRegressionError,
    DomainError,
    GapError,
    MissingYearError,
    OkunSignWarning,
    RefusedError,
    SingularFitError,
)
from .series import (
    AnnualSeries,
    GrowthSeries,
    QuarterlySeries,
    Unit,
    VariableKind,
    align,
)

# Condition-number ceiling for the per-segment 2x2 normal equations.
COND_LIMIT = 1e10

# RMS differences below this are ties; resolved lexicographically.
RMS_TIE_EPS = 1e-12

DEFAULT_MIN_SEGMENT = 5
DEFAULT_SEARCH_RADIUS = 3


@dataclass(frozen=True)
class SegmentSpec:
    """One time segment: slope b (pp per percent growth) and drift a (pp/yr)."""

    start_year: int
    end_year: int
    b: float
    a: float

    def __post_init__(self) -> None:
        if self.start_year >= self.end_year:
            raise ConstraintError(
                f"segment [{self.start_year}, {self.end_year}] not increasing"
            )

    @property
    def n_years(self) -> int:
        return self.end_year - self.start_year + 1


@dataclass(frozen=True)
class PiecewiseOkun:
    """An ordered, contiguous set of segments with per-segment anchors."""

    country: str
    segments: tuple[SegmentSpec, ...]
    anchors: tuple[tuple[int, float], ...]

    def __post_init__(self) -> None:
        if not self.segments:
            raise ConstraintError("model needs at least one segment")
        for prev, cur in zip(self.segments, self.segments[1:]):
            if cur.start_year != prev.end_year + 1:
                raise ConstraintError(
                    f"segments not contiguous at {cur.start_year}"
                )
        if len(self.anchors) != len(self.segments):
            raise ConstraintError("one anchor per segment required")
        for seg, (year, _) in zip(self.segments, self.anchors):
            if year != seg.start_year:
                raise ConstraintError(
                    f"anchor year {year} != segment start {seg.start_year}"
                )

    @property
    def breaks(self) -> tuple[int, ...]:
        return tuple(s.end_year for s in self.segments[:-1])

    @property
    def start_year(self) -> int:
        return self.segments[0].start_year

    @property
    def end_year(self) -> int:
        return self.segments[-1].end_year


@dataclass(frozen=True)
class FitStats:
    """Goodness-of-fit summary for a measured vs predicted pair.

    ``r_squared`` follows the measured-on-predicted regression convention;
    ``r_squared_prediction`` is the plain 1 - SSE/SST of the prediction.
    """

    residual_sigma: float
    r_squared: float
    slope: float
    intercept: float
    mean_u: float
    r_squared_prediction: float
    residuals: AnnualSeries
    n_excluded: int = 0


@dataclass(frozen=True)
class FitReport:
    model: PiecewiseOkun
    measured: AnnualSeries
    predicted: AnnualSeries
    stats: FitStats
    rms: float


# ---------------------------------------------------------------------------
# internal array kernel
#
# The break search evaluates thousands of candidate segmentations, so the
# per-candidate work happens on plain numpy arrays prepared once:
#   u[i]   measured unemployment at year t0 + i
#   cg[i]  cumulative dlnG from t0 through year t0 + i (cg[0] = 0)
# ---------------------------------------------------------------------------


def _prepare_arrays(
    u: AnnualSeries, growth: GrowthSeries
) -> tuple[int, np.ndarray, np.ndarray]:
    if u.gap_years():
        raise GapError(f"{u.label}: fit span has year gaps {u.gap_years()}")
    t0 = u.first_year
    uv = np.asarray(u.values, dtype=float)
    g = growth.as_dict()
    cg = np.zeros(len(uv))
    for i in range(1, len(uv)):
        year = t0 + i
        if year not in g:
            raise GapError(f"growth missing for year {year}")
        cg[i] = cg[i - 1] + g[year]
    return t0, uv, cg


def _solve_segment(
    uv: np.ndarray, cg: np.ndarray, i0: int, i1: int, anchor: float
) -> tuple[float, float]:
    """Anchored least squares for one segment over offsets [i0, i1]."""
    idx = np.arange(i0 + 1, i1 + 1)
    x1 = cg[idx] - cg[i0]
    x2 = (idx - i0).astype(float)
    y = uv[idx] - anchor
    s11 = float(x1 @ x1)
    s12 = float(x1 @ x2)
    s22 = float(x2 @ x2)
    b1 = float(x1 @ y)
    b2 = float(x2 @ y)
    # Eigenvalues of the symmetric 2x2 normal matrix give the condition.
    tr = s11 + s22
    disc = np.sqrt((s11 - s22) ** 2 + 4.0 * s12 * s12)
    lam_min = (tr - disc) / 2.0
    lam_max = (tr + disc) / 2.0
    if lam_min <= 0.0 or lam_max / lam_min > COND_LIMIT:
        raise SingularFitError(
            "rank-deficient segment regressors (constant growth over a "
            "trivial span)"
        )
    det = s11 * s22 - s12 * s12
    b = (s22 * b1 - s12 * b2) / det
    a = (s11 * b2 - s12 * b1) / det
    return b, a


def _segment_bounds(t0: int, n: int, breaks: tuple[int, ...]) -> list[tuple[int, int]]:
    """Offset bounds [(i0, i1)] for segments delimited by break years."""
    edges = [t0 - 1] + [int(b) for b in breaks] + [t0 + n - 1]
    return [(lo + 1 - t0, hi - t0) for lo, hi in zip(edges, edges[1:])]


def _fit_arrays(
    t0: int,
    uv: np.ndarray,
    cg: np.ndarray,
    breaks: tuple[int, ...],
    anchor_mode: str,
) -> tuple[list[tuple[float, float]], list[float], np.ndarray]:
    """Fit every segment; returns (coeffs, anchors, predicted array)."""
    bounds = _segment_bounds(t0, len(uv), breaks)
    coeffs: list[tuple[float, float]] = []
    anchors: list[float] = []
    pred = np.empty_like(uv)
    carried = uv[0]
    for i0, i1 in bounds:
        anchor = uv[i0] if anchor_mode == "measured" else carried
        b, a = _solve_segment(uv, cg, i0, i1, anchor)
        idx = np.arange(i0, i1 + 1)
        pred[idx] = anchor + b * (cg[idx] - cg[i0]) + a * (idx - i0)
        coeffs.append((b, a))
        anchors.append(anchor)
        carried = pred[i1]
    return coeffs, anchors, pred


def _validate_breaks(
    t0: int, t1: int, breaks: tuple[int, ...], min_len: int
) -> None:
    if list(breaks) != sorted(set(int(b) for b in breaks)):
        raise ConstraintError(f"breaks {breaks} not sorted/unique")
    edges = [t0 - 1] + [int(b) for b in breaks] + [t1]
    for lo, hi in zip(edges, edges[1:]):
        length = hi - lo
        if length < min_len:
            raise ConstraintError(
                f"segment ({lo + 1}..{hi}) has {length} years < {min_len}"
            )


def fit_segments(
    u: AnnualSeries,
    growth: GrowthSeries,
    breaks: list[int] | tuple[int, ...],
    anchor_mode: str = "measured",
) -> PiecewiseOkun:
    """Fit per-segment (b, a) with the intercept pinned by the anchor.

    Parameters
    ----------
    u : AnnualSeries
        Measured unemployment over a gap-free span; its full span is fit.
    growth : GrowthSeries
        Annual dlnG covering every year after each segment start.
    breaks : list of int
        Years that end a segment; the next segment starts the year after.
    anchor_mode : {"measured", "chained"}
        "measured" re-initializes each segment at the observed rate;
        "chained" carries the previous segment's predicted end value.

    Raises
    ------
    ConstraintError
        Breaks unsorted, outside the span, or a segment shorter than
        3 years (two coefficients need two increments).
    SingularFitError
        Rank-deficient regressors within a segment.
    GapError
        Missing unemployment or growth years.
    """
    if anchor_mode not in ("measured", "chained"):
        raise ConstraintError(f"unknown anchor_mode {anchor_mode!r}")
    t0, uv, cg = _prepare_arrays(u, growth)
    br = tuple(int(b) for b in breaks)
    _validate_breaks(t0, u.last_year, br, min_len=3)
    coeffs, anchors, _ = _fit_arrays(t0, uv, cg, br, anchor_mode)

    bounds = _segment_bounds(t0, len(uv), br)
    segments = tuple(
        SegmentSpec(start_year=t0 + i0, end_year=t0 + i1, b=b, a=a)
        for (i0, i1), (b, a) in zip(bounds, coeffs)
    )
    for seg in segments:
        if seg.b >= 0.0:
            warnings.warn(
                f"{u.country}: fitted slope {seg.b:+.3f} on "
                f"[{seg.start_year}, {seg.end_year}] is not negative",
                OkunSignWarning,
                stacklevel=2,
            )
    anchor_pts = tuple(
        (seg.start_year, float(val)) for seg, val in zip(segments, anchors)
    )
    return PiecewiseOkun(country=u.country, segments=segments, anchors=anchor_pts)


def predict(model: PiecewiseOkun, growth: GrowthSeries) -> AnnualSeries:
    """Integrate the model over its span using the supplied growth path.

    At each segment start the prediction equals that segment's anchor
    exactly; missing growth years raise :class:`GapError`. The output is
    unemployment in percentage points but carries the range-unchecked
    ``derived`` kind: a linear model can formally leave [0, 100), and the
    measured-data range contract applies at ingestion, not to model
    output.
    """
    g = growth.as_dict()
    pts: list[tuple[int, float]] = []
    for seg, (_, anchor) in zip(model.segments, model.anchors):
        cum = 0.0
        pts.append((seg.start_year, anchor))
        for year in range(seg.start_year + 1, seg.end_year + 1):
            if year not in g:
                raise GapError(f"growth missing for year {year}")
            cum += g[year]
            pts.append((year, anchor + seg.b * cum + seg.a * (year - seg.start_year)))
    return AnnualSeries(
        country=model.country,
        variable=VariableKind.DERIVED,
        unit=Unit.PERCENT_POINTS,
        points=tuple(pts),
        source="predicted",
    )


# Exhaustive placement search is the contract; it is tractable for the
# intended small break counts. Anything beyond this many raw combinations
# is treated as an infeasible request rather than silently churning.
MAX_SEARCH_COMBOS = 5_000_000


def _admissible_combos(
    t0: int,
    t1: int,
    n_breaks: int,
    pool: list[int],
    min_segment: int,
):
    span_years = t1 - t0 + 1
    if (n_breaks + 1) * min_segment > span_years:
        raise ConstraintError(
            f"{n_breaks} breaks with min_segment={min_segment} cannot fit "
            f"in {span_years} years"
        )
    eligible = [
        b for b in pool if b - (t0 - 1) >= min_segment and t1 - b >= min_segment
    ]
    if math.comb(len(eligible), n_breaks) > MAX_SEARCH_COMBOS:
        raise ConstraintError(
            f"exhaustive search over {len(eligible)} candidate years with "
            f"{n_breaks} breaks is too large; restrict candidates"
        )
    for combo in itertools.combinations(eligible, n_breaks):
        if all(b2 - b1 >= min_segment for b1, b2 in zip(combo, combo[1:])):
            yield combo


def search_breaks(
    u: AnnualSeries,
    growth: GrowthSeries,
    n_breaks: int,
    candidates: list[int] | tuple[int, ...] = (),
    min_segment: int = DEFAULT_MIN_SEGMENT,
    search_radius: int = DEFAULT_SEARCH_RADIUS,
    anchor_mode: str = "measured",
) -> FitReport:
    """Exhaustive search for the break set minimizing whole-span RMS.

    With a non-empty candidate list the grid is restricted to candidate
    years +- ``search_radius``; otherwise every admissible placement is
    tried. Ties within 1e-12 RMS resolve to the lexicographically
    smallest break set, so the result is independent of candidate order
    and of evaluation scheduling.
    """
    if n_breaks < 0:
        raise ConstraintError("n_breaks must be >= 0")
    t0, uv, cg = _prepare_arrays(u, growth)
    t1 = u.last_year

    if n_breaks == 0:
        model = fit_segments(u, growth, (), anchor_mode)
        return _report(model, u, growth)

    if candidates:
        pool_set: set[int] = set()
        for c in candidates:
            pool_set.update(range(int(c) - search_radius, int(c) + search_radius + 1))
        pool = sorted(y for y in pool_set if t0 <= y < t1)
    else:
        pool = list(range(t0, t1))

    any_combo = False
    best_breaks: tuple[int, ...] | None = None
    best_rms = np.inf
    n_years = len(uv)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", OkunSignWarning)
        for combo in _admissible_combos(t0, t1, n_breaks, pool, min_segment):
            any_combo = True  # combos arrive in lexicographic order
            try:
                _, _, pred = _fit_arrays(t0, uv, cg, combo, anchor_mode)
            except SingularFitError:
                continue
            resid = uv - pred
            rms = float(np.sqrt(resid @ resid / n_years))
            # Lexicographically earliest combo wins among RMS ties.
            if rms < best_rms - RMS_TIE_EPS:
                best_rms = rms
                best_breaks = combo
    if not any_combo:
        raise ConstraintError(
            f"no admissible {n_breaks}-break placement with "
            f"min_segment={min_segment}"
        )
    if best_breaks is None:
        raise ConstraintError("every admissible placement was singular")

    model = fit_segments(u, growth, best_breaks, anchor_mode)
    return _report(model, u, growth)


def _report(
    model: PiecewiseOkun, u: AnnualSeries, growth: GrowthSeries
) -> FitReport:
    predicted = predict(model, growth)
    stats = evaluate(u, predicted)
    resid = np.asarray(stats.residuals.values)
    rms = float(np.sqrt(np.mean(resid**2)))
    return FitReport(
        model=model, measured=u, predicted=predicted, stats=stats, rms=rms
    )


def fit_report(
    u: AnnualSeries,
    growth: GrowthSeries,
    breaks: list[int] | tuple[int, ...],
    anchor_mode: str = "measured",
) -> FitReport:
    """Convenience wrapper: fit with fixed breaks and evaluate."""
    model = fit_segments(u, growth, breaks, anchor_mode)
    return _report(model, u, growth)


def evaluate(measured: AnnualSeries, predicted: AnnualSeries) -> FitStats:
    """Residual and regression statistics for a measured/predicted pair.

    ``r_squared`` is the coefficient of determination of the OLS
    regression of measured on predicted (the headline convention);
    ``r_squared_prediction`` is 1 - SSE/SST of the prediction itself.
    """
    m_s, p_s = align(measured, predicted)
    m = np.asarray(m_s.values, dtype=float)
    p = np.asarray(p_s.values, dtype=float)
    if len(m) < 3:
        raise DomainError("need at least 3 aligned points to evaluate")
    var_p = float(np.var(p))
    if var_p == 0.0:
        raise DegenerateRegressionError("predicted series has zero variance")
    resid = m - p
    sigma = float(np.std(resid))
    cov = float(np.mean((m - m.mean()) * (p - p.mean())))
    slope = cov / var_p
    intercept = float(m.mean() - slope * p.mean())
    var_m = float(np.var(m))
    r2 = 0.0 if var_m == 0.0 else cov * cov / (var_p * var_m)
    sst = float(np.sum((m - m.mean()) ** 2))
    r2_pred = 1.0 - float(np.sum(resid**2)) / sst if sst > 0.0 else 0.0
    residuals = AnnualSeries(
        country=measured.country,
        variable=VariableKind.DERIVED,
        unit=Unit.PERCENT_POINTS,
        points=tuple(zip(m_s.years, (float(r) for r in resid))),
        source="residual",
    )
    return FitStats(
        residual_sigma=sigma,
        r_squared=r2,
        slope=slope,
        intercept=intercept,
        mean_u=float(m.mean()),
        r_squared_prediction=r2_pred,
        residuals=residuals,
    )


# Refuse to drop more than this share of residual years when excluding.
MAX_EXCLUDED_SHARE = 0.20


def exclude_years(
    report: FitReport, years: list[int] | tuple[int, ...]
) -> FitStats:
    """Recompute fit statistics with the listed years' residuals removed.

    The model is untouched; this only filters the evaluation. Removing
    more than 20% of the residual years is refused.
    """
    drop = sorted(set(int(y) for y in years))
    if not drop:
        return report.stats
    span = set(report.stats.residuals.years)
    missing = [y for y in drop if y not in span]
    if missing:
        raise MissingYearError(f"excluded years {missing} not in residual span")
    if len(drop) > MAX_EXCLUDED_SHARE * len(span):
        raise RefusedError(
            f"refusing to exclude {len(drop)} of {len(span)} residual years "
            "(more than 20%)"
        )
    keep = sorted(span - set(drop))
    keep_set = set(keep)
    m = replace(
        report.measured,
        points=tuple((y, v) for y, v in report.measured.points if y in keep_set),
    )
    p = replace(
        report.predicted,
        points=tuple((y, v) for y, v in report.predicted.points if y in keep_set),
    )
    stats = evaluate(m, p)
    return replace(stats, n_excluded=len(drop))


def predict_extended(
    model: PiecewiseOkun, growth: GrowthSeries, through_year: int
) -> AnnualSeries:
    """Predict over the model span, then extend the last segment.

    Years after the model's end are stepped with the last segment's
    coefficients from the last predicted value, as far as ``through_year``
    (growth must cover the extension).
    """
    base = predict(model, growth)
    if through_year <= model.end_year:
        return base
    g = growth.as_dict()
    seg = model.segments[-1]
    pts = list(base.points)
    u_prev = pts[-1][1]
    for year in range(model.end_year + 1, through_year + 1):
        if year not in g:
            raise GapError(f"growth missing for year {year}")
        u_prev = u_prev + seg.b * g[year] + seg.a
        pts.append((year, u_prev))
    return replace(base, points=tuple(pts))


def predict_quarterly(
    model: PiecewiseOkun, quarterly_growth: QuarterlySeries, u_start: float
) -> QuarterlySeries:
    """Step the last segment's coefficients quarter by quarter.

    u_p(q) = u_p(q-1) + b * dlnG(q) + a/4, with the annual drift pro-rated
    per quarter; the first step starts from ``u_start``.
    """
    quarterly_growth.require_contiguous()
    seg = model.segments[-1]
    u_prev = float(u_start)
    pts: list[tuple[int, int, float]] = []
    for year, quarter, g in quarterly_growth.points:
        u_prev = u_prev + seg.b * g + seg.a / 4.0
        pts.append((year, quarter, u_prev))
    return QuarterlySeries(
        label=f"{model.country}: predicted unemployment", points=tuple(pts)
    )


def implied_quarterly_growth(
    model: PiecewiseOkun, u_from: float, u_to: float
) -> float:
    """Quarterly dlnG that would move unemployment from u_from to u_to."""
    seg = model.segments[-1]
    if seg.b == 0.0:
        raise DomainError("last segment has zero slope; growth unidentified")
    return (u_to - u_from - seg.a / 4.0) / seg.b


def synthesize(
    model: PiecewiseOkun,
    growth: GrowthSeries,
    noise_sigma: float,
    seed: int,
) -> AnnualSeries:
    """Model prediction plus seeded iid Gaussian noise (a test oracle).

    With ``noise_sigma`` = 0 the output is identical to ``predict``; for a
    fixed seed the output is deterministic.
    """
    if noise_sigma < 0.0:
        raise DomainError("noise_sigma must be >= 0")
    clean = predict(model, growth)
    if noise_sigma == 0.0:
        return replace(clean, source="synthetic")
    rng = np.random.default_rng(seed)
    noise = rng.normal(0.0, noise_sigma, size=len(clean))
    pts = tuple(
        (y, float(v + e)) for (y, v), e in zip(clean.points, noise)
    )
    return replace(clean, points=pts, source="synthetic")
