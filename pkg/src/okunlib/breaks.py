"""Definitional-break diagnostics on CPI vs GDP-deflator cumulative curves.

Two related tools live here: a hinged piecewise-linear-in-time
segmentation of the CPI-dGDP difference curve (to locate candidate break
years), and the piecewise multiplicative "bridge" that maps the deflator
cumulative-inflation curve onto the CPI one, segment by segment, with
optional single-year dummy offsets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import ConstraintError, ValidationError
from .series import AnnualSeries, VariableKind, align

# A break is kept only if it reduces the segmentation RMS by at least
# this relative amount; keeps "no break" reproducible on linear curves.
REL_SCORE_TOLERANCE = 0.02

# RMS differences below this are treated as ties and resolved by taking
# the lexicographically smallest break set.
RMS_TIE_EPS = 1e-12


@dataclass(frozen=True)
class BreakCandidate:
    """A candidate definitional-break year on the difference curve."""

    year: int
    slope_change: float
    score: float


@dataclass(frozen=True)
class BridgeSegment:
    start_year: int
    end_year: int
    scale: float


@dataclass(frozen=True)
class InflationBridge:
    """Per-segment scale factors mapping dGDP cumulative inflation to CPI."""

    segments: tuple[BridgeSegment, ...]
    dummies: tuple[tuple[int, float], ...]
    rms: float

    def __post_init__(self) -> None:
        for seg in self.segments:
            if seg.scale <= 0.0:
                raise ValidationError(f"bridge scale {seg.scale} not positive")
        for prev, cur in zip(self.segments, self.segments[1:]):
            if cur.start_year != prev.end_year + 1:
                raise ValidationError("bridge segments not contiguous")
        for year, _ in self.dummies:
            if not any(s.start_year <= year <= s.end_year for s in self.segments):
                raise ValidationError(f"dummy year {year} outside all segments")

    @property
    def scales(self) -> tuple[float, ...]:
        return tuple(s.scale for s in self.segments)


def difference_curve(
    cpi_cum: AnnualSeries, dgdp_cum: AnnualSeries
) -> AnnualSeries:
    """Pointwise CPI_cum - dGDP_cum over the common year span."""
    a, b = align(cpi_cum, dgdp_cum)
    pts = tuple((y, va - vb) for (y, va), (_, vb) in zip(a.points, b.points))
    return AnnualSeries(
        country=a.country,
        variable=VariableKind.DERIVED,
        unit=a.unit,
        points=pts,
        source=f"{a.source}-{b.source}" if a.source or b.source else "",
    )


def _hinge_design(years: np.ndarray, breaks: tuple[int, ...]) -> np.ndarray:
    """Design matrix for a continuous piecewise-linear fit in time."""
    cols = [np.ones_like(years, dtype=float), years.astype(float)]
    for b in breaks:
        cols.append(np.maximum(years - b, 0.0))
    return np.column_stack(cols)


def _pwl_fit(
    years: np.ndarray, values: np.ndarray, breaks: tuple[int, ...]
) -> tuple[np.ndarray, np.ndarray, float]:
    """Least-squares hinged fit; returns (coeffs, fitted, rms)."""
    design = _hinge_design(years, breaks)
    coef, _, _, _ = np.linalg.lstsq(design, values, rcond=None)
    fitted = design @ coef
    rms = float(np.sqrt(np.mean((values - fitted) ** 2)))
    return coef, fitted, rms


def _admissible_breaks(
    years: np.ndarray, n_breaks: int, min_segment: int
) -> list[tuple[int, ...]]:
    """All sorted break placements keeping every piece >= min_segment years."""
    first, last = int(years[0]), int(years[-1])
    candidates = [
        int(y)
        for y in years
        if y - first + 1 >= min_segment and last - y >= min_segment
    ]
    combos: list[tuple[int, ...]] = []
    for combo in itertools.combinations(candidates, n_breaks):
        if all(b2 - b1 >= min_segment for b1, b2 in zip(combo, combo[1:])):
            combos.append(combo)
    return combos


def _best_pwl_breaks(
    years: np.ndarray, values: np.ndarray, n_breaks: int, min_segment: int
) -> tuple[tuple[int, ...], float]:
    """Exhaustive search for the RMS-optimal hinge placement.

    Deterministic: ties within RMS_TIE_EPS resolve to the
    lexicographically smallest break tuple.
    """
    combos = _admissible_breaks(years, n_breaks, min_segment)
    if not combos:
        raise ConstraintError(
            f"no admissible placement for {n_breaks} breaks with "
            f"min_segment={min_segment} over {len(years)} years"
        )
    best_breaks: tuple[int, ...] | None = None
    best_rms = np.inf
    for combo in combos:  # lexicographic order by construction
        _, _, rms = _pwl_fit(years, values, combo)
        if rms < best_rms - RMS_TIE_EPS:
            best_rms = rms
            best_breaks = combo
    assert best_breaks is not None
    return best_breaks, best_rms


def fitted_difference(
    diff: AnnualSeries, breaks: list[int] | tuple[int, ...]
) -> AnnualSeries:
    """The hinged piecewise-linear fit of a difference curve, per year."""
    years = np.asarray(diff.years, dtype=int)
    values = np.asarray(diff.values, dtype=float)
    _, fitted, _ = _pwl_fit(years, values, tuple(int(b) for b in breaks))
    return AnnualSeries(
        country=diff.country,
        variable=VariableKind.DERIVED,
        unit=diff.unit,
        points=tuple(zip(diff.years, (float(f) for f in fitted))),
        source="pwl-fit",
    )


def candidate_breaks(
    diff: AnnualSeries,
    max_breaks: int,
    min_segment: int = 3,
    rel_tolerance: float = REL_SCORE_TOLERANCE,
) -> list[BreakCandidate]:
    """Detect candidate break years on a difference curve.

    Fits continuous piecewise-linear-in-time models with 0..max_breaks
    hinges by exhaustive search and keeps adding breaks while each one
    reduces the fit RMS by at least ``rel_tolerance`` (relative). A
    perfectly linear curve therefore yields no candidates.

    Parameters
    ----------
    diff : AnnualSeries
        The CPI_cum - dGDP_cum difference curve.
    max_breaks : int
        Upper bound on the number of reported breaks.
    min_segment : int
        Minimum piece length in years (>= 3).

    Returns
    -------
    list of BreakCandidate
        Sorted by year. ``score`` is the RMS increase caused by removing
        that break from the chosen set (always >= 0); ``slope_change`` is
        the change in fitted slope across the hinge.
    """
    if max_breaks < 0:
        raise ConstraintError("max_breaks must be >= 0")
    if min_segment < 3:
        raise ConstraintError("min_segment must be >= 3")
    years = np.asarray(diff.years, dtype=int)
    values = np.asarray(diff.values, dtype=float)
    if len(years) < (max_breaks + 1) * min_segment:
        raise ConstraintError(
            f"series length {len(years)} cannot host {max_breaks} breaks "
            f"with min_segment={min_segment}"
        )

    chosen: tuple[int, ...] = ()
    _, _, current_rms = _pwl_fit(years, values, ())
    for m in range(1, max_breaks + 1):
        breaks_m, rms_m = _best_pwl_breaks(years, values, m, min_segment)
        if current_rms <= 0.0 or rms_m > current_rms * (1.0 - rel_tolerance):
            break
        chosen, current_rms = breaks_m, rms_m

    coef, _, full_rms = _pwl_fit(years, values, chosen)
    out: list[BreakCandidate] = []
    for i, year in enumerate(chosen):
        reduced = tuple(b for b in chosen if b != year)
        _, _, rms_without = _pwl_fit(years, values, reduced)
        out.append(
            BreakCandidate(
                year=int(year),
                slope_change=float(coef[2 + i]),
                score=max(0.0, float(rms_without - full_rms)),
            )
        )
    return out


def _bridge_segments(
    years: np.ndarray, breaks: list[int]
) -> list[tuple[int, int]]:
    first, last = int(years[0]), int(years[-1])
    bounds = [first - 1] + list(breaks) + [last]
    segs = []
    for lo, hi in zip(bounds, bounds[1:]):
        segs.append((lo + 1, hi))
    return segs


def bridge_fit(
    cpi_cum: AnnualSeries,
    dgdp_cum: AnnualSeries,
    breaks: list[int] | tuple[int, ...],
    dummy_years: list[int] | tuple[int, ...] = (),
) -> InflationBridge:
    """Fit the piecewise dGDP-to-CPI scale bridge.

    Per segment the scale minimizes sum((CPI_cum - scale*dGDP_cum)^2) over
    the segment years; dummy offsets are estimated jointly (a single-year
    indicator is orthogonal to everything else, so the joint solution is
    the scale fitted on the remaining years plus the exact residual at the
    dummy year).

    Raises
    ------
    ConstraintError
        If any segment would contain <= 1 year.
    """
    cpi, dgdp = align(cpi_cum, dgdp_cum)
    years = np.asarray(cpi.years, dtype=int)
    c = np.asarray(cpi.values, dtype=float)
    d = np.asarray(dgdp.values, dtype=float)
    first, last = int(years[0]), int(years[-1])
    br = sorted(int(b) for b in breaks)
    for b in br:
        if not (first <= b < last):
            raise ConstraintError(f"break {b} outside span [{first}, {last})")
    dummies_in = sorted(int(y) for y in dummy_years)
    for y in dummies_in:
        if not (first <= y <= last):
            raise ConstraintError(f"dummy year {y} outside span")

    segments: list[BridgeSegment] = []
    dummies: list[tuple[int, float]] = []
    sq_sum = 0.0
    for lo, hi in _bridge_segments(years, br):
        mask = (years >= lo) & (years <= hi)
        if int(mask.sum()) <= 1:
            raise ConstraintError(f"bridge segment [{lo}, {hi}] too short")
        seg_dummy = [y for y in dummies_in if lo <= y <= hi]
        plain = mask & ~np.isin(years, seg_dummy)
        denom = float(np.dot(d[plain], d[plain]))
        if denom == 0.0:
            raise ConstraintError(f"bridge segment [{lo}, {hi}] degenerate")
        scale = float(np.dot(c[plain], d[plain])) / denom
        segments.append(BridgeSegment(start_year=lo, end_year=hi, scale=scale))
        resid = c[plain] - scale * d[plain]
        sq_sum += float(np.dot(resid, resid))
        for y in seg_dummy:
            i = int(np.flatnonzero(years == y)[0])
            dummies.append((y, float(c[i] - scale * d[i])))

    rms = float(np.sqrt(sq_sum / len(years)))
    return InflationBridge(
        segments=tuple(segments), dummies=tuple(sorted(dummies)), rms=rms
    )


def scale_chain(bridge: InflationBridge) -> list[float]:
    """Cumulative multiplicative factors relative to the first segment.

    chain[k] = scale_k / scale_0, so scale_0 * chain[k] reproduces each
    segment's scale exactly.
    """
    first = bridge.segments[0].scale
    return [seg.scale / first for seg in bridge.segments]


# Dummy-year screening threshold, in multiples of the residual sigma.
DUMMY_SIGMA_THRESHOLD = 4.0


def suggest_dummy_years(
    cpi_cum: AnnualSeries,
    dgdp_cum: AnnualSeries,
    breaks: list[int] | tuple[int, ...],
    threshold: float = DUMMY_SIGMA_THRESHOLD,
) -> list[int]:
    """Years whose bridge residual is an isolated spike above threshold*sigma.

    Isolated means both neighbouring years sit below half the spike
    threshold, so ramps and segment-edge drift are not reported. A
    screening heuristic only: callers decide whether to pass the result
    to :func:`bridge_fit` as dummy years (the pipeline default is not to).
    """
    cpi, dgdp = align(cpi_cum, dgdp_cum)
    years = np.asarray(cpi.years, dtype=int)
    c = np.asarray(cpi.values, dtype=float)
    d = np.asarray(dgdp.values, dtype=float)
    bridge = bridge_fit(cpi, dgdp, breaks)
    resid = np.empty(len(years))
    for seg in bridge.segments:
        mask = (years >= seg.start_year) & (years <= seg.end_year)
        resid[mask] = c[mask] - seg.scale * d[mask]
    sigma = float(np.std(resid))
    if sigma == 0.0:
        return []
    spikes = []
    cut = threshold * sigma
    for i, (year, r) in enumerate(zip(years, resid)):
        if abs(r) <= cut:
            continue
        neighbours = [resid[j] for j in (i - 1, i + 1) if 0 <= j < len(resid)]
        if all(abs(n) <= cut / 2.0 for n in neighbours):
            spikes.append(int(year))
    return spikes
