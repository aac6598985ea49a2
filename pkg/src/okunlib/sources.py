"""Cross-source GDP-per-capita auditing: normalized curves, ratios, drift.

Different providers rebase their real series to different reference
years, so raw levels are not comparable. Everything here normalizes to a
common year first, then quantifies how far (and how systematically) the
normalized curves drift apart.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, MissingYearError
from .series import AnnualSeries, align, normalize

# Divergence thresholds: ~2% is method noise, >10% is alarming.
WARN_DIVERGENCE = 0.02
ALERT_DIVERGENCE = 0.10


@dataclass(frozen=True)
class PairDrift:
    """Ratio diagnostics for one ordered pair of normalized sources."""

    label_a: str
    label_b: str
    ratio: AnnualSeries
    trend_slope: float
    trend_r2: float
    max_divergence: float
    year_of_max: int
    flag: str


@dataclass(frozen=True)
class SourceComparison:
    ref_year: int
    normalized: tuple[tuple[str, AnnualSeries], ...]
    pairs: tuple[PairDrift, ...]


def _series_label(s: AnnualSeries, fallback: str) -> str:
    return s.source or fallback


def compare(
    series: Sequence[AnnualSeries] | Sequence[tuple[str, AnnualSeries]],
    ref_year: int,
    warn_threshold: float = WARN_DIVERGENCE,
    alert_threshold: float = ALERT_DIVERGENCE,
) -> SourceComparison:
    """Normalize all sources to ``ref_year`` and audit every pair.

    Parameters
    ----------
    series : sequence
        Two or more AnnualSeries (their ``source`` labels name them), or
        explicit (label, series) pairs.
    ref_year : int
        Common normalization year; must be present in every series.
    warn_threshold, alert_threshold : float
        |ratio - 1| levels at which a pair is flagged "warn" / "alert".

    Returns
    -------
    SourceComparison
        Normalized curves plus, per pair (a, b): the ratio a/b over the
        common years, the OLS slope of the ratio against the year with
        the trend-fit R^2, and the largest |ratio - 1| with its year.
    """
    labelled: list[tuple[str, AnnualSeries]] = []
    for i, item in enumerate(series):
        if isinstance(item, AnnualSeries):
            labelled.append((_series_label(item, f"series{i}"), item))
        else:
            label, s = item
            labelled.append((str(label), s))
    if len(labelled) < 2:
        raise DomainError("compare needs at least two series")
    for label, s in labelled:
        if not s.has_year(ref_year):
            raise MissingYearError(f"{label}: reference year {ref_year} absent")

    normalized = tuple((label, normalize(s, ref_year)) for label, s in labelled)

    pairs: list[PairDrift] = []
    for (la, sa), (lb, sb) in _ordered_pairs(normalized):
        a, b = align(sa, sb)
        years = np.asarray(a.years, dtype=float)
        ratio_vals = np.asarray(a.values) / np.asarray(b.values)
        ratio = AnnualSeries(
            country=sa.country,
            variable=sa.variable,
            unit=sa.unit,
            points=tuple(zip(a.years, (float(r) for r in ratio_vals))),
            source=f"{la}/{lb}",
        )
        slope, r2 = _trend(years, ratio_vals)
        div = np.abs(ratio_vals - 1.0)
        imax = int(np.argmax(div))
        max_div = float(div[imax])
        flag = (
            "alert"
            if max_div > alert_threshold
            else "warn" if max_div > warn_threshold else "ok"
        )
        pairs.append(
            PairDrift(
                label_a=la,
                label_b=lb,
                ratio=ratio,
                trend_slope=slope,
                trend_r2=r2,
                max_divergence=max_div,
                year_of_max=int(a.years[imax]),
                flag=flag,
            )
        )
    return SourceComparison(
        ref_year=ref_year, normalized=normalized, pairs=tuple(pairs)
    )


def _ordered_pairs(items):
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            yield items[i], items[j]


def _trend(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """OLS slope of y on x and the R^2 of that single-regressor fit."""
    vx = float(np.var(x))
    if vx == 0.0:
        return 0.0, 0.0
    cov = float(np.mean((x - x.mean()) * (y - y.mean())))
    slope = cov / vx
    vy = float(np.var(y))
    r2 = 0.0 if vy == 0.0 else cov * cov / (vx * vy)
    return slope, r2


def total_growth_factor(s: AnnualSeries, from_year: int, to_year: int) -> float:
    """Ratio s(to_year) / s(from_year); invariant under normalization."""
    denom = s.value_at(from_year)
    if denom == 0.0:
        raise DomainError(f"{s.label}: zero value at {from_year}")
    return s.value_at(to_year) / denom
