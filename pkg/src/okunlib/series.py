"""Annual (and quarterly) series types plus growth/normalization primitives.

All values are plain floats keyed by calendar year. Unemployment rates are
percentage points (5.8 means 5.8%), growth rates are percent per year
(100 times the log ratio), so fitted coefficients are directly comparable
with published tables.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable

from .errors import (
    DomainError,
    GapError,
    GapWarning,
    MissingYearError,
    NoOverlapError,
    ValidationError,
)


class VariableKind(str, Enum):
    UNEMPLOYMENT_RATE = "unemployment_rate"
    REAL_GDP_PC = "real_gdp_pc"
    CPI_INDEX = "cpi_index"
    DGDP_INDEX = "dgdp_index"
    INFLATION_RATE = "inflation_rate"
    # Signed derived data (residuals, curve differences) that the range
    # checks below must not constrain.
    DERIVED = "derived"


class Unit(str, Enum):
    PERCENT_POINTS = "percent_points"
    INDEX_LEVEL = "index_level"
    PERCENT_PER_YEAR = "percent_per_year"
    CURRENCY_PER_CAPITA = "currency_per_capita"


_POSITIVE_UNITS = {Unit.INDEX_LEVEL, Unit.CURRENCY_PER_CAPITA}


@dataclass(frozen=True)
class AnnualSeries:
    """An immutable year-indexed series with a declared variable kind.

    Invariants are enforced at construction: strictly increasing years,
    finite values, unemployment rates in [0, 100), and strictly positive
    values for index-level and currency units.
    """

    country: str
    variable: VariableKind
    unit: Unit
    points: tuple[tuple[int, float], ...]
    source: str = ""

    def __post_init__(self) -> None:
        pts = tuple((int(y), float(v)) for y, v in self.points)
        object.__setattr__(self, "points", pts)
        last = None
        for year, value in pts:
            if last is not None and year <= last:
                raise ValidationError(
                    f"{self._label()}: years not strictly increasing at {year}"
                )
            last = year
            if not math.isfinite(value):
                raise ValidationError(f"{self._label()}: non-finite value at {year}")
            if self.variable is VariableKind.UNEMPLOYMENT_RATE and not (
                0.0 <= value < 100.0
            ):
                raise ValidationError(
                    f"{self._label()}: unemployment rate {value} at {year} "
                    "outside [0, 100)"
                )
            if (
                self.variable is not VariableKind.DERIVED
                and self.unit in _POSITIVE_UNITS
                and value <= 0.0
            ):
                raise ValidationError(
                    f"{self._label()}: non-positive level {value} at {year}"
                )

    def _label(self) -> str:
        src = f"/{self.source}" if self.source else ""
        return f"{self.country}:{self.variable.value}{src}"

    @property
    def label(self) -> str:
        return self._label()

    @property
    def years(self) -> tuple[int, ...]:
        return tuple(y for y, _ in self.points)

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(v for _, v in self.points)

    @property
    def first_year(self) -> int:
        return self.points[0][0]

    @property
    def last_year(self) -> int:
        return self.points[-1][0]

    def __len__(self) -> int:
        return len(self.points)

    def has_year(self, year: int) -> bool:
        return any(y == year for y, _ in self.points)

    def value_at(self, year: int) -> float:
        for y, v in self.points:
            if y == year:
                return v
        raise MissingYearError(f"{self._label()}: year {year} not present")

    def gap_years(self) -> tuple[int, ...]:
        """Missing years strictly inside the span."""
        present = set(self.years)
        return tuple(
            y for y in range(self.first_year, self.last_year + 1) if y not in present
        )

    def window(self, start: int, end: int) -> "AnnualSeries":
        """Restrict to years in [start, end] inclusive."""
        pts = tuple((y, v) for y, v in self.points if start <= y <= end)
        if not pts:
            raise MissingYearError(
                f"{self._label()}: no points in [{start}, {end}]"
            )
        return replace(self, points=pts)


@dataclass(frozen=True)
class GrowthSeries:
    """Annual log growth in percent per year, one point per year pair.

    ``base`` records the provenance of the level series the growth was
    derived from; ``gap_years`` lists years whose growth was omitted
    because the preceding year was absent.
    """

    base: str
    points: tuple[tuple[int, float], ...]
    gap_years: tuple[int, ...] = ()

    @property
    def years(self) -> tuple[int, ...]:
        return tuple(y for y, _ in self.points)

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(v for _, v in self.points)

    def __len__(self) -> int:
        return len(self.points)

    def value_at(self, year: int) -> float:
        for y, v in self.points:
            if y == year:
                return v
        raise GapError(f"growth({self.base}): year {year} not present")

    def as_dict(self) -> dict[int, float]:
        return dict(self.points)


@dataclass(frozen=True)
class QuarterlySeries:
    """A quarter-indexed series; points are (year, quarter, value)."""

    label: str
    points: tuple[tuple[int, int, float], ...]

    def __post_init__(self) -> None:
        pts = tuple((int(y), int(q), float(v)) for y, q, v in self.points)
        object.__setattr__(self, "points", pts)
        prev: tuple[int, int] | None = None
        for year, quarter, value in pts:
            if quarter not in (1, 2, 3, 4):
                raise ValidationError(f"{self.label}: invalid quarter {quarter}")
            if not math.isfinite(value):
                raise ValidationError(
                    f"{self.label}: non-finite value at {year}Q{quarter}"
                )
            if prev is not None and (year, quarter) <= prev:
                raise ValidationError(
                    f"{self.label}: periods not increasing at {year}Q{quarter}"
                )
            prev = (year, quarter)

    @property
    def periods(self) -> tuple[tuple[int, int], ...]:
        return tuple((y, q) for y, q, _ in self.points)

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(v for _, _, v in self.points)

    def __len__(self) -> int:
        return len(self.points)

    def require_contiguous(self) -> None:
        for (y0, q0), (y1, q1) in zip(self.periods, self.periods[1:]):
            expected = (y0, q0 + 1) if q0 < 4 else (y0 + 1, 1)
            if (y1, q1) != expected:
                raise GapError(
                    f"{self.label}: missing quarter between "
                    f"{y0}Q{q0} and {y1}Q{q1}"
                )


def period_label(year: int, quarter: int) -> str:
    return f"{year}Q{quarter}"


def parse_period(text: str) -> tuple[int, int]:
    raw = text.strip().upper()
    if "Q" not in raw:
        raise ValidationError(f"cannot parse quarterly period {text!r}")
    y, _, q = raw.partition("Q")
    try:
        return int(y), int(q)
    except ValueError as exc:
        raise ValidationError(f"cannot parse quarterly period {text!r}") from exc


def log_growth(g: AnnualSeries) -> GrowthSeries:
    """Annual log growth, 100*ln(G_y / G_{y-1}), for consecutive year pairs.

    Parameters
    ----------
    g : AnnualSeries
        A strictly positive level series with at least two consecutive years.

    Returns
    -------
    GrowthSeries
        One point per consecutive year pair, percent per year. Years that
        follow a gap are omitted and recorded in ``gap_years`` (a
        :class:`GapWarning` is emitted as well).
    """
    if len(g) < 2:
        raise DomainError(f"{g.label}: need at least 2 points for growth")
    for year, value in g.points:
        if value <= 0.0:
            raise DomainError(f"{g.label}: non-positive value {value} at {year}")
    points: list[tuple[int, float]] = []
    gaps: list[int] = []
    for (y0, v0), (y1, v1) in zip(g.points, g.points[1:]):
        if y1 == y0 + 1:
            points.append((y1, 100.0 * math.log(v1 / v0)))
        else:
            gaps.extend(range(y0 + 1, y1 + 1))
    if not points:
        raise DomainError(f"{g.label}: no consecutive year pairs")
    if gaps:
        warnings.warn(
            f"{g.label}: growth omitted for gap years {gaps}", GapWarning,
            stacklevel=2,
        )
    return GrowthSeries(base=g.label, points=tuple(points), gap_years=tuple(gaps))


def normalize(s: AnnualSeries, ref_year: int) -> AnnualSeries:
    """Scale a series so its value at ``ref_year`` is exactly 1.0."""
    ref = s.value_at(ref_year)  # raises MissingYearError
    if ref == 0.0:
        raise DomainError(f"{s.label}: zero value at reference year {ref_year}")
    pts = tuple((y, v / ref) for y, v in s.points)
    return replace(s, points=pts, unit=Unit.INDEX_LEVEL)


def rates_from_index(idx: AnnualSeries) -> AnnualSeries:
    """Annual inflation rates, 100*(I_y/I_{y-1} - 1), from an index series."""
    if len(idx) < 2:
        raise DomainError(f"{idx.label}: need at least 2 points for rates")
    for year, value in idx.points:
        if value <= 0.0:
            raise DomainError(f"{idx.label}: non-positive index {value} at {year}")
    points: list[tuple[int, float]] = []
    gaps: list[int] = []
    for (y0, v0), (y1, v1) in zip(idx.points, idx.points[1:]):
        if y1 == y0 + 1:
            points.append((y1, 100.0 * (v1 / v0 - 1.0)))
        else:
            gaps.extend(range(y0 + 1, y1 + 1))
    if not points:
        raise DomainError(f"{idx.label}: no consecutive year pairs")
    if gaps:
        warnings.warn(
            f"{idx.label}: rates omitted for gap years {gaps}", GapWarning,
            stacklevel=2,
        )
    return AnnualSeries(
        country=idx.country,
        variable=VariableKind.INFLATION_RATE,
        unit=Unit.PERCENT_PER_YEAR,
        points=tuple(points),
        source=idx.source,
    )


def cumulative_inflation(
    rates: AnnualSeries,
    start_year: int | None = None,
    compound: bool = False,
) -> AnnualSeries:
    """Cumulative inflation curve: running arithmetic sum of annual rates.

    The curve spans one year before the first rate through the last rate
    year and is re-based so its value at ``start_year`` is exactly 1.0
    (value(y) = 1 + sum of rates/100 between the base year and y). The
    default base is the year before the first rate, so curves "start from
    1.0". The default accumulation is the arithmetic sum; ``compound``
    switches to geometric compounding (product of 1 + rate/100, re-based
    to 1.0 the same way).

    Parameters
    ----------
    rates : AnnualSeries
        Contiguous annual inflation rates (percent per year).
    start_year : int, optional
        Re-base year; must lie inside the output span.
    compound : bool
        Geometric compounding instead of the arithmetic sum.

    Raises
    ------
    GapError
        If the rate years are not contiguous.
    MissingYearError
        If ``start_year`` falls outside the output span.
    """
    if len(rates) == 0:
        raise DomainError(f"{rates.label}: empty rate series")
    if rates.gap_years():
        raise GapError(
            f"{rates.label}: rates must be contiguous, "
            f"missing {rates.gap_years()}"
        )
    base_year = rates.first_year - 1
    if start_year is None:
        start_year = base_year
    if not (base_year <= start_year <= rates.last_year):
        raise MissingYearError(
            f"{rates.label}: re-base year {start_year} outside span "
            f"[{base_year}, {rates.last_year}]"
        )
    if compound:
        running = 1.0
        cum = {base_year: 1.0}
        for year, rate in rates.points:
            factor = 1.0 + rate / 100.0
            if factor <= 0.0:
                raise DomainError(
                    f"{rates.label}: rate {rate} at {year} not compoundable"
                )
            running *= factor
            cum[year] = running
        offset = cum[start_year]
        pts = tuple((y, cum[y] / offset) for y in sorted(cum))
    else:
        running = 0.0
        cum = {base_year: 0.0}
        for year, rate in rates.points:
            running += rate / 100.0
            cum[year] = running
        offset = cum[start_year]
        pts = tuple((y, 1.0 + cum[y] - offset) for y in sorted(cum))
    return AnnualSeries(
        country=rates.country,
        variable=VariableKind.DERIVED,
        unit=Unit.INDEX_LEVEL,
        points=pts,
        source=rates.source,
    )


def align(a: AnnualSeries, b: AnnualSeries) -> tuple[AnnualSeries, AnnualSeries]:
    """Restrict both series to their common years."""
    common = sorted(set(a.years) & set(b.years))
    if not common:
        raise NoOverlapError(f"{a.label} and {b.label} share no years")
    keep = set(common)
    pa = tuple((y, v) for y, v in a.points if y in keep)
    pb = tuple((y, v) for y, v in b.points if y in keep)
    return replace(a, points=pa), replace(b, points=pb)


def quarterly_log_growth(levels: QuarterlySeries) -> QuarterlySeries:
    """Quarter-over-quarter log growth in percent, from quarterly levels."""
    levels.require_contiguous()
    if len(levels) < 2:
        raise DomainError(f"{levels.label}: need at least 2 quarters")
    pts: list[tuple[int, int, float]] = []
    for (y0, q0, v0), (y1, q1, v1) in zip(levels.points, levels.points[1:]):
        if v0 <= 0.0 or v1 <= 0.0:
            raise DomainError(f"{levels.label}: non-positive level at {y1}Q{q1}")
        pts.append((y1, q1, 100.0 * math.log(v1 / v0)))
    return QuarterlySeries(label=f"dln({levels.label})", points=tuple(pts))


def from_pairs(
    pairs: Iterable[tuple[int, float]],
    country: str = "synthetic",
    variable: VariableKind = VariableKind.DERIVED,
    unit: Unit = Unit.PERCENT_POINTS,
    source: str = "",
) -> AnnualSeries:
    """Convenience constructor used heavily in tests and synthesis."""
    return AnnualSeries(
        country=country, variable=variable, unit=unit,
        points=tuple(pairs), source=source,
    )
