"""File formats: per-series CSVs, country manifests, model files, reports.

CSV series files carry a ``year,value`` header and one row per year.
Quarterly files use ``period,value`` with periods like ``2020Q2``. A
country manifest is a JSON file naming each series file with its variable
kind, unit and source label, plus per-command defaults. All JSON written
here has sorted keys and a trailing newline so reruns are byte-identical.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Sequence

from .errors import DataIOError, ValidationError
from .model import FitReport, PiecewiseOkun, SegmentSpec
from .series import (
    AnnualSeries,
    QuarterlySeries,
    Unit,
    VariableKind,
    parse_period,
)


def read_series_csv(
    path: str | Path,
    country: str,
    variable: VariableKind,
    unit: Unit,
    source: str = "",
) -> AnnualSeries:
    """Load one annual series from a ``year,value`` CSV file."""
    path = Path(path)
    rows = _read_rows(path, expected_header=("year", "value"))
    points: list[tuple[int, float]] = []
    seen: set[int] = set()
    for lineno, row in rows:
        try:
            year = int(row[0])
            value = float(row[1])
        except (ValueError, IndexError) as exc:
            raise ValidationError(f"{path}:{lineno}: bad row {row!r}") from exc
        if year in seen:
            raise ValidationError(f"{path}:{lineno}: duplicate year {year}")
        seen.add(year)
        points.append((year, value))
    points.sort()
    try:
        return AnnualSeries(
            country=country,
            variable=variable,
            unit=unit,
            points=tuple(points),
            source=source,
        )
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def read_quarterly_csv(path: str | Path, label: str = "") -> QuarterlySeries:
    """Load a quarterly series from a ``period,value`` CSV file."""
    path = Path(path)
    rows = _read_rows(path, expected_header=("period", "value"))
    points: list[tuple[int, int, float]] = []
    for lineno, row in rows:
        try:
            year, quarter = parse_period(row[0])
            value = float(row[1])
        except (ValidationError, ValueError, IndexError) as exc:
            raise ValidationError(f"{path}:{lineno}: bad row {row!r}") from exc
        points.append((year, quarter, value))
    try:
        return QuarterlySeries(label=label or path.stem, points=tuple(points))
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def _read_rows(
    path: Path, expected_header: tuple[str, ...]
) -> list[tuple[int, list[str]]]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            rows = [(i + 1, row) for i, row in enumerate(reader) if row]
    except OSError as exc:
        raise DataIOError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise ValidationError(f"{path}: empty file")
    header = tuple(cell.strip().lower() for cell in rows[0][1])
    if header != expected_header:
        raise ValidationError(
            f"{path}: expected header {','.join(expected_header)!r}, "
            f"got {','.join(header)!r}"
        )
    return rows[1:]


def write_table_csv(
    path: str | Path, header: Sequence[str], rows: Iterable[Sequence[Any]]
) -> None:
    """Write a plot-data CSV with deterministic float formatting."""
    path = Path(path)
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_format_cell(cell) for cell in row])
    except OSError as exc:
        raise DataIOError(f"cannot write {path}: {exc}") from exc


def _format_cell(cell: Any) -> str:
    if isinstance(cell, float):
        return repr(cell)
    return str(cell)


def write_json(path: str | Path, payload: Any) -> None:
    """Stable JSON dump: sorted keys, two-space indent, trailing newline."""
    path = Path(path)
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise DataIOError(f"cannot write {path}: {exc}") from exc


def read_json(path: str | Path) -> Any:
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise DataIOError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON: {exc}") from exc


def sha256_of_file(path: str | Path) -> str:
    h = hashlib.sha256()
    try:
        with open(path, "rb") as fh:
            for chunk in iter(lambda: fh.read(65536), b""):
                h.update(chunk)
    except OSError as exc:
        raise DataIOError(f"cannot read {path}: {exc}") from exc
    return h.hexdigest()


def sha256_of_config(config: dict[str, Any]) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# manifests
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ManifestEntry:
    series_id: str
    file: str
    variable: VariableKind
    unit: Unit
    source: str
    frequency: str = "annual"


@dataclass(frozen=True)
class Manifest:
    country: str
    directory: Path
    entries: tuple[ManifestEntry, ...]
    defaults: dict[str, Any]
    path: Path

    def entry(self, series_id: str) -> ManifestEntry:
        for e in self.entries:
            if e.series_id == series_id:
                return e
        raise ValidationError(
            f"{self.path}: no series with id {series_id!r} "
            f"(have {[e.series_id for e in self.entries]})"
        )

    def file_path(self, series_id: str) -> Path:
        return self.directory / self.entry(series_id).file

    def load(self, series_id: str) -> AnnualSeries:
        e = self.entry(series_id)
        if e.frequency != "annual":
            raise ValidationError(
                f"{self.path}: series {series_id!r} is {e.frequency}, "
                "expected annual"
            )
        return read_series_csv(
            self.directory / e.file,
            country=self.country,
            variable=e.variable,
            unit=e.unit,
            source=e.source,
        )

    def load_quarterly(self, series_id: str) -> QuarterlySeries:
        e = self.entry(series_id)
        if e.frequency != "quarterly":
            raise ValidationError(
                f"{self.path}: series {series_id!r} is {e.frequency}, "
                "expected quarterly"
            )
        return read_quarterly_csv(self.directory / e.file, label=e.series_id)

    def ids_for_variable(self, variable: VariableKind) -> list[str]:
        return [
            e.series_id
            for e in self.entries
            if e.variable is variable and e.frequency == "annual"
        ]


def load_manifest(path: str | Path) -> Manifest:
    """Parse and structurally validate a country manifest."""
    path = Path(path)
    raw = read_json(path)
    if not isinstance(raw, dict):
        raise ValidationError(f"{path}: manifest must be a JSON object")
    try:
        country = str(raw["country"])
        series = raw["series"]
    except KeyError as exc:
        raise ValidationError(f"{path}: missing manifest key {exc}") from exc
    if not isinstance(series, list) or not series:
        raise ValidationError(f"{path}: 'series' must be a non-empty list")
    entries: list[ManifestEntry] = []
    seen: set[str] = set()
    for item in series:
        try:
            sid = str(item["id"])
            entry = ManifestEntry(
                series_id=sid,
                file=str(item["file"]),
                variable=VariableKind(item["variable"]),
                unit=Unit(item["unit"]),
                source=str(item.get("source", "")),
                frequency=str(item.get("frequency", "annual")),
            )
        except KeyError as exc:
            raise ValidationError(
                f"{path}: series entry missing key {exc}"
            ) from exc
        except ValueError as exc:
            raise ValidationError(f"{path}: {exc}") from exc
        if sid in seen:
            raise ValidationError(f"{path}: duplicate series id {sid!r}")
        seen.add(sid)
        entries.append(entry)
    defaults = raw.get("defaults", {})
    if not isinstance(defaults, dict):
        raise ValidationError(f"{path}: 'defaults' must be an object")
    return Manifest(
        country=country,
        directory=path.parent,
        entries=tuple(entries),
        defaults=defaults,
        path=path,
    )


# ---------------------------------------------------------------------------
# model files
# ---------------------------------------------------------------------------


def model_to_dict(model: PiecewiseOkun, meta: dict[str, Any] | None = None) -> dict:
    return {
        "country": model.country,
        "segments": [
            {"start": s.start_year, "end": s.end_year, "a": s.a, "b": s.b}
            for s in model.segments
        ],
        "anchors": [{"year": y, "u": u} for y, u in model.anchors],
        "meta": meta or {},
    }


def model_from_dict(raw: dict) -> PiecewiseOkun:
    try:
        segments = tuple(
            SegmentSpec(
                start_year=int(s["start"]),
                end_year=int(s["end"]),
                b=float(s["b"]),
                a=float(s["a"]),
            )
            for s in raw["segments"]
        )
        anchors = tuple((int(a["year"]), float(a["u"])) for a in raw["anchors"])
        return PiecewiseOkun(
            country=str(raw["country"]), segments=segments, anchors=anchors
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad model file structure: {exc}") from exc


def write_model(
    path: str | Path, model: PiecewiseOkun, meta: dict[str, Any] | None = None
) -> None:
    write_json(path, model_to_dict(model, meta))


def read_model(path: str | Path) -> PiecewiseOkun:
    return model_from_dict(read_json(path))


def fit_report_to_dict(report: FitReport) -> dict:
    stats = report.stats
    return {
        "model": model_to_dict(report.model),
        "breaks": list(report.model.breaks),
        "rms": report.rms,
        "stats": {
            "residual_sigma": stats.residual_sigma,
            "r_squared": stats.r_squared,
            "r_squared_prediction": stats.r_squared_prediction,
            "regression_slope": stats.slope,
            "regression_intercept": stats.intercept,
            "mean_u": stats.mean_u,
            "n_excluded": stats.n_excluded,
        },
        "residuals": [
            {"year": y, "value": v} for y, v in stats.residuals.points
        ],
    }
