"""Batch CLI: validate -> detect -> fit -> predict -> audit -> synth.

Commands compose through files (model JSON, report JSON, plot CSVs), so a
run is auditable and resumable. Outputs are deterministic: reports embed
the resolved-config hash and input digests instead of timestamps, and
rerunning a command with identical inputs produces byte-identical files.

Exit codes: 0 success, 2 data/contract violation, 3 infeasible
constraints, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Any, Sequence

from . import breaks as breaks_mod
from . import dataio, model as model_mod, sources as sources_mod
from .bundled import bundled_countries, bundled_manifest_path
from .errors import OkunlibError, ValidationError
from .series import (
    VariableKind,
    cumulative_inflation,
    log_growth,
    period_label,
    quarterly_log_growth,
    rates_from_index,
)

PROG = "okunlaw"


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except OkunlibError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"{PROG}: I/O error: {exc}", file=sys.stderr)
        return 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG,
        description=(
            "Piecewise Okun's-law toolkit: definitional-break detection, "
            "segment fitting, prediction, and GDP source auditing."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, needs_output: bool = True) -> None:
        grp = p.add_mutually_exclusive_group(required=True)
        grp.add_argument("--manifest", help="path to a country manifest JSON")
        grp.add_argument(
            "--country",
            help=f"bundled country key (one of: {', '.join(bundled_countries())})",
        )
        p.add_argument("--config", help="JSON file with parameter defaults")
        if needs_output:
            p.add_argument(
                "--output-dir", required=True, help="directory for artifacts"
            )

    p = sub.add_parser("validate", help="check a manifest and its series files")
    add_common(p, needs_output=False)
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("detect", help="detect CPI/dGDP definitional breaks")
    add_common(p)
    p.add_argument("--cpi", help="series id of the CPI index")
    p.add_argument("--dgdp", help="series id of the GDP deflator index")
    p.add_argument("--ref-year", type=int, help="re-base year for cumulative curves")
    p.add_argument("--max-breaks", type=int, help="max candidate breaks (default 4)")
    p.add_argument("--min-segment", type=int, help="min piece length (default 3)")
    p.add_argument(
        "--rel-tolerance",
        type=float,
        help="minimum relative RMS reduction to keep a break (default 0.02)",
    )
    p.add_argument(
        "--compound-inflation",
        action="store_true",
        default=None,
        help="compound cumulative inflation geometrically "
        "(default: arithmetic sum)",
    )
    p.add_argument(
        "--bridge-breaks",
        help="comma-separated break years for the bridge fit "
        "(default: detected candidates)",
    )
    p.add_argument(
        "--dummy-years", help="comma-separated single-year dummy offsets"
    )
    p.add_argument(
        "--auto-dummies",
        action="store_true",
        default=None,
        help="screen for single-year dummy offsets automatically "
        "(default: off; dummy years are caller-supplied)",
    )
    p.add_argument(
        "--dummy-threshold",
        type=float,
        help="sigma multiple for --auto-dummies screening (default 4.0)",
    )
    p.set_defaults(handler=cmd_detect)

    p = sub.add_parser("fit", help="fit the piecewise model")
    add_common(p)
    p.add_argument("--unemployment", help="series id of measured unemployment")
    p.add_argument("--gdppc", help="series id of real GDP per capita")
    p.add_argument("--breaks", help="fixed break years, comma-separated")
    p.add_argument("--n-breaks", type=int, help="search this many breaks")
    p.add_argument(
        "--candidates",
        help="comma-separated candidate break years restricting the search",
    )
    p.add_argument("--min-segment", type=int, help="min segment years (default 5)")
    p.add_argument(
        "--search-radius", type=int, help="grid radius around candidates (default 3)"
    )
    p.add_argument(
        "--anchor-mode", choices=("measured", "chained"), help="anchor semantics"
    )
    p.add_argument(
        "--exclude-years",
        help="comma-separated years excluded from reported statistics",
    )
    p.set_defaults(handler=cmd_fit)

    p = sub.add_parser("predict", help="predict unemployment from a model file")
    add_common(p)
    p.add_argument("--model-file", required=True, help="model JSON from 'fit'")
    p.add_argument("--gdppc", help="series id of real GDP per capita (annual mode)")
    p.add_argument(
        "--horizon", type=int,
        help="extend the last segment through this year (annual mode)",
    )
    p.add_argument(
        "--quarterly-gdppc", help="quarterly series id (switches to quarterly mode)"
    )
    p.add_argument(
        "--u-start", type=float, help="starting unemployment for quarterly mode"
    )
    p.set_defaults(handler=cmd_predict)

    p = sub.add_parser("audit", help="compare GDP-per-capita sources")
    add_common(p)
    p.add_argument("--series", help="comma-separated series ids (default: all gdppc)")
    p.add_argument("--ref-year", type=int, help="common normalization year")
    p.add_argument(
        "--growth-from", type=int, help="start year for total growth factors"
    )
    p.add_argument(
        "--growth-to", type=int, help="end year for total growth factors"
    )
    p.add_argument(
        "--warn-threshold", type=float,
        help="|ratio-1| level flagged as warn (default 0.02)",
    )
    p.add_argument(
        "--alert-threshold", type=float,
        help="|ratio-1| level flagged as alert (default 0.10)",
    )
    p.set_defaults(handler=cmd_audit)

    p = sub.add_parser("synth", help="generate a synthetic unemployment CSV")
    add_common(p)
    p.add_argument("--model-file", required=True, help="model JSON from 'fit'")
    p.add_argument("--gdppc", help="series id of real GDP per capita")
    p.add_argument("--noise", type=float, help="noise sigma in pp (default 0)")
    p.add_argument("--seed", type=int, help="RNG seed (default 0)")
    p.set_defaults(handler=cmd_synth)

    return parser


# ---------------------------------------------------------------------------
# parameter resolution: flag > config file > manifest defaults > fallback
# ---------------------------------------------------------------------------


class _Params:
    def __init__(self, args: argparse.Namespace, section: str) -> None:
        self.manifest = _load_manifest(args)
        self.config = dataio.read_json(args.config) if args.config else {}
        if not isinstance(self.config, dict):
            raise ValidationError(f"{args.config}: config must be a JSON object")
        self.section = section
        self.args = args
        self.resolved: dict[str, Any] = {}

    def get_explicit(self, name: str) -> Any:
        """Flag or config-file value only, ignoring manifest defaults."""
        value = getattr(self.args, name.replace("-", "_"), None)
        if value is None:
            value = self.config.get(name)
        return value

    def get(self, name: str, fallback: Any = None) -> Any:
        value = self.get_explicit(name)
        if value is None:
            section = self.manifest.defaults.get(self.section, {})
            value = section.get(name)
        if value is None:
            value = fallback
        self.resolved[name] = value
        return value

    def require(self, name: str) -> Any:
        value = self.get(name)
        if value is None:
            raise ValidationError(
                f"parameter {name!r} is required for '{self.section}' "
                "(flag, config file, or manifest defaults)"
            )
        return value

    def provenance(self, input_files: dict[str, Path]) -> dict[str, Any]:
        return {
            "country": self.manifest.country,
            "config_sha256": dataio.sha256_of_config(
                {"command": self.section, "parameters": _jsonable(self.resolved)}
            ),
            "inputs": {
                name: dataio.sha256_of_file(path)
                for name, path in sorted(input_files.items())
            },
        }


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _load_manifest(args: argparse.Namespace) -> dataio.Manifest:
    if args.manifest:
        return dataio.load_manifest(args.manifest)
    return dataio.load_manifest(bundled_manifest_path(args.country))


def _int_list(value: Any) -> list[int]:
    if value is None:
        return []
    if isinstance(value, str):
        items = [v for v in value.replace(",", " ").split() if v]
        return [int(v) for v in items]
    return [int(v) for v in value]


def _outdir(args: argparse.Namespace) -> Path:
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_validate(args: argparse.Namespace) -> int:
    manifest = _load_manifest(args)
    print(f"manifest: {manifest.path}")
    print(f"country:  {manifest.country}")
    failures = 0
    for entry in manifest.entries:
        prefix = f"  {entry.series_id:<18} {entry.variable.value:<17}"
        try:
            if entry.frequency == "quarterly":
                qs = manifest.load_quarterly(entry.series_id)
                qs.require_contiguous()
                first = period_label(*qs.periods[0])
                last = period_label(*qs.periods[-1])
                print(f"{prefix} {first}..{last}  ({len(qs)} quarters) ok")
                continue
            s = manifest.load(entry.series_id)
            gaps = s.gap_years()
            note = f" gaps={list(gaps)}" if gaps else ""
            print(
                f"{prefix} {s.first_year}..{s.last_year}  "
                f"({len(s)} years) ok{note}"
            )
        except OkunlibError as exc:
            failures += 1
            print(f"{prefix} FAILED: {exc}")
    if failures:
        print(f"{failures} series failed validation", file=sys.stderr)
        return 2
    return 0


def cmd_detect(args: argparse.Namespace) -> int:
    params = _Params(args, "detect")
    manifest = params.manifest
    out = _outdir(args)

    cpi_id = params.require("cpi")
    dgdp_id = params.require("dgdp")
    max_breaks = int(params.get("max-breaks", 4))
    min_segment = int(params.get("min-segment", 3))
    rel_tolerance = float(
        params.get("rel-tolerance", breaks_mod.REL_SCORE_TOLERANCE)
    )
    compound = bool(params.get("compound-inflation", False))
    ref_year = params.get("ref-year")
    dummy_years = _int_list(params.get("dummy-years"))
    bridge_breaks = _int_list(params.get("bridge-breaks"))
    auto_dummies = bool(params.get("auto-dummies", False))
    dummy_threshold = float(
        params.get("dummy-threshold", breaks_mod.DUMMY_SIGMA_THRESHOLD)
    )

    cpi_idx = manifest.load(cpi_id)
    dgdp_idx = manifest.load(dgdp_id)
    ref = int(ref_year) if ref_year is not None else None
    cpi_cum = cumulative_inflation(rates_from_index(cpi_idx), ref, compound)
    dgdp_cum = cumulative_inflation(rates_from_index(dgdp_idx), ref, compound)
    diff = breaks_mod.difference_curve(cpi_cum, dgdp_cum)

    candidates = breaks_mod.candidate_breaks(
        diff, max_breaks, min_segment, rel_tolerance
    )
    fit_breaks = bridge_breaks or [c.year for c in candidates]
    if auto_dummies and not dummy_years:
        dummy_years = breaks_mod.suggest_dummy_years(
            cpi_cum, dgdp_cum, fit_breaks, dummy_threshold
        )
    bridge = breaks_mod.bridge_fit(cpi_cum, dgdp_cum, fit_breaks, dummy_years)

    report = {
        "country": manifest.country,
        "candidates": [
            {"year": c.year, "score": c.score, "slope_change": c.slope_change}
            for c in candidates
        ],
        "bridge": {
            "segments": [
                {"start": s.start_year, "end": s.end_year, "scale": s.scale}
                for s in bridge.segments
            ],
            "dummies": [{"year": y, "offset": d} for y, d in bridge.dummies],
            "scale_chain": breaks_mod.scale_chain(bridge),
            "rms": bridge.rms,
        },
        "provenance": params.provenance(
            {
                cpi_id: manifest.file_path(cpi_id),
                dgdp_id: manifest.file_path(dgdp_id),
            }
        ),
    }
    dataio.write_json(out / "break_report.json", report)

    fitted = breaks_mod.fitted_difference(diff, [c.year for c in candidates])
    cpi_map = dict(cpi_cum.points)
    dgdp_map = dict(dgdp_cum.points)
    diff_map = dict(diff.points)
    dataio.write_table_csv(
        out / "detect_plot.csv",
        ("year", "cpi_cum", "dgdp_cum", "diff", "fitted_diff"),
        (
            (y, cpi_map[y], dgdp_map[y], diff_map[y], f)
            for y, f in fitted.points
        ),
    )

    print(f"{manifest.country}: {len(candidates)} candidate break(s)")
    for c in candidates:
        print(
            f"  {c.year}: slope change {c.slope_change:+.4f}, "
            f"score {c.score:.5f}"
        )
    chain = breaks_mod.scale_chain(bridge)
    for seg, rel in zip(bridge.segments, chain):
        print(
            f"  bridge [{seg.start_year}-{seg.end_year}] "
            f"scale={seg.scale:.3f} (chain {rel:.3f})"
        )
    for year, offset in bridge.dummies:
        print(f"  dummy {year}: {offset:+.3f}")
    print(f"wrote {out / 'break_report.json'} and {out / 'detect_plot.csv'}")
    return 0


def cmd_fit(args: argparse.Namespace) -> int:
    params = _Params(args, "fit")
    manifest = params.manifest
    out = _outdir(args)

    u_id = params.require("unemployment")
    g_id = params.require("gdppc")
    # An explicit breaks/n-breaks choice (flag or config) suppresses the
    # manifest default of the other, so the two modes never collide.
    explicit_breaks = params.get_explicit("breaks")
    explicit_n = params.get_explicit("n-breaks")
    if explicit_breaks is not None or explicit_n is not None:
        fixed_breaks = _int_list(explicit_breaks)
        n_breaks = explicit_n
        params.resolved["breaks"] = fixed_breaks or None
        params.resolved["n-breaks"] = n_breaks
    else:
        fixed_breaks = _int_list(params.get("breaks"))
        n_breaks = params.get("n-breaks")
    candidates = _int_list(params.get("candidates"))
    min_segment = int(params.get("min-segment", model_mod.DEFAULT_MIN_SEGMENT))
    radius = int(params.get("search-radius", model_mod.DEFAULT_SEARCH_RADIUS))
    anchor_mode = str(params.get("anchor-mode", "measured"))
    excluded = _int_list(params.get("exclude-years"))

    u = manifest.load(u_id)
    growth = log_growth(manifest.load(g_id))

    if fixed_breaks and n_breaks is not None:
        raise ValidationError("give either fixed breaks or n-breaks, not both")
    if fixed_breaks:
        report = model_mod.fit_report(u, growth, fixed_breaks, anchor_mode)
    elif n_breaks is not None:
        report = model_mod.search_breaks(
            u,
            growth,
            int(n_breaks),
            candidates=candidates,
            min_segment=min_segment,
            search_radius=radius,
            anchor_mode=anchor_mode,
        )
    else:
        raise ValidationError("need breaks or n-breaks for 'fit'")

    payload = dataio.fit_report_to_dict(report)
    if excluded:
        adjusted = model_mod.exclude_years(report, excluded)
        payload["stats_excluding"] = {
            "years": excluded,
            "residual_sigma": adjusted.residual_sigma,
            "r_squared": adjusted.r_squared,
            "r_squared_prediction": adjusted.r_squared_prediction,
        }
    prov = params.provenance(
        {u_id: manifest.file_path(u_id), g_id: manifest.file_path(g_id)}
    )
    payload["provenance"] = prov
    dataio.write_json(out / "fit_report.json", payload)
    dataio.write_model(
        out / "model.json", report.model, meta={"provenance": prov}
    )
    resid_map = dict(report.stats.residuals.points)
    pred_map = dict(report.predicted.points)
    dataio.write_table_csv(
        out / "fit_plot.csv",
        ("year", "measured", "predicted", "residual"),
        ((y, v, pred_map[y], resid_map[y]) for y, v in report.measured.points),
    )

    stats = report.stats
    print(f"{manifest.country}: {len(report.model.segments)} segment(s)")
    for seg in report.model.segments:
        print(
            f"  [{seg.start_year}-{seg.end_year}] "
            f"b={seg.b:+.3f} a={seg.a:+.3f}"
        )
    print(
        f"  sigma={stats.residual_sigma:.3f}pp  R2={stats.r_squared:.3f}  "
        f"mean_u={stats.mean_u:.2f}pp  rms={report.rms:.3f}"
    )
    if excluded:
        print(
            f"  excluding {excluded}: sigma={adjusted.residual_sigma:.3f}pp  "
            f"R2={adjusted.r_squared:.3f}"
        )
    print(f"wrote {out / 'model.json'}, {out / 'fit_report.json'}, "
          f"{out / 'fit_plot.csv'}")
    return 0


def cmd_predict(args: argparse.Namespace) -> int:
    params = _Params(args, "predict")
    manifest = params.manifest
    out = _outdir(args)
    pmodel = dataio.read_model(args.model_file)

    # An explicit annual request (gdppc/horizon flags) wins over a
    # quarterly manifest default, and vice versa.
    quarterly_id = params.get_explicit("quarterly-gdppc")
    annual_requested = (
        params.get_explicit("gdppc") is not None
        or params.get_explicit("horizon") is not None
    )
    if quarterly_id is None and not annual_requested:
        quarterly_id = params.get("quarterly-gdppc")
    if quarterly_id:
        u_start = params.require("u-start")
        levels = manifest.load_quarterly(str(quarterly_id))
        qgrowth = quarterly_log_growth(levels)
        predicted = model_mod.predict_quarterly(pmodel, qgrowth, float(u_start))
        rows = [
            (period_label(y, q), g, u)
            for (y, q, g), (_, _, u) in zip(qgrowth.points, predicted.points)
        ]
        dataio.write_table_csv(
            out / "predict_quarterly.csv",
            ("period", "dlng", "predicted"),
            rows,
        )
        for period, g, u in rows:
            print(f"  {period}: dlnG={g:+.2f} -> u={u:.2f}")
        print(f"wrote {out / 'predict_quarterly.csv'}")
        return 0

    g_id = params.require("gdppc")
    growth = log_growth(manifest.load(str(g_id)))
    horizon = params.get("horizon")
    if horizon is not None:
        predicted = model_mod.predict_extended(pmodel, growth, int(horizon))
    else:
        predicted = model_mod.predict(pmodel, growth)
    dataio.write_table_csv(
        out / "predict.csv",
        ("year", "predicted"),
        predicted.points,
    )
    print(
        f"{pmodel.country}: predicted {predicted.first_year}.."
        f"{predicted.last_year} ({len(predicted)} years)"
    )
    print(f"wrote {out / 'predict.csv'}")
    return 0


def cmd_audit(args: argparse.Namespace) -> int:
    params = _Params(args, "audit")
    manifest = params.manifest
    out = _outdir(args)

    ids = params.get("series")
    if isinstance(ids, str):
        ids = [v for v in ids.replace(",", " ").split() if v]
    if not ids:
        ids = manifest.ids_for_variable(VariableKind.REAL_GDP_PC)
    if len(ids) < 2:
        raise ValidationError(
            f"audit needs at least two gdppc series, found {ids}"
        )
    ref_year = int(params.require("ref-year"))
    warn = float(params.get("warn-threshold", sources_mod.WARN_DIVERGENCE))
    alert = float(params.get("alert-threshold", sources_mod.ALERT_DIVERGENCE))
    loaded = [(sid, manifest.load(sid)) for sid in ids]
    comparison = sources_mod.compare(loaded, ref_year, warn, alert)

    growth_from = params.get("growth-from")
    growth_to = params.get("growth-to")
    factors = {}
    if growth_from is not None and growth_to is not None:
        for sid, s in loaded:
            factors[sid] = sources_mod.total_growth_factor(
                s, int(growth_from), int(growth_to)
            )

    report = {
        "country": manifest.country,
        "ref_year": ref_year,
        "pairs": [
            {
                "a": p.label_a,
                "b": p.label_b,
                "max_div": p.max_divergence,
                "year_of_max": p.year_of_max,
                "trend_slope": p.trend_slope,
                "trend_r2": p.trend_r2,
                "flag": p.flag,
            }
            for p in comparison.pairs
        ],
        "growth_factors": factors,
        "provenance": params.provenance(
            {sid: manifest.file_path(sid) for sid in ids}
        ),
    }
    dataio.write_json(out / "audit.json", report)

    all_years = sorted(
        set().union(*(s.years for _, s in comparison.normalized))
    )
    norm_maps = {sid: dict(s.points) for sid, s in comparison.normalized}
    ratio_maps = {
        f"{p.label_a}/{p.label_b}": dict(p.ratio.points) for p in comparison.pairs
    }
    header = (
        ["year"]
        + [f"norm_{sid}" for sid, _ in comparison.normalized]
        + [f"ratio_{k}" for k in ratio_maps]
    )
    rows = []
    for y in all_years:
        row: list[Any] = [y]
        for sid, _ in comparison.normalized:
            row.append(norm_maps[sid].get(y, ""))
        for k in ratio_maps:
            row.append(ratio_maps[k].get(y, ""))
        rows.append(row)
    dataio.write_table_csv(out / "audit_plot.csv", header, rows)

    print(f"{manifest.country}: audited {len(ids)} sources (ref {ref_year})")
    for p in comparison.pairs:
        print(
            f"  {p.label_a}/{p.label_b}: max |ratio-1|={p.max_divergence:.3f} "
            f"at {p.year_of_max}, trend {p.trend_slope:+.5f}/yr "
            f"(R2={p.trend_r2:.2f}) [{p.flag}]"
        )
    for sid, f in factors.items():
        print(f"  growth factor {sid}: {f:.3f}")
    print(f"wrote {out / 'audit.json'} and {out / 'audit_plot.csv'}")
    return 0


def cmd_synth(args: argparse.Namespace) -> int:
    params = _Params(args, "synth")
    manifest = params.manifest
    out = _outdir(args)
    pmodel = dataio.read_model(args.model_file)
    g_id = params.require("gdppc")
    noise = float(params.get("noise", 0.0))
    seed = int(params.get("seed", 0))
    growth = log_growth(manifest.load(str(g_id)))
    series = model_mod.synthesize(pmodel, growth, noise, seed)
    dataio.write_table_csv(out / "synth.csv", ("year", "value"), series.points)
    print(
        f"{pmodel.country}: synthesized {len(series)} years "
        f"(noise={noise}, seed={seed})"
    )
    print(f"wrote {out / 'synth.csv'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
