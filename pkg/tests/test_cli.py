import json

import pytest

import okunlib as ok
from okunlib import dataio
from okunlib.cli import main


def run(args):
    return main([str(a) for a in args])


def read_bytes_map(directory):
    return {
        p.name: p.read_bytes() for p in sorted(directory.iterdir()) if p.is_file()
    }


@pytest.fixture()
def broken_manifest(tmp_path):
    def make(csv_text, variable="unemployment_rate", unit="percent_points"):
        (tmp_path / "series.csv").write_text(csv_text)
        manifest = {
            "country": "Testland",
            "series": [
                {
                    "id": "s1",
                    "file": "series.csv",
                    "variable": variable,
                    "unit": unit,
                    "source": "TEST",
                }
            ],
            "defaults": {},
        }
        path = tmp_path / "manifest.json"
        path.write_text(json.dumps(manifest))
        return path

    return make


class TestValidate:
    def test_bundled_us_ok(self, capsys):
        assert run(["validate", "--country", "us"]) == 0
        out = capsys.readouterr().out
        assert "u_bls" in out and "1951..2019" in out

    def test_duplicate_year_fails(self, broken_manifest, capsys):
        path = broken_manifest("year,value\n2000,5.0\n2000,6.0\n")
        assert run(["validate", "--manifest", path]) == 2
        assert "duplicate year 2000" in capsys.readouterr().out

    def test_unemployment_out_of_range_named(self, broken_manifest, capsys):
        path = broken_manifest("year,value\n2000,5.0\n2001,105.0\n")
        assert run(["validate", "--manifest", path]) == 2
        out = capsys.readouterr().out
        assert "105" in out and "unemployment" in out

    def test_missing_file_is_io_error(self, tmp_path):
        assert run(["validate", "--manifest", tmp_path / "nope.json"]) == 4


class TestFit:
    def test_us_fixed_breaks_writes_artifacts(self, tmp_path, capsys):
        out = tmp_path / "run"
        assert run(["fit", "--country", "us", "--output-dir", out]) == 0
        printed = capsys.readouterr().out
        assert "b=-0.4" in printed  # coefficients printed to 3 decimals
        report = dataio.read_json(out / "fit_report.json")
        assert report["breaks"] == [1979, 2010]
        assert len(report["model"]["segments"]) == 3
        assert report["stats"]["r_squared"] >= 0.85
        assert (out / "model.json").exists()
        plot = (out / "fit_plot.csv").read_text().splitlines()
        assert plot[0] == "year,measured,predicted,residual"
        assert len(plot) == 1 + 69

    def test_reruns_byte_identical(self, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        for out in (out1, out2):
            assert run(["fit", "--country", "us", "--output-dir", out]) == 0
        assert read_bytes_map(out1) == read_bytes_map(out2)

    def test_france_search_via_manifest_defaults(self, tmp_path):
        out = tmp_path / "fr"
        assert run(["fit", "--country", "france", "--output-dir", out]) == 0
        report = dataio.read_json(out / "fit_report.json")
        b1, b2 = report["breaks"]
        assert abs(b1 - 1985) <= 2 and abs(b2 - 2000) <= 2

    def test_us_search_restricted_to_candidates(self, tmp_path):
        out = tmp_path / "us"
        assert run(
            ["fit", "--country", "us", "--output-dir", out,
             "--n-breaks", "2", "--candidates", "1979,2010"]
        ) == 0
        report = dataio.read_json(out / "fit_report.json")
        b1, b2 = report["breaks"]
        assert abs(b1 - 1979) <= 3 and abs(b2 - 2010) <= 3
        assert len(report["model"]["segments"]) == 3
        assert report["stats"]["r_squared"] >= 0.85

    def test_exclude_years_reported(self, tmp_path):
        out = tmp_path / "de"
        assert run(
            ["fit", "--country", "germany", "--output-dir", out,
             "--exclude-years", "1991"]
        ) == 0
        report = dataio.read_json(out / "fit_report.json")
        exc = report["stats_excluding"]
        assert exc["years"] == [1991]
        assert exc["residual_sigma"] < report["stats"]["residual_sigma"]
        assert exc["r_squared"] > report["stats"]["r_squared"]

    def test_config_file_overrides_manifest(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"breaks": "1979 2010", "anchor-mode": "chained"}))
        out = tmp_path / "run"
        assert run(
            ["fit", "--country", "us", "--output-dir", out, "--config", cfg]
        ) == 0
        report = dataio.read_json(out / "fit_report.json")
        assert report["breaks"] == [1979, 2010]

    def test_infeasible_search_exits_3(self, tmp_path):
        assert run(
            ["fit", "--country", "us", "--output-dir", tmp_path / "x",
             "--n-breaks", "20"]
        ) == 3

    def test_breaks_and_n_breaks_conflict(self, tmp_path):
        assert run(
            ["fit", "--country", "us", "--output-dir", tmp_path / "x",
             "--breaks", "1979", "--n-breaks", "1"]
        ) == 2


class TestDetect:
    def test_uk_bridge_report(self, tmp_path):
        out = tmp_path / "uk"
        assert run(["detect", "--country", "uk", "--output-dir", out]) == 0
        report = dataio.read_json(out / "break_report.json")
        segs = report["bridge"]["segments"]
        assert segs[0]["scale"] == pytest.approx(0.926, abs=0.02)
        assert segs[1]["scale"] == pytest.approx(0.974, abs=0.02)
        assert report["bridge"]["dummies"][0]["year"] == 1994
        assert report["bridge"]["dummies"][0]["offset"] == pytest.approx(
            -0.049, abs=0.02
        )
        plot = (out / "detect_plot.csv").read_text().splitlines()
        assert plot[0] == "year,cpi_cum,dgdp_cum,diff,fitted_diff"

    def test_austria_candidates(self, tmp_path):
        out = tmp_path / "at"
        assert run(["detect", "--country", "austria", "--output-dir", out]) == 0
        report = dataio.read_json(out / "break_report.json")
        years = [c["year"] for c in report["candidates"]]
        assert len(years) == 3
        for target in (1982, 1996, 2007):
            assert min(abs(y - target) for y in years) <= 2
        for cand in report["candidates"]:
            assert cand["score"] >= 0.0

    def test_us_scale_chain_in_report(self, tmp_path):
        out = tmp_path / "us"
        assert run(["detect", "--country", "us", "--output-dir", out]) == 0
        report = dataio.read_json(out / "break_report.json")
        chain = report["bridge"]["scale_chain"]
        assert chain[0] == 1.0
        assert 1.15 <= chain[1] <= 1.30

    def test_germany_has_no_detect_defaults(self, tmp_path):
        assert run(
            ["detect", "--country", "germany", "--output-dir", tmp_path / "de"]
        ) == 2

    def test_auto_dummy_screening_flag(self, tmp_path):
        out = tmp_path / "uk"
        assert run(
            ["detect", "--country", "uk", "--output-dir", out,
             "--auto-dummies", "--dummy-threshold", "3.0",
             "--dummy-years", ""]
        ) == 0
        report = dataio.read_json(out / "break_report.json")
        assert [d["year"] for d in report["bridge"]["dummies"]] == [1994]

    def test_compound_inflation_flag_changes_curves(self, tmp_path):
        arith, geom = tmp_path / "a", tmp_path / "g"
        assert run(["detect", "--country", "us", "--output-dir", arith]) == 0
        assert run(
            ["detect", "--country", "us", "--output-dir", geom,
             "--compound-inflation"]
        ) == 0
        a = (arith / "detect_plot.csv").read_text().splitlines()
        g = (geom / "detect_plot.csv").read_text().splitlines()
        a_final = float(a[-1].split(",")[1])
        g_final = float(g[-1].split(",")[1])
        assert g_final > a_final  # compounding exceeds the arithmetic sum


class TestAuditPredictSynth:
    def test_germany_audit(self, tmp_path):
        out = tmp_path / "de"
        assert run(["audit", "--country", "germany", "--output-dir", out]) == 0
        report = dataio.read_json(out / "audit.json")
        f = report["growth_factors"]
        assert f["gdppc_mpd"] > f["gdppc_oecd"] > f["gdppc_ted"]
        assert report["ref_year"] == 1970
        plot = (out / "audit_plot.csv").read_text().splitlines()
        assert plot[0].startswith("year,norm_")

    def test_us_audit_flags_alert(self, tmp_path):
        out = tmp_path / "us"
        assert run(["audit", "--country", "us", "--output-dir", out]) == 0
        report = dataio.read_json(out / "audit.json")
        pair = next(
            p for p in report["pairs"]
            if {p["a"], p["b"]} == {"gdppc_mpd", "gdppc_ted"}
        )
        assert pair["max_div"] >= 0.10
        assert pair["flag"] == "alert"

    def test_quarterly_predict(self, tmp_path):
        fit_out = tmp_path / "fit"
        assert run(["fit", "--country", "us", "--output-dir", fit_out]) == 0
        out = tmp_path / "q"
        assert run(
            ["predict", "--country", "us", "--output-dir", out,
             "--model-file", fit_out / "model.json"]
        ) == 0
        rows = (out / "predict_quarterly.csv").read_text().splitlines()
        assert rows[0] == "period,dlng,predicted"
        assert rows[1].startswith("2020Q1,")
        q2 = float(rows[2].split(",")[2])
        assert q2 == pytest.approx(12.9, abs=1.2)

    def test_annual_predict(self, tmp_path):
        fit_out = tmp_path / "fit"
        assert run(["fit", "--country", "uk", "--output-dir", fit_out]) == 0
        out = tmp_path / "p"
        assert run(
            ["predict", "--country", "uk", "--output-dir", out,
             "--model-file", fit_out / "model.json", "--gdppc", "gdppc_mpd"]
        ) == 0
        rows = (out / "predict.csv").read_text().splitlines()
        assert rows[0] == "year,predicted"
        assert rows[1].startswith("1961,")

    def test_annual_predict_with_horizon(self, tmp_path):
        model = ok.PiecewiseOkun(
            "US",
            (ok.SegmentSpec(1990, 2010, b=-0.3, a=0.2),),
            ((1990, 5.5),),
        )
        model_path = tmp_path / "model.json"
        dataio.write_model(model_path, model)
        out = tmp_path / "p"
        assert run(
            ["predict", "--country", "us", "--output-dir", out,
             "--model-file", model_path, "--gdppc", "gdppc_bea",
             "--horizon", "2019"]
        ) == 0
        rows = (out / "predict.csv").read_text().splitlines()
        assert rows[1].startswith("1990,")
        assert rows[-1].startswith("2019,")
        assert len(rows) == 1 + (2019 - 1990 + 1)

    def test_synth_then_fit_round_trip(self, tmp_path):
        fit_out = tmp_path / "fit"
        assert run(["fit", "--country", "australia", "--output-dir", fit_out]) == 0
        synth_out = tmp_path / "synth"
        assert run(
            ["synth", "--country", "australia", "--output-dir", synth_out,
             "--model-file", fit_out / "model.json", "--noise", "0"]
        ) == 0

        # Re-ingest the synthetic series and refit: coefficients must match.
        manifest = {
            "country": "Australia",
            "series": [
                {"id": "u", "file": "synth.csv",
                 "variable": "unemployment_rate", "unit": "percent_points",
                 "source": "synthetic"},
                {"id": "g", "file": "gdppc_mpd.csv",
                 "variable": "real_gdp_pc", "unit": "currency_per_capita",
                 "source": "MPD"},
            ],
            "defaults": {},
        }
        from okunlib.bundled import bundled_manifest_path

        gdp_src = bundled_manifest_path("australia").parent / "gdppc_mpd.csv"
        (synth_out / "gdppc_mpd.csv").write_bytes(gdp_src.read_bytes())
        (synth_out / "manifest.json").write_text(json.dumps(manifest))

        refit_out = tmp_path / "refit"
        assert run(
            ["fit", "--manifest", synth_out / "manifest.json",
             "--output-dir", refit_out,
             "--unemployment", "u", "--gdppc", "g",
             "--breaks", "1992,2006,2013"]
        ) == 0
        original = dataio.read_model(fit_out / "model.json")
        recovered = dataio.read_model(refit_out / "model.json")
        for a, b in zip(original.segments, recovered.segments):
            assert b.b == pytest.approx(a.b, abs=1e-6)
            assert b.a == pytest.approx(a.a, abs=1e-6)

    def test_synth_deterministic_across_runs(self, tmp_path):
        fit_out = tmp_path / "fit"
        assert run(["fit", "--country", "us", "--output-dir", fit_out]) == 0
        outs = []
        for name in ("s1", "s2"):
            out = tmp_path / name
            assert run(
                ["synth", "--country", "us", "--output-dir", out,
                 "--model-file", fit_out / "model.json",
                 "--noise", "0.4", "--seed", "11"]
            ) == 0
            outs.append((out / "synth.csv").read_bytes())
        assert outs[0] == outs[1]


class TestModelFileFormat:
    def test_round_trip(self, tmp_path):
        model = ok.PiecewiseOkun(
            "US",
            (ok.SegmentSpec(2011, 2019, b=-0.26, a=-0.25),),
            ((2011, 8.9),),
        )
        path = tmp_path / "model.json"
        dataio.write_model(path, model, meta={"note": "x"})
        loaded = dataio.read_model(path)
        assert loaded == model

    def test_bad_structure_rejected(self, tmp_path):
        path = tmp_path / "model.json"
        path.write_text('{"segments": []}')
        with pytest.raises(ok.ValidationError):
            dataio.read_model(path)

    def test_provenance_embedded(self, tmp_path):
        out = tmp_path / "run"
        assert run(["fit", "--country", "us", "--output-dir", out]) == 0
        report = dataio.read_json(out / "fit_report.json")
        prov = report["provenance"]
        assert prov["country"] == "US"
        assert len(prov["config_sha256"]) == 64
        assert set(prov["inputs"]) == {"u_bls", "gdppc_bea"}
        for digest in prov["inputs"].values():
            assert len(digest) == 64
