import json

import pytest

import okunlib as ok
from okunlib import dataio


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestSeriesCsv:
    def test_round_values_and_sorting(self, tmp_path):
        # Rows may arrive unsorted; years are ordered on load.
        path = write(tmp_path, "s.csv", "year,value\n2001,2.5\n2000,1.5\n")
        s = dataio.read_series_csv(
            path, "X", ok.VariableKind.REAL_GDP_PC, ok.Unit.CURRENCY_PER_CAPITA
        )
        assert s.points == ((2000, 1.5), (2001, 2.5))

    def test_wrong_header(self, tmp_path):
        path = write(tmp_path, "s.csv", "yr,val\n2000,1.5\n")
        with pytest.raises(ok.ValidationError, match="header"):
            dataio.read_series_csv(
                path, "X", ok.VariableKind.REAL_GDP_PC,
                ok.Unit.CURRENCY_PER_CAPITA,
            )

    def test_non_numeric_row_reports_line(self, tmp_path):
        path = write(tmp_path, "s.csv", "year,value\n2000,1.5\n2001,abc\n")
        with pytest.raises(ok.ValidationError, match=":3"):
            dataio.read_series_csv(
                path, "X", ok.VariableKind.REAL_GDP_PC,
                ok.Unit.CURRENCY_PER_CAPITA,
            )

    def test_empty_file(self, tmp_path):
        path = write(tmp_path, "s.csv", "")
        with pytest.raises(ok.ValidationError, match="empty"):
            dataio.read_series_csv(
                path, "X", ok.VariableKind.REAL_GDP_PC,
                ok.Unit.CURRENCY_PER_CAPITA,
            )

    def test_missing_file_is_io_error(self, tmp_path):
        with pytest.raises(ok.DataIOError):
            dataio.read_series_csv(
                tmp_path / "nope.csv", "X", ok.VariableKind.REAL_GDP_PC,
                ok.Unit.CURRENCY_PER_CAPITA,
            )


class TestQuarterlyCsv:
    def test_parse(self, tmp_path):
        path = write(
            tmp_path, "q.csv", "period,value\n2019Q4,100.0\n2020Q1,99.0\n"
        )
        q = dataio.read_quarterly_csv(path)
        assert q.points == ((2019, 4, 100.0), (2020, 1, 99.0))

    def test_bad_period(self, tmp_path):
        path = write(tmp_path, "q.csv", "period,value\n2020-01,1.0\n")
        with pytest.raises(ok.ValidationError):
            dataio.read_quarterly_csv(path)

    def test_quarter_out_of_range(self, tmp_path):
        path = write(tmp_path, "q.csv", "period,value\n2020Q5,1.0\n")
        with pytest.raises(ok.ValidationError, match="quarter"):
            dataio.read_quarterly_csv(path)


class TestManifest:
    def base(self):
        return {
            "country": "X",
            "series": [
                {"id": "u", "file": "u.csv",
                 "variable": "unemployment_rate",
                 "unit": "percent_points", "source": "S"}
            ],
            "defaults": {},
        }

    def write_manifest(self, tmp_path, payload):
        path = tmp_path / "manifest.json"
        path.write_text(json.dumps(payload))
        return path

    def test_unknown_variable_rejected(self, tmp_path):
        payload = self.base()
        payload["series"][0]["variable"] = "gdp_total"
        with pytest.raises(ok.ValidationError):
            dataio.load_manifest(self.write_manifest(tmp_path, payload))

    def test_duplicate_ids_rejected(self, tmp_path):
        payload = self.base()
        payload["series"].append(dict(payload["series"][0]))
        with pytest.raises(ok.ValidationError, match="duplicate"):
            dataio.load_manifest(self.write_manifest(tmp_path, payload))

    def test_missing_key_rejected(self, tmp_path):
        payload = self.base()
        del payload["series"][0]["file"]
        with pytest.raises(ok.ValidationError, match="file"):
            dataio.load_manifest(self.write_manifest(tmp_path, payload))

    def test_unknown_series_id_lists_available(self, tmp_path):
        path = self.write_manifest(tmp_path, self.base())
        manifest = dataio.load_manifest(path)
        with pytest.raises(ok.ValidationError, match="'u'"):
            manifest.entry("nope")

    def test_invalid_json(self, tmp_path):
        path = write(tmp_path, "manifest.json", "{not json")
        with pytest.raises(ok.ValidationError):
            dataio.load_manifest(path)

    def test_frequency_mismatch(self, tmp_path):
        write(tmp_path, "u.csv", "year,value\n2000,5.0\n")
        path = self.write_manifest(tmp_path, self.base())
        manifest = dataio.load_manifest(path)
        with pytest.raises(ok.ValidationError, match="quarterly"):
            manifest.load_quarterly("u")


class TestStableJson:
    def test_sorted_keys_and_trailing_newline(self, tmp_path):
        path = tmp_path / "x.json"
        dataio.write_json(path, {"b": 1, "a": {"d": 2, "c": 3}})
        text = path.read_text()
        assert text.endswith("\n")
        assert text.index('"a"') < text.index('"b"')
        assert text.index('"c"') < text.index('"d"')

    def test_config_hash_stable_under_key_order(self):
        h1 = dataio.sha256_of_config({"a": 1, "b": [2, 3]})
        h2 = dataio.sha256_of_config({"b": [2, 3], "a": 1})
        assert h1 == h2
