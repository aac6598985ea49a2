import pytest

import okunlib as ok
from okunlib.bundled import bundled_manifest


def gdp(pairs, source=""):
    return ok.from_pairs(
        pairs,
        variable=ok.VariableKind.REAL_GDP_PC,
        unit=ok.Unit.CURRENCY_PER_CAPITA,
        source=source,
    )


class TestCompare:
    def test_same_series_twice(self):
        s = gdp([(1970 + i, 100.0 * 1.02**i) for i in range(30)], source="A")
        cmp_ = ok.compare([("A", s), ("B", s)], ref_year=1970)
        pair = cmp_.pairs[0]
        assert all(v == pytest.approx(1.0) for v in pair.ratio.values)
        assert pair.trend_slope == pytest.approx(0.0, abs=1e-15)
        assert pair.max_divergence == pytest.approx(0.0, abs=1e-15)
        assert pair.flag == "ok"

    def test_missing_ref_year_names_series(self):
        a = gdp([(1970, 1.0), (1971, 1.1)], source="A")
        b = gdp([(1971, 1.0), (1972, 1.1)], source="B")
        with pytest.raises(ok.MissingYearError, match="B"):
            ok.compare([a, b], ref_year=1970)

    def test_needs_two_series(self):
        a = gdp([(1970, 1.0), (1971, 1.1)], source="A")
        with pytest.raises(ok.DomainError):
            ok.compare([a], ref_year=1970)

    def test_bundled_us_mpd_ted_divergence(self):
        m = bundled_manifest("us")
        cmp_ = ok.compare([m.load("gdppc_mpd"), m.load("gdppc_ted")], 1970)
        pair = cmp_.pairs[0]
        assert pair.max_divergence >= 0.10
        assert pair.trend_r2 >= 0.8
        assert pair.flag == "alert"
        assert pair.trend_slope < 0.0  # MPD falls against TED over time

    def test_bundled_france_oecd_mpd_ratio_path(self):
        m = bundled_manifest("france")
        cmp_ = ok.compare([m.load("gdppc_oecd"), m.load("gdppc_mpd")], 1950)
        ratio = dict(cmp_.pairs[0].ratio.points)
        assert ratio[1991] == pytest.approx(1.082, abs=0.01)
        assert ratio[2014] == pytest.approx(1.064, abs=0.01)
        assert ratio[1991] > ratio[2014]

    def test_ratio_antisymmetry(self):
        m = bundled_manifest("germany")
        series = [m.load("gdppc_mpd"), m.load("gdppc_oecd")]
        fwd = ok.compare(series, 1970).pairs[0].ratio
        rev = ok.compare(series[::-1], 1970).pairs[0].ratio
        for (y1, v1), (y2, v2) in zip(fwd.points, rev.points):
            assert y1 == y2
            assert v1 * v2 == pytest.approx(1.0, abs=1e-12)

    def test_max_divergence_invariant_to_ref_year_up_to_constant(self):
        m = bundled_manifest("germany")
        series = [m.load("gdppc_mpd"), m.load("gdppc_ted")]
        r70 = dict(ok.compare(series, 1970).pairs[0].ratio.points)
        r90 = dict(ok.compare(series, 1990).pairs[0].ratio.points)
        scale = r70[1990]  # re-referencing rescales the ratio curve
        for year, v in r90.items():
            assert v * scale == pytest.approx(r70[year], rel=1e-9)


class TestTotalGrowthFactor:
    def test_same_year_is_one(self):
        s = gdp([(1970, 123.0), (1971, 130.0)])
        assert ok.total_growth_factor(s, 1970, 1970) == 1.0

    def test_bundled_germany_source_ordering(self):
        m = bundled_manifest("germany")
        f_mpd = ok.total_growth_factor(m.load("gdppc_mpd"), 1970, 2018)
        f_oecd = ok.total_growth_factor(m.load("gdppc_oecd"), 1970, 2018)
        f_ted = ok.total_growth_factor(m.load("gdppc_ted"), 1970, 2018)
        assert f_mpd == pytest.approx(2.67, abs=0.15)
        assert f_oecd == pytest.approx(2.41, abs=0.15)
        assert f_ted == pytest.approx(2.09, abs=0.15)
        assert f_mpd > f_oecd > f_ted

    def test_bundled_france_factors(self):
        m = bundled_manifest("france")
        assert ok.total_growth_factor(
            m.load("gdppc_oecd"), 1950, 2018
        ) == pytest.approx(4.93, abs=0.15)
        assert ok.total_growth_factor(
            m.load("gdppc_mpd"), 1950, 2018
        ) == pytest.approx(4.66, abs=0.15)
        assert ok.total_growth_factor(
            m.load("gdppc_ted"), 1950, 2018
        ) == pytest.approx(4.69, abs=0.15)

    def test_invariant_under_normalization(self):
        m = bundled_manifest("france")
        s = m.load("gdppc_mpd")
        raw = ok.total_growth_factor(s, 1960, 2000)
        for ref in (1950, 1980, 2018):
            assert ok.total_growth_factor(
                ok.normalize(s, ref), 1960, 2000
            ) == pytest.approx(raw, rel=1e-12)

    def test_missing_year(self):
        s = gdp([(1970, 123.0)])
        with pytest.raises(ok.MissingYearError):
            ok.total_growth_factor(s, 1970, 2018)
