import io
from datetime import date

import numpy as np
import pytest

from pairedcvm.datasets import fixture_path, monthly_dates
from pairedcvm.exceptions import ConfigError, GridMismatchError, IngestError
from pairedcvm.ingest import (IncrementCurves, SegmentationConfig, TimeSeries, check_regular,
                              pair_curves, pair_series, parse_series_csv, read_series_csv,
                              segment_windows, to_curves, write_curves_csv)
from pairedcvm.resampling import ResamplingConfig, run_test


def monthly(values):
    return TimeSeries(tuple(monthly_dates(len(values))), np.asarray(values, dtype=float))


def test_constant_series_gives_zero_curves():
    curves = to_curves(monthly(np.full(61, 100.0)), SegmentationConfig(5, 12))
    assert len(curves) == 5
    assert all(np.all(c.values == 0.0) for c in curves)


def test_exponential_series_gives_lines():
    m = 12
    series = monthly(np.exp(np.arange(5 * m + 1.0)))
    for grid_points in (None, 13, 241):
        cfg = SegmentationConfig(5, m, grid_points=grid_points)
        for curve in to_curves(series, cfg):
            np.testing.assert_allclose(curve.values, m * curve.grid.points, atol=1e-9)


def test_increments_mode_and_window_sharing():
    values = np.array([1.0, 3.0, 2.0, 5.0, 4.0])
    curves = to_curves(monthly(values), SegmentationConfig(2, 2, mode="increments", grid_points=3))
    np.testing.assert_array_equal(curves[0].values, [0.0, 2.0, 1.0])
    np.testing.assert_array_equal(curves[1].values, [0.0, 3.0, 2.0])


def test_curves_start_at_zero():
    rng = np.random.default_rng(0)
    series = monthly(np.exp(rng.standard_normal(121).cumsum() * 0.05))
    for c in to_curves(series, SegmentationConfig(10, 12)):
        assert c.values[0] == 0.0


def test_round_trip_reconstructs_log_levels():
    rng = np.random.default_rng(1)
    m, n = 12, 6
    values = np.exp(rng.standard_normal(n * m + 1).cumsum() * 0.04)
    logs = np.log(values)
    for q in (1, 4):
        cfg = SegmentationConfig(n, m, grid_points=q * m + 1)
        curves = to_curves(monthly(values), cfg)
        level = logs[0]
        for j, c in enumerate(curves):
            rebuilt = level + c.values
            np.testing.assert_allclose(rebuilt[::q], logs[j * m:(j + 1) * m + 1], atol=1e-12, rtol=0)
            level = rebuilt[-1]


def test_nonpositive_value_rejected_in_log_mode():
    values = np.full(25, 10.0)
    values[7] = 0.0
    with pytest.raises(IngestError, match="positive"):
        to_curves(monthly(values), SegmentationConfig(2, 12))
    to_curves(monthly(values), SegmentationConfig(2, 12, mode="increments"))


def test_insufficient_length():
    with pytest.raises(IngestError, match="need 25"):
        to_curves(monthly(np.ones(24)), SegmentationConfig(2, 12))


def test_missing_month_rejected():
    dates = monthly_dates(30)
    del dates[10]
    series = TimeSeries(tuple(dates), np.ones(29))
    with pytest.raises(IngestError, match="missing"):
        to_curves(series, SegmentationConfig(2, 12))


def test_regular_daily_series_accepted():
    dates = tuple(date.fromordinal(date(2020, 1, 1).toordinal() + k) for k in range(40))
    check_regular(TimeSeries(dates, np.ones(40)))


def test_timeseries_validation():
    with pytest.raises(IngestError):
        TimeSeries((date(2020, 2, 1), date(2020, 1, 1)), np.ones(2))
    with pytest.raises(IngestError):
        TimeSeries((date(2020, 1, 1),), np.ones(2))


def test_segmentation_config_validation():
    with pytest.raises(ConfigError):
        SegmentationConfig(0, 12)
    with pytest.raises(ConfigError):
        SegmentationConfig(2, 12, mode="levels")


def test_pair_curves():
    series = monthly(np.exp(np.random.default_rng(2).standard_normal(241).cumsum() * 0.03))
    curves = to_curves(series, SegmentationConfig(20, 12))
    sample = pair_curves(curves, curves)
    assert sample.n == 20
    result = run_test(sample, ResamplingConfig(replicates=99, direction_count=50))
    assert result.p_perm == 1.0 and result.p_boot == 1.0
    with pytest.raises(GridMismatchError):
        pair_curves(curves, curves[:-1])
    other = to_curves(series, SegmentationConfig(20, 12, grid_points=13))
    with pytest.raises(GridMismatchError):
        pair_curves(curves, other)


def test_pair_series_calendar_alignment():
    a = monthly(np.ones(25))
    shifted = TimeSeries(tuple(monthly_dates(25, start=date(1999, 2, 1))), np.ones(25))
    cfg = SegmentationConfig(2, 12)
    assert pair_series(a, a, cfg).n == 2
    assert segment_windows(a, cfg)[1] == (date(2000, 1, 1), date(2001, 1, 1))
    with pytest.raises(IngestError, match="calendar mismatch in window 1"):
        pair_series(a, shifted, cfg)


def test_csv_parsing():
    s = parse_series_csv("date,value\n2000-01-01,1.5\n2000-02-01,2\n\n")
    assert s.timestamps == (date(2000, 1, 1), date(2000, 2, 1))
    np.testing.assert_array_equal(s.values, [1.5, 2.0])
    for bad, frag in [("day,value\n", "header"), ("date,value\n2000-13-01,1\n", ":2"),
                      ("date,value\n2000-01-01,abc\n", ":2"), ("date,value\n", "no observations"),
                      ("date,value\n2000-01-01,1,2\n", "2 columns")]:
        with pytest.raises(IngestError, match=frag):
            parse_series_csv(bad)


def test_read_missing_file(tmp_path):
    with pytest.raises(IngestError, match="cannot read"):
        read_series_csv(tmp_path / "nope.csv")


def test_bundled_fixtures():
    for name in ("null_index_a", "null_index_b", "constant", "exponential"):
        s = read_series_csv(fixture_path(name))
        assert len(s) == 241
        check_regular(s)


def test_curve_dump_format():
    curves = to_curves(monthly(np.full(5, 2.0)), SegmentationConfig(2, 2, grid_points=3))
    buf = io.StringIO()
    write_curves_csv(curves, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "segment,t,value"
    assert lines[1:4] == ["1,0.0,0.0", "1,0.5,0.0", "1,1.0,0.0"]
    assert len(lines) == 7


def test_increment_curves_transformer():
    values = np.exp(np.arange(25.0))
    tr = IncrementCurves(segments=2, points_per_segment=12, grid_points=13)
    out = tr.fit_transform(values)
    assert out.shape == (2, 13)
    np.testing.assert_allclose(out[1], np.arange(13.0), atol=1e-9)
    assert tr.get_params()["mode"] == "log_returns"
