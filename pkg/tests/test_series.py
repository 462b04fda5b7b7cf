import datetime as dt
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from causalwavelet.errors import (
    EmptyFile,
    GapFractionExceeded,
    GappySeries,
    GapRunTooLong,
    InvalidParam,
    NonMonotoneDates,
    ParseError,
)
from causalwavelet.series import CsvConfig, TimeSeries, fill_gaps, gap_runs, load_csv, summary_stats

from conftest import make_series

D = dt.date(2015, 3, 1)


def write(tmp_path, text, name="s.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


# -- load_csv -----------------------------------------------------------------


def test_blank_value_becomes_gap(tmp_path):
    s = load_csv(write(tmp_path, "date,value\n2015-03-01,1\n2015-03-02,\n2015-03-03,3\n"))
    assert len(s) == 3 and s.start_date == D
    assert s.mask.tolist() == [True, False, True]
    assert s.values[0] == 1 and s.values[2] == 3


def test_absent_date_inserted_as_gap(tmp_path):
    s = load_csv(write(tmp_path, "date,value\n2015-03-01,1\n2015-03-03,3\n"))
    assert len(s) == 3
    assert s.mask.tolist() == [True, False, True]


def test_decreasing_dates_rejected(tmp_path):
    with pytest.raises(NonMonotoneDates):
        load_csv(write(tmp_path, "date,value\n2015-03-01,1\n2015-02-28,3\n"))


def test_repeated_date_rejected(tmp_path):
    with pytest.raises(NonMonotoneDates):
        load_csv(write(tmp_path, "date,value\n2015-03-01,1\n2015-03-01,3\n"))


@pytest.mark.parametrize("text", ["", "date,value\n", "date,value\n2015-03-01,1\n"])
def test_empty_file(tmp_path, text):
    with pytest.raises(EmptyFile):
        load_csv(write(tmp_path, text))


def test_sentinels_and_negatives(tmp_path):
    s = load_csv(write(tmp_path, "date,value\n2015-03-01,NA\n2015-03-02,-99\n2015-03-03,4\n2015-03-04,null\n"))
    assert s.mask.tolist() == [False, False, True, False]


def test_negative_kept_when_allowed(tmp_path):
    s = load_csv(write(tmp_path, "date,value\n2015-03-01,-2\n2015-03-02,4\n"), CsvConfig(negative_is_missing=False))
    assert s.values.tolist() == [-2.0, 4.0]


def test_bad_value_reports_row(tmp_path):
    with pytest.raises(ParseError) as info:
        load_csv(write(tmp_path, "date,value\n2015-03-01,1\n2015-03-02,abc\n"))
    assert info.value.row == 3


def test_bad_date_reports_row(tmp_path):
    with pytest.raises(ParseError) as info:
        load_csv(write(tmp_path, "date,value\n2015-03-01,1\n2015-13-02,2\n"))
    assert info.value.row == 3


def test_missing_column(tmp_path):
    with pytest.raises(ParseError):
        load_csv(write(tmp_path, "day,o3\n2015-03-01,1\n2015-03-02,2\n"))


def test_custom_columns_delimiter_and_format(tmp_path):
    cfg = CsvConfig(date_column="day", value_column="o3", delimiter=";", date_format="%d/%m/%Y", sentinels=("-",))
    s = load_csv(write(tmp_path, "station;day;o3\nA;01/03/2015;7\nA;02/03/2015;-\nA;03/03/2015;9\n"), cfg)
    assert s.start_date == D
    assert s.mask.tolist() == [True, False, True]


def test_dates_and_index():
    s = make_series([1, 2, 3], start=D)
    assert s.dates() == [D, D + dt.timedelta(1), D + dt.timedelta(2)]
    assert s.index_of(D + dt.timedelta(2)) == 2


def test_series_invariants():
    with pytest.raises(InvalidParam):
        make_series([1.0])
    with pytest.raises(InvalidParam):
        TimeSeries(np.zeros(3), np.ones(2, bool), D)
    s = make_series([1.0, 2.0])
    with pytest.raises(ValueError):
        s.values[0] = 5


# -- gaps ---------------------------------------------------------------------


def test_gap_runs():
    assert gap_runs([True, False, False, True, False]) == [(1, 2), (4, 1)]
    assert gap_runs([True, True]) == []


def test_fill_midpoint():
    out = fill_gaps(make_series([1, np.nan, 3]), max_fraction=1.0)
    assert out.values.tolist() == [1, 2, 3]
    assert out.is_gap_free


def test_fill_leading_and_trailing():
    assert fill_gaps(make_series([np.nan, 5, 5]), max_fraction=1.0).values.tolist() == [5, 5, 5]
    assert fill_gaps(make_series([2, 4, np.nan, np.nan]), max_fraction=1.0).values.tolist() == [2, 4, 4, 4]


def test_thirteen_run_rejected():
    x = np.ones(5000)
    x[100:113] = np.nan
    with pytest.raises(GapRunTooLong) as info:
        fill_gaps(make_series(x))
    assert (info.value.position, info.value.run_length) == (100, 13)


def test_twelve_run_filled_under_default_bounds():
    x = np.linspace(0, 1, 4899)
    x[2000:2012] = np.nan
    out = fill_gaps(make_series(x))
    np.testing.assert_allclose(out.values, np.linspace(0, 1, 4899), atol=1e-12)


def test_fraction_bound():
    x = np.ones(1000)
    x[::100] = np.nan  # 1% missing
    with pytest.raises(GapFractionExceeded):
        fill_gaps(make_series(x))
    assert fill_gaps(make_series(x), max_fraction=0.01).is_gap_free


def finite_with_gaps():
    cell = st.one_of(st.floats(-1e6, 1e6, allow_nan=False), st.just(math.nan))
    return st.lists(cell, min_size=2, max_size=60).filter(lambda v: any(not math.isnan(a) for a in v))


@settings(max_examples=80)
@given(values=finite_with_gaps())
def test_fill_idempotent_and_preserves_observed(values):
    s = make_series(values)
    once = fill_gaps(s, max_run=100, max_fraction=1.0)
    twice = fill_gaps(once, max_run=100, max_fraction=1.0)
    assert np.array_equal(once.values, twice.values)
    assert np.array_equal(once.values[s.mask], s.values[s.mask])
    assert once.is_gap_free and not np.isnan(once.values).any()


# -- stats --------------------------------------------------------------------


def test_stats_simple():
    st_ = summary_stats(make_series([1, 2, 3]))
    assert st_.mean == 2 and st_.skewness == 0 and st_.n == 3
    assert st_.std == pytest.approx(math.sqrt(2 / 3))


def test_stats_skewed():
    # brute-force moments: m2 = 3/16, m3 = 3/32
    x = [0, 0, 0, 1]
    m = sum(x) / 4
    m2 = sum((a - m) ** 2 for a in x) / 4
    m3 = sum((a - m) ** 3 for a in x) / 4
    m4 = sum((a - m) ** 4 for a in x) / 4
    st_ = summary_stats(make_series(x))
    assert st_.skewness == pytest.approx(m3 / m2**1.5, abs=1e-12)
    assert st_.skewness == pytest.approx(1.1547005383792515, abs=1e-12)
    assert st_.excess_kurtosis == pytest.approx(m4 / m2**2 - 3, abs=1e-12)


def test_constant_series_is_degenerate():
    st_ = summary_stats(make_series([4.0] * 10))
    assert st_.degenerate and st_.std == 0
    assert st_.as_dict()["skewness"] == "undefined"


def test_stats_need_gap_free():
    with pytest.raises(GappySeries):
        summary_stats(make_series([1, np.nan, 3]))


@settings(max_examples=60)
@given(
    values=st.lists(st.floats(-100, 100, allow_nan=False), min_size=3, max_size=50),
    c=st.floats(-50, 50),
    k=st.floats(0.1, 10),
)
def test_translation_and_scaling(values, c, k):
    x = np.array(values)
    base = summary_stats(make_series(x))
    if base.degenerate or base.std < 1e-3:
        return
    shifted = summary_stats(make_series(x + c))
    scaled = summary_stats(make_series(x * k))
    assert shifted.mean == pytest.approx(base.mean + c, abs=1e-10 * (1 + abs(c)))
    assert shifted.std == pytest.approx(base.std, rel=1e-10, abs=1e-10)
    assert scaled.std == pytest.approx(base.std * k, rel=1e-10)
    for other in (shifted, scaled):
        assert other.skewness == pytest.approx(base.skewness, abs=1e-10 * (1 + abs(c)))
        assert other.excess_kurtosis == pytest.approx(base.excess_kurtosis, abs=1e-10 * (1 + abs(c)))
