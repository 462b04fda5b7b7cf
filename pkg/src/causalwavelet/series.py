"""Daily time series: CSV ingestion, gap filling, summary moments."""

from __future__ import annotations

import csv
import datetime as dt
import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import (
    EmptyFile,
    GapFractionExceeded,
    GappySeries,
    GapRunTooLong,
    InvalidParam,
    NonMonotoneDates,
    ParseError,
)

__all__ = [
    "TimeSeries",
    "SummaryStats",
    "CsvConfig",
    "load_csv",
    "fill_gaps",
    "gap_runs",
    "summary_stats",
]

ONE_DAY = dt.timedelta(days=1)


def _frozen(a, dtype):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Uniform daily series; ``mask`` is True where a value was observed."""

    values: np.ndarray
    mask: np.ndarray
    start_date: dt.date

    def __post_init__(self):
        values = _frozen(self.values, float)
        mask = _frozen(self.mask, bool)
        if values.ndim != 1 or values.shape != mask.shape:
            raise InvalidParam("values and mask must be 1-D arrays of equal length")
        if values.size < 2:
            raise InvalidParam(f"a series needs at least 2 samples, got {values.size}")
        if np.any(np.isnan(values[mask])):
            raise InvalidParam("observed samples must not be NaN")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "mask", mask)

    @classmethod
    def from_values(cls, values, start_date=dt.date(2000, 1, 1)):
        """Series with NaN entries treated as gaps."""
        values = np.asarray(values, dtype=float)
        return cls(values, ~np.isnan(values), start_date)

    def __len__(self):
        return self.values.size

    @property
    def is_gap_free(self) -> bool:
        return bool(self.mask.all())

    def date_at(self, index: int) -> dt.date:
        return self.start_date + int(index) * ONE_DAY

    def dates(self) -> list[dt.date]:
        return [self.date_at(i) for i in range(len(self))]

    def index_of(self, date: dt.date) -> int:
        return (date - self.start_date).days


@dataclass(frozen=True)
class SummaryStats:
    mean: float
    std: float
    skewness: float | None
    excess_kurtosis: float | None
    n: int

    @property
    def degenerate(self) -> bool:
        return self.skewness is None

    def as_dict(self):
        return {
            "n": self.n,
            "mean": self.mean,
            "std": self.std,
            "skewness": "undefined" if self.skewness is None else self.skewness,
            "excess_kurtosis": "undefined" if self.excess_kurtosis is None else self.excess_kurtosis,
        }


@dataclass(frozen=True)
class CsvConfig:
    date_column: str = "date"
    value_column: str = "value"
    delimiter: str = ","
    date_format: str | None = None  # None means ISO-8601
    sentinels: tuple[str, ...] = ("NA", "N/A", "NaN", "nan", "null")
    negative_is_missing: bool = True


def _parse_date(text, fmt):
    if fmt is None:
        return dt.date.fromisoformat(text[:10])
    return dt.datetime.strptime(text, fmt).date()


def load_csv(path, config: CsvConfig = CsvConfig()) -> TimeSeries:
    """Read a daily series from a delimited file.

    Blank, sentinel and (optionally) negative values become gaps, as do
    calendar days absent from the file. Dates must strictly increase.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8-sig") as fh:
        reader = csv.reader(fh, delimiter=config.delimiter)
        header = next(reader, None)
        if header is None or not any(cell.strip() for cell in header):
            raise EmptyFile(f"{path}: file is empty")
        header = [h.strip() for h in header]
        for col in (config.date_column, config.value_column):
            if col not in header:
                raise ParseError(1, f"column {col!r} not found in header {header}")
        di = header.index(config.date_column)
        vi = header.index(config.value_column)
        sentinels = {s.strip() for s in config.sentinels}

        rows = []
        for line_no, row in enumerate(reader, start=2):
            if not row or not any(cell.strip() for cell in row):
                continue
            if len(row) <= max(di, vi):
                raise ParseError(line_no, f"expected at least {max(di, vi) + 1} fields, got {len(row)}")
            try:
                date = _parse_date(row[di].strip(), config.date_format)
            except ValueError as exc:
                raise ParseError(line_no, f"bad date {row[di]!r}: {exc}") from None
            raw = row[vi].strip()
            if raw == "" or raw in sentinels:
                value = math.nan
            else:
                try:
                    value = float(raw)
                except ValueError:
                    raise ParseError(line_no, f"bad value {raw!r}") from None
                if not math.isfinite(value) or (config.negative_is_missing and value < 0):
                    value = math.nan
            if rows and date <= rows[-1][1]:
                raise NonMonotoneDates(
                    f"{path}: row {line_no} date {date} does not follow {rows[-1][1]}"
                )
            rows.append((line_no, date, value))

    if not rows:
        raise EmptyFile(f"{path}: no data rows")
    start = rows[0][1]
    n = (rows[-1][1] - start).days + 1
    if n < 2:
        raise EmptyFile(f"{path}: need at least 2 days of data")
    values = np.full(n, math.nan)
    for _, date, value in rows:
        values[(date - start).days] = value
    return TimeSeries.from_values(values, start)


def gap_runs(mask) -> list[tuple[int, int]]:
    """``(start, length)`` of every run of False in ``mask``."""
    m = np.concatenate([[True], np.asarray(mask, dtype=bool), [True]])
    edges = np.flatnonzero(np.diff(m.astype(np.int8)))
    starts, stops = edges[::2], edges[1::2]
    return [(int(a), int(b - a)) for a, b in zip(starts, stops)]


def fill_gaps(series: TimeSeries, max_run: int = 12, max_fraction: float = 0.005) -> TimeSeries:
    """Linear interpolation across gaps; edge gaps take the nearest observation.

    Raises GapRunTooLong for any run longer than ``max_run`` and
    GapFractionExceeded if more than ``max_fraction`` of samples are missing.
    """
    if series.is_gap_free:
        return series
    runs = gap_runs(series.mask)
    for start, length in runs:
        if length > max_run:
            raise GapRunTooLong(start, length, max_run)
    fraction = np.count_nonzero(~series.mask) / len(series)
    if fraction > max_fraction:
        raise GapFractionExceeded(
            f"{fraction:.4%} of samples missing, limit {max_fraction:.4%}"
        )
    idx = np.arange(len(series))
    observed = series.mask
    out = series.values.copy()
    out[~observed] = np.interp(idx[~observed], idx[observed], series.values[observed])
    return replace(series, values=out, mask=np.ones(len(series), dtype=bool))


def summary_stats(series: TimeSeries) -> SummaryStats:
    """Population moments; skewness and kurtosis are None for a constant series."""
    if not series.is_gap_free:
        raise GappySeries("summary statistics need a gap-free series (run fill_gaps first)")
    x = series.values
    mean = float(x.mean())
    d = x - mean
    m2 = float(np.mean(d**2))
    std = math.sqrt(m2)
    scale = max(float(np.max(np.abs(x))), np.finfo(float).tiny)
    if std <= 8 * np.finfo(float).eps * scale:
        return SummaryStats(mean, std, None, None, x.size)
    m3 = float(np.mean(d**3))
    m4 = float(np.mean(d**4))
    return SummaryStats(mean, std, m3 / m2**1.5, m4 / m2**2 - 3.0, x.size)
