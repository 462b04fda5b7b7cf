"""Grid export: CSV tables and the ``CWSG`` binary scalogram format.

CSV layout: header ``date,<scale_1>,...,<scale_m>``; one row per day with
the ISO date first; every number written with 9 significant digits.

Binary layout (all little-endian)::

    offset  type            field
    0       4 bytes         magic b"CWSG"
    4       u32             format version (1)
    8       u32             n_times
    12      u32             n_scales
    16      u32             flags: bit 0 causal, bit 1 stretched-exp modulation
    20      f64             alpha
    28      f64             support_eps
    36      i64             proleptic Gregorian ordinal of the first date
    44      f64[n_scales]   scales
    ...     c128[n_times, n_scales]  coefficients, row-major, (re, im) pairs
    ...     f64[n_times, n_scales]   support fraction, row-major
"""

from __future__ import annotations

import csv
import datetime as dt
import struct
from pathlib import Path

import numpy as np

from .errors import MalformedGrid
from .kernel import WaveletParams
from .mlf import MlfMode
from .transform import ScaleGrid, Scalogram

__all__ = ["write_grid_csv", "read_grid_csv", "write_scalogram", "read_scalogram", "is_scalogram_file"]

MAGIC = b"CWSG"
VERSION = 1
_HEADER = struct.Struct("<4sIIIIddq")


def _fmt(v):
    return format(float(v), ".9g")


def write_grid_csv(path, values, scales, start_date: dt.date):
    values = np.asarray(values)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["date", *(_fmt(s) for s in scales)])
        for i, row in enumerate(values):
            date = start_date + dt.timedelta(days=i)
            w.writerow([date.isoformat(), *(_fmt(v) for v in row)])


def read_grid_csv(path):
    """Return ``(values, scales, dates)`` from a grid CSV."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if len(rows) < 2:
        raise MalformedGrid(f"{path}: need a header and at least one data row")
    header = rows[0]
    if len(header) < 2:
        raise MalformedGrid(f"{path}: header has no scale columns")
    try:
        scales = np.array([float(h) for h in header[1:]])
    except ValueError:
        raise MalformedGrid(f"{path}: non-numeric scale in header") from None
    dates, values = [], []
    for line_no, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise MalformedGrid(f"{path}: row {line_no} has {len(row)} fields, expected {len(header)}")
        try:
            dates.append(dt.date.fromisoformat(row[0]))
            values.append([float(v) for v in row[1:]])
        except ValueError as exc:
            raise MalformedGrid(f"{path}: row {line_no}: {exc}") from None
    values = np.array(values)
    if not np.all(np.isfinite(values)):
        raise MalformedGrid(f"{path}: non-finite cell values")
    return values, scales, dates


def write_scalogram(path, sc: Scalogram):
    n, m = sc.coeffs.shape
    flags = int(sc.params.causal) | (int(sc.params.mlf.mode is MlfMode.STRETCHED_EXP) << 1)
    header = _HEADER.pack(
        MAGIC, VERSION, n, m, flags, sc.params.alpha, sc.params.support_eps, sc.time_anchor.toordinal()
    )
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(sc.grid.scales, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(sc.coeffs, dtype="<c16").tobytes())
        fh.write(np.ascontiguousarray(sc.support_fraction, dtype="<f8").tobytes())


def is_scalogram_file(path) -> bool:
    try:
        with open(path, "rb") as fh:
            return fh.read(4) == MAGIC
    except OSError:
        return False


def read_scalogram(path) -> Scalogram:
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise MalformedGrid(f"{path}: truncated header")
    magic, version, n, m, flags, alpha, eps, ordinal = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise MalformedGrid(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise MalformedGrid(f"{path}: unsupported version {version}")
    expected = _HEADER.size + 8 * m + 16 * n * m + 8 * n * m
    if len(data) != expected:
        raise MalformedGrid(f"{path}: expected {expected} bytes, found {len(data)}")
    off = _HEADER.size
    scales = np.frombuffer(data, "<f8", m, off)
    off += 8 * m
    coeffs = np.frombuffer(data, "<c16", n * m, off).reshape(n, m).astype(complex)
    off += 16 * n * m
    frac = np.frombuffer(data, "<f8", n * m, off).reshape(n, m).astype(float)
    mode = MlfMode.STRETCHED_EXP if flags & 2 else MlfMode.SERIES_AUTO
    params = WaveletParams.create(alpha, bool(flags & 1), mode, eps)
    return Scalogram(coeffs, frac, ScaleGrid(scales.copy()), params, dt.date.fromordinal(ordinal))
