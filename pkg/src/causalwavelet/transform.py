"""Discretized continuous wavelet transform and scalogram derivation.

For a daily series ``x`` the coefficient at time ``u`` and scale ``s`` is::

    W(u, s) = s**-0.5 * sum_t conj(psi((u - t) / s)) * x(t) * w(u - t)

with lag weights ``w`` (1 for the rectangle rule) and ``t`` restricted to
the kernel's effective support, to ``t <= u`` when causal, and to the
samples that exist (no padding). The sum is evaluated directly, so a
causal coefficient never depends on later samples, bit for bit.
"""

from __future__ import annotations

import datetime as dt
import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import EmptyGrid, GappySeries, InvalidParam, ScaleOutOfRange, SupportUnbounded
from .kernel import WaveletParams, effective_support
from .mlf import tabulated_modulation
from .series import TimeSeries

__all__ = [
    "ScaleGrid",
    "Scalogram",
    "PowerGrid",
    "PhaseGrid",
    "ScaleSlice",
    "Normalization",
    "Quadrature",
    "cwt",
    "power",
    "phase",
    "scale_slice",
]


class Normalization(str, enum.Enum):
    GLOBAL_MAX = "global"
    PER_SCALE_MAX = "per-scale"
    NONE = "none"


class Quadrature(str, enum.Enum):
    RECTANGLE = "rectangle"
    # end-corrected rule for the causal kernel's jump at lag 0
    GREGORY = "gregory"


_GREGORY_HEAD = np.array([3 / 8, 7 / 6, 23 / 24])


@dataclass(frozen=True, eq=False)
class ScaleGrid:
    scales: np.ndarray

    def __post_init__(self):
        s = np.array(self.scales, dtype=float)
        if s.ndim != 1 or s.size == 0:
            raise EmptyGrid("scale grid is empty")
        if not np.all(np.isfinite(s)):
            raise InvalidParam("scales must be finite")
        if s[0] < 2:
            raise InvalidParam(f"smallest scale must be >= 2 samples, got {s[0]}")
        if np.any(np.diff(s) <= 0):
            raise InvalidParam("scales must be strictly increasing")
        s.setflags(write=False)
        object.__setattr__(self, "scales", s)

    @classmethod
    def log_spaced(cls, smin: float = 2.0, smax: float = 1024.0, count: int = 64) -> "ScaleGrid":
        if count < 1:
            raise EmptyGrid("scale count must be >= 1")
        if count == 1:
            return cls([smin])
        if not smax > smin:
            raise InvalidParam(f"scales-max ({smax}) must exceed scales-min ({smin})")
        return cls(np.geomspace(smin, smax, count))

    def __len__(self):
        return self.scales.size

    def nearest_index(self, scale: float) -> int:
        """Index of the nearest grid scale; ties go to the smaller scale."""
        s = self.scales
        if not s[0] <= scale <= s[-1]:
            raise ScaleOutOfRange(f"scale {scale} outside grid range [{s[0]:g}, {s[-1]:g}]")
        hi = int(np.searchsorted(s, scale))
        if hi == 0 or s[hi] == scale:
            return hi
        lo = hi - 1
        return lo if scale - s[lo] <= s[hi] - scale else hi


@dataclass(frozen=True, eq=False)
class Scalogram:
    coeffs: np.ndarray  # complex, (n_times, n_scales)
    support_fraction: np.ndarray  # (n_times, n_scales), in [0, 1]
    grid: ScaleGrid
    params: WaveletParams
    time_anchor: dt.date

    @property
    def shape(self):
        return self.coeffs.shape

    def date_at(self, index: int) -> dt.date:
        return self.time_anchor + dt.timedelta(days=int(index))


@dataclass(frozen=True, eq=False)
class PowerGrid:
    values: np.ndarray
    normalization: Normalization
    support_fraction: np.ndarray
    grid: ScaleGrid
    time_anchor: dt.date
    degenerate: bool = False


@dataclass(frozen=True, eq=False)
class PhaseGrid:
    """Folded phase index ``arctan(|Re W| / |Im W|)`` in ``[0, pi/2]``.

    ``signed`` keeps ``arctan(Re W / Im W)`` for export; ``undefined`` flags
    cells where both parts vanish (value reported as 0).
    """

    values: np.ndarray
    signed: np.ndarray
    undefined: np.ndarray
    support_fraction: np.ndarray
    grid: ScaleGrid
    time_anchor: dt.date


@dataclass(frozen=True, eq=False)
class ScaleSlice:
    values: np.ndarray
    support_fraction: np.ndarray
    scale: float
    scale_index: int
    time_anchor: dt.date


def _support_radius(params, n, smin):
    # lags beyond n - 1 never touch data, so the search can stop there
    limit = (n - 1) / smin + 1.0
    try:
        return effective_support(params, limit=limit)
    except SupportUnbounded:
        return math.inf


def _lag_weights(quadrature, causal, n_lags):
    w = np.ones(n_lags)
    if quadrature is Quadrature.GREGORY and causal:
        head = _GREGORY_HEAD[:n_lags]
        w[: head.size] = head
    return w


def _one_scale(x, s, params, sigma_max, mod, quadrature, remove_mean, csum):
    n = x.size
    half = min(int(math.ceil(s * sigma_max)), n - 1) if math.isfinite(sigma_max) else n - 1
    lags = np.arange(0 if params.causal else -half, half + 1)
    sigma = lags / s
    m = mod(sigma)
    if params.causal:
        w = _lag_weights(quadrature, True, lags.size)
    else:
        w = np.ones(lags.size)
    # conj(psi) = M * (cos - i sin)
    h_re = m * w * np.cos(sigma) / math.sqrt(s)
    h_im = -m * w * np.sin(sigma) / math.sqrt(s)

    offset = 0 if params.causal else half
    re = np.convolve(x, h_re)[offset : offset + n]
    im = np.convolve(x, h_im)[offset : offset + n]

    u = np.arange(n)
    mass = np.abs(m)
    cmass = np.concatenate([[0.0], np.cumsum(mass)])
    if params.causal:
        top = np.minimum(u, half)
        avail = cmass[top + 1]
        if remove_mean:
            running = csum[u] / (u + 1)
            hre_c = np.cumsum(h_re)
            him_c = np.cumsum(h_im)
            re = re - running * hre_c[top]
            im = im - running * him_c[top]
    else:
        lo = np.maximum(u - (n - 1), -half) + half
        hi = np.minimum(u, half) + half
        avail = cmass[hi + 1] - cmass[lo]
    frac = np.clip(avail / cmass[-1], 0.0, 1.0)
    return re + 1j * im, frac


def cwt(
    series: TimeSeries,
    grid: ScaleGrid,
    params: WaveletParams = WaveletParams(),
    *,
    remove_mean: bool = True,
    quadrature: Quadrature | str = Quadrature.RECTANGLE,
    workers: int = 1,
) -> Scalogram:
    """Wavelet coefficients over ``grid`` for a gap-free series.

    ``remove_mean`` subtracts the series mean before projecting; in causal
    mode the mean of the samples seen so far (``t <= u``) is used, so the
    result stays causal. Scales are independent and run on ``workers``
    threads when ``workers > 1``; the output does not depend on it.
    """
    if not series.is_gap_free:
        raise GappySeries("series still has missing values; run fill_gaps first")
    if len(grid) == 0:
        raise EmptyGrid("scale grid is empty")
    quadrature = Quadrature(quadrature)
    x = np.asarray(series.values, dtype=float)
    n = x.size
    if remove_mean and not params.causal:
        x = x - x.mean()
    csum = np.cumsum(series.values) if remove_mean and params.causal else None

    scales = grid.scales
    sigma_max = _support_radius(params, n, scales[0])
    reach = min(sigma_max, (n - 1) / scales[0])
    mod = tabulated_modulation(params.mlf, reach)

    def job(s):
        return _one_scale(x, float(s), params, sigma_max, mod, quadrature, remove_mean, csum)

    if workers > 1 and len(scales) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, scales))
    else:
        results = [job(s) for s in scales]

    coeffs = np.empty((n, len(scales)), dtype=complex)
    frac = np.empty((n, len(scales)))
    for j, (c, f) in enumerate(results):
        coeffs[:, j] = c
        frac[:, j] = f
    coeffs.setflags(write=False)
    frac.setflags(write=False)
    return Scalogram(coeffs, frac, grid, params, series.start_date)


def power(scalogram: Scalogram, normalization: Normalization | str = Normalization.GLOBAL_MAX) -> PowerGrid:
    """Coefficient magnitude ``|W|``, optionally scaled into ``[0, 1]``.

    A zero maximum is not divided by; the raw zeros come back with
    ``degenerate=True``.
    """
    normalization = Normalization(normalization)
    values = np.abs(scalogram.coeffs)
    degenerate = False
    if normalization is Normalization.GLOBAL_MAX:
        peak = values.max()
        if peak > 0:
            values = values / peak
        else:
            degenerate = True
    elif normalization is Normalization.PER_SCALE_MAX:
        peak = values.max(axis=0)
        degenerate = bool(np.any(peak == 0))
        values = values / np.where(peak > 0, peak, 1.0)
    values.setflags(write=False)
    return PowerGrid(
        values, normalization, scalogram.support_fraction, scalogram.grid, scalogram.time_anchor, degenerate
    )


def phase(scalogram: Scalogram) -> PhaseGrid:
    re = scalogram.coeffs.real
    im = scalogram.coeffs.imag
    values = np.arctan2(np.abs(re), np.abs(im))
    undefined = (re == 0) & (im == 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        signed = np.where(im != 0, np.arctan(re / im), np.copysign(np.pi / 2, re))
    signed[undefined] = 0.0
    for a in (values, signed, undefined):
        a.setflags(write=False)
    return PhaseGrid(values, signed, undefined, scalogram.support_fraction, scalogram.grid, scalogram.time_anchor)


def scale_slice(grid: PowerGrid | PhaseGrid, scale: float) -> ScaleSlice:
    """Time series of ``grid`` at the grid scale nearest ``scale``."""
    j = grid.grid.nearest_index(scale)
    return ScaleSlice(
        np.array(grid.values[:, j]),
        np.array(grid.support_fraction[:, j]),
        float(grid.grid.scales[j]),
        j,
        grid.time_anchor,
    )
