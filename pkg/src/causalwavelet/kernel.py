"""Generalized Morlet wavelet ``psi(sigma) = M(sigma) * exp(i*sigma)``.

``sigma = (u - t) / s`` is the dimensionless lag between the analysis time
``u`` and the sample time ``t`` at scale ``s``. Positive ``sigma`` looks into
the past. The causal variant zeroes the modulation for ``sigma < 0`` and
keeps ``M(0) = 1`` so the present sample is included.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParam, SupportUnbounded
from .mlf import MlfMode, MlfParams, default_mode, modulation

__all__ = ["WaveletParams", "psi", "effective_support"]

SUPPORT_SEARCH_LIMIT = 1e9


@dataclass(frozen=True)
class WaveletParams:
    alpha: float = 2.0
    causal: bool = True
    mlf: MlfParams = field(default=None)
    support_eps: float = 1e-6

    def __post_init__(self):
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise InvalidParam(f"alpha must be a positive finite number, got {self.alpha!r}")
        if not 0 < self.support_eps < 1:
            raise InvalidParam(f"support_eps must lie in (0, 1), got {self.support_eps!r}")
        if self.mlf is None:
            object.__setattr__(self, "mlf", MlfParams(self.alpha, default_mode(self.alpha)))
        elif self.mlf.alpha != self.alpha:
            raise InvalidParam(f"mlf.alpha={self.mlf.alpha} does not match alpha={self.alpha}")

    @classmethod
    def create(cls, alpha=2.0, causal=True, mode=None, support_eps=1e-6, crossover_x=None):
        mode = default_mode(alpha) if mode is None else MlfMode(mode)
        return cls(alpha, causal, MlfParams(alpha, mode, crossover_x=crossover_x), support_eps)


def psi(params: WaveletParams, sigma):
    """Evaluate the mother wavelet at ``sigma`` (scalar or array)."""
    s = np.asarray(sigma, dtype=float)
    m = np.asarray(modulation(params.mlf, s))
    if params.causal:
        m = np.where(s < 0, 0.0, m)
    out = m * np.cos(s) + 1j * (m * np.sin(s))
    return complex(out) if out.ndim == 0 else out


def effective_support(params: WaveletParams, limit: float = SUPPORT_SEARCH_LIMIT) -> float:
    """Truncation radius: smallest ``sigma`` with ``M(sigma) < support_eps``.

    A doubling scan brackets the crossing, bisection refines it. For
    modulations that are not monotone (exact Mittag-Leffler with
    ``alpha > 1``) this is the first crossing.
    """
    eps = params.support_eps

    def below(s):
        return modulation(params.mlf, s) < eps

    lo, hi = 0.0, 1.0
    while not below(hi):
        lo, hi = hi, 2.0 * hi
        if hi > limit:
            raise SupportUnbounded(
                f"modulation stays >= {eps} up to sigma={limit} (alpha={params.alpha})"
            )
    while hi - lo > 1e-12 * hi:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if below(mid):
            hi = mid
        else:
            lo = mid
    return hi
