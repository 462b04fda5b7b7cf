"""Causal generalized Morlet wavelet analysis of daily time series."""

from .alerts import AlertConfig, MatchReport, WarningEvent, compare_events, detect_warnings
from .kernel import WaveletParams, effective_support, psi
from .mlf import MlfMode, MlfParams, mittag_leffler_neg, modulation
from .series import SummaryStats, TimeSeries, fill_gaps, load_csv, summary_stats
from .transform import (
    Normalization,
    PhaseGrid,
    PowerGrid,
    Quadrature,
    ScaleGrid,
    Scalogram,
    cwt,
    phase,
    power,
    scale_slice,
)

__version__ = "0.1.0"

__all__ = [
    "AlertConfig",
    "MatchReport",
    "WarningEvent",
    "compare_events",
    "detect_warnings",
    "WaveletParams",
    "effective_support",
    "psi",
    "MlfMode",
    "MlfParams",
    "mittag_leffler_neg",
    "modulation",
    "SummaryStats",
    "TimeSeries",
    "fill_gaps",
    "load_csv",
    "summary_stats",
    "Normalization",
    "PhaseGrid",
    "PowerGrid",
    "Quadrature",
    "ScaleGrid",
    "Scalogram",
    "cwt",
    "phase",
    "power",
    "scale_slice",
]
