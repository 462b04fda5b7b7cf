"""Early-warning flags from a normalized power slice.

A warning is raised when the slice crosses the threshold from below at a
cell with enough kernel support. Crossings closer than
``min_separation_days`` to the last warning are dropped.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InvalidParam, LengthMismatch, NotNormalized, ParseError
from .transform import ScaleSlice

__all__ = [
    "AlertConfig",
    "WarningEvent",
    "MatchReport",
    "detect_warnings",
    "compare_events",
    "load_event_dates",
    "warning_report",
]


@dataclass(frozen=True)
class AlertConfig:
    scale_days: float = 40.0
    threshold: float = 0.5
    min_separation_days: int = 30
    min_support_fraction: float = 0.9

    def __post_init__(self):
        if not 0 < self.threshold <= 1:
            raise InvalidParam(f"threshold must lie in (0, 1], got {self.threshold}")
        if self.min_separation_days < 0:
            raise InvalidParam("min_separation_days must be >= 0")
        if not 0 <= self.min_support_fraction <= 1:
            raise InvalidParam("min_support_fraction must lie in [0, 1]")
        if not self.scale_days > 0:
            raise InvalidParam("scale_days must be positive")


@dataclass(frozen=True)
class WarningEvent:
    time_index: int
    date: dt.date
    power_at_crossing: float
    scale_days: float

    def as_dict(self):
        return {
            "date": self.date.isoformat(),
            "index": self.time_index,
            "power": self.power_at_crossing,
            "scale_days": self.scale_days,
        }


@dataclass(frozen=True)
class MatchReport:
    matches: list[tuple[WarningEvent, dt.date]] = field(default_factory=list)
    false_alarms: list[WarningEvent] = field(default_factory=list)
    misses: list[dt.date] = field(default_factory=list)

    def lead_days(self) -> list[int]:
        """Warning date minus contingency date for each matched pair."""
        return [(w.date - d).days for w, d in self.matches]

    def summary(self):
        leads = self.lead_days()
        return {
            "matches": len(self.matches),
            "misses": len(self.misses),
            "false_alarms": len(self.false_alarms),
            "mean_lead_days": float(np.mean(leads)) if leads else None,
        }


def detect_warnings(
    values,
    support_fraction=None,
    config: AlertConfig = AlertConfig(),
    *,
    start_date: dt.date = dt.date(2000, 1, 1),
    scale_days: float | None = None,
) -> list[WarningEvent]:
    """Upward threshold crossings of a normalized power slice.

    ``values`` may be a :class:`ScaleSlice` (its support row, start date and
    scale are used) or a plain sequence; a missing ``support_fraction``
    counts as full support.
    """
    if isinstance(values, ScaleSlice):
        sl = values
        values, start_date = sl.values, sl.time_anchor
        support_fraction = sl.support_fraction if support_fraction is None else support_fraction
        scale_days = sl.scale if scale_days is None else scale_days
    v = np.asarray(values, dtype=float)
    sf = np.ones_like(v) if support_fraction is None else np.asarray(support_fraction, dtype=float)
    if v.shape != sf.shape or v.ndim != 1:
        raise LengthMismatch(f"slice has {v.shape} values but support row has {sf.shape}")
    if v.size and np.nanmax(v) > 1 + 1e-9:
        raise NotNormalized(f"slice maximum {np.nanmax(v):.6g} > 1; normalize the power grid first")
    scale_days = config.scale_days if scale_days is None else float(scale_days)

    thr = config.threshold
    crossing = np.flatnonzero((v[:-1] < thr) & (v[1:] >= thr)) + 1
    events = []
    last = None
    for i in crossing:
        if sf[i] < config.min_support_fraction:
            continue
        if last is not None and i - last < config.min_separation_days:
            continue
        events.append(WarningEvent(int(i), start_date + dt.timedelta(days=int(i)), float(v[i]), scale_days))
        last = i
    return events


def compare_events(warnings, official, window_days: int) -> MatchReport:
    """One-to-one matching of warnings to official dates within ``window_days``.

    Pairs are taken greedily by smallest absolute date difference; ties go
    to the earlier warning, then the earlier official date.
    """
    official = list(official)
    warnings = list(warnings)
    candidates = []
    for wi, w in enumerate(warnings):
        for oi, d in enumerate(official):
            gap = abs((w.date - d).days)
            if gap <= window_days:
                candidates.append((gap, wi, oi))
    candidates.sort()
    used_w, used_o, pairs = set(), set(), []
    for _, wi, oi in candidates:
        if wi in used_w or oi in used_o:
            continue
        used_w.add(wi)
        used_o.add(oi)
        pairs.append((wi, oi))
    pairs.sort()
    return MatchReport(
        matches=[(warnings[wi], official[oi]) for wi, oi in pairs],
        false_alarms=[w for i, w in enumerate(warnings) if i not in used_w],
        misses=[d for i, d in enumerate(official) if i not in used_o],
    )


def load_event_dates(path) -> list[dt.date]:
    """One ISO date per line; blank lines and ``#`` comments are skipped."""
    dates = []
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            dates.append(dt.date.fromisoformat(text))
        except ValueError:
            raise ParseError(line_no, f"bad date {text!r}") from None
    return sorted(dates)


def warning_report(events, report: MatchReport | None = None):
    """JSON-ready dict: the warnings plus, if given, the match summary."""
    return {
        "warnings": [e.as_dict() for e in events],
        "summary": None if report is None else report.summary(),
    }
