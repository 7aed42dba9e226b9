"""Lockdown-phase windows, period classification, and infection rates."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from datetime import date, datetime, timedelta, timezone
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from ..errors import ConfigError, InsufficientDataError


class Phase(str, Enum):
    BEFORE = "Before"
    DURING = "During"
    AFTER = "After"


#: Label used in reports for posts falling outside every window.
UNCLASSIFIED = "Unclassified"


@dataclass(frozen=True)
class PeriodWindow:
    """A named lockdown phase for one country; bounds are inclusive."""

    country: str
    phase: Phase
    start: date
    end: date

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError(f"window start {self.start} is after end {self.end}")

    @property
    def days(self) -> int:
        return (self.end - self.start).days + 1

    def contains(self, day: date) -> bool:
        return self.start <= day <= self.end


@dataclass(frozen=True)
class CaseSeries:
    """Daily new-case counts for one country, strictly increasing by date."""

    country: str
    entries: tuple[tuple[date, int], ...]

    def __post_init__(self):
        previous = None
        for day, cases in self.entries:
            if cases < 0:
                raise ValueError(f"negative case count on {day}")
            if previous is not None and day <= previous:
                raise ValueError(f"dates not strictly increasing at {day}")
            previous = day


@dataclass(frozen=True)
class InfectionRate:
    window: PeriodWindow
    ir: float


def _check_no_overlap(windows: Sequence[PeriodWindow]) -> list[str]:
    problems = []
    ordered = sorted(windows, key=lambda w: (w.country, w.start))
    for a, b in zip(ordered, ordered[1:]):
        if a.country == b.country and b.start <= a.end:
            problems.append(
                f"{a.country}: windows {a.start}..{a.end} and {b.start}..{b.end} overlap"
            )
    return problems


def load_windows(path) -> dict[str, list[PeriodWindow]]:
    """Load a windows CSV (country,phase,start,end) and validate invariants."""
    path = Path(path)
    windows: list[PeriodWindow] = []
    problems: list[str] = []
    with path.open("r", encoding="utf-8", newline="") as fh:
        for i, row in enumerate(csv.DictReader(fh), start=2):
            try:
                windows.append(
                    PeriodWindow(
                        country=row["country"].strip().upper(),
                        phase=Phase(row["phase"].strip()),
                        start=date.fromisoformat(row["start"].strip()),
                        end=date.fromisoformat(row["end"].strip()),
                    )
                )
            except (KeyError, ValueError) as exc:
                problems.append(f"{path.name}:{i}: {exc}")
    problems.extend(_check_no_overlap(windows))
    if problems:
        raise ConfigError(problems)
    by_country: dict[str, list[PeriodWindow]] = {}
    for window in windows:
        by_country.setdefault(window.country, []).append(window)
    for group in by_country.values():
        group.sort(key=lambda w: w.start)
    return by_country


def classify_period(timestamp, windows: Sequence[PeriodWindow]) -> Phase | None:
    """Phase of the unique window containing the timestamp's UTC date.

    Returns None (unclassified) when no window contains it. Overlap between
    windows is a configuration error caught at load time, not here.
    """
    if isinstance(timestamp, datetime):
        day = timestamp.astimezone(timezone.utc).date()
    else:
        day = timestamp
    for window in windows:
        if window.contains(day):
            return window.phase
    return None


def load_case_series(path) -> dict[str, CaseSeries]:
    """Load a case-series CSV (country,date,new_cases), one series per country."""
    path = Path(path)
    rows: dict[str, list[tuple[date, int]]] = {}
    with path.open("r", encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            country = row["country"].strip().upper()
            rows.setdefault(country, []).append(
                (date.fromisoformat(row["date"].strip()), int(row["new_cases"]))
            )
    return {
        country: CaseSeries(country=country, entries=tuple(sorted(entries)))
        for country, entries in rows.items()
    }


def infection_rate(series: CaseSeries, window: PeriodWindow) -> InfectionRate:
    """Total new cases inside the window divided by its inclusive day count.

    The series must contain an entry for every date in the window; anything
    less raises :class:`InsufficientDataError`.
    """
    by_date = dict(series.entries)
    total = 0
    day = window.start
    while day <= window.end:
        if day not in by_date:
            raise InsufficientDataError(
                f"insufficient case data: {series.country} has no entry for {day} "
                f"inside window {window.start}..{window.end}"
            )
        total += by_date[day]
        day += timedelta(days=1)
    return InfectionRate(window=window, ir=total / window.days)


def windows_from_stringency(
    rows: Iterable[tuple[str, date, float]],
    threshold: float = 65.0,
    flank_days: int = 16,
) -> list[PeriodWindow]:
    """Derive phase windows from a (country, date, stringency-index) series.

    A During window is a maximal run of consecutive days at or above the
    threshold; Before/After windows are flanks of up to ``flank_days`` days,
    truncated so windows of one country never overlap.
    """
    by_country: dict[str, list[tuple[date, float]]] = {}
    for country, day, value in rows:
        by_country.setdefault(country.upper(), []).append((day, value))

    windows: list[PeriodWindow] = []
    for country, series in sorted(by_country.items()):
        series.sort()
        runs: list[tuple[date, date]] = []
        run_start = None
        previous = None
        for day, value in series:
            contiguous = previous is not None and (day - previous).days == 1
            if value >= threshold:
                if run_start is None or not contiguous:
                    if run_start is not None:
                        runs.append((run_start, previous))
                    run_start = day
            elif run_start is not None:
                runs.append((run_start, previous))
                run_start = None
            previous = day
        if run_start is not None:
            runs.append((run_start, previous))

        span_start, span_end = series[0][0], series[-1][0]
        for i, (start, end) in enumerate(runs):
            before_lo = max(span_start, start - timedelta(days=flank_days))
            if i > 0:
                before_lo = max(before_lo, runs[i - 1][1] + timedelta(days=flank_days + 1))
            after_hi = min(span_end, end + timedelta(days=flank_days))
            if i + 1 < len(runs):
                after_hi = min(after_hi, runs[i + 1][0] - timedelta(days=1))
            if before_lo < start:
                windows.append(
                    PeriodWindow(country, Phase.BEFORE, before_lo, start - timedelta(days=1))
                )
            windows.append(PeriodWindow(country, Phase.DURING, start, end))
            if after_hi > end:
                windows.append(
                    PeriodWindow(country, Phase.AFTER, end + timedelta(days=1), after_hi)
                )
    problems = _check_no_overlap(windows)
    if problems:
        raise ConfigError(problems)
    return windows


def classify_records(
    records,
    windows_by_country: Mapping[str, Sequence[PeriodWindow]],
):
    """Pair each record with its phase (None when unclassified)."""
    for record in records:
        windows = windows_by_country.get(record.country or "", ())
        yield record, classify_period(record.timestamp, windows)
