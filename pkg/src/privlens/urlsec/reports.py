"""Scanner-report aggregation: per-domain scores, suspicion tiers, breakdowns."""

from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Iterable, Sequence

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLDS = (3, 10, 20, 40, 55)


@dataclass(frozen=True)
class ScanReport:
    domain: str
    date: date
    positives: int
    total_engines: int

    def __post_init__(self):
        if self.positives < 0:
            raise ValueError("positives must be non-negative")
        if self.total_engines <= 0:
            raise ValueError("total_engines must be positive")
        if self.positives > self.total_engines:
            raise ValueError("positives cannot exceed total_engines")

    def to_dict(self) -> dict:
        return {
            "domain": self.domain,
            "date": self.date.isoformat(),
            "positives": self.positives,
            "total": self.total_engines,
        }


@dataclass(frozen=True)
class VtScore:
    domain: str
    score: float
    report_count: int
    window: tuple[date, date]


@dataclass
class DomainDossier:
    """Everything known about one registered domain."""

    domain: str
    category: str = "Uncategorized"
    score: VtScore | None = None
    share_counts: Counter = field(default_factory=Counter)  # (country, phase) -> shares

    @property
    def suspicious(self) -> bool:
        return self.score is not None

    def tier(self, thresholds: Sequence[int] = DEFAULT_THRESHOLDS) -> int | None:
        """Highest threshold the score reaches, or None when not suspicious."""
        if self.score is None:
            return None
        passed = [t for t in sorted(thresholds) if self.score.score >= t]
        return passed[-1] if passed else None


def load_reports(
    cache_path, window: tuple[date, date] | None = None, domain: str | None = None
) -> list[ScanReport]:
    """In-window reports from a JSONL cache, sorted by scan date.

    Malformed lines are skipped with a count; a missing cache file is an
    empty result (offline runs must work without caches).
    """
    cache_path = Path(cache_path)
    if not cache_path.is_file():
        return []
    reports: list[ScanReport] = []
    skipped = 0
    with cache_path.open("r", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                report = ScanReport(
                    domain=str(obj["domain"]).lower(),
                    date=date.fromisoformat(obj["date"]),
                    positives=int(obj["positives"]),
                    total_engines=int(obj["total"]),
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError):
                skipped += 1
                continue
            reports.append(report)
    if skipped:
        logger.warning("skipped %d malformed cache lines in %s", skipped, cache_path)
    if domain is not None:
        reports = [r for r in reports if r.domain == domain.lower()]
    if window is not None:
        reports = [r for r in reports if window[0] <= r.date <= window[1]]
    reports.sort(key=lambda r: (r.date, r.domain, r.positives))
    return reports


def write_reports(reports: Iterable[ScanReport], cache_path, append: bool = False) -> int:
    cache_path = Path(cache_path)
    cache_path.parent.mkdir(parents=True, exist_ok=True)
    n = 0
    mode = "a" if append else "w"
    with cache_path.open(mode, encoding="utf-8", newline="\n") as fh:
        for report in reports:
            fh.write(json.dumps(report.to_dict(), sort_keys=True) + "\n")
            n += 1
    return n


def vtscore(reports: Sequence[ScanReport], window: tuple[date, date]) -> VtScore | None:
    """Mean positives across ALL in-window reports of one domain.

    Defined only when at least one report has positives >= 1; otherwise the
    domain is not considered suspicious and the score is absent. The
    denominator counts every in-window report, positive or not.
    """
    if not reports:
        return None
    domains = {r.domain for r in reports}
    if len(domains) > 1:
        raise ValueError(f"reports span multiple domains: {sorted(domains)}")
    in_window = [r for r in reports if window[0] <= r.date <= window[1]]
    if not in_window or not any(r.positives >= 1 for r in in_window):
        return None
    total = sum(r.positives for r in in_window)
    return VtScore(
        domain=next(iter(domains)),
        score=total / len(in_window),
        report_count=len(in_window),
        window=window,
    )


def vtscore_positive_only(
    reports: Sequence[ScanReport], window: tuple[date, date]
) -> VtScore | None:
    """Alternative denominator: only reports with positives >= 1 count."""
    if not reports:
        return None
    in_window = [
        r for r in reports if window[0] <= r.date <= window[1] and r.positives >= 1
    ]
    if not in_window:
        return None
    total = sum(r.positives for r in in_window)
    return VtScore(
        domain=in_window[0].domain,
        score=total / len(in_window),
        report_count=len(in_window),
        window=window,
    )


def tier_table(
    dossiers: Iterable[DomainDossier],
    thresholds: Sequence[int] = DEFAULT_THRESHOLDS,
) -> dict[int, dict[str, tuple[int, int]]]:
    """Per-threshold, per-phase counts of suspicious shares and unique domains.

    "total" counts suspicious domain-shares (each share of a qualifying
    domain); "unique" counts distinct qualifying domains. A domain qualifies
    at threshold t when its score is >= t.
    """
    dossiers = list(dossiers)
    phases = sorted({phase for d in dossiers for (_, phase) in d.share_counts})
    per_phase_shares: dict[int, Counter] = {t: Counter() for t in thresholds}
    per_phase_domains: dict[int, dict[str, set[str]]] = {t: {} for t in thresholds}
    for dossier in dossiers:
        if dossier.score is None:
            continue
        for threshold in thresholds:
            if dossier.score.score < threshold:
                continue
            for (_, phase), count in dossier.share_counts.items():
                per_phase_shares[threshold][phase] += count
                per_phase_domains[threshold].setdefault(phase, set()).add(dossier.domain)
    return {
        threshold: {
            phase: (
                per_phase_shares[threshold][phase],
                len(per_phase_domains[threshold].get(phase, ())),
            )
            for phase in phases
        }
        for threshold in sorted(thresholds)
    }


def category_distribution(
    dossiers: Iterable[DomainDossier],
) -> dict[tuple[str, str], dict[str, float]]:
    """Per (country, phase), category shares of suspicious domains.

    Fractions within each group sum to 1; groups with no suspicious domain
    are omitted.
    """
    groups: dict[tuple[str, str], Counter] = {}
    for dossier in dossiers:
        if not dossier.suspicious:
            continue
        for (country, phase), _ in dossier.share_counts.items():
            groups.setdefault((country, phase), Counter())[dossier.category] += 1
    distribution: dict[tuple[str, str], dict[str, float]] = {}
    for key, counts in groups.items():
        total = sum(counts.values())
        distribution[key] = {cat: n / total for cat, n in sorted(counts.items())}
    return distribution
