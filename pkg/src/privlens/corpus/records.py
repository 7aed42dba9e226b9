"""JSONL post ingestion, filtering, and round-trip emission."""

from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from datetime import date, datetime, timezone
from pathlib import Path
from typing import Iterable, Iterator

from ..errors import SchemaMismatchError

logger = logging.getLogger(__name__)

#: Default mapping of record attributes to JSONL field names.
DEFAULT_SCHEMA = {
    "user_id": "user_id",
    "post_id": "post_id",
    "timestamp": "timestamp",
    "text": "text",
    "hashtags": "hashtags",
    "urls": "urls",
    "country": "country",
    "language": "language",
}

REQUIRED_FIELDS = ("user_id", "post_id", "timestamp", "text")


@dataclass(frozen=True)
class PostRecord:
    """One anonymised post."""

    user_id: str
    post_id: str
    timestamp: datetime
    text: str
    hashtags: tuple[str, ...] = ()
    urls: tuple[str, ...] = ()
    country: str | None = None
    language: str | None = None

    @property
    def day(self) -> date:
        """UTC calendar date of the post (used for period membership)."""
        return self.timestamp.astimezone(timezone.utc).date()

    def to_dict(self) -> dict:
        return {
            "user_id": self.user_id,
            "post_id": self.post_id,
            "timestamp": self.timestamp.astimezone(timezone.utc).isoformat(),
            "text": self.text,
            "hashtags": list(self.hashtags),
            "urls": list(self.urls),
            "country": self.country,
            "language": self.language,
        }


@dataclass
class LoadReport:
    """Counts accumulated while reading a corpus file."""

    total_lines: int = 0
    loaded: int = 0
    skipped: Counter = field(default_factory=Counter)
    hashtags_dropped: int = 0

    @property
    def skipped_total(self) -> int:
        return sum(self.skipped.values())

    def summary(self) -> str:
        reasons = ", ".join(f"{k}={v}" for k, v in sorted(self.skipped.items()))
        return (
            f"{self.loaded} records loaded, {self.skipped_total} lines skipped"
            + (f" ({reasons})" if reasons else "")
        )


def parse_timestamp(value) -> datetime:
    """Parse an ISO-8601 timestamp; naive values are taken as UTC."""
    if isinstance(value, (int, float)):
        return datetime.fromtimestamp(float(value), tz=timezone.utc)
    text = str(value).strip()
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    ts = datetime.fromisoformat(text)
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def _clean_hashtags(raw, report: LoadReport) -> tuple[str, ...]:
    tags = []
    for tag in raw or ():
        tag = str(tag).lstrip("#")
        if not tag or any(ch.isspace() for ch in tag):
            report.hashtags_dropped += 1
            continue
        tags.append(tag)
    return tuple(tags)


def record_from_dict(obj: dict, schema: dict[str, str], report: LoadReport) -> PostRecord | None:
    """Build a PostRecord from one JSON object; None (with a reason) when invalid."""
    for attr in REQUIRED_FIELDS:
        if obj.get(schema[attr]) in (None, ""):
            report.skipped[f"missing_{attr}"] += 1
            return None
    try:
        timestamp = parse_timestamp(obj[schema["timestamp"]])
    except (ValueError, TypeError, OverflowError):
        report.skipped["bad_timestamp"] += 1
        return None
    country = obj.get(schema["country"])
    language = obj.get(schema["language"])
    return PostRecord(
        user_id=str(obj[schema["user_id"]]),
        post_id=str(obj[schema["post_id"]]),
        timestamp=timestamp,
        text=str(obj[schema["text"]]),
        hashtags=_clean_hashtags(obj.get(schema["hashtags"]), report),
        urls=tuple(str(u) for u in obj.get(schema["urls"]) or ()),
        country=str(country).upper() if country else None,
        language=str(language) if language else None,
    )


def load_corpus(
    path,
    schema: dict[str, str] | None = None,
    report: LoadReport | None = None,
    span: tuple[date, date] | None = None,
) -> Iterator[PostRecord]:
    """Stream records from a JSONL file in file order.

    Malformed lines are counted and skipped; duplicate post ids and timestamps
    outside ``span`` are likewise skipped. If more than half of all lines are
    skipped the stream ends with :class:`SchemaMismatchError`.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"corpus file not found: {path}")
    schema = {**DEFAULT_SCHEMA, **(schema or {})}
    report = report if report is not None else LoadReport()
    seen_ids: set[str] = set()
    with path.open("r", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            report.total_lines += 1
            try:
                obj = json.loads(line)
            except json.JSONDecodeError:
                report.skipped["bad_json"] += 1
                continue
            if not isinstance(obj, dict):
                report.skipped["not_an_object"] += 1
                continue
            record = record_from_dict(obj, schema, report)
            if record is None:
                continue
            if record.post_id in seen_ids:
                report.skipped["duplicate_post_id"] += 1
                continue
            if span is not None and not (span[0] <= record.day <= span[1]):
                report.skipped["timestamp_out_of_span"] += 1
                continue
            seen_ids.add(record.post_id)
            report.loaded += 1
            yield record
    logger.info("loaded %s: %s", path.name, report.summary())
    # Span skips are config-driven filtering, not parse failures, so they
    # do not count toward the mismatch heuristic.
    malformed = report.skipped_total - report.skipped["timestamp_out_of_span"]
    if report.total_lines and malformed * 2 > report.total_lines:
        raise SchemaMismatchError(
            f"schema mismatch: {malformed}/{report.total_lines} "
            f"lines skipped reading {path} ({report.summary()})"
        )


def write_corpus(records: Iterable[PostRecord], path) -> int:
    """Write records as JSONL; inverse of :func:`load_corpus` for valid records."""
    n = 0
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            fh.write(json.dumps(record.to_dict(), sort_keys=True) + "\n")
            n += 1
    return n


def filter_corpus(
    records: Iterable[PostRecord],
    countries: set[str],
    language: str,
    dropped: Counter | None = None,
) -> Iterator[PostRecord]:
    """Keep records matching one of ``countries`` and exactly ``language``.

    Records lacking either field are dropped (and tallied when ``dropped``
    is supplied).
    """
    if not countries:
        raise ValueError("countries must be non-empty")
    wanted = {c.upper() for c in countries}
    for record in records:
        if record.country is None or record.language is None:
            if dropped is not None:
                dropped["missing_geo_or_language"] += 1
            continue
        if record.country in wanted and record.language == language:
            yield record
        elif dropped is not None:
            dropped["filtered_out"] += 1
