import json
from datetime import datetime, timezone
from pathlib import Path

import pytest

from privlens.corpus.records import PostRecord
from privlens.privacy import PreparedPost

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail/skip line per acceptance criterion at the end of a run."""
    rows = []
    for outcome in ("passed", "failed", "skipped"):
        for report in terminalreporter.stats.get(outcome, []):
            if "test_acceptance" in report.nodeid and report.when in ("call", "setup"):
                rows.append((report.nodeid.split("::")[-1], outcome.upper()))
    if rows:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, outcome in sorted(rows):
            terminalreporter.write_line(f"{outcome:7s} {name}")


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def manifest_1k() -> dict:
    return json.loads((FIXTURES / "manifest_1k.json").read_text())


@pytest.fixture(scope="session")
def manifest_500() -> dict:
    return json.loads((FIXTURES / "manifest_500.json").read_text())


def ts(hour: int = 0, day: int = 1, month: int = 4, year: int = 2020) -> datetime:
    return datetime(year, month, day, hour, tzinfo=timezone.utc)


def make_record(user="u1", post="p1", text="hello world", hour=0, day=1,
                hashtags=(), urls=(), country="AU", language="en") -> PostRecord:
    return PostRecord(
        user_id=user, post_id=post, timestamp=ts(hour=hour, day=day), text=text,
        hashtags=tuple(hashtags), urls=tuple(urls), country=country, language=language,
    )


def symbol_post(user: str, order: int, symbol: str, pii: bool = False,
                **extra) -> PreparedPost:
    """A post whose vector is a one-hot of its symbol, so distinct symbols
    are orthogonal and equal symbols match exactly."""
    return PreparedPost(
        user_id=user,
        timestamp=ts(hour=order % 24, day=1 + order // 24),
        text=symbol,
        vector={sum(ord(c) * 31 ** i for i, c in enumerate(symbol)): 1.0},
        has_pii=pii,
        **extra,
    )
