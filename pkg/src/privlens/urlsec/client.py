"""Live scanner-report client: rate limited, cached, strictly optional.

The default pipeline is fully offline against shipped caches; this client
exists behind a plug point for deployments that hold an API key.
"""

from __future__ import annotations

import logging
import os
import time
from dataclasses import dataclass
from datetime import date
from pathlib import Path
from typing import Callable, Sequence

from .reports import ScanReport, load_reports, write_reports

logger = logging.getLogger(__name__)

API_KEY_ENV = "PRIVLENS_SCANNER_API_KEY"

#: transport(url, params, headers) -> (status code, parsed JSON body)
Transport = Callable[[str, dict, dict], tuple[int, object]]


def _requests_transport(url: str, params: dict, headers: dict) -> tuple[int, object]:
    import requests

    response = requests.get(url, params=params, headers=headers, timeout=30)
    try:
        body = response.json()
    except ValueError:
        body = None
    return response.status_code, body


class RateLimiter:
    """Token bucket: at most ``per_minute`` acquisitions per rolling minute."""

    def __init__(self, per_minute: int, clock=time.monotonic, sleep=time.sleep):
        if per_minute < 1:
            raise ValueError("per_minute must be >= 1")
        self.per_minute = per_minute
        self._clock = clock
        self._sleep = sleep
        self._stamps: list[float] = []

    def acquire(self) -> None:
        now = self._clock()
        self._stamps = [t for t in self._stamps if now - t < 60.0]
        if len(self._stamps) >= self.per_minute:
            wait = 60.0 - (now - self._stamps[0])
            if wait > 0:
                self._sleep(wait)
                now = self._clock()
                self._stamps = [t for t in self._stamps if now - t < 60.0]
        self._stamps.append(now)


@dataclass
class ScannerClient:
    """HTTPS report fetcher; the API key comes from the environment."""

    base_url: str = "https://scanner.invalid/api/v1/domain-reports"
    requests_per_minute: int = 4
    max_retries: int = 3
    transport: Transport = _requests_transport
    sleep: Callable[[float], None] = time.sleep

    def __post_init__(self):
        key = os.environ.get(API_KEY_ENV, "")
        if not key:
            raise RuntimeError(
                f"live mode requested but {API_KEY_ENV} is not set in the environment"
            )
        self._key = key
        self._limiter = RateLimiter(self.requests_per_minute, sleep=self.sleep)

    def fetch(self, domain: str, window: tuple[date, date]) -> list[ScanReport]:
        params = {
            "domain": domain,
            "from": window[0].isoformat(),
            "to": window[1].isoformat(),
        }
        headers = {"x-api-key": self._key}
        backoff = 1.0
        for attempt in range(self.max_retries + 1):
            self._limiter.acquire()
            status, body = self.transport(self.base_url, params, headers)
            if status == 429:
                if attempt == self.max_retries:
                    logger.warning(
                        "rate limited fetching %s; returning partial results", domain
                    )
                    return []
                self.sleep(backoff)
                backoff *= 2.0
                continue
            if status != 200 or not isinstance(body, list):
                raise RuntimeError(f"scanner request for {domain} failed: HTTP {status}")
            reports = []
            for item in body:
                reports.append(
                    ScanReport(
                        domain=domain.lower(),
                        date=date.fromisoformat(item["date"]),
                        positives=int(item["positives"]),
                        total_engines=int(item["total"]),
                    )
                )
            return sorted(reports, key=lambda r: r.date)
        return []


def fetch_reports(
    domain: str,
    window: tuple[date, date],
    client: ScannerClient | None = None,
    cache_path=None,
) -> list[ScanReport]:
    """Cache-first report lookup; live fetches are written through to the cache."""
    cached: Sequence[ScanReport] = ()
    if cache_path is not None:
        cached = load_reports(cache_path, window=window, domain=domain)
    if cached or client is None:
        return list(cached)
    fetched = client.fetch(domain, window)
    if fetched and cache_path is not None:
        Path(cache_path).parent.mkdir(parents=True, exist_ok=True)
        write_reports(fetched, cache_path, append=True)
    return fetched
