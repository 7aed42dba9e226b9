"""URL extraction and registered-domain parsing against a public-suffix list."""

from __future__ import annotations

import ipaddress
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable
from urllib.parse import urlsplit

from ..corpus.records import PostRecord
from ..datafiles import public_suffix_path

logger = logging.getLogger(__name__)

_ALLOWED_SCHEMES = {"http", "https", "ftp"}


class IpLiteralHost(ValueError):
    """The URL's host is an IP literal; there is no registered domain."""


class NoRegistrablePart(ValueError):
    """The host equals a bare public suffix."""


@dataclass(frozen=True)
class RegisteredDomain:
    """Host split into registrable domain and public suffix."""

    host: str
    registered: str
    suffix: str


class PublicSuffixList:
    """Suffix rules with wildcard (*) and exception (!) support.

    Ships with a curated snapshot; any full rules file in the standard
    format can be dropped in via ``path``.
    """

    def __init__(self, path=None):
        path = Path(path or public_suffix_path())
        self.rules: set[str] = set()
        for line in path.read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if line and not line.startswith("//"):
                self.rules.add(line.lower())

    def suffix_of(self, host: str) -> str:
        """Longest matching public suffix; unknown TLDs match as themselves."""
        labels = host.split(".")
        best = labels[-1]  # implicit default rule "*": the TLD itself
        best_len = 1
        for i in range(len(labels)):
            candidate = ".".join(labels[i:])
            wildcard = ".".join(["*"] + labels[i + 1 :])
            exception = "!" + candidate
            if exception in self.rules:
                # Exception rules mark the candidate itself registrable.
                return ".".join(labels[i + 1 :])
            size = len(labels) - i
            if candidate in self.rules and size > best_len:
                best, best_len = candidate, size
            if wildcard in self.rules and size > best_len:
                best, best_len = candidate, size
        return best


def normalise_host(raw_host: str) -> str:
    """Lowercase, strip trailing dot, punycode-encode non-ASCII labels."""
    host = raw_host.strip().rstrip(".").lower()
    if not host:
        raise ValueError("empty host")
    if all(ord(c) < 128 for c in host):
        return host
    try:
        return host.encode("idna").decode("ascii")
    except UnicodeError as exc:
        raise ValueError(f"cannot punycode-encode host {raw_host!r}") from exc


def _is_ip_literal(host: str) -> bool:
    try:
        ipaddress.ip_address(host.strip("[]"))
        return True
    except ValueError:
        return False


def registered_domain(url: str, psl: PublicSuffixList) -> RegisteredDomain:
    """Registrable (public suffix plus one label) domain of an absolute URL."""
    parts = urlsplit(url)
    if not parts.scheme or not parts.hostname:
        raise ValueError(f"not an absolute URL: {url!r}")
    host = normalise_host(parts.hostname)  # urlsplit already drops port/userinfo
    if _is_ip_literal(host):
        raise IpLiteralHost(host)
    suffix = psl.suffix_of(host)
    if host == suffix:
        raise NoRegistrablePart(f"no registrable part: host {host!r} is a public suffix")
    prefix = host[: -(len(suffix) + 1)]
    registered = prefix.rsplit(".", 1)[-1] + "." + suffix
    return RegisteredDomain(host=host, registered=registered, suffix=suffix)


def is_valid_url(url: str) -> bool:
    try:
        parts = urlsplit(url)
    except ValueError:
        return False
    return parts.scheme in _ALLOWED_SCHEMES and bool(parts.hostname)


def extract_urls(record: PostRecord) -> tuple[list[str], int]:
    """The record's expanded URLs verbatim, plus a count of invalid ones."""
    valid: list[str] = []
    dropped = 0
    for url in record.urls:
        if is_valid_url(url):
            valid.append(url)
        else:
            dropped += 1
    return valid, dropped


def corpus_urls(records: Iterable[PostRecord]) -> tuple[list[str], int]:
    urls: list[str] = []
    dropped = 0
    for record in records:
        good, bad = extract_urls(record)
        urls.extend(good)
        dropped += bad
    return urls, dropped
