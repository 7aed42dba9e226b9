"""URL and domain security analysis: parsing, categories, scanner scores."""

from .categories import UNCATEGORIZED, categorize, load_category_map
from .client import API_KEY_ENV, RateLimiter, ScannerClient, fetch_reports
from .domains import (
    IpLiteralHost,
    NoRegistrablePart,
    PublicSuffixList,
    RegisteredDomain,
    corpus_urls,
    extract_urls,
    is_valid_url,
    normalise_host,
    registered_domain,
)
from .reports import (
    DEFAULT_THRESHOLDS,
    DomainDossier,
    ScanReport,
    VtScore,
    category_distribution,
    load_reports,
    tier_table,
    vtscore,
    vtscore_positive_only,
    write_reports,
)

__all__ = [
    "API_KEY_ENV",
    "DEFAULT_THRESHOLDS",
    "DomainDossier",
    "IpLiteralHost",
    "NoRegistrablePart",
    "PublicSuffixList",
    "RateLimiter",
    "RegisteredDomain",
    "ScanReport",
    "ScannerClient",
    "UNCATEGORIZED",
    "VtScore",
    "categorize",
    "category_distribution",
    "corpus_urls",
    "extract_urls",
    "fetch_reports",
    "is_valid_url",
    "load_category_map",
    "load_reports",
    "normalise_host",
    "registered_domain",
    "tier_table",
    "vtscore",
    "vtscore_positive_only",
    "write_reports",
]
