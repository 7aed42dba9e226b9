"""Domain categorisation against a local map with an optional remote fallback."""

from __future__ import annotations

import csv
import logging
from pathlib import Path
from typing import Callable, Mapping

from ..datafiles import category_map_path

logger = logging.getLogger(__name__)

UNCATEGORIZED = "Uncategorized"

#: Optional remote lookup: domain -> category label (may raise).
CategoryClient = Callable[[str], str]


def load_category_map(path=None) -> dict[str, str]:
    """CSV ``domain,category``; domains lowercased."""
    mapping: dict[str, str] = {}
    with Path(path or category_map_path()).open("r", encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            mapping[row["domain"].strip().lower()] = row["category"].strip()
    return mapping


def categorize(
    domain: str,
    category_map: Mapping[str, str],
    fallback_client: CategoryClient | None = None,
) -> str:
    """Local map hit wins; otherwise the pluggable client; otherwise Uncategorized.

    A failing remote client is a warning, never fatal.
    """
    label = category_map.get(domain.lower())
    if label:
        return label
    if fallback_client is not None:
        try:
            label = fallback_client(domain)
        except Exception as exc:  # client failures must not kill the pipeline
            logger.warning("category lookup failed for %s: %s", domain, exc)
            label = None
        if label:
            return label
    return UNCATEGORIZED
