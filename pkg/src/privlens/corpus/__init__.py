"""Corpus ingestion, filtering, period classification, and infection rates."""

from .periods import (
    UNCLASSIFIED,
    CaseSeries,
    InfectionRate,
    PeriodWindow,
    Phase,
    classify_period,
    classify_records,
    infection_rate,
    load_case_series,
    load_windows,
    windows_from_stringency,
)
from .records import (
    DEFAULT_SCHEMA,
    LoadReport,
    PostRecord,
    filter_corpus,
    load_corpus,
    write_corpus,
)
from .stats import CorpusStats, corpus_stats

__all__ = [
    "UNCLASSIFIED",
    "CaseSeries",
    "CorpusStats",
    "DEFAULT_SCHEMA",
    "InfectionRate",
    "LoadReport",
    "PeriodWindow",
    "Phase",
    "PostRecord",
    "classify_period",
    "classify_records",
    "corpus_stats",
    "filter_corpus",
    "infection_rate",
    "load_case_series",
    "load_corpus",
    "load_windows",
    "windows_from_stringency",
    "write_corpus",
]
