"""Configuration, pipeline orchestration, CLI, and report bundles."""

from .bundle import TABLE_SCHEMAS, ReportBundle, Table, emit, load_bundle
from .config import PipelineConfig, validate_config
from .pipeline import build_metadata, collect_bundle, run_pipeline

__all__ = [
    "PipelineConfig",
    "ReportBundle",
    "TABLE_SCHEMAS",
    "Table",
    "build_metadata",
    "collect_bundle",
    "emit",
    "load_bundle",
    "run_pipeline",
    "validate_config",
]
