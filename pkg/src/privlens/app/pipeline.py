"""Full-pipeline orchestration and run metadata."""

from __future__ import annotations

import hashlib
import logging
from pathlib import Path

from .. import __version__
from ..errors import StageError
from . import stages
from .bundle import TABLE_SCHEMAS, ReportBundle, emit, read_table_csv
from .config import PipelineConfig

logger = logging.getLogger(__name__)

#: Stage execution order for a full run.
RUN_STAGES = (
    ("ingest", stages.stage_ingest),
    ("hashtags", stages.stage_hashtags),
    ("topics", stages.stage_topics),
    ("sentiment", stages.stage_sentiment),
    ("privacy-train", stages.stage_privacy_train),
    ("privacy-score", stages.stage_privacy_score),
    ("urls", stages.stage_urls),
    ("vtscore", stages.stage_vtscore),
)


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def build_metadata(config: PipelineConfig) -> dict:
    """Enough to re-run bit-identically: config, seeds, input digests."""
    return {
        "tool": "privlens",
        "version": __version__,
        "config": config.to_canonical(),
        "config_hash": config.config_hash(),
        "seed": config.seed,
        "threads": config.threads,
        "bit_reproducible": True,  # merges are order-independent at any thread count
        "input_hashes": {
            str(path): _sha256(path) for path in config.input_files() if path.is_file()
        },
    }


def collect_bundle(config: PipelineConfig) -> ReportBundle:
    """Assemble the bundle from stage outputs in the output directory."""
    bundle = ReportBundle(metadata=build_metadata(config))
    for name in sorted(TABLE_SCHEMAS):
        path = config.output_dir / f"{name}.csv"
        if path.is_file():
            bundle.tables[name] = read_table_csv(name, config.output_dir)
    return bundle


def run_pipeline(config: PipelineConfig, fmt: str = "csv") -> ReportBundle:
    """Execute every stage in order and emit the validated report bundle.

    Any stage failure aborts with the stage name and cause. Identical config
    and seeds produce byte-identical outputs.
    """
    config.output_dir.mkdir(parents=True, exist_ok=True)
    for name, stage in RUN_STAGES:
        logger.info("stage %s", name)
        try:
            stage(config)
        except StageError:
            raise
        except Exception as exc:
            raise StageError(name, exc) from exc
    bundle = collect_bundle(config)
    problems = bundle.validate()
    if problems:
        raise StageError("report", "; ".join(problems))
    emit(bundle, config.output_dir, fmt="csv")
    if fmt == "json":
        emit(bundle, config.output_dir / "bundle_json", fmt="json")
    return bundle
