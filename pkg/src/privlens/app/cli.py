"""Command line interface.

Exit codes: 0 success, 2 configuration error, 3 stage failure.
"""

from __future__ import annotations

import logging
import sys

import click

from ..errors import ConfigError, StageError
from . import stages
from .bundle import emit
from .config import PipelineConfig, validate_config
from .pipeline import build_metadata, collect_bundle, run_pipeline

EXIT_CONFIG = 2
EXIT_STAGE = 3

logger = logging.getLogger(__name__)


def _load_config(path: str, offline: bool | None, threads: int | None) -> PipelineConfig:
    try:
        config = validate_config(path)
    except ConfigError as exc:
        for violation in exc.violations:
            click.echo(f"config error: {violation}", err=True)
        sys.exit(EXIT_CONFIG)
    if offline is not None:
        config.offline = offline
    if threads is not None:
        config.threads = threads
    return config


def _run_stage(name: str, fn, config: PipelineConfig) -> None:
    try:
        fn(config)
    except StageError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_STAGE)
    except Exception as exc:  # any module failure aborts with stage name and cause
        click.echo(f"error: stage '{name}' failed: {exc}", err=True)
        sys.exit(EXIT_STAGE)
    click.echo(f"{name}: done -> {config.output_dir}")


config_option = click.option(
    "-c", "--config", "config_path", required=True,
    type=click.Path(exists=False), help="Pipeline config JSON.",
)
offline_option = click.option(
    "--offline/--online", default=None,
    help="Forbid all network use (default comes from the config).",
)
threads_option = click.option(
    "--threads", type=int, default=None,
    help="Worker threads; 1 guarantees the bit-reproducible path.",
)


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Debug logging.")
def main(verbose: bool) -> None:
    """Privacy and security analytics over anonymised post corpora."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )


def _simple_stage(name: str, fn, help_text: str):
    @main.command(name=name, help=help_text)
    @config_option
    @offline_option
    @threads_option
    def command(config_path, offline, threads):
        config = _load_config(config_path, offline, threads)
        _run_stage(name, fn, config)

    return command


_simple_stage("ingest", stages.stage_ingest,
              "Load, filter, and phase-classify the corpus; emit corpus stats.")
_simple_stage("periods", stages.stage_periods,
              "Compute infection rates per lockdown window from a case series.")
_simple_stage("hashtags", stages.stage_hashtags,
              "Explode posts by hashtag, cluster them, and count labels.")
_simple_stage("topics", stages.stage_topics,
              "Fit topics over all posts and assign a labelled topic to each.")
_simple_stage("sentiment", stages.stage_sentiment,
              "Score polarity per post and aggregate shares by topic and phase.")
_simple_stage("urls", stages.stage_urls,
              "Extract URLs, parse registered domains, and categorise them.")
_simple_stage("vtscore", stages.stage_vtscore,
              "Aggregate scanner reports into domain scores and suspicion tiers.")


@main.group()
def privacy() -> None:
    """Privacy-risk model training and scoring."""


@privacy.command("train")
@config_option
@offline_option
@threads_option
def privacy_train(config_path, offline, threads):
    config = _load_config(config_path, offline, threads)
    _run_stage("privacy train", stages.stage_privacy_train, config)


@privacy.command("score")
@config_option
@offline_option
@threads_option
def privacy_score(config_path, offline, threads):
    config = _load_config(config_path, offline, threads)
    _run_stage("privacy score", stages.stage_privacy_score, config)


@main.command("report")
@config_option
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
def report(config_path, fmt):
    """Validate stage outputs and emit the report bundle with metadata."""
    config = _load_config(config_path, None, None)
    bundle = collect_bundle(config)
    problems = bundle.validate()
    if problems:
        for problem in problems:
            click.echo(f"bundle error: {problem}", err=True)
        sys.exit(EXIT_STAGE)
    target = config.output_dir if fmt == "csv" else config.output_dir / "bundle_json"
    emit(bundle, target, fmt=fmt)
    click.echo(f"report: {len(bundle.tables)} tables -> {target}")


@main.command("run")
@config_option
@offline_option
@threads_option
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
def run(config_path, offline, threads, fmt):
    """Execute the full pipeline and emit a validated bundle."""
    config = _load_config(config_path, offline, threads)
    try:
        bundle = run_pipeline(config, fmt=fmt)
    except StageError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_STAGE)
    click.echo(
        f"run: {len(bundle.tables)} tables, config {bundle.metadata['config_hash'][:12]} "
        f"-> {config.output_dir}"
    )


@main.command("metadata")
@config_option
def metadata(config_path):
    """Print run metadata (config hash and input digests) without running."""
    import json

    config = _load_config(config_path, None, None)
    click.echo(json.dumps(build_metadata(config), sort_keys=True, indent=1))


if __name__ == "__main__":
    main()
