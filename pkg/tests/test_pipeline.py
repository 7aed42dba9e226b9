import json
import shutil
from pathlib import Path

import pytest

from privlens.app import validate_config
from privlens.app.pipeline import run_pipeline
from privlens.errors import StageError


def make_workspace(tmp_path, fixtures_dir, **overrides):
    for name in ("corpus_500.jsonl", "case_series.csv", "report_cache.jsonl"):
        shutil.copy(fixtures_dir / name, tmp_path / name)
    config = {
        "corpus": "corpus_500.jsonl",
        "output_dir": "out",
        "case_series": "case_series.csv",
        "report_cache": "report_cache.jsonl",
        "span": ["2020-01-01", "2021-06-21"],
        "lda_iters": 10,
        "kmeans_max_iter": 20,
        "seed": 7,
        "offline": True,
    }
    config.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config))
    return validate_config(path)


def snapshot(directory: Path) -> dict[str, bytes]:
    return {
        p.name: p.read_bytes() for p in sorted(directory.glob("*")) if p.is_file()
    }


class TestRunPipeline:
    def test_bundle_schema_valid(self, tmp_path, fixtures_dir):
        config = make_workspace(tmp_path, fixtures_dir)
        bundle = run_pipeline(config)
        assert bundle.validate() == []
        assert len(bundle.tables) == 11

    def test_rerun_byte_identical(self, tmp_path, fixtures_dir):
        config = make_workspace(tmp_path, fixtures_dir)
        run_pipeline(config)
        first = snapshot(config.output_dir)
        run_pipeline(config)
        second = snapshot(config.output_dir)
        assert first.keys() == second.keys()
        for name in first:
            assert first[name] == second[name], f"{name} differs between runs"

    def test_offline_without_cache_emits_empty_but_valid(self, tmp_path, fixtures_dir):
        config = make_workspace(tmp_path, fixtures_dir)
        config.report_cache = tmp_path / "missing_cache.jsonl"
        bundle = run_pipeline(config)
        assert bundle.validate() == []
        tiers = bundle.tables["tier_table"].rows
        assert tiers, "tier table should carry explicit zero rows"
        assert all(r["total"] == 0 and r["unique"] == 0 for r in tiers)
        assert bundle.tables["suspicious_categories"].rows == []

    def test_stage_failure_carries_stage_name(self, tmp_path, fixtures_dir):
        config = make_workspace(tmp_path, fixtures_dir)
        config.corpus = tmp_path / "vanished.jsonl"
        with pytest.raises(StageError, match="ingest"):
            run_pipeline(config)

    def test_metadata_hashes_inputs(self, tmp_path, fixtures_dir):
        config = make_workspace(tmp_path, fixtures_dir)
        bundle = run_pipeline(config)
        hashed = set(bundle.metadata["input_hashes"])
        assert str(config.corpus) in hashed
        assert str(config.windows) in hashed
        assert str(config.lexicon) in hashed
