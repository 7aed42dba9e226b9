"""Pipeline configuration: loading, validation, and hashing."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, fields
from datetime import date
from pathlib import Path

from .. import datafiles
from ..corpus.periods import load_windows
from ..errors import ConfigError

DEFAULT_THRESHOLDS = (3, 10, 20, 40, 55)


@dataclass
class PipelineConfig:
    corpus: Path
    output_dir: Path
    countries: tuple[str, ...] = ("AU", "GB", "IN", "US")
    language: str = "en"
    schema_map: dict | None = None
    span: tuple[date, date] | None = None
    windows: Path = field(default_factory=datafiles.lockdown_windows_path)
    case_series: Path | None = None
    stopwords: Path = field(default_factory=datafiles.stopwords_path)
    lemmas: Path = field(default_factory=datafiles.lemmas_path)
    lexicon: Path = field(default_factory=datafiles.lexicon_path)
    gazetteers: Path = field(default_factory=datafiles.gazetteer_dir)
    category_map: Path = field(default_factory=datafiles.category_map_path)
    report_cache: Path | None = None
    hashtag_labels: Path = field(default_factory=datafiles.hashtag_labels_path)
    topic_labels: Path = field(default_factory=datafiles.topic_labels_path)
    k_hashtag_clusters: int = 15
    n_topics: int = 15
    privacy_clusters: int = 14
    tau_sim: float = 0.8
    train_ratio: float = 0.8
    sentiment_threshold: float = 0.05
    vtscore_thresholds: tuple[int, ...] = DEFAULT_THRESHOLDS
    vtscore_window: tuple[date, date] = (date(2020, 1, 1), date(2021, 11, 6))
    vtscore_positive_denominator: bool = False
    lda_iters: int = 100
    kmeans_max_iter: int = 50
    max_path_len: int = 6
    max_paths: int = 100_000
    seed: int = 7
    threads: int = 1
    offline: bool = True

    def to_canonical(self) -> dict:
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, Path):
                value = str(value)
            elif isinstance(value, tuple):
                value = [v.isoformat() if isinstance(v, date) else v for v in value]
            out[f.name] = value
        return out

    def config_hash(self) -> str:
        canonical = json.dumps(self.to_canonical(), sort_keys=True)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def input_files(self) -> list[Path]:
        """Every input file a full run may read."""
        paths = [
            self.corpus, self.windows, self.stopwords, self.lemmas, self.lexicon,
            self.category_map, self.hashtag_labels, self.topic_labels,
        ]
        paths.extend(sorted(self.gazetteers.glob("*.txt")))
        if self.case_series is not None:
            paths.append(self.case_series)
        if self.report_cache is not None and self.report_cache.is_file():
            paths.append(self.report_cache)
        return paths


def _parse_date_pair(raw, name: str, violations: list[str]):
    try:
        lo, hi = raw
        pair = (date.fromisoformat(str(lo)), date.fromisoformat(str(hi)))
    except (TypeError, ValueError):
        violations.append(f"{name} must be a pair of ISO dates")
        return None
    if pair[0] > pair[1]:
        violations.append(f"{name}: start {pair[0]} is after end {pair[1]}")
        return None
    return pair


def validate_config(path) -> PipelineConfig:
    """Resolve a JSON config file into a PipelineConfig.

    Raises :class:`ConfigError` carrying every violation found, not just the
    first one.
    """
    path = Path(path)
    violations: list[str] = []
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError([f"config file not found: {path}"]) from None
    except json.JSONDecodeError as exc:
        raise ConfigError([f"config is not valid JSON: {exc}"]) from None
    if not isinstance(raw, dict):
        raise ConfigError(["config must be a JSON object"])

    base = path.parent

    def resolve(key, default=None, required=False):
        value = raw.get(key)
        if value in (None, ""):
            if required:
                violations.append(f"missing required path: {key}")
            return default
        p = Path(value)
        p = p if p.is_absolute() else (base / p)
        return p

    corpus = resolve("corpus", required=True)
    output_dir = resolve("output_dir") or (base / "out")

    config = PipelineConfig(corpus=corpus or Path("missing"), output_dir=output_dir)
    for key, attr in [
        ("windows", "windows"), ("case_series", "case_series"),
        ("stopwords", "stopwords"), ("lemmas", "lemmas"), ("lexicon", "lexicon"),
        ("gazetteers", "gazetteers"), ("category_map", "category_map"),
        ("report_cache", "report_cache"), ("hashtag_labels", "hashtag_labels"),
        ("topic_labels", "topic_labels"),
    ]:
        value = resolve(key)
        if value is not None:
            setattr(config, attr, value)

    if isinstance(raw.get("countries"), list) and raw["countries"]:
        config.countries = tuple(str(c).upper() for c in raw["countries"])
    elif "countries" in raw:
        violations.append("countries must be a non-empty list")
    if "language" in raw:
        config.language = str(raw["language"])
    if isinstance(raw.get("schema_map"), dict):
        config.schema_map = {str(k): str(v) for k, v in raw["schema_map"].items()}
    if raw.get("span") is not None:
        config.span = _parse_date_pair(raw["span"], "span", violations)
    if raw.get("vtscore_window") is not None:
        window = _parse_date_pair(raw["vtscore_window"], "vtscore_window", violations)
        if window:
            config.vtscore_window = window
    if isinstance(raw.get("vtscore_thresholds"), list):
        config.vtscore_thresholds = tuple(int(t) for t in raw["vtscore_thresholds"])

    for key, caster in [
        ("k_hashtag_clusters", int), ("n_topics", int), ("privacy_clusters", int),
        ("tau_sim", float), ("train_ratio", float), ("sentiment_threshold", float),
        ("lda_iters", int), ("kmeans_max_iter", int), ("max_path_len", int),
        ("max_paths", int), ("seed", int), ("threads", int),
    ]:
        if key in raw:
            try:
                setattr(config, key, caster(raw[key]))
            except (TypeError, ValueError):
                violations.append(f"{key} must be a {caster.__name__}")
    for key in ("offline", "vtscore_positive_denominator"):
        if key in raw:
            if isinstance(raw[key], bool):
                setattr(config, key, raw[key])
            else:
                violations.append(f"{key} must be a boolean")

    # Range checks, all reported together.
    if not 0.0 <= config.tau_sim <= 1.0:
        violations.append(f"tau_sim must be in [0, 1], got {config.tau_sim}")
    if not 0.0 < config.train_ratio < 1.0:
        violations.append(f"train_ratio must be in (0, 1), got {config.train_ratio}")
    if config.sentiment_threshold < 0:
        violations.append("sentiment_threshold must be >= 0")
    for name in ("k_hashtag_clusters", "n_topics", "privacy_clusters",
                 "lda_iters", "kmeans_max_iter", "max_path_len", "max_paths",
                 "threads"):
        if getattr(config, name) < 1:
            violations.append(f"{name} must be >= 1")
    if any(t < 0 for t in config.vtscore_thresholds):
        violations.append("vtscore_thresholds must be non-negative")

    # Referenced files must exist at validation time.
    for name, p, must in [
        ("corpus", corpus, True), ("windows", config.windows, True),
        ("stopwords", config.stopwords, True), ("lemmas", config.lemmas, True),
        ("lexicon", config.lexicon, True), ("category_map", config.category_map, True),
        ("hashtag_labels", config.hashtag_labels, True),
        ("topic_labels", config.topic_labels, True),
        ("case_series", config.case_series, False),
    ]:
        if p is None:
            continue
        if must and not p.is_file():
            violations.append(f"{name} file not found: {p}")
        elif not must and p is not None and not p.is_file():
            violations.append(f"{name} file not found: {p}")
    if not config.gazetteers.is_dir():
        violations.append(f"gazetteers directory not found: {config.gazetteers}")

    if config.windows.is_file():
        try:
            load_windows(config.windows)
        except ConfigError as exc:
            violations.extend(f"windows: {v}" for v in exc.violations)

    # Label maps must cover every id the configured arities can produce.
    from ..textmodel.labels import LabelMap

    for name, path, n_ids in [
        ("topic_labels", config.topic_labels, config.n_topics),
        ("hashtag_labels", config.hashtag_labels, config.k_hashtag_clusters),
    ]:
        if not path.is_file():
            continue
        try:
            label_map = LabelMap.load(path)
        except (ValueError, KeyError) as exc:
            violations.append(f"{name}: {exc}")
            continue
        uncovered = [i for i in range(n_ids) if i not in label_map._resolved]
        if uncovered:
            violations.append(
                f"{name} does not label ids {uncovered} (need 0..{n_ids - 1})"
            )

    if violations:
        raise ConfigError(violations)
    return config
