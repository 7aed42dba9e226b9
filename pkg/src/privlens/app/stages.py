"""Pipeline stages. Each stage reads prior stages' persisted outputs, so every
analysis is independently re-runnable; ``run`` simply chains them."""

from __future__ import annotations

import csv
import json
import logging
from collections import Counter
from pathlib import Path

from .. import sentiment as senti
from ..corpus import (
    UNCLASSIFIED,
    LoadReport,
    classify_records,
    corpus_stats,
    filter_corpus,
    infection_rate,
    load_case_series,
    load_corpus,
    load_windows,
)
from ..corpus.records import PostRecord, record_from_dict, DEFAULT_SCHEMA
from ..errors import InsufficientDataError, StageError
from ..privacy import (
    Gazetteers,
    PreparedPost,
    PrivacyHmm,
    build_hmm,
    cohort_report,
    has_pii,
    split_train_test,
)
from ..textmodel import (
    KMeans,
    LabelMap,
    LatentDirichletAllocation,
    Preprocessor,
    TfidfVectorizer,
    explode_by_hashtags,
)
from ..urlsec import (
    DomainDossier,
    IpLiteralHost,
    NoRegistrablePart,
    PublicSuffixList,
    category_distribution,
    categorize,
    extract_urls,
    fetch_reports,
    load_category_map,
    load_reports,
    registered_domain,
    tier_table,
    vtscore,
    vtscore_positive_only,
)
from .bundle import Table, write_table_csv
from .config import PipelineConfig

logger = logging.getLogger(__name__)


def _write(config: PipelineConfig, name: str, rows: list[dict]) -> Table:
    table = Table(name=name, rows=rows)
    write_table_csv(table, config.output_dir)
    return table


def _posts_path(config: PipelineConfig) -> Path:
    return config.output_dir / "posts.jsonl"


def read_classified_posts(config: PipelineConfig) -> list[tuple[PostRecord, str]]:
    """Posts written by the ingest stage, with their phase labels."""
    path = _posts_path(config)
    if not path.is_file():
        raise StageError("ingest", f"{path} not found; run the ingest stage first")
    posts: list[tuple[PostRecord, str]] = []
    report = LoadReport()
    with path.open("r", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            record = record_from_dict(obj, DEFAULT_SCHEMA, report)
            if record is None:
                raise StageError("ingest", f"corrupt intermediate line in {path}")
            posts.append((record, obj.get("phase", UNCLASSIFIED)))
    return posts


# -- ingest ----------------------------------------------------------------


def stage_ingest(config: PipelineConfig) -> dict[str, Table]:
    windows = load_windows(config.windows)
    report = LoadReport()
    records = load_corpus(
        config.corpus, schema=config.schema_map, report=report, span=config.span
    )
    dropped: Counter = Counter()
    filtered = filter_corpus(records, set(config.countries), config.language, dropped)
    classified = []
    for record, phase in classify_records(filtered, windows):
        classified.append((record, phase.value if phase is not None else UNCLASSIFIED))

    config.output_dir.mkdir(parents=True, exist_ok=True)
    with _posts_path(config).open("w", encoding="utf-8", newline="\n") as fh:
        for record, phase in classified:
            obj = record.to_dict()
            obj["phase"] = phase
            fh.write(json.dumps(obj, sort_keys=True) + "\n")

    stats = corpus_stats(classified)
    tables = {
        "posts_per_user": _write(
            config, "posts_per_user",
            [{"posts": k, "users": v} for k, v in sorted(stats.posts_per_user.items())],
        ),
        "hashtags_per_post": _write(
            config, "hashtags_per_post",
            [{"hashtags": k, "posts": v}
             for k, v in sorted(stats.hashtags_per_post.items())],
        ),
        "posts_per_phase": _write(
            config, "posts_per_phase",
            [{"country": country, "phase": phase, "posts": count}
             for (country, phase), count in sorted(stats.posts_per_phase.items())],
        ),
    }
    summary = {
        "loaded": report.loaded,
        "skipped": dict(sorted(report.skipped.items())),
        "filter_dropped": dict(sorted(dropped.items())),
        "kept": len(classified),
    }
    (config.output_dir / "ingest_summary.json").write_text(
        json.dumps(summary, sort_keys=True, indent=1) + "\n", encoding="utf-8"
    )
    return tables


# -- periods ----------------------------------------------------------------


def stage_periods(config: PipelineConfig) -> Path:
    """Infection rates per window; standalone analysis, not part of the bundle."""
    if config.case_series is None:
        raise StageError("periods", "case_series path not configured")
    windows = load_windows(config.windows)
    series = load_case_series(config.case_series)
    path = config.output_dir / "infection_rates.csv"
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["country", "phase", "start", "end", "ir"])
        for country in sorted(windows):
            if country not in series:
                logger.warning("no case series for %s; skipped", country)
                continue
            for window in windows[country]:
                rate = infection_rate(series[country], window)
                writer.writerow([
                    country, window.phase.value, window.start.isoformat(),
                    window.end.isoformat(), f"{rate.ir:.1f}",
                ])
    return path


# -- hashtag clustering -------------------------------------------------------


def stage_hashtags(config: PipelineConfig) -> dict[str, Table]:
    posts = read_classified_posts(config)
    pre = Preprocessor.from_files(config.stopwords, config.lemmas)
    label_map = LabelMap.load(config.hashtag_labels)

    exploded: list[tuple[PostRecord, str]] = []
    for record, phase in posts:
        for copy in explode_by_hashtags(record):
            exploded.append((copy, phase))
    docs = [pre.tokens(record.text) for record, _ in exploded]
    usable = [i for i, doc in enumerate(docs) if doc]
    if not usable:
        raise StageError("hashtags", "no hashtag-bearing posts with usable text")

    vectorizer = TfidfVectorizer()
    matrix = vectorizer.fit_transform([docs[i] for i in usable])
    k = min(config.k_hashtag_clusters, matrix.shape[0])
    model = KMeans(n_clusters=k, seed=config.seed, max_iter=config.kmeans_max_iter)
    model.fit(matrix)

    counts: Counter = Counter()
    for row, i in enumerate(usable):
        record, phase = exploded[i]
        label = label_map.resolve(int(model.labels_[row]))
        counts[(record.country or "", phase, label)] += 1
    rows = [
        {"country": country, "phase": phase, "label": label, "posts": n}
        for (country, phase, label), n in sorted(counts.items())
    ]
    tables = {"hashtag_clusters": _write(config, "hashtag_clusters", rows)}
    dump = {
        "version": 1,
        "kind": "hashtag_model",
        "vectorizer": vectorizer.to_json(),
        "kmeans": model.to_json(),
    }
    (config.output_dir / "hashtag_model.json").write_text(
        json.dumps(dump, sort_keys=True) + "\n", encoding="utf-8"
    )
    return tables


# -- topics -------------------------------------------------------------------


def stage_topics(config: PipelineConfig) -> Path:
    posts = read_classified_posts(config)
    pre = Preprocessor.from_files(config.stopwords, config.lemmas)
    label_map = LabelMap.load(config.topic_labels)

    docs = [pre.tokens(record.text) for record, _ in posts]
    fit_docs = [doc for doc in docs if doc]
    if not fit_docs:
        raise StageError("topics", "no posts with usable text")
    lda = LatentDirichletAllocation(
        n_topics=config.n_topics, n_iter=config.lda_iters, seed=config.seed
    )
    lda.fit(fit_docs)

    path = config.output_dir / "topics.csv"
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["post_id", "topic_id", "label"])
        for (record, _), doc in zip(posts, docs):
            theta = lda.transform(doc, seed=config.seed)
            topic_id = int(theta.argmax())
            writer.writerow([record.post_id, topic_id, label_map.resolve(topic_id)])
    dump = {"version": 1, "kind": "topics_model", "lda": lda.to_json()}
    (config.output_dir / "topics_model.json").write_text(
        json.dumps(dump, sort_keys=True) + "\n", encoding="utf-8"
    )
    return path


def read_topic_map(config: PipelineConfig) -> dict[str, tuple[int, str]]:
    path = config.output_dir / "topics.csv"
    if not path.is_file():
        raise StageError("topics", f"{path} not found; run the topics stage first")
    mapping: dict[str, tuple[int, str]] = {}
    with path.open("r", encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            mapping[row["post_id"]] = (int(row["topic_id"]), row["label"])
    return mapping


# -- sentiment ----------------------------------------------------------------


def stage_sentiment(config: PipelineConfig) -> dict[str, Table]:
    posts = read_classified_posts(config)
    topic_map = read_topic_map(config)
    pre = Preprocessor.from_files(config.stopwords, config.lemmas)
    lexicon = senti.load_lexicon(config.lexicon)

    labelled = []
    for record, phase in posts:
        topic_label = topic_map.get(record.post_id, (None, "Unassigned"))[1]
        polarity = senti.score(pre.tokens(record.text), lexicon)
        labelled.append(
            ((topic_label, phase), senti.label(polarity, config.sentiment_threshold))
        )
    shares = senti.aggregate(labelled)
    rows = [
        {
            "topic": topic, "phase": phase,
            "positive": share.positive, "neutral": share.neutral,
            "negative": share.negative,
        }
        for (topic, phase), share in sorted(shares.items())
    ]
    return {"sentiment": _write(config, "sentiment", rows)}


# -- privacy ------------------------------------------------------------------


def _prepare_posts(config: PipelineConfig, posts, pre, gazetteers):
    """Tokenise once; PII detection runs on the raw text (case matters)."""
    prepared = []
    for record, phase in posts:
        tokens = pre.tokens(record.text)
        prepared.append(
            {
                "record": record,
                "phase": phase,
                "tokens": tokens,
                "text": " ".join(tokens),
                "pii": has_pii(record.text, gazetteers),
            }
        )
    return prepared


def stage_privacy_train(config: PipelineConfig) -> Path:
    posts = read_classified_posts(config)
    pre = Preprocessor.from_files(config.stopwords, config.lemmas)
    gazetteers = Gazetteers.from_dir(config.gazetteers)
    prepared = _prepare_posts(config, posts, pre, gazetteers)

    train, _ = split_train_test(
        [p["record"] for p in prepared], ratio=config.train_ratio, seed=config.seed
    )
    train_ids = {r.post_id for r in train}
    train_items = [p for p in prepared if p["record"].post_id in train_ids]
    if not train_items:
        raise StageError("privacy", "training split is empty")

    vectorizer = TfidfVectorizer()
    fit_docs = [p["tokens"] for p in train_items if p["tokens"]]
    if not fit_docs:
        raise StageError("privacy", "no usable training documents")
    vectorizer.fit(fit_docs)

    matrix = vectorizer.transform([p["tokens"] for p in train_items])
    k = min(config.privacy_clusters, matrix.shape[0])
    clusterer = KMeans(n_clusters=k, seed=config.seed, max_iter=config.kmeans_max_iter)
    clusterer.fit(matrix)

    train_posts = [
        PreparedPost(
            user_id=p["record"].user_id,
            timestamp=p["record"].timestamp,
            text=p["text"],
            vector=vectorizer.doc_vector(p["tokens"]),
            cluster=int(clusterer.labels_[i]),
            has_pii=p["pii"],
            post_id=p["record"].post_id,
        )
        for i, p in enumerate(train_items)
    ]
    models = build_hmm(train_posts, tau_sim=config.tau_sim, threads=config.threads)
    dump = {
        "version": 1,
        "kind": "privacy_model",
        "tau_sim": config.tau_sim,
        "train_ratio": config.train_ratio,
        "seed": config.seed,
        "vectorizer": vectorizer.to_json(),
        "merged": models.merged.to_json(),
        "pii": models.pii.to_json(),
        "n_train_posts": len(train_posts),
        "n_clusters": k,
    }
    path = config.output_dir / "privacy_model.json"
    path.write_text(json.dumps(dump, sort_keys=True) + "\n", encoding="utf-8")
    return path


def stage_privacy_score(config: PipelineConfig) -> dict[str, Table]:
    model_path = config.output_dir / "privacy_model.json"
    if not model_path.is_file():
        raise StageError("privacy", f"{model_path} not found; run privacy train first")
    dump = json.loads(model_path.read_text(encoding="utf-8"))
    vectorizer = TfidfVectorizer.from_json(dump["vectorizer"])
    merged = PrivacyHmm.from_json(dump["merged"])
    pii_model = PrivacyHmm.from_json(dump["pii"])

    posts = read_classified_posts(config)
    try:
        topic_map = read_topic_map(config)
    except StageError:
        logger.warning("topics.csv missing; scoring without topic grouping")
        topic_map = {}
    pre = Preprocessor.from_files(config.stopwords, config.lemmas)
    gazetteers = Gazetteers.from_dir(config.gazetteers)
    prepared = _prepare_posts(config, posts, pre, gazetteers)

    _, test = split_train_test(
        [p["record"] for p in prepared],
        ratio=float(dump["train_ratio"]),
        seed=int(dump["seed"]),
    )
    test_ids = {r.post_id for r in test}
    test_posts = [
        PreparedPost(
            user_id=p["record"].user_id,
            timestamp=p["record"].timestamp,
            text=p["text"],
            vector=vectorizer.doc_vector(p["tokens"]),
            has_pii=p["pii"],
            topic=topic_map.get(p["record"].post_id, (None, "Unassigned"))[1],
            phase=p["phase"],
            post_id=p["record"].post_id,
        )
        for p in prepared
        if p["record"].post_id in test_ids
    ]
    if not test_posts:
        raise InsufficientDataError("test split is empty; corpus too small to score")

    report = cohort_report(merged, pii_model, test_posts)

    with (config.output_dir / "traces.jsonl").open(
        "w", encoding="utf-8", newline="\n"
    ) as fh:
        for trace in report.traces:
            fh.write(trace.to_json() + "\n")

    cdf_rows = []
    for (topic, phase), risks in report.risk_cdf.items():
        n = len(risks)
        for i, risk in enumerate(risks, start=1):
            cdf_rows.append(
                {
                    "topic": str(topic), "phase": phase,
                    "risk": risk, "cdf": i / n,
                }
            )
    vs_rows = [
        {"n_posts": n, "users": users, "mean_risk": mean}
        for n, users, mean in report.risk_vs_posts
    ]
    unique_rows = [
        {"phase": phase, "unique_sequences": unique, "fully_identified": identified}
        for phase, (unique, identified) in sorted(report.unique_sequences.items())
    ]
    return {
        "risk_cdf": _write(config, "risk_cdf", cdf_rows),
        "risk_vs_posts": _write(config, "risk_vs_posts", vs_rows),
        "unique_sequences": _write(config, "unique_sequences", unique_rows),
    }


# -- urls / vtscore -------------------------------------------------------------


def stage_urls(config: PipelineConfig) -> dict[str, Table]:
    posts = read_classified_posts(config)
    psl = PublicSuffixList()
    category_map = load_category_map(config.category_map)

    shares: Counter = Counter()  # (domain, country, phase) -> count
    categories: dict[str, str] = {}
    invalid = 0
    unregistrable = 0
    for record, phase in posts:
        urls, dropped = extract_urls(record)
        invalid += dropped
        for url in urls:
            try:
                domain = registered_domain(url, psl).registered
                category = categorize(domain, category_map)
            except IpLiteralHost as exc:
                domain = str(exc)
                category = "ip-literal"
            except (NoRegistrablePart, ValueError):
                unregistrable += 1
                continue
            shares[(domain, record.country or "", phase)] += 1
            categories[domain] = category

    with (config.output_dir / "domains.csv").open(
        "w", encoding="utf-8", newline="\n"
    ) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["domain", "country", "phase", "category", "shares"])
        for (domain, country, phase), count in sorted(shares.items()):
            writer.writerow([domain, country, phase, categories[domain], count])

    category_counts: Counter = Counter()
    for (domain, country, phase), count in shares.items():
        category_counts[(country, phase, categories[domain])] += count
    rows = [
        {"country": country, "phase": phase, "category": category, "shares": count}
        for (country, phase, category), count in sorted(category_counts.items())
    ]
    summary = {"invalid_urls": invalid, "unregistrable_hosts": unregistrable}
    (config.output_dir / "urls_summary.json").write_text(
        json.dumps(summary, sort_keys=True, indent=1) + "\n", encoding="utf-8"
    )
    return {"domain_categories": _write(config, "domain_categories", rows)}


def read_domain_shares(config: PipelineConfig):
    path = config.output_dir / "domains.csv"
    if not path.is_file():
        raise StageError("urls", f"{path} not found; run the urls stage first")
    rows = []
    with path.open("r", encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            rows.append(row)
    return rows


def stage_vtscore(config: PipelineConfig) -> dict[str, Table]:
    score_fn = vtscore_positive_only if config.vtscore_positive_denominator else vtscore
    share_rows = read_domain_shares(config)

    dossiers: dict[str, DomainDossier] = {}
    for row in share_rows:
        dossier = dossiers.setdefault(
            row["domain"], DomainDossier(domain=row["domain"], category=row["category"])
        )
        dossier.share_counts[(row["country"], row["phase"])] += int(row["shares"])

    client = None
    if not config.offline:
        from ..urlsec import ScannerClient

        client = ScannerClient(requests_per_minute=4)  # fatal without an API key
    cache = config.report_cache
    for domain in sorted(dossiers):
        if client is not None:
            reports = fetch_reports(domain, config.vtscore_window, client, cache)
        else:
            reports = load_reports(cache, domain=domain) if cache else []
        dossiers[domain].score = score_fn(reports, config.vtscore_window)

    score_path = config.output_dir / "vtscores.csv"
    with score_path.open("w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["domain", "score", "reports"])
        for domain in sorted(dossiers):
            score = dossiers[domain].score
            if score is not None:
                writer.writerow([domain, f"{score.score:.6f}", score.report_count])

    table = tier_table(dossiers.values(), config.vtscore_thresholds)
    phases = sorted({phase for per in table.values() for phase in per})
    tier_rows = [
        {
            "threshold": threshold, "phase": phase,
            "total": table[threshold].get(phase, (0, 0))[0],
            "unique": table[threshold].get(phase, (0, 0))[1],
        }
        for threshold in sorted(table)
        for phase in phases
    ]
    dist = category_distribution(dossiers.values())
    dist_rows = [
        {"country": country, "phase": phase, "category": category, "fraction": fraction}
        for (country, phase), fractions in sorted(dist.items())
        for category, fraction in sorted(fractions.items())
    ]
    return {
        "tier_table": _write(config, "tier_table", tier_rows),
        "suspicious_categories": _write(config, "suspicious_categories", dist_rows),
    }
