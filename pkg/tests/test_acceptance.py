"""Acceptance criteria, one test per criterion, at the stated tolerances."""

import json
import math
import shutil
import time
from datetime import date

import numpy as np
import pytest
from sklearn.metrics import adjusted_rand_score

from privlens import sentiment as senti
from privlens.app import validate_config
from privlens.app.pipeline import run_pipeline
from privlens.corpus import (
    CaseSeries,
    PeriodWindow,
    Phase,
    filter_corpus,
    infection_rate,
    load_case_series,
    load_corpus,
)
from privlens.privacy import (
    Gazetteers,
    PreparedPost,
    build_hmm,
    cohort_report,
    has_pii,
    oracle_sequence_privacy,
    sequence_privacy,
    split_train_test,
)
from privlens.sentiment import SentimentLabel
from privlens.textmodel import (
    KMeans,
    LatentDirichletAllocation,
    Preprocessor,
    TfidfVectorizer,
)
from privlens.urlsec import DomainDossier, ScanReport, VtScore, tier_table, vtscore

from conftest import symbol_post
from test_hmm_properties import random_micro_corpus, models_for
from test_lda import disjoint_corpus, token_purity

WINDOW = (date(2020, 1, 1), date(2021, 11, 6))


# -- criterion 1: brute-force oracle equivalence ------------------------------


def test_criterion_01_sequence_privacy_matches_bruteforce_oracle():
    rng = np.random.default_rng(1001)
    started = time.perf_counter()
    for _ in range(200):
        train, symbols = random_micro_corpus(rng)
        models = models_for(train)
        user = f"u{int(rng.integers(len(train)))}"
        length = int(rng.integers(1, 6))  # sequences of up to 5 posts
        pool = symbols + ["zulu"]
        test_symbols = [pool[int(rng.integers(len(pool)))] for _ in range(length)]
        posts = [symbol_post(user, 60 + i, s) for i, s in enumerate(test_symbols)]
        mine = sequence_privacy(models.merged, models.pii, user, posts)
        expected = oracle_sequence_privacy(train, user, test_symbols)
        assert mine.privacy_probability == pytest.approx(expected, abs=1e-12)
    assert time.perf_counter() - started < 10.0


# -- criterion 2: risk monotonicity ------------------------------------------


def test_criterion_02_risk_monotone_factors_bounded():
    rng = np.random.default_rng(1002)
    sequences = 0
    for _ in range(50):
        train, symbols = random_micro_corpus(rng)
        models = models_for(train)
        for _ in range(20):
            user = f"u{int(rng.integers(len(train)))}"
            pool = symbols + ["zulu"]
            test_symbols = [pool[int(rng.integers(len(pool)))]
                            for _ in range(int(rng.integers(1, 6)))]
            posts = [symbol_post(user, 60 + i, s) for i, s in enumerate(test_symbols)]
            trace = sequence_privacy(models.merged, models.pii, user, posts)
            risks = [trace.risk_after(n) for n in range(len(posts) + 1)]
            assert all(b >= a - 1e-15 for a, b in zip(risks, risks[1:]))
            assert all(0.0 <= s.factor <= 1.0 for s in trace.steps)
            sequences += 1
    assert sequences == 1000


# -- criteria 3 and 4: heavy-tail corpus -------------------------------------


@pytest.fixture(scope="module")
def heavy_tail_scores(fixtures_dir):
    """Privacy models and cohort report for the shipped 5k/300-user corpus."""
    started = time.perf_counter()
    records = list(
        filter_corpus(
            load_corpus(fixtures_dir / "corpus_5k.jsonl"),
            {"AU", "GB", "IN", "US"}, "en",
        )
    )
    assert len(records) == 5000
    assert len({r.user_id for r in records}) == 300

    pre = Preprocessor.from_files()
    gazetteers = Gazetteers.from_dir()
    tokens = {r.post_id: pre.tokens(r.text) for r in records}
    pii_flags = {r.post_id: has_pii(r.text, gazetteers) for r in records}

    train, test = split_train_test(records, ratio=0.8, seed=7)
    vectorizer = TfidfVectorizer()
    vectorizer.fit([tokens[r.post_id] for r in train if tokens[r.post_id]])
    matrix = vectorizer.transform([tokens[r.post_id] for r in train])
    clusterer = KMeans(n_clusters=14, seed=7, max_iter=50).fit(matrix)

    def prepared(record, cluster=0):
        return PreparedPost(
            user_id=record.user_id,
            timestamp=record.timestamp,
            text=" ".join(tokens[record.post_id]),
            vector=vectorizer.doc_vector(tokens[record.post_id]),
            cluster=cluster,
            has_pii=pii_flags[record.post_id],
            post_id=record.post_id,
        )

    train_posts = [
        prepared(r, cluster=int(clusterer.labels_[i])) for i, r in enumerate(train)
    ]
    test_posts = [prepared(r) for r in test]
    models = build_hmm(train_posts, tau_sim=0.8)
    report = cohort_report(models.merged, models.pii, test_posts)
    elapsed = time.perf_counter() - started
    return models, train_posts, test_posts, report, elapsed


def test_criterion_03_mean_risk_reaches_one_quickly(heavy_tail_scores):
    _, _, _, report, elapsed = heavy_tail_scores
    rows = {n: mean for n, _, mean in report.risk_vs_posts}
    assert rows[1] >= 0.90
    assert rows[3] >= 0.99
    assert elapsed < 60.0


def test_criterion_04_pii_never_lowers_risk(heavy_tail_scores):
    models, train_posts, test_posts, _, _ = heavy_tail_scores
    pii_train = [p for p in train_posts if p.has_pii]
    pii_users = sorted({p.user_id for p in pii_train})
    assert pii_users, "heavy-tail fixture must contain PII users"

    by_user = {}
    for post in test_posts:
        by_user.setdefault(post.user_id, []).append(post)

    checked = 0
    for user in pii_users:
        sequence = sorted(by_user.get(user, []), key=lambda p: p.timestamp)
        if not sequence:
            continue
        with_pii = sequence_privacy(models.merged, models.pii, user, sequence)
        stripped = [p for p in pii_train if p.user_id != user]
        if stripped:
            stripped_models = build_hmm(stripped, tau_sim=0.8)
            pii_model = stripped_models.pii
        else:
            pii_model = build_hmm(
                [PreparedPost(user_id="_none", timestamp=sequence[0].timestamp,
                              text="_", vector={0: 1.0})],
                tau_sim=0.8,
            ).pii
        without_pii = sequence_privacy(models.merged, pii_model, user, sequence)
        assert without_pii.privacy_probability >= with_pii.privacy_probability - 1e-15
        assert without_pii.linkability.value == 1.0
        checked += 1
    assert checked > 0


# -- criterion 5: infection rate ---------------------------------------------


def test_criterion_05a_synthetic_series_exact():
    series = CaseSeries(
        country="AU",
        entries=(
            (date(2020, 3, 1), 10), (date(2020, 3, 2), 20), (date(2020, 3, 3), 30),
        ),
    )
    window = PeriodWindow("AU", Phase.DURING, date(2020, 3, 1), date(2020, 3, 3))
    assert infection_rate(series, window).ir == 20.0


def test_criterion_05b_public_au_series(fixtures_dir):
    fixture = fixtures_dir / "owid_au_2020.csv"
    if not fixture.is_file():
        pytest.skip(
            "notice: public daily case-series fixture for Australia is not "
            "vendored (fixtures/owid_au_2020.csv); expected ir 229.4 +/- 0.5 "
            "for 2020-03-21..2020-05-15 cannot be checked offline"
        )
    series = load_case_series(fixture)["AU"]
    window = PeriodWindow("AU", Phase.DURING, date(2020, 3, 21), date(2020, 5, 15))
    assert infection_rate(series, window).ir == pytest.approx(229.4, abs=0.5)


# -- criterion 6: TF-IDF -------------------------------------------------------


def test_criterion_06_tfidf_hand_fixture_and_invariance():
    docs = [["a", "b"], ["a", "c"], ["a"]]
    v = TfidfVectorizer().fit(docs)
    idf_a = math.log(4 / 4) + 1
    idf_b = math.log(4 / 2) + 1
    norm = math.sqrt(idf_a ** 2 + idf_b ** 2)
    got = v.doc_vector(["a", "b"])
    index = v.vocabulary_.index
    assert got[index["a"]] == pytest.approx(idf_a / norm, abs=1e-12)
    assert got[index["b"]] == pytest.approx(idf_b / norm, abs=1e-12)

    doubled = [d + d for d in docs]
    v2 = TfidfVectorizer().fit(doubled)
    for doc, twice in zip(docs, doubled):
        a, b = v.doc_vector(doc), v2.doc_vector(twice)
        assert a.keys() == b.keys()
        assert all(b[k] == a[k] for k in a)  # exact, not approximate


# -- criterion 7: K-Means --------------------------------------------------------


def test_criterion_07_kmeans_blobs_inertia_determinism():
    rng = np.random.default_rng(1007)
    a = rng.normal(0, 0.05, size=(40, 5)) + np.array([1, 0, 0, 0, 0])
    b = rng.normal(0, 0.05, size=(40, 5)) + np.array([0, 0, 0, 1, 0])
    X = np.vstack([a, b])
    truth = np.array([0] * 40 + [1] * 40)

    model = KMeans(n_clusters=2, seed=11).fit(X)
    assert adjusted_rand_score(truth, model.labels_) == 1.0
    history = model.inertia_history_
    assert all(later <= earlier + 1e-9 for earlier, later in zip(history, history[1:]))
    again = KMeans(n_clusters=2, seed=11).fit(X)
    assert np.array_equal(model.labels_, again.labels_)
    assert model.inertia_ == again.inertia_


# -- criterion 8: LDA ------------------------------------------------------------


def test_criterion_08_lda_purity_normalisation_conservation():
    docs, groups = disjoint_corpus()
    total_tokens = sum(len(d) for d in docs)
    conserved = []
    model = LatentDirichletAllocation(n_topics=2, alpha=0.1, beta=0.01,
                                      n_iter=150, seed=3)
    model.fit(docs, on_sweep=lambda counts: conserved.append(int(counts.sum())))
    assert all(c == total_tokens for c in conserved)
    assert len(conserved) == 150
    assert np.allclose(model.phi_.sum(axis=1), 1.0, atol=1e-9)
    assert np.allclose(model.theta_.sum(axis=1), 1.0, atol=1e-9)
    assert token_purity(model, docs, groups) >= 0.95


# -- criterion 9: sentiment ------------------------------------------------------


def test_criterion_09_sentiment_formula_and_properties():
    assert senti.compound_of(2.0) == pytest.approx(2 / math.sqrt(19), abs=1e-9)

    rng = np.random.default_rng(1009)
    raws = rng.uniform(-100, 100, size=10_000)
    for raw in raws:
        assert senti.compound_of(-raw) == -senti.compound_of(raw)
    ordered = np.sort(raws)
    compounds = [senti.compound_of(r) for r in ordered]
    for (r1, r2), (c1, c2) in zip(zip(ordered, ordered[1:]),
                                  zip(compounds, compounds[1:])):
        if r2 > r1:
            assert c2 > c1

    labels = list(SentimentLabel)
    labelled = [
        ((f"t{int(rng.integers(5))}", f"p{int(rng.integers(3))}"),
         labels[int(rng.integers(3))])
        for _ in range(2000)
    ]
    for shares in senti.aggregate(labelled).values():
        assert shares.positive + shares.neutral + shares.negative == pytest.approx(
            1.0, abs=1e-12
        )


# -- criterion 10: VTScore -------------------------------------------------------


def test_criterion_10_vtscore_and_tiers():
    reports = [
        ScanReport("d.com", date(2020, 2, 1), 3, 70),
        ScanReport("d.com", date(2020, 3, 1), 5, 70),
    ]
    assert vtscore(reports, WINDOW).score == 4.0

    rng = np.random.default_rng(1010)
    phases = ["Before", "During", "After"]
    dossiers = []
    for i in range(10):
        d = DomainDossier(domain=f"d{i}.com", category="IT")
        score = float(rng.integers(1, 70))
        d.score = VtScore(domain=d.domain, score=score, report_count=2, window=WINDOW)
        for _ in range(int(rng.integers(1, 4))):
            d.share_counts[("AU", phases[int(rng.integers(3))])] += int(rng.integers(1, 6))
        dossiers.append(d)
    thresholds = (3, 10, 20, 40, 55)
    table = tier_table(dossiers, thresholds)

    for phase in phases:
        totals = [table[t].get(phase, (0, 0))[0] for t in thresholds]
        assert totals == sorted(totals, reverse=True)

    for t in thresholds:
        for phase in phases:
            expected_total = sum(
                count
                for d in dossiers if d.score.score >= t
                for (_, ph), count in d.share_counts.items() if ph == phase
            )
            expected_unique = len({
                d.domain
                for d in dossiers if d.score.score >= t
                for (_, ph) in d.share_counts if ph == phase
            })
            assert table[t].get(phase, (0, 0)) == (expected_total, expected_unique)


# -- criterion 11: end-to-end ----------------------------------------------------


def test_criterion_11_end_to_end_run(tmp_path, fixtures_dir):
    for name in ("corpus_1k.jsonl", "case_series.csv", "report_cache.jsonl",
                 "config_1k.json"):
        shutil.copy(fixtures_dir / name, tmp_path / name)
    config = validate_config(tmp_path / "config_1k.json")
    assert config.threads == 1

    started = time.perf_counter()
    bundle = run_pipeline(config)
    elapsed = time.perf_counter() - started
    assert elapsed < 60.0
    assert bundle.validate() == []

    first = {
        p.name: p.read_bytes()
        for p in sorted(config.output_dir.glob("*")) if p.is_file()
    }
    run_pipeline(config)
    second = {
        p.name: p.read_bytes()
        for p in sorted(config.output_dir.glob("*")) if p.is_file()
    }
    assert first.keys() == second.keys()
    for name in first:
        assert first[name] == second[name], f"{name} differs between runs"
