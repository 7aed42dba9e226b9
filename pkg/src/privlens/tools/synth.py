"""Deterministic synthetic corpora with ground-truth manifests.

Two flavours:

* ``mixed``: a small multi-country corpus exercising filtering, period
  classification, hashtags, URLs, and every pipeline stage.
* ``heavy_tail``: a single-language corpus with a heavy-tailed posts-per-user
  distribution, repeated "signature" posts, and PII mentions, sized for
  privacy-risk experiments.

Every record is valid JSONL; the manifest records the histograms and counts
tests compare against.
"""

from __future__ import annotations

import json
from collections import Counter
from datetime import date, datetime, timedelta, timezone
from pathlib import Path

import numpy as np

from ..corpus.periods import classify_period, load_windows
from ..datafiles import lockdown_windows_path

COUNTRIES = ("AU", "GB", "IN", "US")

TOPIC_POOLS = {
    "business": ["support", "local", "business", "charity", "fundraising", "donate",
                 "shop", "economy", "jobs", "community", "help", "small"],
    "vaccine": ["vaccine", "dose", "jab", "pfizer", "trial", "immunity", "rollout",
                "appointment", "booster", "clinic", "effective", "safe"],
    "stayhome": ["stay", "home", "quarantine", "isolation", "family", "garden",
                 "cooking", "remote", "work", "zoom", "safe", "together"],
    "testing": ["test", "pcr", "swab", "result", "negative", "positive", "queue",
                "drive", "centre", "symptoms", "fever", "cough"],
    "deaths": ["death", "toll", "cases", "rising", "hospital", "icu", "grief",
               "tragedy", "loss", "mourning", "numbers", "record"],
    "politics": ["government", "minister", "policy", "border", "restrictions",
                 "press", "conference", "announcement", "parliament", "vote",
                 "leader", "debate"],
}
TOPIC_NAMES = tuple(TOPIC_POOLS)

HASHTAG_POOL = {
    "business": ["SupportLocal", "fundraising", "charities", "smallbusiness"],
    "vaccine": ["vaccination", "GetVaccinated", "rollout"],
    "stayhome": ["StayHome", "quarantinelife", "WFH"],
    "testing": ["PCRtesting", "GetTested"],
    "deaths": ["DeathToll", "frontline"],
    "politics": ["PM", "policy", "borders"],
}

URL_POOL = [
    "https://twitter.com/i/status/123",
    "https://www.facebook.com/groups/health",
    "https://instagram.com/p/abc",
    "https://youtube.com/watch?v=xyz",
    "https://theconversation.com/article",
    "https://subscribe.theepochtimes.com/offer",
    "https://www.bbc.co.uk/news/live",
    "https://apps.apple.com/app/tracker",
    "https://play.google.com/store/apps/details",
    "https://www.gov.uk/coronavirus",
    "https://promo-deals.biz/offer",
    "https://cheap-meds.info/covid",
    "https://search-covid.info/results",
    "https://quick-finder.biz/search",
    "https://free-stream.cc/live",
    "https://covid-alerts.info/daily",
    "https://win-prizes.info/claim",
    "https://gaming-hub.cc/play",
    "https://blog-corner.info/post/12",
    "https://daily-thoughts.cc/entry",
    "https://track-parcel.cc/trace",
]

PII_SNIPPETS = [
    "flying to Cairo next week",
    "our daughter Miha has been accepted",
    "stuck in Dubai with family",
    "great day out at Chester Zoo",
    "queueing at the Costco in Docklands",
    "my friend Sarah tested positive",
    "visiting relatives in Mumbai soon",
    "shift at the NHS clinic again",
    "moving back to Melbourne in june",
    "thanks to everyone at Pfizer",
]

SENTIMENT_TAILS = ["", "this is great news", "feeling hopeful today",
                   "such sad news", "what a disaster", "thank you all",
                   "really worried now", ""]

OTHER_COUNTRIES = ("CA", "NZ", "DE")
OTHER_LANGUAGES = ("hi", "es", "fr")


def _iso(day: datetime) -> str:
    return day.astimezone(timezone.utc).isoformat()


def _random_timestamp(rng: np.random.Generator, start: date, end: date) -> datetime:
    span = (end - start).days
    day = start + timedelta(days=int(rng.integers(span + 1)))
    return datetime(
        day.year, day.month, day.day,
        int(rng.integers(24)), int(rng.integers(60)), int(rng.integers(60)),
        tzinfo=timezone.utc,
    )


def _heavy_tail_counts(rng: np.random.Generator, n_users: int, total: int) -> list[int]:
    """Pareto-flavoured per-user post counts summing exactly to ``total``."""
    raw = np.minimum(np.floor(rng.pareto(1.2, size=n_users) * 4.0) + 1, 120).astype(int)
    counts = np.maximum(raw, 1)
    while counts.sum() > total:
        i = int(rng.integers(n_users))
        if counts[i] > 1:
            counts[i] -= 1
    while counts.sum() < total:
        counts[int(rng.integers(n_users))] += 1
    return counts.tolist()


def generate_corpus(
    kind: str = "mixed",
    n_records: int = 1000,
    n_users: int = 120,
    seed: int = 20200101,
    start: date = date(2020, 2, 1),
    end: date = date(2020, 11, 30),
) -> tuple[list[dict], dict]:
    """Build records plus the manifest of ground-truth counts."""
    if kind not in ("mixed", "heavy_tail"):
        raise ValueError(f"unknown corpus kind: {kind}")
    rng = np.random.default_rng(seed)
    windows = load_windows(lockdown_windows_path())

    counts = _heavy_tail_counts(rng, n_users, n_records)
    user_ids = [f"u{1 + i:04d}" for i in range(n_users)]
    user_topic = {u: TOPIC_NAMES[int(rng.integers(len(TOPIC_NAMES)))] for u in user_ids}
    user_signature = {}
    for u in user_ids:
        pool = TOPIC_POOLS[user_topic[u]]
        words = rng.choice(pool, size=4, replace=False)
        user_signature[u] = " ".join(words) + f" every single day {u}"
    pii_users = sorted(
        rng.choice(user_ids, size=max(2, n_users // 10), replace=False).tolist()
    )

    records: list[dict] = []
    manifest_counts = {
        "posts_per_user": Counter(),
        "hashtags_per_post": Counter(),
        "per_country": Counter(),
        "per_language": Counter(),
        "per_phase": Counter(),
        "url_total": 0,
        "filtered": 0,
    }

    post_no = 0
    for u, n_posts in zip(user_ids, counts):
        if kind == "mixed":
            roll = rng.random()
            if roll < 0.85:
                country, language = COUNTRIES[int(rng.integers(4))], "en"
            elif roll < 0.92:
                country = OTHER_COUNTRIES[int(rng.integers(3))]
                language = "en"
            elif roll < 0.97:
                country = COUNTRIES[int(rng.integers(4))]
                language = OTHER_LANGUAGES[int(rng.integers(3))]
            else:
                country, language = None, "en"
        else:
            country, language = COUNTRIES[int(rng.integers(4))], "en"

        topic = user_topic[u]
        pool = TOPIC_POOLS[topic]
        for _ in range(n_posts):
            post_no += 1
            style = rng.random()
            if style < 0.30:
                text = user_signature[u]
            elif style < 0.85:
                words = rng.choice(pool, size=int(rng.integers(3, 7)), replace=False)
                tail = SENTIMENT_TAILS[int(rng.integers(len(SENTIMENT_TAILS)))]
                text = " ".join(words) + (" " + tail if tail else "")
            else:
                words = rng.choice(pool, size=2, replace=False)
                text = f"{words[0]} {words[1]} update number {post_no} from {u}"
            if u in pii_users and rng.random() < 0.25:
                text += " " + PII_SNIPPETS[int(rng.integers(len(PII_SNIPPETS)))]

            n_tags = int(rng.integers(0, 4))
            tags = [
                str(t) for t in rng.choice(HASHTAG_POOL[topic],
                                           size=min(n_tags, len(HASHTAG_POOL[topic])),
                                           replace=False)
            ]
            urls = []
            if rng.random() < 0.4:
                for _ in range(int(rng.integers(1, 3))):
                    urls.append(URL_POOL[int(rng.integers(len(URL_POOL)))])

            timestamp = _random_timestamp(rng, start, end)
            record = {
                "user_id": u,
                "post_id": f"p{post_no:06d}",
                "timestamp": _iso(timestamp),
                "text": text,
                "hashtags": tags,
                "urls": urls,
                "country": country,
                "language": language,
            }
            records.append(record)

            manifest_counts["posts_per_user"][u] += 1
            manifest_counts["per_country"][country or ""] += 1
            manifest_counts["per_language"][language or ""] += 1
            if country in COUNTRIES and language == "en":
                manifest_counts["filtered"] += 1
                manifest_counts["hashtags_per_post"][len(tags)] += 1
                manifest_counts["url_total"] += len(urls)
                phase = classify_period(timestamp, windows.get(country, ()))
                label = phase.value if phase else "Unclassified"
                manifest_counts["per_phase"][f"{country}/{label}"] += 1

    user_histogram = Counter(manifest_counts["posts_per_user"].values())
    manifest = {
        "kind": kind,
        "seed": seed,
        "n_records": len(records),
        "n_users": n_users,
        "posts_per_user": dict(sorted(manifest_counts["posts_per_user"].items())),
        "posts_per_user_histogram": {
            str(k): v for k, v in sorted(user_histogram.items())
        },
        "per_country": dict(sorted(manifest_counts["per_country"].items())),
        "per_language": dict(sorted(manifest_counts["per_language"].items())),
        "filtered_count": manifest_counts["filtered"],
        "hashtags_per_post": {
            str(k): v for k, v in sorted(manifest_counts["hashtags_per_post"].items())
        },
        "per_phase": dict(sorted(manifest_counts["per_phase"].items())),
        "url_total": manifest_counts["url_total"],
        "pii_users": pii_users,
    }
    return records, manifest


def write_corpus_files(records: list[dict], manifest: dict, corpus_path, manifest_path):
    corpus_path = Path(corpus_path)
    corpus_path.parent.mkdir(parents=True, exist_ok=True)
    with corpus_path.open("w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            fh.write(json.dumps(record, sort_keys=True) + "\n")
    Path(manifest_path).write_text(
        json.dumps(manifest, sort_keys=True, indent=1) + "\n", encoding="utf-8"
    )


def synthetic_case_series(start: date = date(2020, 1, 1),
                          end: date = date(2021, 4, 30)) -> list[tuple[str, date, int]]:
    """Smooth deterministic daily counts covering the packaged windows."""
    rows = []
    bases = {"AU": (60, 0.0), "GB": (900, 1.5), "IN": (1500, 3.0), "US": (2500, 4.5)}
    day = start
    i = 0
    while day <= end:
        for country, (base, offset) in bases.items():
            wave = 1.0 + 0.8 * np.sin(i / 40.0 + offset)
            rows.append((country, day, int(base * max(wave, 0.05))))
        day += timedelta(days=1)
        i += 1
    return rows
