"""Regenerate the repository fixtures (corpora, caches, configs).

Usage: python -m privlens.tools.make_fixtures [fixtures-dir]

Everything here is deterministic; committed fixtures and regenerated ones
are byte-identical.
"""

from __future__ import annotations

import csv
import json
import sys
from datetime import date
from pathlib import Path

from .synth import generate_corpus, synthetic_case_series, write_corpus_files

#: domain -> list of (date, positives, total engines) for the report cache.
REPORT_FIXTURES = {
    "promo-deals.biz": [("2020-04-02", 6, 70), ("2020-07-11", 2, 72), ("2021-01-15", 4, 74)],
    "cheap-meds.info": [("2020-03-20", 12, 70), ("2020-09-01", 18, 72)],
    "search-covid.info": [("2020-05-05", 25, 71), ("2021-02-10", 19, 73)],
    "quick-finder.biz": [("2020-04-18", 45, 70), ("2020-10-30", 40, 72), ("2021-03-03", 41, 74)],
    "free-stream.cc": [("2020-06-06", 60, 70), ("2021-01-20", 55, 73)],
    "covid-alerts.info": [("2020-03-15", 3, 70), ("2020-08-08", 0, 71), ("2021-02-02", 3, 72)],
    "win-prizes.info": [("2020-05-25", 8, 70), ("2020-12-12", 4, 72)],
    "gaming-hub.cc": [("2020-07-07", 30, 71), ("2021-04-04", 26, 74)],
    "blog-corner.info": [("2020-04-09", 11, 70), ("2020-11-11", 9, 72)],
    "daily-thoughts.cc": [("2020-06-16", 1, 70), ("2021-03-30", 1, 73)],
    "track-parcel.cc": [("2020-05-01", 0, 70), ("2020-10-10", 0, 72)],
}


def write_report_cache(path: Path) -> None:
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        rows = []
        for domain, reports in REPORT_FIXTURES.items():
            for day, positives, total in reports:
                rows.append(
                    {"domain": domain, "date": day, "positives": positives, "total": total}
                )
        rows.sort(key=lambda r: (r["date"], r["domain"]))
        for row in rows:
            fh.write(json.dumps(row, sort_keys=True) + "\n")


def write_case_series(path: Path) -> None:
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["country", "date", "new_cases"])
        for country, day, cases in synthetic_case_series():
            writer.writerow([country, day.isoformat(), cases])


def write_config(path: Path, corpus_name: str) -> None:
    config = {
        "corpus": corpus_name,
        "output_dir": "out",
        "countries": ["AU", "GB", "IN", "US"],
        "language": "en",
        "span": ["2020-01-01", "2021-06-21"],
        "case_series": "case_series.csv",
        "report_cache": "report_cache.jsonl",
        "k_hashtag_clusters": 15,
        "n_topics": 15,
        "privacy_clusters": 14,
        "tau_sim": 0.8,
        "train_ratio": 0.8,
        "sentiment_threshold": 0.05,
        "vtscore_window": ["2020-01-01", "2021-11-06"],
        "lda_iters": 60,
        "kmeans_max_iter": 50,
        "seed": 7,
        "threads": 1,
        "offline": True,
    }
    path.write_text(json.dumps(config, indent=1, sort_keys=True) + "\n", encoding="utf-8")


def main(target: str | None = None) -> None:
    fixtures = Path(target or Path(__file__).resolve().parents[4] / "fixtures")
    fixtures.mkdir(parents=True, exist_ok=True)

    records, manifest = generate_corpus(kind="mixed", n_records=1000, n_users=120,
                                        seed=20200101)
    write_corpus_files(records, manifest, fixtures / "corpus_1k.jsonl",
                       fixtures / "manifest_1k.json")

    records, manifest = generate_corpus(kind="heavy_tail", n_records=5000, n_users=300,
                                        seed=20200202)
    write_corpus_files(records, manifest, fixtures / "corpus_5k.jsonl",
                       fixtures / "manifest_5k.json")

    records, manifest = generate_corpus(kind="mixed", n_records=500, n_users=60,
                                        seed=20200303)
    write_corpus_files(records, manifest, fixtures / "corpus_500.jsonl",
                       fixtures / "manifest_500.json")

    write_report_cache(fixtures / "report_cache.jsonl")
    write_case_series(fixtures / "case_series.csv")
    write_config(fixtures / "config_1k.json", "corpus_1k.jsonl")
    write_config(fixtures / "config_5k.json", "corpus_5k.jsonl")
    print(f"fixtures written to {fixtures}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else None)
