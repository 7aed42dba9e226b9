"""privlens: privacy and security analytics for anonymised social-media corpora.

Subpackages
-----------
corpus     JSONL ingestion, filtering, lockdown-phase classification, infection rates
textmodel  preprocessing, TF-IDF, K-Means hashtag clustering, LDA topics
sentiment  lexicon polarity scoring and per-topic aggregation
privacy    HMM-based privacy-risk quantification with PII linkability
urlsec     registered-domain parsing, categories, scanner-score aggregation
app        configuration, pipeline orchestration, CLI, report bundles
"""

__version__ = "0.1.0"
