"""Latent Dirichlet Allocation via collapsed Gibbs sampling.

Counts are integers throughout; phi and theta are Dirichlet-smoothed
estimates from the final counts. Fitting is single-threaded and
bit-reproducible for a fixed seed.
"""

from __future__ import annotations

import logging
from typing import Callable, Mapping, Sequence

import numpy as np
from sklearn.base import BaseEstimator

from .._validation import check_fitted, rng_from_seed

logger = logging.getLogger(__name__)


class LatentDirichletAllocation(BaseEstimator):
    def __init__(self, n_topics: int = 15, alpha: float | None = None,
                 beta: float = 0.01, n_iter: int = 200, seed: int = 0):
        self.n_topics = n_topics
        self.alpha = alpha
        self.beta = beta
        self.n_iter = n_iter
        self.seed = seed

    @property
    def alpha_(self) -> float:
        return 50.0 / self.n_topics if self.alpha is None else self.alpha

    def fit(self, docs: Sequence[Sequence[str]],
            on_sweep: Callable[[np.ndarray], None] | None = None):
        """Gibbs-sample token-topic assignments over tokenised documents.

        ``on_sweep`` (if given) receives the topic-word count matrix after
        every sweep; token counts are conserved at each one.
        """
        docs = [list(doc) for doc in docs]
        if not docs:
            raise ValueError("corpus is empty")
        if self.n_topics < 1:
            raise ValueError(f"n_topics must be >= 1, got {self.n_topics}")
        if self.alpha_ <= 0 or self.beta <= 0:
            raise ValueError("alpha and beta must be positive")
        terms = sorted({t for doc in docs for t in doc})
        if not terms:
            raise ValueError("corpus contains no tokens")
        if self.n_topics > len(terms):
            logger.warning(
                "n_topics=%d exceeds vocabulary size %d; proceeding",
                self.n_topics, len(terms),
            )
        self.vocabulary_ = {t: i for i, t in enumerate(terms)}
        K, V = self.n_topics, len(terms)
        alpha, beta = self.alpha_, self.beta

        doc_ids: list[np.ndarray] = [
            np.array([self.vocabulary_[t] for t in doc], dtype=np.int64) for doc in docs
        ]
        rng = rng_from_seed(self.seed)
        topic_word = np.zeros((K, V), dtype=np.int64)
        topic_total = np.zeros(K, dtype=np.int64)
        doc_topic = np.zeros((len(docs), K), dtype=np.int64)
        assignments: list[np.ndarray] = []
        for d, ids in enumerate(doc_ids):
            z = rng.integers(K, size=len(ids))
            assignments.append(z)
            for w, k in zip(ids, z):
                topic_word[k, w] += 1
                topic_total[k] += 1
                doc_topic[d, k] += 1
        total_tokens = int(sum(len(ids) for ids in doc_ids))

        v_beta = V * beta
        for _ in range(self.n_iter):
            for d, ids in enumerate(doc_ids):
                z = assignments[d]
                dt = doc_topic[d]
                for j, w in enumerate(ids):
                    k = z[j]
                    topic_word[k, w] -= 1
                    topic_total[k] -= 1
                    dt[k] -= 1
                    p = (topic_word[:, w] + beta) / (topic_total + v_beta) * (dt + alpha)
                    k = int(np.searchsorted(np.cumsum(p), rng.random() * p.sum(),
                                            side="right"))
                    k = min(k, K - 1)  # guard against roundoff at the top edge
                    z[j] = k
                    topic_word[k, w] += 1
                    topic_total[k] += 1
                    dt[k] += 1
            if int(topic_word.sum()) != total_tokens:
                raise AssertionError("token counts not conserved during sampling")
            if on_sweep is not None:
                on_sweep(topic_word.copy())

        self.topic_word_counts_ = topic_word
        self.doc_topic_counts_ = doc_topic
        self.token_total_ = total_tokens
        self.phi_ = (topic_word + beta) / (topic_total[:, None] + v_beta)
        doc_len = doc_topic.sum(axis=1, keepdims=True)
        self.theta_ = (doc_topic + alpha) / (doc_len + K * alpha)
        return self

    def transform(self, doc: Sequence[str], n_iter: int = 50,
                  seed: int | None = None) -> np.ndarray:
        """Fold in one held-out document and return its topic distribution.

        Documents that are empty or entirely out-of-vocabulary get the
        uniform distribution (with a warning for the OOV case).
        """
        check_fitted(self, "phi_")
        K = self.n_topics
        ids = np.array(
            [self.vocabulary_[t] for t in doc if t in self.vocabulary_], dtype=np.int64
        )
        if len(doc) and not len(ids):
            logger.warning("all %d tokens out of vocabulary; returning uniform", len(doc))
        if not len(ids):
            return np.full(K, 1.0 / K)
        alpha = self.alpha_
        rng = rng_from_seed(self.seed if seed is None else seed)
        z = rng.integers(K, size=len(ids))
        counts = np.bincount(z, minlength=K)
        for _ in range(n_iter):
            for j, w in enumerate(ids):
                counts[z[j]] -= 1
                p = self.phi_[:, w] * (counts + alpha)
                k = int(np.searchsorted(np.cumsum(p), rng.random() * p.sum(),
                                        side="right"))
                k = min(k, K - 1)
                z[j] = k
                counts[k] += 1
        return (counts + alpha) / (len(ids) + K * alpha)

    def to_json(self) -> dict:
        check_fitted(self, "phi_")
        terms = sorted(self.vocabulary_, key=self.vocabulary_.get)
        return {
            "version": 1,
            "kind": "lda",
            "n_topics": self.n_topics,
            "alpha": self.alpha_,
            "beta": self.beta,
            "n_iter": self.n_iter,
            "seed": self.seed,
            "terms": terms,
            "topic_word_counts": self.topic_word_counts_.tolist(),
            "token_total": self.token_total_,
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "LatentDirichletAllocation":
        if obj.get("kind") != "lda" or obj.get("version") != 1:
            raise ValueError("not a version-1 lda model dump")
        model = cls(
            n_topics=int(obj["n_topics"]),
            alpha=float(obj["alpha"]),
            beta=float(obj["beta"]),
            n_iter=int(obj["n_iter"]),
            seed=int(obj["seed"]),
        )
        model.vocabulary_ = {t: i for i, t in enumerate(obj["terms"])}
        model.topic_word_counts_ = np.array(obj["topic_word_counts"], dtype=np.int64)
        model.token_total_ = int(obj["token_total"])
        totals = model.topic_word_counts_.sum(axis=1)
        v_beta = len(model.vocabulary_) * model.beta
        model.phi_ = (model.topic_word_counts_ + model.beta) / (totals[:, None] + v_beta)
        model.doc_topic_counts_ = None
        model.theta_ = None
        return model


def topic_top_terms(model: LatentDirichletAllocation, topic_id: int, n: int = 10) -> list[str]:
    """Highest-probability words of one topic, ties broken lexicographically."""
    check_fitted(model, "phi_")
    terms = sorted(model.vocabulary_, key=model.vocabulary_.get)
    row = model.phi_[topic_id]
    ranked = sorted(zip(row, terms), key=lambda wt: (-wt[0], wt[1]))
    return [term for _, term in ranked[:n]]
