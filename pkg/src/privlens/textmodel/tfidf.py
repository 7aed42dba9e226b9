"""TF-IDF vectorisation over token documents.

Weighting contract: weight(t, d) = tf(t, d) * idf(t) with
idf(t) = ln((1 + N) / (1 + df(t))) + 1, rows L2-normalised. Because of the
row normalisation, concatenating a document with itself leaves its vector
unchanged exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator, TransformerMixin

from .._validation import check_fitted


@dataclass
class Vocabulary:
    """Dense term index plus per-term document frequency."""

    index: dict[str, int]
    doc_freq: np.ndarray
    n_docs: int

    def __post_init__(self):
        self.doc_freq = np.asarray(self.doc_freq, dtype=np.int64)
        if len(self.index) != len(self.doc_freq):
            raise ValueError("index and doc_freq sizes differ")

    def __len__(self) -> int:
        return len(self.index)

    def idf(self) -> np.ndarray:
        return np.log((1.0 + self.n_docs) / (1.0 + self.doc_freq)) + 1.0


@dataclass
class TermMatrix:
    """Sparse document-term weights plus the weighting they carry."""

    matrix: sp.csr_matrix
    weighting: str = "tf-idf"  # "tf-idf" or "raw"

    @property
    def shape(self):
        return self.matrix.shape


class TfidfVectorizer(BaseEstimator, TransformerMixin):
    """Fit a vocabulary over token documents and emit L2-normalised tf-idf rows."""

    def __init__(self, min_df: int = 1):
        self.min_df = min_df

    def fit(self, docs: Sequence[Sequence[str]], y=None):
        doc_freq: dict[str, int] = {}
        n_docs = 0
        for doc in docs:
            n_docs += 1
            for term in set(doc):
                doc_freq[term] = doc_freq.get(term, 0) + 1
        if self.min_df > 1:
            doc_freq = {t: df for t, df in doc_freq.items() if df >= self.min_df}
        if n_docs == 0 or not doc_freq:
            raise ValueError("no features: vocabulary is empty")
        terms = sorted(doc_freq)
        self.vocabulary_ = Vocabulary(
            index={term: i for i, term in enumerate(terms)},
            doc_freq=np.array([doc_freq[t] for t in terms], dtype=np.int64),
            n_docs=n_docs,
        )
        self.idf_ = self.vocabulary_.idf()
        return self

    @property
    def feature_names_(self) -> list[str]:
        check_fitted(self, "vocabulary_")
        return sorted(self.vocabulary_.index, key=self.vocabulary_.index.get)

    def doc_vector(self, tokens: Sequence[str]) -> dict[int, float]:
        """Single-document sparse vector as {term index: weight}, L2-normalised.

        Terms absent from the vocabulary get weight 0 (they are dropped).
        """
        check_fitted(self, "vocabulary_")
        index = self.vocabulary_.index
        counts: dict[int, int] = {}
        for token in tokens:
            i = index.get(token)
            if i is not None:
                counts[i] = counts.get(i, 0) + 1
        weights = {i: tf * self.idf_[i] for i, tf in counts.items()}
        norm = math.sqrt(sum(w * w for w in weights.values()))
        if norm == 0.0:
            return {}
        return {i: w / norm for i, w in sorted(weights.items())}

    def transform(self, docs: Iterable[Sequence[str]]) -> sp.csr_matrix:
        check_fitted(self, "vocabulary_")
        indptr = [0]
        indices: list[int] = []
        data: list[float] = []
        rows = 0
        for doc in docs:
            vec = self.doc_vector(doc)
            indices.extend(vec.keys())
            data.extend(vec.values())
            indptr.append(len(indices))
            rows += 1
        return sp.csr_matrix(
            (np.array(data, dtype=np.float64), indices, indptr),
            shape=(rows, len(self.vocabulary_)),
        )

    def fit_transform(self, docs: Sequence[Sequence[str]], y=None) -> sp.csr_matrix:
        docs = list(docs)
        return self.fit(docs).transform(docs)

    def to_term_matrix(self, docs: Iterable[Sequence[str]]) -> TermMatrix:
        return TermMatrix(matrix=self.transform(docs), weighting="tf-idf")

    def to_json(self) -> dict:
        check_fitted(self, "vocabulary_")
        return {
            "version": 1,
            "kind": "tfidf",
            "min_df": self.min_df,
            "terms": self.feature_names_,
            "doc_freq": self.vocabulary_.doc_freq.tolist(),
            "n_docs": self.vocabulary_.n_docs,
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "TfidfVectorizer":
        if obj.get("kind") != "tfidf" or obj.get("version") != 1:
            raise ValueError("not a version-1 tfidf model dump")
        vectorizer = cls(min_df=int(obj.get("min_df", 1)))
        terms = list(obj["terms"])
        vectorizer.vocabulary_ = Vocabulary(
            index={term: i for i, term in enumerate(terms)},
            doc_freq=np.array(obj["doc_freq"], dtype=np.int64),
            n_docs=int(obj["n_docs"]),
        )
        vectorizer.idf_ = vectorizer.vocabulary_.idf()
        return vectorizer
