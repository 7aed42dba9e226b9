"""Lloyd K-Means with deterministic farthest-point seeding.

Seeding: the first centroid is a seeded-RNG pick; each further centroid is
the point farthest from its nearest chosen centroid (ties -> lowest row).
An empty cluster is re-seeded from the point farthest from its assigned
centroid. Fitting is single-threaded, so a fixed seed is bit-reproducible.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator, ClusterMixin

from .._validation import as_csr_matrix, check_fitted, rng_from_seed


def _sq_distances(X: sp.csr_matrix, centers: np.ndarray) -> np.ndarray:
    """Squared Euclidean distances, docs x centers."""
    x_sq = np.asarray(X.multiply(X).sum(axis=1)).ravel()
    c_sq = np.einsum("ij,ij->i", centers, centers)
    cross = X @ centers.T
    d = x_sq[:, None] - 2.0 * np.asarray(cross) + c_sq[None, :]
    np.maximum(d, 0.0, out=d)
    return d


class KMeans(BaseEstimator, ClusterMixin):
    def __init__(self, n_clusters: int = 15, seed: int = 0, max_iter: int = 100,
                 tol: float = 1e-6):
        self.n_clusters = n_clusters
        self.seed = seed
        self.max_iter = max_iter
        self.tol = tol

    def _init_centers(self, X: sp.csr_matrix, rng: np.random.Generator) -> np.ndarray:
        n = X.shape[0]
        chosen = [int(rng.integers(n))]
        nearest = _sq_distances(X, X[chosen[0]].toarray()).ravel()
        while len(chosen) < self.n_clusters:
            nearest[chosen] = -1.0  # never re-pick a chosen point
            pick = int(np.argmax(nearest))
            chosen.append(pick)
            d_new = _sq_distances(X, X[pick].toarray()).ravel()
            np.minimum(nearest, d_new, out=nearest)
        return np.vstack([X[i].toarray().ravel() for i in chosen])

    def fit(self, X, y=None):
        X = as_csr_matrix(X)
        n_docs = X.shape[0]
        if self.n_clusters < 1:
            raise ValueError(f"n_clusters must be >= 1, got {self.n_clusters}")
        if self.n_clusters > n_docs:
            raise ValueError(
                f"n_clusters={self.n_clusters} exceeds number of documents {n_docs}"
            )
        rng = rng_from_seed(self.seed)
        centers = self._init_centers(X, rng)
        inertia_history: list[float] = []
        labels = np.zeros(n_docs, dtype=np.int64)
        for iteration in range(1, self.max_iter + 1):
            d = _sq_distances(X, centers)
            labels = np.argmin(d, axis=1)
            row_d = d[np.arange(n_docs), labels]
            for k in range(self.n_clusters):
                if not np.any(labels == k):
                    # Stated policy: re-seed an empty cluster from the point
                    # farthest from its assigned centroid.
                    far = int(np.argmax(row_d))
                    centers[k] = X[far].toarray().ravel()
                    labels[far] = k
                    row_d[far] = 0.0
            inertia_history.append(float(row_d.sum()))
            new_centers = np.empty_like(centers)
            for k in range(self.n_clusters):
                members = X[labels == k]
                if members.shape[0] == 0:  # re-seed stole this cluster's only point
                    new_centers[k] = centers[k]
                else:
                    new_centers[k] = np.asarray(members.mean(axis=0)).ravel()
            shift = float(np.sqrt(((new_centers - centers) ** 2).sum(axis=1)).max())
            centers = new_centers
            if shift < self.tol:
                break
        d = _sq_distances(X, centers)
        labels = np.argmin(d, axis=1)
        self.cluster_centers_ = centers
        self.labels_ = labels
        self.inertia_ = float(d[np.arange(n_docs), labels].sum())
        self.inertia_history_ = inertia_history
        self.n_iter_ = iteration
        return self

    def predict(self, X) -> np.ndarray:
        check_fitted(self, "cluster_centers_")
        X = as_csr_matrix(X)
        return np.argmin(_sq_distances(X, self.cluster_centers_), axis=1)

    def to_json(self) -> dict:
        check_fitted(self, "cluster_centers_")
        return {
            "version": 1,
            "kind": "kmeans",
            "n_clusters": self.n_clusters,
            "seed": self.seed,
            "max_iter": self.max_iter,
            "tol": self.tol,
            "inertia": self.inertia_,
            "n_iter": self.n_iter_,
            "centers": [row.tolist() for row in self.cluster_centers_],
        }

    @classmethod
    def from_json(cls, obj) -> "KMeans":
        if obj.get("kind") != "kmeans" or obj.get("version") != 1:
            raise ValueError("not a version-1 kmeans model dump")
        model = cls(
            n_clusters=int(obj["n_clusters"]),
            seed=int(obj["seed"]),
            max_iter=int(obj["max_iter"]),
            tol=float(obj["tol"]),
        )
        model.cluster_centers_ = np.array(obj["centers"], dtype=np.float64)
        model.inertia_ = float(obj["inertia"])
        model.n_iter_ = int(obj["n_iter"])
        model.labels_ = None
        model.inertia_history_ = None
        return model


def top_terms(model: KMeans, terms: Sequence[str], cluster_id: int, n: int = 10) -> list[str]:
    """The n highest-weight centroid coordinates, ties broken lexicographically."""
    check_fitted(model, "cluster_centers_")
    if not 0 <= cluster_id < model.cluster_centers_.shape[0]:
        raise ValueError(f"no such cluster: {cluster_id}")
    center = model.cluster_centers_[cluster_id]
    ranked = sorted(zip(center, terms), key=lambda wt: (-wt[0], wt[1]))
    return [term for _, term in ranked[:n]]
