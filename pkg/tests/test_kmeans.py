import numpy as np
import pytest
from sklearn.metrics import adjusted_rand_score

from privlens.textmodel import KMeans, top_terms


def two_blobs(n_per=30, seed=5):
    rng = np.random.default_rng(seed)
    a = rng.normal(loc=0.0, scale=0.05, size=(n_per, 4)) + np.array([1, 0, 0, 0])
    b = rng.normal(loc=0.0, scale=0.05, size=(n_per, 4)) + np.array([0, 0, 1, 0])
    X = np.vstack([a, b])
    labels = np.array([0] * n_per + [1] * n_per)
    return X, labels


class TestKMeans:
    def test_k_equals_distinct_docs_inertia_zero(self):
        X = np.eye(4)
        model = KMeans(n_clusters=4, seed=0).fit(X)
        assert model.inertia_ == pytest.approx(0.0, abs=1e-24)

    def test_two_blobs_perfect_partition(self):
        X, truth = two_blobs()
        model = KMeans(n_clusters=2, seed=1).fit(X)
        assert adjusted_rand_score(truth, model.labels_) == 1.0

    def test_k1_centroid_is_column_mean(self):
        rng = np.random.default_rng(3)
        X = rng.random((17, 6))
        model = KMeans(n_clusters=1, seed=0).fit(X)
        assert np.allclose(model.cluster_centers_[0], X.mean(axis=0), atol=1e-12)

    def test_inertia_non_increasing(self):
        rng = np.random.default_rng(11)
        X = rng.random((80, 10))
        model = KMeans(n_clusters=6, seed=2).fit(X)
        history = model.inertia_history_
        assert all(b <= a + 1e-9 for a, b in zip(history, history[1:]))

    def test_seed_determinism(self):
        X, _ = two_blobs(seed=9)
        a = KMeans(n_clusters=3, seed=42).fit(X)
        b = KMeans(n_clusters=3, seed=42).fit(X)
        assert np.array_equal(a.labels_, b.labels_)
        assert np.array_equal(a.cluster_centers_, b.cluster_centers_)
        assert a.inertia_ == b.inertia_

    def test_k_exceeding_docs_rejected(self):
        with pytest.raises(ValueError, match="exceeds"):
            KMeans(n_clusters=5).fit(np.eye(3))

    def test_predict_matches_nearest_centroid(self):
        X, _ = two_blobs()
        model = KMeans(n_clusters=2, seed=1).fit(X)
        assert np.array_equal(model.predict(X), model.labels_)

    def test_duplicate_rows_handled(self):
        # More clusters than distinct points exercises the re-seeding policy.
        X = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.0, 1.0], [5.0, 5.0]])
        model = KMeans(n_clusters=4, seed=0, max_iter=20).fit(X)
        assert np.isfinite(model.cluster_centers_).all()
        assert model.inertia_ >= 0.0

    def test_json_roundtrip(self):
        X, _ = two_blobs()
        model = KMeans(n_clusters=2, seed=1).fit(X)
        again = KMeans.from_json(model.to_json())
        assert np.allclose(again.cluster_centers_, model.cluster_centers_)
        assert np.array_equal(again.predict(X), model.labels_)


class TestTopTerms:
    def test_single_nonzero_term_first(self):
        model = KMeans(n_clusters=1, seed=0).fit(np.array([[0.0, 2.0, 0.0]]))
        assert top_terms(model, ["a", "b", "c"], 0, 1) == ["b"]

    def test_tie_broken_lexicographically(self):
        model = KMeans(n_clusters=1, seed=0).fit(np.array([[1.0, 1.0, 0.0]]))
        ranked = top_terms(model, ["vaccine", "mask", "zzz"], 0, 2)
        assert ranked == ["mask", "vaccine"]

    def test_blob_dominant_token(self):
        # Cluster built over docs dominated by column 2.
        X = np.array([[0.1, 0.0, 0.9], [0.2, 0.0, 0.8], [0.0, 0.1, 0.95]])
        model = KMeans(n_clusters=1, seed=0).fit(X)
        assert top_terms(model, ["alpha", "beta", "gamma"], 0, 1) == ["gamma"]

    def test_unknown_cluster_rejected(self):
        model = KMeans(n_clusters=1, seed=0).fit(np.eye(2))
        with pytest.raises(ValueError, match="no such cluster"):
            top_terms(model, ["a", "b"], 7, 1)
