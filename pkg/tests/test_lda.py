import numpy as np
import pytest

from privlens.textmodel import LatentDirichletAllocation

VOCAB_A = ["apple", "banana", "cherry", "date", "elder"]
VOCAB_B = ["wolf", "bear", "lynx", "otter", "stoat"]


def disjoint_corpus(n_docs=40, doc_len=20, seed=17):
    rng = np.random.default_rng(seed)
    docs, groups = [], []
    for i in range(n_docs):
        vocab = VOCAB_A if i % 2 == 0 else VOCAB_B
        docs.append([vocab[int(rng.integers(len(vocab)))] for _ in range(doc_len)])
        groups.append(i % 2)
    return docs, groups


def token_purity(model, docs, groups):
    """Share of per-document dominant-topic assignments agreeing with the
    majority group of that topic."""
    thetas = np.array([model.transform(doc, seed=1) for doc in docs])
    dominant = thetas.argmax(axis=1)
    purity_total = 0
    for topic in range(model.n_topics):
        members = [g for g, t in zip(groups, dominant) if t == topic]
        if members:
            purity_total += max(members.count(0), members.count(1))
    return purity_total / len(docs)


class TestLdaFit:
    def test_one_word_corpus_point_mass(self):
        model = LatentDirichletAllocation(n_topics=1, n_iter=10, seed=0)
        model.fit([["apple"]])
        assert model.phi_.shape == (1, 1)
        assert model.phi_[0, 0] == pytest.approx(1.0, abs=1e-12)
        assert model.theta_[0, 0] == pytest.approx(1.0, abs=1e-12)

    def test_disjoint_vocabulary_separation(self):
        docs, groups = disjoint_corpus()
        model = LatentDirichletAllocation(
            n_topics=2, alpha=0.1, beta=0.01, n_iter=150, seed=3
        )
        model.fit(docs)
        assert token_purity(model, docs, groups) >= 0.95

    def test_token_count_conserved_every_sweep(self):
        docs, _ = disjoint_corpus(n_docs=10, doc_len=8)
        total = sum(len(d) for d in docs)
        seen = []
        model = LatentDirichletAllocation(n_topics=3, n_iter=12, seed=5)
        model.fit(docs, on_sweep=lambda counts: seen.append(int(counts.sum())))
        assert len(seen) == 12
        assert all(s == total for s in seen)

    def test_phi_theta_normalised(self):
        docs, _ = disjoint_corpus(n_docs=12, doc_len=10)
        model = LatentDirichletAllocation(n_topics=4, n_iter=20, seed=2).fit(docs)
        assert np.allclose(model.phi_.sum(axis=1), 1.0, atol=1e-9)
        assert np.allclose(model.theta_.sum(axis=1), 1.0, atol=1e-9)

    def test_counts_are_integers_and_non_negative(self):
        docs, _ = disjoint_corpus(n_docs=8, doc_len=6)
        model = LatentDirichletAllocation(n_topics=2, n_iter=5, seed=0).fit(docs)
        assert model.topic_word_counts_.dtype == np.int64
        assert (model.topic_word_counts_ >= 0).all()
        assert (model.doc_topic_counts_ >= 0).all()

    def test_seed_reproducibility(self):
        docs, _ = disjoint_corpus(n_docs=10, doc_len=10)
        a = LatentDirichletAllocation(n_topics=3, n_iter=15, seed=9).fit(docs)
        b = LatentDirichletAllocation(n_topics=3, n_iter=15, seed=9).fit(docs)
        assert np.array_equal(a.topic_word_counts_, b.topic_word_counts_)
        assert np.array_equal(a.theta_, b.theta_)

    def test_more_topics_than_vocab_warns_but_fits(self, caplog):
        with caplog.at_level("WARNING"):
            model = LatentDirichletAllocation(n_topics=5, n_iter=5, seed=0)
            model.fit([["a", "b"], ["b"]])
        assert "vocabulary" in caplog.text
        assert model.phi_.shape == (5, 2)

    def test_empty_corpus_rejected(self):
        with pytest.raises(ValueError):
            LatentDirichletAllocation().fit([])


@pytest.fixture(scope="module")
def fitted():
    docs, groups = disjoint_corpus()
    model = LatentDirichletAllocation(
        n_topics=2, alpha=0.1, beta=0.01, n_iter=150, seed=3
    ).fit(docs)
    # Identify which topic owns vocabulary A by phi mass.
    a_ids = [model.vocabulary_[t] for t in VOCAB_A]
    topic_a = int(model.phi_[:, a_ids].sum(axis=1).argmax())
    return model, topic_a


class TestLdaInfer:
    def test_doc_from_known_vocabulary(self, fitted):
        model, topic_a = fitted
        theta = model.transform(["apple", "banana", "apple", "cherry"], seed=4)
        assert int(theta.argmax()) == topic_a

    def test_empty_doc_uniform(self, fitted):
        model, _ = fitted
        assert np.allclose(model.transform([]), [0.5, 0.5], atol=0)

    def test_oov_doc_uniform_with_warning(self, fitted, caplog):
        model, _ = fitted
        with caplog.at_level("WARNING"):
            theta = model.transform(["zzz", "qqq"])
        assert np.allclose(theta, [0.5, 0.5], atol=0)
        assert "out of vocabulary" in caplog.text

    def test_distribution_sums_to_one(self, fitted):
        model, _ = fitted
        theta = model.transform(["wolf", "bear"], seed=8)
        assert theta.sum() == pytest.approx(1.0, abs=1e-9)

    def test_same_seed_same_output(self, fitted):
        model, _ = fitted
        a = model.transform(["apple", "wolf", "banana"], seed=11)
        b = model.transform(["apple", "wolf", "banana"], seed=11)
        assert np.array_equal(a, b)

    def test_json_roundtrip_preserves_inference(self, fitted):
        model, _ = fitted
        again = LatentDirichletAllocation.from_json(model.to_json())
        doc = ["apple", "cherry"]
        assert np.array_equal(model.transform(doc, seed=2), again.transform(doc, seed=2))
