import math

import numpy as np
import pytest

from privlens.textmodel import TfidfVectorizer


def hand_tfidf(docs, doc):
    """Independent evaluation of the stated weighting:
    weight = tf * (ln((1+N)/(1+df)) + 1), then L2 normalisation."""
    n = len(docs)
    df = {}
    for d in docs:
        for term in set(d):
            df[term] = df.get(term, 0) + 1
    weights = {}
    for term in doc:
        if term in df:
            weights[term] = weights.get(term, 0) + 1
    weights = {
        t: tf * (math.log((1 + n) / (1 + df[t])) + 1) for t, tf in weights.items()
    }
    norm = math.sqrt(sum(w * w for w in weights.values()))
    return {t: w / norm for t, w in weights.items()} if norm else {}


DOCS = [["a", "b"], ["a", "c"], ["a"]]


class TestTfidf:
    def test_single_doc_single_term_is_unit(self):
        v = TfidfVectorizer().fit([["only"]])
        assert v.doc_vector(["only"]) == {0: 1.0}

    def test_three_doc_fixture_matches_hand_computation(self):
        v = TfidfVectorizer().fit(DOCS)
        index = v.vocabulary_.index
        for doc in DOCS:
            expected = hand_tfidf(DOCS, doc)
            got = v.doc_vector(doc)
            assert set(got) == {index[t] for t in expected}
            for term, weight in expected.items():
                assert got[index[term]] == pytest.approx(weight, abs=1e-12)

    def test_absent_term_weight_zero(self):
        v = TfidfVectorizer().fit(DOCS)
        vec = v.doc_vector(["a", "zzz"])
        assert set(vec) == {v.vocabulary_.index["a"]}
        assert vec[v.vocabulary_.index["a"]] == 1.0

    def test_empty_vocabulary_is_error(self):
        with pytest.raises(ValueError, match="no features"):
            TfidfVectorizer().fit([[]])

    def test_self_concatenation_invariance(self):
        # Doubling every document's content scales tf uniformly per doc, so
        # the normalised vectors are unchanged exactly.
        doubled = [d + d for d in DOCS]
        v1 = TfidfVectorizer().fit(DOCS)
        v2 = TfidfVectorizer().fit(doubled)
        assert np.allclose(v1.idf_, v2.idf_, atol=0)  # df and N unchanged
        for original, twice in zip(DOCS, doubled):
            a = v1.doc_vector(original)
            b = v2.doc_vector(twice)
            assert set(a) == set(b)
            for k in a:
                assert b[k] == pytest.approx(a[k], abs=1e-12)

    def test_matrix_rows_unit_norm_or_zero(self):
        v = TfidfVectorizer().fit(DOCS)
        matrix = v.transform(DOCS + [["zzz"]])
        norms = np.sqrt(np.asarray(matrix.multiply(matrix).sum(axis=1)).ravel())
        assert norms[:3] == pytest.approx([1.0, 1.0, 1.0], abs=1e-12)
        assert norms[3] == 0.0

    def test_json_roundtrip(self):
        v = TfidfVectorizer().fit(DOCS)
        again = TfidfVectorizer.from_json(v.to_json())
        assert again.vocabulary_.index == v.vocabulary_.index
        assert again.doc_vector(["a", "b"]) == v.doc_vector(["a", "b"])

    def test_agrees_with_sklearn_convention(self):
        # The stated formula is the common smoothed convention; cross-check
        # one corpus against the reference implementation.
        from sklearn.feature_extraction.text import TfidfVectorizer as SkTfidf

        corpus = ["apple banana", "apple cherry date", "banana banana cherry"]
        sk = SkTfidf(analyzer=str.split).fit(corpus)
        ours = TfidfVectorizer().fit([d.split() for d in corpus])
        sk_matrix = sk.transform(corpus).toarray()
        our_matrix = ours.transform([d.split() for d in corpus]).toarray()
        sk_order = np.argsort(sk.get_feature_names_out())
        assert np.allclose(our_matrix, sk_matrix[:, sk_order], atol=1e-12)
