"""Randomised property checks for the sequence-privacy machinery."""

import numpy as np
import pytest

from privlens.privacy import (
    build_hmm,
    oracle_sequence_privacy,
    sequence_privacy,
)

from conftest import symbol_post

SYMBOLS = ["alpha", "bravo", "charlie", "delta", "echo", "foxtrot"]


def random_micro_corpus(rng: np.random.Generator):
    """<= 4 users, <= 6 distinct symbols, training sequences of 1..6 posts."""
    n_users = int(rng.integers(1, 5))
    n_symbols = int(rng.integers(1, 7))
    symbols = SYMBOLS[:n_symbols]
    train = {}
    for u in range(n_users):
        length = int(rng.integers(1, 7))
        train[f"u{u}"] = [
            (symbols[int(rng.integers(n_symbols))], bool(rng.random() < 0.3))
            for _ in range(length)
        ]
    return train, symbols


def models_for(train):
    posts = []
    for user in sorted(train):
        for i, (symbol, pii) in enumerate(train[user]):
            posts.append(symbol_post(user, i, symbol, pii=pii))
    return build_hmm(posts)


def test_sequences_match_brute_force_oracle():
    rng = np.random.default_rng(2024)
    checked = 0
    for _ in range(120):
        train, symbols = random_micro_corpus(rng)
        models = models_for(train)
        for _ in range(3):
            user = f"u{int(rng.integers(len(train)))}"
            length = int(rng.integers(1, 6))
            pool = symbols + ["zulu"]  # "zulu" is never trained: unseen posts
            test_symbols = [pool[int(rng.integers(len(pool)))] for _ in range(length)]
            mine = sequence_privacy(
                models.merged, models.pii, user,
                [symbol_post(user, 50 + i, s) for i, s in enumerate(test_symbols)],
            ).privacy_probability
            expected = oracle_sequence_privacy(train, user, test_symbols)
            assert mine == pytest.approx(expected, abs=1e-12), (train, user, test_symbols)
            checked += 1
    assert checked == 360


def test_risk_monotone_and_factors_bounded():
    rng = np.random.default_rng(99)
    violations = 0
    for _ in range(40):
        train, symbols = random_micro_corpus(rng)
        models = models_for(train)
        for _ in range(25):  # 40 * 25 = 1000 random sequences
            user = f"u{int(rng.integers(len(train)))}"
            length = int(rng.integers(1, 6))
            pool = symbols + ["zulu"]
            test_symbols = [pool[int(rng.integers(len(pool)))] for _ in range(length)]
            posts = [symbol_post(user, 50 + i, s) for i, s in enumerate(test_symbols)]
            trace = sequence_privacy(models.merged, models.pii, user, posts)
            previous_risk = 0.0
            for n in range(1, length + 1):
                risk = trace.risk_after(n)
                if risk < previous_risk - 1e-15:
                    violations += 1
                previous_risk = risk
            for step in trace.steps:
                assert 0.0 <= step.factor <= 1.0
            assert 0.0 <= trace.privacy_probability <= 1.0
    assert violations == 0


def test_privacy_probability_non_increasing_in_length():
    rng = np.random.default_rng(7)
    train, symbols = random_micro_corpus(rng)
    models = models_for(train)
    user = "u0"
    sequence = [symbol_post(user, 50 + i, symbols[int(rng.integers(len(symbols)))])
                for i in range(5)]
    probabilities = [
        sequence_privacy(models.merged, models.pii, user, sequence[:n]).privacy_probability
        for n in range(len(sequence) + 1)
    ]
    for shorter, longer in zip(probabilities, probabilities[1:]):
        assert longer <= shorter + 1e-15


def test_stripping_pii_never_lowers_privacy():
    rng = np.random.default_rng(42)
    for _ in range(30):
        train, symbols = random_micro_corpus(rng)
        models = models_for(train)
        stripped = {
            user: [(symbol, False) for symbol, _ in posts]
            for user, posts in train.items()
        }
        stripped_models = models_for(stripped)
        for user in train:
            test_symbols = [symbols[int(rng.integers(len(symbols)))]
                            for _ in range(int(rng.integers(1, 5)))]
            posts = [symbol_post(user, 70 + i, s) for i, s in enumerate(test_symbols)]
            with_pii = sequence_privacy(models.merged, models.pii, user, posts)
            without = sequence_privacy(
                stripped_models.merged, stripped_models.pii, user, posts
            )
            assert without.privacy_probability >= with_pii.privacy_probability - 1e-15
