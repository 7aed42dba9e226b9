"""Cohort-level risk summaries: CDFs, risk growth curves, uniqueness counts."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .hmm import PreparedPost, PrivacyHmm, RiskTrace, match_node, sequence_privacy

FULLY_IDENTIFIED = 1.0 - 1e-12


@dataclass
class CohortReport:
    #: (topic, phase) -> sorted per-user risks.
    risk_cdf: dict[tuple[object, str], list[float]] = field(default_factory=dict)
    #: rows (n_posts, n_users, mean risk of length-n prefixes).
    risk_vs_posts: list[tuple[int, int, float]] = field(default_factory=list)
    #: phase -> (unique sequences, unique sequences at risk 1.0).
    unique_sequences: dict[str, tuple[int, int]] = field(default_factory=dict)
    traces: list[RiskTrace] = field(default_factory=list)


def _chronological(posts: Sequence[PreparedPost]) -> list[PreparedPost]:
    indexed = list(enumerate(posts))
    indexed.sort(key=lambda pair: (pair[1].timestamp, pair[0]))
    return [post for _, post in indexed]


def _sequence_key(hmm: PrivacyHmm, posts: Sequence[PreparedPost]) -> tuple:
    """Identity of a sequence: matched node ids, falling back to post text."""
    key = []
    for post in posts:
        node_id = match_node(hmm, post.vector)
        if node_id is None:
            key.append(("unseen", post.text))
        else:
            key.append(node_id)
    return tuple(key)


def cohort_report(
    hmm: PrivacyHmm,
    pii_hmm: PrivacyHmm,
    test_posts: Sequence[PreparedPost],
    max_posts: int = 40,
) -> CohortReport:
    """Score a test cohort grouped by user, topic, and phase.

    Emits per-(topic, phase) risk CDFs, the mean risk after 1..max_posts
    posts of each user's full test sequence, and per-phase counts of unique
    sequences together with how many of them are fully identifying.
    """
    report = CohortReport()

    by_user: dict[str, list[PreparedPost]] = {}
    for post in test_posts:
        by_user.setdefault(post.user_id, []).append(post)

    prefix_risks: dict[int, list[float]] = {}
    for user_id in sorted(by_user):
        sequence = _chronological(by_user[user_id])
        trace = sequence_privacy(hmm, pii_hmm, user_id, sequence)
        report.traces.append(trace)
        for n in range(1, min(len(sequence), max_posts) + 1):
            prefix_risks.setdefault(n, []).append(trace.risk_after(n))
    for n in sorted(prefix_risks):
        risks = prefix_risks[n]
        report.risk_vs_posts.append((n, len(risks), sum(risks) / len(risks)))

    groups: dict[tuple[object, str], dict[str, list[PreparedPost]]] = {}
    for post in test_posts:
        phase = post.phase or "Unclassified"
        groups.setdefault((post.topic, phase), {}).setdefault(
            post.user_id, []
        ).append(post)
    for key in sorted(groups, key=lambda k: (str(k[0]), k[1])):
        risks = []
        for user_id in sorted(groups[key]):
            sequence = _chronological(groups[key][user_id])
            risks.append(sequence_privacy(hmm, pii_hmm, user_id, sequence).risk)
        report.risk_cdf[key] = sorted(risks)

    by_phase: dict[str, dict[str, list[PreparedPost]]] = {}
    for post in test_posts:
        phase = post.phase or "Unclassified"
        by_phase.setdefault(phase, {}).setdefault(post.user_id, []).append(post)
    for phase in sorted(by_phase):
        keys: dict[tuple, list[str]] = {}
        for user_id in sorted(by_phase[phase]):
            sequence = _chronological(by_phase[phase][user_id])
            keys.setdefault(_sequence_key(hmm, sequence), []).append(user_id)
        unique = 0
        identified = 0
        for key, users in keys.items():
            if len(users) != 1:
                continue
            unique += 1
            sequence = _chronological(by_phase[phase][users[0]])
            trace = sequence_privacy(hmm, pii_hmm, users[0], sequence)
            if trace.risk >= FULLY_IDENTIFIED:
                identified += 1
        report.unique_sequences[phase] = (unique, identified)
    return report
