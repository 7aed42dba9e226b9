"""Corpus-level distributions: posts per user, hashtags per post, posts per phase."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from .periods import UNCLASSIFIED, Phase
from .records import PostRecord


@dataclass
class CorpusStats:
    # Per-user counts are kept raw (not as a histogram) so that shards
    # splitting a user's posts still merge exactly.
    user_posts: Counter = field(default_factory=Counter)
    hashtags_per_post: Counter = field(default_factory=Counter)
    posts_per_phase: Counter = field(default_factory=Counter)  # (country, phase label)
    total: int = 0

    @property
    def posts_per_user(self) -> Counter:
        """Histogram: number of posts -> number of users."""
        return Counter(self.user_posts.values())

    def merge(self, other: "CorpusStats") -> "CorpusStats":
        """Counters are commutative monoids, so shard results merge freely."""
        self.user_posts.update(other.user_posts)
        self.hashtags_per_post.update(other.hashtags_per_post)
        self.posts_per_phase.update(other.posts_per_phase)
        self.total += other.total
        return self


def corpus_stats(
    classified: Iterable[tuple[PostRecord, Phase | str | None]],
) -> CorpusStats:
    """Exact integer histograms over classified records."""
    stats = CorpusStats()
    for record, phase in classified:
        stats.user_posts[record.user_id] += 1
        stats.hashtags_per_post[len(record.hashtags)] += 1
        label = phase.value if isinstance(phase, Phase) else (phase or UNCLASSIFIED)
        stats.posts_per_phase[(record.country or "", label)] += 1
        stats.total += 1
    return stats
