"""Per-user chronological train/test splitting."""

from __future__ import annotations

import hashlib
import math
from typing import Sequence, TypeVar

T = TypeVar("T")  # anything with user_id, timestamp, post_id attributes


def _tiebreak(seed: int, post_id: str) -> str:
    return hashlib.sha256(f"{seed}:{post_id}".encode("utf-8")).hexdigest()


def split_train_test(
    records: Sequence[T], ratio: float = 0.8, seed: int = 0
) -> tuple[list[T], list[T]]:
    """Earliest ceil(ratio * n) posts of each user go to train, the rest to test.

    Equal timestamps are ordered by a seeded hash of the post id, so the split
    is deterministic for a given seed. A single-post user lands entirely in
    train and is absent from test.
    """
    if not 0.0 < ratio < 1.0:
        raise ValueError(f"ratio must be in (0, 1), got {ratio}")
    by_user: dict[str, list[T]] = {}
    for record in records:
        by_user.setdefault(record.user_id, []).append(record)
    train: list[T] = []
    test: list[T] = []
    for user_id in sorted(by_user):
        posts = sorted(
            by_user[user_id],
            key=lambda r: (r.timestamp, _tiebreak(seed, r.post_id)),
        )
        n_train = math.ceil(ratio * len(posts))
        train.extend(posts[:n_train])
        test.extend(posts[n_train:])
    return train, test
