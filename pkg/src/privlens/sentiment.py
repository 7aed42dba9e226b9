"""Lexicon-based polarity scoring, sign labelling, and per-group aggregation.

The scorer is plain valence summation with the sqrt normalisation
compound = raw / sqrt(raw^2 + 15); booster, negation, and emoji heuristics
are deliberately excluded so every value is exactly testable.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Hashable, Iterable, Mapping, Sequence

from .datafiles import lexicon_path

logger = logging.getLogger(__name__)

#: Normalisation constant in compound = raw / sqrt(raw^2 + alpha).
NORMALISATION_ALPHA = 15.0

#: Default neutral band half-width.
DEFAULT_THRESHOLD = 0.05


class SentimentLabel(str, Enum):
    POSITIVE = "Positive"
    NEUTRAL = "Neutral"
    NEGATIVE = "Negative"


@dataclass(frozen=True)
class PolarityScore:
    raw_sum: float
    compound: float


def load_lexicon(path=None) -> dict[str, float]:
    """TSV ``term<TAB>valence`` with valences in [-4, 4]."""
    lexicon: dict[str, float] = {}
    for i, line in enumerate(
        Path(path or lexicon_path()).read_text(encoding="utf-8").splitlines(), start=1
    ):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        term, _, valence = line.partition("\t")
        value = float(valence)
        if not -4.0 <= value <= 4.0 or not math.isfinite(value):
            raise ValueError(f"lexicon line {i}: valence {value} outside [-4, 4]")
        lexicon[term.lower()] = value
    return lexicon


def compound_of(raw_sum: float) -> float:
    return raw_sum / math.sqrt(raw_sum * raw_sum + NORMALISATION_ALPHA)


def score(tokens: Sequence[str], lexicon: Mapping[str, float]) -> PolarityScore:
    """Sum lexicon valences over tokens; no hits means a raw sum of zero.

    Expects tokens already normalised by the textmodel rules.
    """
    raw = sum(lexicon[token] for token in tokens if token in lexicon)
    return PolarityScore(raw_sum=raw, compound=compound_of(raw))


def label(polarity: PolarityScore | float, threshold: float = DEFAULT_THRESHOLD) -> SentimentLabel:
    """Positive when compound >= threshold, Negative when <= -threshold, else Neutral.

    At threshold 0 a compound of exactly 0 labels Positive (first rule wins).
    """
    if threshold < 0:
        raise ValueError(f"threshold must be >= 0, got {threshold}")
    compound = polarity.compound if isinstance(polarity, PolarityScore) else float(polarity)
    if compound >= threshold:
        return SentimentLabel.POSITIVE
    if compound <= -threshold:
        return SentimentLabel.NEGATIVE
    return SentimentLabel.NEUTRAL


@dataclass(frozen=True)
class SentimentShares:
    positive: float
    neutral: float
    negative: float


def aggregate(
    labelled: Iterable[tuple[Hashable, SentimentLabel]],
) -> dict[Hashable, SentimentShares]:
    """Normalised (positive, neutral, negative) shares per group key.

    Shares of each observed group sum to 1; groups never observed are simply
    absent from the result.
    """
    counts: dict[Hashable, Counter] = {}
    for key, sentiment in labelled:
        counts.setdefault(key, Counter())[sentiment] += 1
    shares: dict[Hashable, SentimentShares] = {}
    for key, group in counts.items():
        total = sum(group.values())
        if total == 0:
            logger.warning("empty sentiment group %r omitted", key)
            continue
        shares[key] = SentimentShares(
            positive=group[SentimentLabel.POSITIVE] / total,
            neutral=group[SentimentLabel.NEUTRAL] / total,
            negative=group[SentimentLabel.NEGATIVE] / total,
        )
    return shares
