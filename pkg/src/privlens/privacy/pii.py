"""Gazetteer-based detection of names, locations, and organisations."""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from ..datafiles import gazetteer_dir

# Word tokens that can begin a proper noun; keeps apostrophes and hyphens
# inside a single token (O'Brien, Baden-Baden).
_WORD_RE = re.compile(r"[A-Za-z][A-Za-z'\-]*")


class PiiKind(str, Enum):
    NAME = "Name"
    LOCATION = "Location"
    ORGANISATION = "Organisation"


@dataclass(frozen=True)
class PiiAnnotation:
    """One detected span; offsets are byte positions in the UTF-8 text."""

    start: int
    end: int
    kind: PiiKind
    surface: str


@dataclass
class Gazetteers:
    """Lowercased, single-spaced entries per PII kind."""

    names: set[str]
    locations: set[str]
    organisations: set[str]

    @classmethod
    def from_dir(cls, directory=None) -> "Gazetteers":
        directory = Path(directory or gazetteer_dir())
        return cls(
            names=_load_entries(directory / "names.txt"),
            locations=_load_entries(directory / "locations.txt"),
            organisations=_load_entries(directory / "organisations.txt"),
        )

    def by_kind(self) -> list[tuple[PiiKind, set[str]]]:
        return [
            (PiiKind.NAME, self.names),
            (PiiKind.LOCATION, self.locations),
            (PiiKind.ORGANISATION, self.organisations),
        ]

    def max_words(self) -> int:
        longest = 1
        for _, entries in self.by_kind():
            for entry in entries:
                longest = max(longest, entry.count(" ") + 1)
        return longest


def _load_entries(path: Path) -> set[str]:
    entries = set()
    if not path.is_file():
        return entries
    for line in path.read_text(encoding="utf-8").splitlines():
        line = " ".join(line.split()).strip().lower()
        if line and not line.startswith("#"):
            entries.add(line)
    return entries


def _capitalised(words: list[str]) -> bool:
    return all(word[0].isupper() for word in words)


def detect_pii(text: str, gazetteers: Gazetteers) -> list[PiiAnnotation]:
    """Longest-match, case-aware gazetteer matching.

    A candidate span matches only when every word is capitalised in the text
    (so the entry "Apple" never matches "apple pie"). Overlaps are resolved
    longest-first, then leftmost, then by kind order Name < Location <
    Organisation.
    """
    tokens = [(m.group(), m.start(), m.end()) for m in _WORD_RE.finditer(text)]
    kinds = gazetteers.by_kind()
    max_words = gazetteers.max_words()
    candidates: list[tuple[int, int, int, int, PiiKind, str]] = []
    for size in range(max_words, 0, -1):
        for i in range(len(tokens) - size + 1):
            window = tokens[i : i + size]
            # A proper-noun phrase has no gaps other than single spaces.
            if any(b[1] - a[2] > 1 for a, b in zip(window, window[1:])):
                continue
            words = [t[0] for t in window]
            if not _capitalised(words):
                continue
            key = " ".join(w.lower() for w in words)
            start, end = window[0][1], window[-1][2]
            for priority, (kind, entries) in enumerate(kinds):
                if key in entries:
                    candidates.append(
                        (-(end - start), start, priority, end, kind, text[start:end])
                    )
    chosen: list[PiiAnnotation] = []
    taken: list[tuple[int, int]] = []
    for _, start, _, end, kind, surface in sorted(candidates):
        if any(start < t_end and end > t_start for t_start, t_end in taken):
            continue
        taken.append((start, end))
        chosen.append(
            PiiAnnotation(
                start=len(text[:start].encode("utf-8")),
                end=len(text[:end].encode("utf-8")),
                kind=kind,
                surface=surface,
            )
        )
    chosen.sort(key=lambda a: a.start)
    return chosen


def has_pii(text: str, gazetteers: Gazetteers) -> bool:
    return bool(detect_pii(text, gazetteers))
