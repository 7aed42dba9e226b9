"""Config-driven labelling and merging of cluster/topic ids."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable


class MissingLabelError(ValueError):
    """Raised when a label map does not cover every id; lists all missing ids."""

    def __init__(self, missing: Iterable[int]):
        self.missing = sorted(set(missing))
        super().__init__(f"unlabelled ids: {', '.join(map(str, self.missing))}")


@dataclass
class LabelMap:
    """id -> human label, with merge groups collapsing several ids to one label.

    After merging, every id resolves to exactly one label; an id may not be
    both directly labelled and part of a merge group.
    """

    labels: dict[int, str] = field(default_factory=dict)
    merges: list[tuple[frozenset[int], str]] = field(default_factory=list)

    def __post_init__(self):
        seen: set[int] = set(self.labels)
        for ids, label in self.merges:
            dupes = seen & set(ids)
            if dupes:
                raise ValueError(f"ids labelled more than once: {sorted(dupes)}")
            if not label:
                raise ValueError("merge group without a label")
            seen |= set(ids)
        self._resolved = dict(self.labels)
        for ids, label in self.merges:
            for i in ids:
                self._resolved[i] = label

    @classmethod
    def identity(cls, n: int) -> "LabelMap":
        return cls(labels={i: str(i) for i in range(n)})

    @classmethod
    def load(cls, path) -> "LabelMap":
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(
            labels={int(k): str(v) for k, v in obj.get("labels", {}).items()},
            merges=[
                (frozenset(int(i) for i in group["ids"]), str(group["label"]))
                for group in obj.get("merges", [])
            ],
        )

    def resolve(self, cluster_id: int) -> str:
        try:
            return self._resolved[cluster_id]
        except KeyError:
            raise MissingLabelError([cluster_id]) from None

    def distinct_labels(self) -> list[str]:
        return sorted(set(self._resolved.values()))


def apply_label_map(assignments: Iterable[int], label_map: LabelMap) -> list[str]:
    """Map each assigned id to its (possibly merged) label; all-or-nothing."""
    assignments = list(assignments)
    missing = {i for i in assignments if i not in label_map._resolved}
    if missing:
        raise MissingLabelError(missing)
    return [label_map._resolved[i] for i in assignments]


def label_counts(assignments: Iterable[int], label_map: LabelMap) -> Counter:
    """Counts per label; merged labels accumulate their member ids' counts."""
    return Counter(apply_label_map(assignments, label_map))
