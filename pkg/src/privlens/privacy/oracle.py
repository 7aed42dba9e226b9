"""Brute-force validation oracle for sequence privacy scoring.

Works on symbol-level micro-corpora: every post is a symbol string, two posts
are the same event node exactly when their symbols are equal, and there is a
single training cluster. Counts, path enumeration, and the step products are
all computed directly from the raw sequences with plain dictionaries, with no
code shared with the main model, so the two paths can be compared on small
fixtures.
"""

from __future__ import annotations

from typing import Mapping, Sequence

#: Training sequences: user id -> chronological list of (symbol, has_pii).
MicroCorpus = Mapping[str, Sequence[tuple[str, bool]]]


class _Counts:
    def __init__(self):
        self.starts: dict[str, int] = {}
        self.total_starts = 0
        self.transitions: dict[tuple[str, str], int] = {}
        self.out_totals: dict[str, int] = {}
        self.observations: dict[tuple[str, str], int] = {}
        self.node_totals: dict[str, int] = {}

    def feed(self, user: str, symbols: Sequence[str]) -> None:
        previous = None
        for symbol in symbols:
            self.observations[(user, symbol)] = self.observations.get((user, symbol), 0) + 1
            self.node_totals[symbol] = self.node_totals.get(symbol, 0) + 1
            if previous is None:
                self.starts[symbol] = self.starts.get(symbol, 0) + 1
                self.total_starts += 1
            else:
                key = (previous, symbol)
                self.transitions[key] = self.transitions.get(key, 0) + 1
                self.out_totals[previous] = self.out_totals.get(previous, 0) + 1
            previous = symbol


def _tally(train: MicroCorpus) -> tuple[_Counts, _Counts]:
    main = _Counts()
    pii = _Counts()
    for user in sorted(train):
        posts = train[user]
        main.feed(user, [symbol for symbol, _ in posts])
        pii_symbols = [symbol for symbol, flagged in posts if flagged]
        if pii_symbols:
            pii.feed(user, pii_symbols)
    return main, pii


def _observation_part(counts: _Counts, user: str, symbol: str) -> float:
    obs = counts.observations.get((user, symbol), 0)
    if obs == 0:
        return 1.0
    return 1.0 - (1.0 / obs) * (obs / counts.node_totals[symbol])


def _all_simple_paths(counts: _Counts) -> list[tuple[tuple[str, ...], float]]:
    """Exhaustive enumeration (no caps); fixtures are small by construction."""
    paths: list[tuple[tuple[str, ...], float]] = []

    def walk(path: list[str], product: float) -> None:
        paths.append((tuple(path), product))
        tail = path[-1]
        for (src, dst), count in sorted(counts.transitions.items()):
            if src != tail or dst in path:
                continue
            step = (1.0 / count) * (count / counts.out_totals[src])
            walk(path + [dst], product * step)

    for symbol, count in sorted(counts.starts.items()):
        first = (1.0 / count) * (count / counts.total_starts)
        walk([symbol], first)
    return paths


def oracle_linkability(train: MicroCorpus, user: str) -> float:
    _, pii = _tally(train)
    user_symbols = {
        symbol for (owner, symbol), count in pii.observations.items()
        if owner == user and count > 0
    }
    if not user_symbols:
        return 1.0
    best = 1.0
    for nodes, product in _all_simple_paths(pii):
        if not user_symbols.intersection(nodes):
            continue
        for symbol in nodes:
            product *= _observation_part(pii, user, symbol)
        best = min(best, product)
    return best


def oracle_sequence_privacy(
    train: MicroCorpus, user: str, test_symbols: Sequence[str]
) -> float:
    """Privacy probability of the test sequence, straight from the formulas."""
    if not test_symbols:
        return 1.0
    main, _ = _tally(train)
    probability = oracle_linkability(train, user)
    previous = None
    unseen_previous = False
    for symbol in test_symbols:
        known = symbol in main.node_totals
        if not known:
            factor = 0.0
        else:
            if unseen_previous:
                trans_part = 0.0
            elif previous is None:
                count = main.starts.get(symbol, 0)
                trans_part = (1.0 / count) * (count / main.total_starts) if count else 0.0
            else:
                count = main.transitions.get((previous, symbol), 0)
                trans_part = (
                    (1.0 / count) * (count / main.out_totals[previous]) if count else 0.0
                )
            factor = trans_part * _observation_part(main, user, symbol)
        probability *= factor
        unseen_previous = not known
        previous = symbol if known else None
    return probability


def oracle_risk(train: MicroCorpus, user: str, test_symbols: Sequence[str]) -> float:
    return 1.0 - oracle_sequence_privacy(train, user, test_symbols)
