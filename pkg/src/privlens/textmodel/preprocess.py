"""Text normalisation, tokenisation, stopword removal, and lemmatisation."""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from ..corpus.records import PostRecord
from ..datafiles import lemmas_path, stopwords_path

_URL_RE = re.compile(r"\b[a-z][a-z0-9+.-]*://\S+", re.IGNORECASE)
_MENTION_RE = re.compile(r"@\w+")
_APOSTROPHE_RE = re.compile(r"[’']")
# Everything that is not a word character or whitespace becomes a space, so
# "#school" keeps the word and "NOW!!" loses the bangs.
_PUNCT_RE = re.compile(r"[^\w\s]|_")
_WS_RE = re.compile(r"\s+")


def normalize(text: str) -> str:
    """Strip URLs, @-mentions, and punctuation; lowercase; collapse whitespace."""
    text = _URL_RE.sub(" ", text)
    text = _MENTION_RE.sub(" ", text)
    text = _APOSTROPHE_RE.sub("", text)
    text = _PUNCT_RE.sub(" ", text)
    return _WS_RE.sub(" ", text).strip().lower()


def tokenize(text: str) -> list[str]:
    return text.split()


def load_wordlist(path) -> set[str]:
    """One entry per line; blank lines and '#' comments ignored."""
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line.lower())
    return words


def load_stopwords(path=None) -> set[str]:
    return load_wordlist(path or stopwords_path())


def drop_stopwords(tokens: Sequence[str], stopwords: set[str]) -> list[str]:
    """Order-preserving removal of stopwords (pandemic synonyms included)."""
    return [token for token in tokens if token not in stopwords]


def load_lemmas(path=None) -> dict[str, str]:
    """Tab-separated ``form<TAB>lemma`` dictionary."""
    lemmas: dict[str, str] = {}
    for line in Path(path or lemmas_path()).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        form, _, lemma = line.partition("\t")
        if form and lemma:
            lemmas[form.lower()] = lemma.strip().lower()
    return lemmas


# Suffix-stripping fallback for dictionary misses, tried in order.
_SUFFIX_RULES: tuple[tuple[str, str], ...] = (
    ("sses", "ss"),
    ("shes", "sh"),
    ("ches", "ch"),
    ("ies", "y"),
    ("xes", "x"),
    ("zes", "z"),
    ("ing", ""),
    ("ed", ""),
    ("s", ""),
)

# Trailing doubled consonant except ll/ss/zz (falling -> fall, running -> run).
_DOUBLED = re.compile(r"([b-df-hj-kmnp-rtvwxy])\1$")


def _strip_suffix(token: str) -> str | None:
    for suffix, repl in _SUFFIX_RULES:
        if not token.endswith(suffix):
            continue
        if suffix == "s" and token.endswith("ss"):
            continue
        stem = token[: len(token) - len(suffix)] + repl
        if suffix in ("ing", "ed"):
            stem = _DOUBLED.sub(r"\1", stem)  # running -> run, stopped -> stop
        if len(stem) >= 3:
            return stem
    return None


def lemmatize(tokens: Sequence[str], lemmas: Mapping[str, str]) -> list[str]:
    """Dictionary hit wins; otherwise suffix stripping; otherwise identity."""
    out = []
    for token in tokens:
        lemma = lemmas.get(token)
        if lemma is None:
            lemma = _strip_suffix(token)
        out.append(lemma if lemma is not None else token)
    return out


@dataclass
class Preprocessor:
    """The full normalise -> tokenise -> stop -> lemmatise chain."""

    stopwords: set[str]
    lemmas: Mapping[str, str]

    @classmethod
    def from_files(cls, stopwords_file=None, lemmas_file=None) -> "Preprocessor":
        return cls(
            stopwords=load_stopwords(stopwords_file),
            lemmas=load_lemmas(lemmas_file),
        )

    def tokens(self, text: str) -> list[str]:
        return lemmatize(
            drop_stopwords(tokenize(normalize(text)), self.stopwords), self.lemmas
        )


def explode_by_hashtags(record: PostRecord) -> list[PostRecord]:
    """One copy per hashtag, each carrying a single designated hashtag.

    Copies share the source post id. Records without hashtags yield an empty
    list; hashtag analysis excludes them upstream.
    """
    return [replace(record, hashtags=(tag,)) for tag in record.hashtags]


def exploded_total(records: Iterable[PostRecord]) -> int:
    """Size of the exploded corpus: the sum of per-record hashtag counts."""
    return sum(len(record.hashtags) for record in records)
