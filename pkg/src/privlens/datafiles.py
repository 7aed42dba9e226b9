"""Accessors for the data files bundled with the package."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

_PACKAGE = "privlens"


def data_path(*parts: str) -> Path:
    """Filesystem path of a bundled data file (data/<parts...>)."""
    root = resources.files(_PACKAGE).joinpath("data")
    path = root.joinpath("/".join(parts))
    return Path(str(path))


def stopwords_path() -> Path:
    return data_path("stopwords.txt")


def lemmas_path() -> Path:
    return data_path("lemmas.tsv")


def lexicon_path() -> Path:
    return data_path("lexicon.tsv")


def public_suffix_path() -> Path:
    return data_path("public_suffix_list.dat")


def lockdown_windows_path() -> Path:
    return data_path("lockdown_windows.csv")


def category_map_path() -> Path:
    return data_path("category_map.csv")


def gazetteer_dir() -> Path:
    return data_path("gazetteers")


def topic_labels_path() -> Path:
    return data_path("topic_labels.json")


def hashtag_labels_path() -> Path:
    return data_path("hashtag_labels.json")
