"""Shared text normalization.

Every place that turns free text into comparable terms (title tokenization,
query normalization, co-occurrence counting) uses the same rule: lowercase,
split on non-alphanumeric characters, drop stop words, keep only tokens
longer than three characters.
"""

import re
from functools import lru_cache
from importlib import resources
from os import PathLike
from typing import Iterable

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

MIN_TOKEN_CHARS = 4


def load_stopword_file(path: str | PathLike) -> frozenset[str]:
    """Read a stop word list: one word per line, blank lines and # comments skipped."""
    words = set()
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            word = raw.strip().lower()
            if word and not word.startswith("#"):
                words.add(word)
    return frozenset(words)


@lru_cache(maxsize=None)
def _shipped_list(name: str) -> frozenset[str]:
    text = (resources.files(__package__) / "stopwords" / name).read_text("utf-8")
    return frozenset(
        w.strip().lower() for w in text.splitlines() if w.strip() and not w.startswith("#")
    )


def default_stopwords() -> frozenset[str]:
    """Union of the shipped English and German lists."""
    return _shipped_list("en.txt") | _shipped_list("de.txt")


def tokenize(text: str, stopwords: Iterable[str] | None = None) -> list[str]:
    """Tokenize free text under the shared rule, preserving token order.

    `stopwords` replaces the shipped default lists when given.
    """
    stop = default_stopwords() if stopwords is None else stopwords
    tokens = []
    for token in _TOKEN_RE.findall(text.lower()):
        if len(token) >= MIN_TOKEN_CHARS and token not in stop:
            tokens.append(token)
    return tokens
