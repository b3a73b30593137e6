"""Document corpus and the co-occurrence model that maps free search terms
to thesaurus descriptors.
"""

from __future__ import annotations

import json
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from os import PathLike
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import ParseError, ValidationError
from .kos import DEFAULT_NATIVE_VOCABULARY, Thesaurus
from .textnorm import tokenize


@dataclass(frozen=True)
class DocumentKeyword:
    vocabulary: str
    term: str


@dataclass(frozen=True)
class Document:
    """One corpus record. Keyword order is meaningful: cataloguers put the
    more specific and more important keywords first."""

    id: str
    title: str
    abstract: str | None = None
    keywords: tuple[DocumentKeyword, ...] = ()
    categories: tuple[str, ...] = ()
    authors: tuple[str, ...] = ()
    year: int | None = None

    def free_text(self) -> str:
        return self.title if self.abstract is None else f"{self.title} {self.abstract}"


class Corpus:
    """Documents indexed by id, iterated in ingest order."""

    def __init__(self, documents: Iterable[Document]):
        self._documents: dict[str, Document] = {}
        for doc in documents:
            if doc.id in self._documents:
                raise ValidationError(f"duplicate document id {doc.id!r}")
            self._documents[doc.id] = doc

    def __len__(self) -> int:
        return len(self._documents)

    def __iter__(self) -> Iterator[Document]:
        return iter(self._documents.values())

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._documents

    def get(self, doc_id: str) -> Document | None:
        return self._documents.get(doc_id)


def _document_from_dict(record: dict) -> Document:
    keywords = tuple(
        DocumentKeyword(vocabulary=str(k["vocab"]), term=str(k["term"]))
        for k in record.get("keywords", [])
    )
    year = record.get("year")
    return Document(
        id=str(record["id"]),
        title=str(record.get("title", "")),
        abstract=record.get("abstract"),
        keywords=keywords,
        categories=tuple(str(c) for c in record.get("categories", [])),
        authors=tuple(str(a) for a in record.get("authors", [])),
        year=None if year is None else int(year),
    )


def load_corpus(path: str | PathLike) -> Corpus:
    """Load a corpus file: JSON Lines, one document object per line."""
    documents = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc.msg}", str(path), lineno)
            try:
                documents.append(_document_from_dict(record))
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"malformed document record: {exc}", str(path), lineno)
    return Corpus(documents)


class StrModel:
    """Free term -> descriptors, scored by document-level Dice coefficient."""

    def __init__(self, mapping: Mapping[str, Sequence[tuple[str, float]]]):
        self.mapping: dict[str, list[tuple[str, float]]] = {
            term: list(entries) for term, entries in mapping.items()
        }

    def __len__(self) -> int:
        return len(self.mapping)

    def map_term(self, term: str) -> list[str]:
        entries = self.mapping.get(term.strip().lower())
        return [descriptor for descriptor, _ in entries] if entries else []

    def to_json(self) -> dict:
        return {
            "mapping": {
                term: [[descriptor, score] for descriptor, score in entries]
                for term, entries in sorted(self.mapping.items())
            }
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "StrModel":
        return cls(
            {
                term: [(str(d), float(s)) for d, s in entries]
                for term, entries in data["mapping"].items()
            }
        )


def _count_chunk(
    documents: Sequence[Document],
    thesaurus: Thesaurus,
    stopwords: frozenset[str] | None,
    native_vocabulary: str,
) -> tuple[Counter, Counter, Counter]:
    token_docs: Counter = Counter()
    descriptor_docs: Counter = Counter()
    pair_docs: Counter = Counter()
    for doc in documents:
        tokens = set(tokenize(doc.free_text(), stopwords))
        descriptors = set()
        for keyword in doc.keywords:
            if keyword.vocabulary != native_vocabulary:
                continue
            descriptor = thesaurus.resolve(keyword.term)
            if descriptor is not None:
                descriptors.add(descriptor)
        token_docs.update(tokens)
        descriptor_docs.update(descriptors)
        for token in tokens:
            for descriptor in descriptors:
                pair_docs[(token, descriptor)] += 1
    return token_docs, descriptor_docs, pair_docs


def build_str_model(
    corpus: Corpus,
    thesaurus: Thesaurus,
    min_count: int = 1,
    top_k: int = 5,
    stopwords: frozenset[str] | None = None,
    native_vocabulary: str = DEFAULT_NATIVE_VOCABULARY,
    workers: int = 1,
) -> StrModel:
    """Count token/descriptor co-occurrence over documents and keep, per
    token, the top_k descriptors by Dice score 2*both/(token_docs+descriptor_docs).

    Pairs seen in fewer than min_count documents are dropped. Counting may be
    partitioned across workers; integer counts merge exactly, so the result
    is identical to a single-threaded build.
    """
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    if top_k < 1:
        raise ValueError("top_k must be >= 1")
    documents = list(corpus)
    token_docs: Counter = Counter()
    descriptor_docs: Counter = Counter()
    pair_docs: Counter = Counter()
    if workers <= 1 or len(documents) <= 1:
        token_docs, descriptor_docs, pair_docs = _count_chunk(
            documents, thesaurus, stopwords, native_vocabulary
        )
    else:
        size = (len(documents) + workers - 1) // workers
        chunks = [documents[i : i + size] for i in range(0, len(documents), size)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(
                lambda chunk: _count_chunk(chunk, thesaurus, stopwords, native_vocabulary),
                chunks,
            )
        for tokens_part, descriptors_part, pairs_part in parts:
            token_docs.update(tokens_part)
            descriptor_docs.update(descriptors_part)
            pair_docs.update(pairs_part)

    by_token: dict[str, list[tuple[str, float]]] = {}
    for (token, descriptor), both in pair_docs.items():
        if both < min_count:
            continue
        score = 2.0 * both / (token_docs[token] + descriptor_docs[descriptor])
        by_token.setdefault(token, []).append((descriptor, score))
    mapping = {}
    for token, entries in by_token.items():
        entries.sort(key=lambda pair: (-pair[1], pair[0]))
        mapping[token] = entries[:top_k]
    return StrModel(mapping)


def map_free_term(model: StrModel, term: str) -> list[str]:
    """Descriptor ids for a free term, best score first; [] when unknown."""
    return model.map_term(term)
