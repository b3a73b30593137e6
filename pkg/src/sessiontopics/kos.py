"""Knowledge organization systems: thesaurus, classification, crosswalk,
and the keyword-to-category lookup table built from a tagged corpus.

All structures are immutable once loaded and safe for concurrent reads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from os import PathLike
from typing import TYPE_CHECKING, Iterable, Mapping

from .errors import ParseError, ValidationError

if TYPE_CHECKING:
    from .corpus import Corpus

# Vocabulary tag that marks document keywords as coming from the thesaurus
# itself (as opposed to a crosswalked foreign vocabulary).
DEFAULT_NATIVE_VOCABULARY = "thes"

CROSSWALK_RELATIONS = ("exact", "broader", "narrower")
_RELATION_RANK = {name: rank for rank, name in enumerate(CROSSWALK_RELATIONS)}


def _fold(term: str) -> str:
    return term.strip().lower()


@dataclass(frozen=True)
class Descriptor:
    """One controlled keyword: an id, a preferred label, optional synonyms."""

    id: str
    preferred_label: str
    synonyms: tuple[str, ...] = ()


class Thesaurus:
    """Descriptor store with a case-insensitive label/synonym index."""

    def __init__(self, descriptors: Iterable[Descriptor]):
        self._descriptors: dict[str, Descriptor] = {}
        self._label_index: dict[str, str] = {}
        for desc in descriptors:
            if desc.id in self._descriptors:
                raise ValidationError(f"duplicate descriptor id {desc.id!r}")
            self._descriptors[desc.id] = desc
        for desc in self._descriptors.values():
            folded = _fold(desc.preferred_label)
            other = self._label_index.get(folded)
            if other is not None and other != desc.id:
                raise ValidationError(
                    f"preferred label {desc.preferred_label!r} of {desc.id!r} "
                    f"collides with descriptor {other!r}"
                )
            self._label_index[folded] = desc.id
        for desc in self._descriptors.values():
            for synonym in desc.synonyms:
                folded = _fold(synonym)
                other = self._label_index.get(folded)
                if other is not None and other != desc.id:
                    raise ValidationError(
                        f"synonym {synonym!r} of {desc.id!r} already resolves "
                        f"to descriptor {other!r}"
                    )
                self._label_index[folded] = desc.id

    def __len__(self) -> int:
        return len(self._descriptors)

    def __contains__(self, descriptor_id: str) -> bool:
        return descriptor_id in self._descriptors

    def get(self, descriptor_id: str) -> Descriptor | None:
        return self._descriptors.get(descriptor_id)

    @property
    def descriptors(self) -> tuple[Descriptor, ...]:
        return tuple(self._descriptors.values())

    def resolve(self, term: str) -> str | None:
        """Descriptor id whose preferred label or synonym matches, else None."""
        return self._label_index.get(_fold(term))


@dataclass(frozen=True)
class Category:
    code: str
    label: str
    parent: str | None = None


class Classification:
    """Two-level category scheme: main classes and their subclasses."""

    def __init__(self, categories: Iterable[Category]):
        self._categories: dict[str, Category] = {}
        for cat in categories:
            if cat.code in self._categories:
                raise ValidationError(f"duplicate category code {cat.code!r}")
            self._categories[cat.code] = cat
        for cat in self._categories.values():
            if cat.parent is None:
                continue
            parent = self._categories.get(cat.parent)
            if parent is None:
                raise ValidationError(
                    f"category {cat.code!r} names unknown parent {cat.parent!r}"
                )
            if parent.parent is not None:
                raise ValidationError(
                    f"category {cat.code!r} nests below subclass {cat.parent!r}; "
                    "only main class / subclass levels are allowed"
                )

    def __len__(self) -> int:
        return len(self._categories)

    def __contains__(self, code: str) -> bool:
        return code in self._categories

    def get(self, code: str) -> Category | None:
        return self._categories.get(code)

    @property
    def categories(self) -> tuple[Category, ...]:
        return tuple(self._categories.values())

    def main_class_of(self, code: str) -> str | None:
        """Code of the main class a category belongs to (itself if top-level)."""
        cat = self._categories.get(code)
        if cat is None:
            return None
        return cat.parent if cat.parent is not None else cat.code


@dataclass(frozen=True)
class CrosswalkEntry:
    vocabulary: str
    term: str
    target: str
    relation: str


class Crosswalk:
    """Cross-concordance from foreign-vocabulary terms to descriptor ids."""

    def __init__(self, entries: Iterable[CrosswalkEntry], thesaurus: Thesaurus | None = None):
        self.entries = tuple(entries)
        self._index: dict[tuple[str, str], list[str]] = {}
        for entry in self.entries:
            if entry.relation not in _RELATION_RANK:
                raise ValidationError(
                    f"unknown crosswalk relation {entry.relation!r} "
                    f"(expected one of {', '.join(CROSSWALK_RELATIONS)})"
                )
            if thesaurus is not None and entry.target not in thesaurus:
                raise ValidationError(
                    f"crosswalk target {entry.target!r} is not in the thesaurus"
                )
        buckets: dict[tuple[str, str], list[tuple[int, int, str]]] = {}
        for position, entry in enumerate(self.entries):
            key = (entry.vocabulary, _fold(entry.term))
            buckets.setdefault(key, []).append(
                (_RELATION_RANK[entry.relation], position, entry.target)
            )
        for key, ranked in buckets.items():
            ranked.sort()
            self._index[key] = [target for _, _, target in ranked]

    def map(self, vocabulary: str, term: str) -> list[str]:
        """Target descriptor ids: exact before broader before narrower,
        file order within one relation class. Empty when unmapped."""
        return list(self._index.get((vocabulary, _fold(term)), ()))


@dataclass(frozen=True)
class KeywordCategoryTable:
    """Per-descriptor most frequent co-occurring category code."""

    mapping: Mapping[str, str] = field(default_factory=dict)

    def lookup(self, keyword: str) -> str | None:
        return self.mapping.get(keyword)

    def __len__(self) -> int:
        return len(self.mapping)

    def to_json(self) -> dict[str, str]:
        return dict(sorted(self.mapping.items()))

    @classmethod
    def from_json(cls, data: Mapping[str, str]) -> "KeywordCategoryTable":
        return cls(dict(data))


# --- file loading ---------------------------------------------------------


def _load_json_array(path: str | PathLike, what: str) -> list:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {what} file: {exc.msg}", str(path), exc.lineno)
    if not isinstance(data, list):
        raise ParseError(f"{what} file must contain a JSON array", str(path))
    return data


def _require(record: dict, key: str, index: int, path: str | PathLike, what: str) -> object:
    if not isinstance(record, dict) or key not in record:
        raise ParseError(f"{what} record #{index + 1} lacks field {key!r}", str(path))
    return record[key]


def load_thesaurus(path: str | PathLike) -> Thesaurus:
    """Load a thesaurus file: JSON array of {"id", "label", "synonyms": [...]}."""
    descriptors = []
    for i, record in enumerate(_load_json_array(path, "thesaurus")):
        descriptors.append(
            Descriptor(
                id=str(_require(record, "id", i, path, "thesaurus")),
                preferred_label=str(_require(record, "label", i, path, "thesaurus")),
                synonyms=tuple(str(s) for s in record.get("synonyms", [])),
            )
        )
    return Thesaurus(descriptors)


def load_classification(path: str | PathLike) -> Classification:
    """Load a classification file: JSON array of {"code", "label", "parent"?}."""
    categories = []
    for i, record in enumerate(_load_json_array(path, "classification")):
        parent = record.get("parent")
        categories.append(
            Category(
                code=str(_require(record, "code", i, path, "classification")),
                label=str(_require(record, "label", i, path, "classification")),
                parent=None if parent is None else str(parent),
            )
        )
    return Classification(categories)


def load_crosswalk(path: str | PathLike, thesaurus: Thesaurus | None = None) -> Crosswalk:
    """Load a crosswalk file: JSON array of {"vocab", "term", "target", "relation"}."""
    entries = []
    for i, record in enumerate(_load_json_array(path, "crosswalk")):
        entries.append(
            CrosswalkEntry(
                vocabulary=str(_require(record, "vocab", i, path, "crosswalk")),
                term=str(_require(record, "term", i, path, "crosswalk")),
                target=str(_require(record, "target", i, path, "crosswalk")),
                relation=str(_require(record, "relation", i, path, "crosswalk")),
            )
        )
    return Crosswalk(entries, thesaurus)


# --- operations -----------------------------------------------------------


def resolve_descriptor(thesaurus: Thesaurus, term: str) -> str | None:
    """Case-insensitive match of `term` against preferred labels and synonyms."""
    return thesaurus.resolve(term)


def map_via_crosswalk(crosswalk: Crosswalk, source_vocabulary: str, term: str) -> list[str]:
    return crosswalk.map(source_vocabulary, term)


def build_keyword_category_table(
    corpus: "Corpus",
    thesaurus: Thesaurus,
    native_vocabulary: str = DEFAULT_NATIVE_VOCABULARY,
) -> KeywordCategoryTable:
    """Build the descriptor-to-category lookup from document co-occurrence.

    For every document, each resolvable native-vocabulary keyword co-occurs
    once with each of the document's category codes. A descriptor maps to
    the category it shares the most documents with; ties go to the
    lexicographically smallest code. Descriptors that never co-occur with a
    category are omitted.
    """
    counts: dict[str, dict[str, int]] = {}
    for doc in corpus:
        if not doc.categories:
            continue
        seen: set[str] = set()
        for keyword in doc.keywords:
            if keyword.vocabulary != native_vocabulary:
                continue
            descriptor = thesaurus.resolve(keyword.term)
            if descriptor is None or descriptor in seen:
                continue
            seen.add(descriptor)
            per_category = counts.setdefault(descriptor, {})
            for code in set(doc.categories):
                per_category[code] = per_category.get(code, 0) + 1
    mapping = {
        descriptor: min(per_category, key=lambda code: (-per_category[code], code))
        for descriptor, per_category in counts.items()
    }
    return KeywordCategoryTable(mapping)


def lookup_category(table: KeywordCategoryTable, keyword: str) -> str | None:
    return table.lookup(keyword)
