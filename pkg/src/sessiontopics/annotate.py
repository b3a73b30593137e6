"""Action annotation: expand actions to documents, documents to weighted
keyword lists, and keywords to weighted category lists.

A document's keywords are resolved through a strict fallback chain:
thesaurus-native keywords directly, foreign-vocabulary keywords through the
crosswalk, and as a last resort title tokens through the free-term model.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .corpus import Corpus, Document, StrModel
from .kos import DEFAULT_NATIVE_VOCABULARY, Crosswalk, KeywordCategoryTable, Thesaurus
from .logs import DOC_VIEW, Action, Session
from .textnorm import tokenize

WeightedLabel = tuple[str, float]


def keyword_weight(position: int) -> float:
    """Discount weight 1/log2(p+1) for the keyword at 1-based position p."""
    if position < 1:
        raise ValueError(f"keyword position must be >= 1, got {position}")
    return 1.0 / math.log2(position + 1)


def document_factor(rank: int) -> float:
    """Linear damping 1.05 - 0.05*r for the result at 1-based rank r in [1, 20]."""
    if not 1 <= rank <= 20:
        raise ValueError(f"result rank must be in [1, 20], got {rank}")
    return 1.05 - 0.05 * rank


def combine_weights(pairs: Iterable[WeightedLabel]) -> list[WeightedLabel]:
    """Sum duplicate labels, then sort by descending weight, ties by label."""
    totals: dict[str, float] = {}
    for label, weight in pairs:
        totals[label] = totals.get(label, 0.0) + weight
    return sorted(totals.items(), key=lambda pair: (-pair[1], pair[0]))


@dataclass
class KosBundle:
    """Everything the annotator needs besides the corpus."""

    thesaurus: Thesaurus
    lookup: KeywordCategoryTable
    crosswalk: Crosswalk | None = None
    str_model: StrModel | None = None
    stopwords: frozenset[str] | None = None
    native_vocabulary: str = DEFAULT_NATIVE_VOCABULARY


@dataclass
class AnnotatedAction:
    """An action plus its keyword/category distributions; the session topic
    and topic number are filled in by the later pipeline stages."""

    action: Action
    keywords: list[WeightedLabel] = field(default_factory=list)
    categories: list[WeightedLabel] = field(default_factory=list)
    citation: str | None = None
    flags: tuple[str, ...] = ()
    session_topic: str | None = None
    topic_number: int | None = None


@dataclass
class AnnotatedSession:
    id: str
    actions: list[AnnotatedAction]

    @property
    def duration_s(self) -> float:
        if not self.actions:
            return 0.0
        return self.actions[-1].action.ts - self.actions[0].action.ts


def resolve_document_keywords(
    doc: Document,
    thesaurus: Thesaurus,
    crosswalk: Crosswalk | None = None,
    str_model: StrModel | None = None,
    stopwords: frozenset[str] | None = None,
    native_vocabulary: str = DEFAULT_NATIVE_VOCABULARY,
) -> list[str]:
    """Ordered descriptor ids for a document via the fallback chain.

    (a) native keywords resolved directly; else (b) foreign keywords mapped
    through the crosswalk; else (c) title tokens mapped through the
    free-term model. Duplicates keep their first (best) position. May be
    empty.
    """
    native = [k for k in doc.keywords if k.vocabulary == native_vocabulary]
    foreign = [k for k in doc.keywords if k.vocabulary != native_vocabulary]
    resolved: list[str] = []
    if native:
        for keyword in native:
            descriptor = thesaurus.resolve(keyword.term)
            if descriptor is not None:
                resolved.append(descriptor)
    elif foreign:
        if crosswalk is not None:
            for keyword in foreign:
                resolved.extend(crosswalk.map(keyword.vocabulary, keyword.term))
    elif str_model is not None:
        for token in tokenize(doc.title, stopwords):
            resolved.extend(str_model.map_term(token))
    return list(dict.fromkeys(resolved))


def derive_categories(
    keywords: Sequence[WeightedLabel], table: KeywordCategoryTable
) -> list[WeightedLabel]:
    """Weighted category list: each category collects the weights of the
    keywords that map to it; unmapped keywords contribute nothing."""
    pairs = []
    for descriptor, weight in keywords:
        code = table.lookup(descriptor)
        if code is not None:
            pairs.append((code, weight))
    return combine_weights(pairs)


def format_citation(doc: Document) -> str:
    """Short citation line: 'Author (Year): Title', 'et al.' beyond one author."""
    parts = []
    if doc.authors:
        name = doc.authors[0]
        if len(doc.authors) > 1:
            name += " et al."
        parts.append(name)
    parts.append(f"({doc.year if doc.year is not None else 'n.d.'}):")
    parts.append(doc.title)
    return " ".join(parts)


def annotate_doc_view(action: Action, corpus: Corpus, kos: KosBundle) -> AnnotatedAction:
    """Annotate a document view with the viewed document's keyword list,
    position-discounted, and the derived categories."""
    doc = corpus.get(action.doc_id) if action.doc_id else None
    if doc is None:
        return AnnotatedAction(action=action, flags=(f"unknown_doc:{action.doc_id}",))
    descriptors = resolve_document_keywords(
        doc,
        kos.thesaurus,
        kos.crosswalk,
        kos.str_model,
        kos.stopwords,
        kos.native_vocabulary,
    )
    keywords = combine_weights(
        (descriptor, keyword_weight(position))
        for position, descriptor in enumerate(descriptors, 1)
    )
    return AnnotatedAction(
        action=action,
        keywords=keywords,
        categories=derive_categories(keywords, kos.lookup),
        citation=format_citation(doc),
        flags=() if descriptors else ("no_keywords",),
    )


def annotate_search(action: Action, corpus: Corpus, kos: KosBundle) -> AnnotatedAction:
    """Annotate a search action from its first twenty result documents.

    Each keyword contributes keyword_weight(position) * document_factor(rank);
    contributions of the same descriptor across documents are summed.
    """
    contributions: list[WeightedLabel] = []
    flags: list[str] = []
    for rank, doc_id in enumerate(action.result_doc_ids[:20], 1):
        doc = corpus.get(doc_id)
        if doc is None:
            flags.append(f"unknown_doc:{doc_id}")
            continue
        factor = document_factor(rank)
        descriptors = resolve_document_keywords(
            doc,
            kos.thesaurus,
            kos.crosswalk,
            kos.str_model,
            kos.stopwords,
            kos.native_vocabulary,
        )
        for position, descriptor in enumerate(descriptors, 1):
            contributions.append((descriptor, keyword_weight(position) * factor))
    keywords = combine_weights(contributions)
    return AnnotatedAction(
        action=action,
        keywords=keywords,
        categories=derive_categories(keywords, kos.lookup),
        flags=tuple(flags),
    )


def annotate_action(action: Action, corpus: Corpus, kos: KosBundle) -> AnnotatedAction:
    if action.kind == DOC_VIEW:
        return annotate_doc_view(action, corpus, kos)
    return annotate_search(action, corpus, kos)


def annotate_session(session: Session, corpus: Corpus, kos: KosBundle) -> AnnotatedSession:
    return AnnotatedSession(
        id=session.id,
        actions=[annotate_action(a, corpus, kos) for a in session.actions],
    )


def annotate_sessions(
    sessions: Sequence[Session],
    corpus: Corpus,
    kos: KosBundle,
    workers: int = 1,
) -> list[AnnotatedSession]:
    """Annotate many sessions; with workers > 1 sessions are processed in a
    thread pool. Sessions are independent, so the output is identical to the
    sequential run."""
    if workers <= 1:
        return [annotate_session(s, corpus, kos) for s in sessions]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda s: annotate_session(s, corpus, kos), sessions))
