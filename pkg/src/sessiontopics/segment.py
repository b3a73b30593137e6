"""Session segmentation: number topics with the backward-scan two-rule
algorithm and cut the session where the number changes.

Rule 1 reuses the topic number of any earlier action with the same session
topic. Rule 2, tried only when Rule 1 finds nothing, links a search to an
earlier search whose query shares a term (edit distance at most 2).
"""

from __future__ import annotations

from dataclasses import dataclass
from html import escape
from typing import Sequence

from .annotate import AnnotatedAction, AnnotatedSession, format_citation
from .corpus import Corpus
from .distance import within_distance
from .kos import Classification
from .logs import Action
from .textnorm import tokenize

QUERY_TERM_MAX_DISTANCE = 2

KIND_LABELS = {
    "simple_search": "Simple search",
    "advanced_search": "Advanced search",
    "facet_search": "Facet search",
    "doc_view": "Document view",
}


def normalize_query_terms(
    action: Action, stopwords: frozenset[str] | None = None
) -> list[str]:
    """Comparable terms of a search action: query plus clicked facet terms,
    run through the shared tokenization rule."""
    terms: list[str] = []
    for source in (action.query_terms, action.facet_terms):
        for raw in source:
            terms.extend(tokenize(raw, stopwords))
    return terms


def terms_related(a: str, b: str) -> bool:
    """True when the case-folded terms are within edit distance 2."""
    return within_distance(a.lower(), b.lower(), QUERY_TERM_MAX_DISTANCE)


def queries_share_term(
    a: Action, b: Action, stopwords: frozenset[str] | None = None
) -> bool:
    """True when any pair of normalized terms of the two searches is related."""
    terms_a = normalize_query_terms(a, stopwords)
    terms_b = normalize_query_terms(b, stopwords)
    return any(terms_related(ta, tb) for ta in terms_a for tb in terms_b)


def assign_topic_numbers(
    session: AnnotatedSession, stopwords: frozenset[str] | None = None
) -> AnnotatedSession:
    """Set topic_number on every action, in place.

    Walk the session forward; for each action scan backward with Rule 1
    (same session topic), then--for searches only--with Rule 2 (shared query
    term). The nearest match donates its number; otherwise a fresh number is
    opened. Rule 1 exhausts the whole backward scan before Rule 2 runs, so
    equal topics always end up with equal numbers.
    """
    actions = session.actions
    normalized: list[list[str] | None] = [
        normalize_query_terms(a.action, stopwords) if a.action.is_search else None
        for a in actions
    ]
    next_fresh = 1
    for i, annotated in enumerate(actions):
        if annotated.session_topic is None:
            raise ValueError(f"action {annotated.action.index} has no session topic")
        number: int | None = None
        for j in range(i - 1, -1, -1):
            if actions[j].session_topic == annotated.session_topic:
                number = actions[j].topic_number
                break
        if number is None and annotated.action.is_search:
            terms_i = normalized[i]
            for j in range(i - 1, -1, -1):
                terms_j = normalized[j]
                if terms_j is None:
                    continue
                if any(terms_related(ti, tj) for ti in terms_i for tj in terms_j):
                    number = actions[j].topic_number
                    break
        if number is None:
            number = next_fresh
            next_fresh += 1
        annotated.topic_number = number
    return session


@dataclass(frozen=True)
class Segment:
    """Maximal run of consecutive actions sharing one topic number.
    Indices are 1-based and inclusive."""

    topic_number: int
    start_index: int
    end_index: int
    session_topics: tuple[str, ...]


def segments(session: AnnotatedSession) -> list[Segment]:
    """Cut the session wherever consecutive topic numbers differ."""
    result: list[Segment] = []
    run: list[AnnotatedAction] = []
    for annotated in session.actions:
        if annotated.topic_number is None:
            raise ValueError(f"action {annotated.action.index} has no topic number")
        if run and run[-1].topic_number != annotated.topic_number:
            result.append(_close_run(run))
            run = []
        run.append(annotated)
    if run:
        result.append(_close_run(run))
    return result


def _close_run(run: list[AnnotatedAction]) -> Segment:
    topics = tuple(dict.fromkeys(a.session_topic for a in run if a.session_topic))
    return Segment(
        topic_number=run[0].topic_number,
        start_index=run[0].action.index,
        end_index=run[-1].action.index,
        session_topics=topics,
    )


def class_switch_count(session: AnnotatedSession, classification: Classification) -> int:
    """Diagnostic: segment boundaries where the topic merely moves between a
    main class and one of its subclasses (or two subclasses of the same main
    class). Such boundaries are counted, not merged."""
    count = 0
    actions = session.actions
    for previous, current in zip(actions, actions[1:]):
        if previous.topic_number == current.topic_number:
            continue
        if previous.session_topic == current.session_topic:
            continue
        main_a = classification.main_class_of(previous.session_topic or "")
        main_b = classification.main_class_of(current.session_topic or "")
        if main_a is not None and main_a == main_b:
            count += 1
    return count


# --- rendering ------------------------------------------------------------

_COLUMNS = ("Step", "Action type", "Search terms", "Citation", "Session topic", "Topic")


def _action_terms(action: Action) -> str:
    return " ".join((*action.query_terms, *action.facet_terms))


def _citation_cell(annotated: AnnotatedAction, corpus: Corpus | None) -> str:
    action = annotated.action
    if action.kind != "doc_view":
        return ""
    if corpus is not None and action.doc_id:
        doc = corpus.get(action.doc_id)
        if doc is not None:
            return format_citation(doc)
    if annotated.citation:
        return annotated.citation
    return action.doc_id or ""


def session_rows(session: AnnotatedSession, corpus: Corpus | None = None) -> list[tuple[str, ...]]:
    """One display row per action, in the column order of _COLUMNS."""
    rows = []
    for annotated in session.actions:
        action = annotated.action
        rows.append(
            (
                str(action.index),
                KIND_LABELS.get(action.kind, action.kind),
                _action_terms(action) if action.kind != "doc_view" else "",
                _citation_cell(annotated, corpus),
                annotated.session_topic or "",
                f"T{annotated.topic_number}" if annotated.topic_number else "",
            )
        )
    return rows


def _boundary_before(session: AnnotatedSession) -> set[int]:
    cuts = set()
    actions = session.actions
    for previous, current in zip(actions, actions[1:]):
        if previous.topic_number != current.topic_number:
            cuts.add(current.action.index)
    return cuts


def render_session(session: AnnotatedSession, corpus: Corpus | None = None) -> str:
    """Plain-text table of the session with a dashed line between segments."""
    rows = session_rows(session, corpus)
    widths = [
        max(len(_COLUMNS[c]), *(len(row[c]) for row in rows)) if rows else len(_COLUMNS[c])
        for c in range(len(_COLUMNS))
    ]
    cuts = _boundary_before(session)

    def line(cells: Sequence[str]) -> str:
        return " | ".join(cell.ljust(width) for cell, width in zip(cells, widths)).rstrip()

    separator = "-+-".join("-" * width for width in widths)
    out = [line(_COLUMNS), separator]
    for annotated, row in zip(session.actions, rows):
        if annotated.action.index in cuts:
            out.append(separator)
        out.append(line(row))
    return "\n".join(out)


def render_session_html(session: AnnotatedSession, corpus: Corpus | None = None) -> str:
    """HTML table of the session; segment starts carry a dashed top border."""
    rows = session_rows(session, corpus)
    cuts = _boundary_before(session)
    out = [
        "<table class=\"session\">",
        "<style>.session{border-collapse:collapse}.session td,.session th"
        "{padding:2px 8px;text-align:left}.session tr.segment-start td"
        "{border-top:2px dashed #c00}</style>",
        "<thead><tr>" + "".join(f"<th>{escape(c)}</th>" for c in _COLUMNS) + "</tr></thead>",
        "<tbody>",
    ]
    for annotated, row in zip(session.actions, rows):
        cls = " class=\"segment-start\"" if annotated.action.index in cuts else ""
        out.append(f"<tr{cls}>" + "".join(f"<td>{escape(cell)}</td>" for cell in row) + "</tr>")
    out.extend(["</tbody>", "</table>"])
    return "\n".join(out)
