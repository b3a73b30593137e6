"""Transaction-log ingestion: parse raw events, group them into sessions,
filter to the evaluation window, and sample an assessment dataset.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from os import PathLike
from typing import Iterable, Sequence

from .errors import ParseError, ValidationError

SIMPLE_SEARCH = "simple_search"
ADVANCED_SEARCH = "advanced_search"
FACET_SEARCH = "facet_search"
DOC_VIEW = "doc_view"

SEARCH_KINDS = frozenset({SIMPLE_SEARCH, ADVANCED_SEARCH, FACET_SEARCH})
ACTION_KINDS = SEARCH_KINDS | {DOC_VIEW}

# Only the first twenty results of a search are ever used downstream.
MAX_RESULTS = 20

DEFAULT_INACTIVITY_TIMEOUT_S = 30 * 60.0
DEFAULT_MIN_ACTIONS = 2
DEFAULT_MAX_ACTIONS = 30
DEFAULT_MAX_DURATION_S = 2 * 3600.0


@dataclass(frozen=True)
class Action:
    """One user event inside a session (1-based index)."""

    index: int
    kind: str
    ts: float
    query_terms: tuple[str, ...] = ()
    facet_terms: tuple[str, ...] = ()
    doc_id: str | None = None
    result_doc_ids: tuple[str, ...] = ()

    @property
    def is_search(self) -> bool:
        return self.kind in SEARCH_KINDS


@dataclass(frozen=True)
class RawEvent:
    """A parsed log line, not yet grouped into a session."""

    user: str
    ts: float
    kind: str
    query_terms: tuple[str, ...] = ()
    facet_terms: tuple[str, ...] = ()
    doc_id: str | None = None
    result_doc_ids: tuple[str, ...] = ()


@dataclass(frozen=True)
class Session:
    id: str
    actions: tuple[Action, ...]

    @property
    def duration_s(self) -> float:
        return self.actions[-1].ts - self.actions[0].ts if self.actions else 0.0


def _str_list(value: object, what: str, path: str | PathLike, lineno: int) -> tuple[str, ...]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise ParseError(f"field {what!r} must be a list of strings", str(path), lineno)
    return tuple(value)


def parse_log(path: str | PathLike) -> list[RawEvent]:
    """Parse a JSON Lines transaction log into raw events, in file order.

    Search lines carry "q" (advanced/simple) or "facets" (facet search) and
    optionally "results"; result lists are cut to the first twenty entries.
    Document views carry "doc" and no query. Unknown kinds are rejected.
    """
    events: list[RawEvent] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc.msg}", str(path), lineno)
            if not isinstance(record, dict):
                raise ParseError("log line must be a JSON object", str(path), lineno)
            kind = record.get("kind")
            if kind not in ACTION_KINDS:
                raise ParseError(f"unknown action kind {kind!r}", str(path), lineno)
            user = record.get("user")
            if not isinstance(user, str) or not user:
                raise ParseError("missing or empty 'user'", str(path), lineno)
            ts = record.get("ts")
            if not isinstance(ts, (int, float)) or isinstance(ts, bool):
                raise ParseError("missing or non-numeric 'ts'", str(path), lineno)

            if kind == DOC_VIEW:
                doc_id = record.get("doc")
                if not isinstance(doc_id, str) or not doc_id:
                    raise ParseError("doc_view line lacks 'doc'", str(path), lineno)
                if record.get("q"):
                    raise ParseError("doc_view line must not carry query terms", str(path), lineno)
                events.append(RawEvent(user=user, ts=float(ts), kind=kind, doc_id=doc_id))
                continue

            query = _str_list(record.get("q", []), "q", path, lineno)
            facets = _str_list(record.get("facets", []), "facets", path, lineno)
            if kind == FACET_SEARCH:
                if not facets:
                    raise ParseError("facet_search line lacks 'facets'", str(path), lineno)
            elif "q" not in record:
                raise ParseError(f"{kind} line lacks 'q'", str(path), lineno)
            results = _str_list(record.get("results", []), "results", path, lineno)
            events.append(
                RawEvent(
                    user=user,
                    ts=float(ts),
                    kind=kind,
                    query_terms=query,
                    facet_terms=facets,
                    doc_id=None,
                    result_doc_ids=results[:MAX_RESULTS],
                )
            )
    return events


def _event_to_action(event: RawEvent, index: int) -> Action:
    return Action(
        index=index,
        kind=event.kind,
        ts=event.ts,
        query_terms=event.query_terms,
        facet_terms=event.facet_terms,
        doc_id=event.doc_id,
        result_doc_ids=event.result_doc_ids,
    )


def sessionize(
    events: Iterable[RawEvent],
    inactivity_timeout: float = DEFAULT_INACTIVITY_TIMEOUT_S,
) -> list[Session]:
    """Group events into per-user sessions split at inactivity gaps.

    Events of one user stay in input order; a gap above the timeout starts a
    new session. Sessions are returned in order of their first event.
    """
    if inactivity_timeout <= 0:
        raise ValueError("inactivity_timeout must be > 0")
    open_events: dict[str, list[RawEvent]] = {}
    session_counter: dict[str, int] = {}
    sessions: list[tuple[str, list[RawEvent]]] = []

    def close(user: str) -> None:
        batch = open_events.pop(user, None)
        if batch:
            session_counter[user] = session_counter.get(user, 0) + 1
            # ":" is a legal URL path character, so ids survive in request paths
            sessions.append((f"{user}:{session_counter[user]}", batch))

    for position, event in enumerate(events):
        batch = open_events.get(event.user)
        if batch:
            gap = event.ts - batch[-1].ts
            if gap < 0:
                raise ValidationError(
                    f"event #{position + 1}: timestamps of user {event.user!r} decrease"
                )
            if gap > inactivity_timeout:
                close(event.user)
        open_events.setdefault(event.user, []).append(event)
    for user in list(open_events):
        close(user)

    sessions.sort(key=lambda pair: (pair[1][0].ts, pair[0]))
    return [
        Session(
            id=session_id,
            actions=tuple(_event_to_action(e, i) for i, e in enumerate(batch, 1)),
        )
        for session_id, batch in sessions
    ]


def filter_sessions(
    sessions: Iterable[Session],
    min_actions: int = DEFAULT_MIN_ACTIONS,
    max_actions: int = DEFAULT_MAX_ACTIONS,
    max_duration: float = DEFAULT_MAX_DURATION_S,
) -> list[Session]:
    """Keep sessions inside the evaluation window (action count and duration)."""
    return [
        s
        for s in sessions
        if min_actions <= len(s.actions) <= max_actions and s.duration_s <= max_duration
    ]


def sample_evaluation_set(
    sessions: Sequence[Session],
    target_n: int = 100,
    per_length_cap: int = 4,
    seed: int = 0,
) -> list[Session]:
    """Draw up to per_length_cap sessions per action count, smallest counts
    first, until target_n sessions are collected. Deterministic per seed."""
    rng = random.Random(seed)
    by_length: dict[int, list[Session]] = {}
    for session in sessions:
        by_length.setdefault(len(session.actions), []).append(session)
    selected: list[Session] = []
    for length in sorted(by_length):
        pool = by_length[length]
        chosen = list(pool) if len(pool) <= per_length_cap else rng.sample(pool, per_length_cap)
        selected.extend(chosen)
        if len(selected) >= target_n:
            break
    return selected[:target_n]


@dataclass(frozen=True)
class DatasetStats:
    total_sessions: int
    total_actions: int
    mean_actions: float
    min_actions: int
    max_actions: int
    kind_counts: dict[str, int] = field(default_factory=dict)
    mean_duration_s: float = 0.0


def dataset_stats(sessions: Sequence[Session]) -> DatasetStats:
    """Size and composition summary of a session set (zeros when empty)."""
    kind_counts = {kind: 0 for kind in sorted(ACTION_KINDS)}
    if not sessions:
        return DatasetStats(0, 0, 0.0, 0, 0, kind_counts, 0.0)
    lengths = [len(s.actions) for s in sessions]
    for session in sessions:
        for action in session.actions:
            kind_counts[action.kind] += 1
    return DatasetStats(
        total_sessions=len(sessions),
        total_actions=sum(lengths),
        mean_actions=sum(lengths) / len(sessions),
        min_actions=min(lengths),
        max_actions=max(lengths),
        kind_counts=kind_counts,
        mean_duration_s=sum(s.duration_s for s in sessions) / len(sessions),
    )
