"""JSON Lines wire format for sessions, plain and annotated.

One session per line. Action fields reuse the log field names ("q",
"facets", "doc", "results"); annotation adds "keywords" and "categories"
as [label, weight] pairs plus "session_topic", "topic_number", "citation"
and "flags". Optional fields are omitted when empty so files stay diffable.
"""

from __future__ import annotations

import json
from os import PathLike
from typing import Iterable, Iterator

from .annotate import AnnotatedAction, AnnotatedSession
from .errors import ParseError
from .logs import Action, Session


def action_to_dict(action: Action) -> dict:
    record: dict = {"kind": action.kind, "ts": action.ts}
    if action.query_terms:
        record["q"] = list(action.query_terms)
    if action.facet_terms:
        record["facets"] = list(action.facet_terms)
    if action.doc_id is not None:
        record["doc"] = action.doc_id
    if action.result_doc_ids:
        record["results"] = list(action.result_doc_ids)
    return record


def action_from_dict(record: dict, index: int) -> Action:
    return Action(
        index=index,
        kind=record["kind"],
        ts=float(record["ts"]),
        query_terms=tuple(record.get("q", ())),
        facet_terms=tuple(record.get("facets", ())),
        doc_id=record.get("doc"),
        result_doc_ids=tuple(record.get("results", ())),
    )


def session_to_dict(session: Session) -> dict:
    return {"id": session.id, "actions": [action_to_dict(a) for a in session.actions]}


def session_from_dict(record: dict) -> Session:
    actions = tuple(
        action_from_dict(raw, i) for i, raw in enumerate(record["actions"], 1)
    )
    return Session(id=str(record["id"]), actions=actions)


def annotated_action_to_dict(annotated: AnnotatedAction) -> dict:
    record = action_to_dict(annotated.action)
    record["keywords"] = [[label, weight] for label, weight in annotated.keywords]
    record["categories"] = [[label, weight] for label, weight in annotated.categories]
    if annotated.citation is not None:
        record["citation"] = annotated.citation
    if annotated.flags:
        record["flags"] = list(annotated.flags)
    if annotated.session_topic is not None:
        record["session_topic"] = annotated.session_topic
    if annotated.topic_number is not None:
        record["topic_number"] = annotated.topic_number
    return record


def annotated_action_from_dict(record: dict, index: int) -> AnnotatedAction:
    return AnnotatedAction(
        action=action_from_dict(record, index),
        keywords=[(str(label), float(weight)) for label, weight in record.get("keywords", ())],
        categories=[(str(label), float(weight)) for label, weight in record.get("categories", ())],
        citation=record.get("citation"),
        flags=tuple(record.get("flags", ())),
        session_topic=record.get("session_topic"),
        topic_number=record.get("topic_number"),
    )


def annotated_session_to_dict(session: AnnotatedSession) -> dict:
    return {
        "id": session.id,
        "duration_s": session.duration_s,
        "actions": [annotated_action_to_dict(a) for a in session.actions],
    }


def annotated_session_from_dict(record: dict) -> AnnotatedSession:
    # duration_s is derived from the action timestamps, not read back
    actions = [
        annotated_action_from_dict(raw, i)
        for i, raw in enumerate(record["actions"], 1)
    ]
    return AnnotatedSession(id=str(record["id"]), actions=actions)


def _read_jsonl(path: str | PathLike) -> Iterator[tuple[int, dict]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line:
                continue
            try:
                yield lineno, json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc.msg}", str(path), lineno)


def write_sessions(sessions: Iterable[Session], path: str | PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for session in sessions:
            fh.write(json.dumps(session_to_dict(session), ensure_ascii=False) + "\n")


def read_sessions(path: str | PathLike) -> list[Session]:
    sessions = []
    for lineno, record in _read_jsonl(path):
        try:
            sessions.append(session_from_dict(record))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed session record: {exc}", str(path), lineno)
    return sessions


def write_annotated(sessions: Iterable[AnnotatedSession], path: str | PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for session in sessions:
            fh.write(
                json.dumps(annotated_session_to_dict(session), ensure_ascii=False) + "\n"
            )


def read_annotated(path: str | PathLike) -> list[AnnotatedSession]:
    sessions = []
    for lineno, record in _read_jsonl(path):
        try:
            sessions.append(annotated_session_from_dict(record))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed annotated session record: {exc}", str(path), lineno)
    return sessions
