"""HTTP service for the assessment workflow.

Serves the evaluation set (segmented, annotated sessions) and accepts
assessor ratings. Ratings go to an append-only JSON Lines log that is
replayed on startup; the in-memory view keeps the last write per
(assessor, session). Appends are flushed and fsynced before the request
is acknowledged, so an acknowledged rating survives a crash.
"""

from __future__ import annotations

import json
import os
import threading
import time
from os import PathLike
from pathlib import Path
from typing import Literal

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .annotate import AnnotatedSession
from .evaluate import Rating, latest_ratings, load_ratings
from .serialize import read_annotated

ScaleValue = Literal[-2, -1, 0, 1, 2, "dnk"]


class RatingBody(BaseModel):
    assessor: str = Field(min_length=1, max_length=200)
    topic_quality: ScaleValue
    segmentation_quality: ScaleValue
    comment: str | None = Field(default=None, max_length=4000)


class RatingStore:
    """Append-only rating log with a last-write-wins in-memory view.

    Writes are serialized through a lock so concurrent requests never
    interleave partial lines in the log file.
    """

    def __init__(self, path: str | PathLike):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._state: dict[tuple[str, str], Rating] = {}
        if self.path.exists():
            self._state = latest_ratings(load_ratings(self.path))

    def put(self, rating: Rating) -> None:
        line = json.dumps(rating.to_dict(), ensure_ascii=False) + "\n"
        with self._lock:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(line)
                fh.flush()
                os.fsync(fh.fileno())
            self._state[(rating.assessor, rating.session_id)] = rating

    def snapshot(self) -> dict[tuple[str, str], Rating]:
        with self._lock:
            return dict(self._state)

    def rated_by(self, session_id: str) -> list[str]:
        with self._lock:
            return sorted(a for a, s in self._state if s == session_id)

    def sessions_rated_by(self, assessor: str) -> set[str]:
        with self._lock:
            return {s for a, s in self._state if a == assessor}


def _session_summary(session: AnnotatedSession, store: RatingStore) -> dict:
    return {
        "id": session.id,
        "action_count": len(session.actions),
        "duration_s": session.duration_s,
        "rated_by": store.rated_by(session.id),
    }


def _session_detail(session: AnnotatedSession, store: RatingStore) -> dict:
    actions = []
    for annotated in session.actions:
        action = annotated.action
        actions.append(
            {
                "step": action.index,
                "kind": action.kind,
                "terms": list(action.query_terms) + list(action.facet_terms),
                "citation": annotated.citation,
                "session_topic": annotated.session_topic,
                "topic_number": annotated.topic_number,
            }
        )
    return {
        "id": session.id,
        "duration_s": session.duration_s,
        "actions": actions,
        "rated_by": store.rated_by(session.id),
    }


def create_app(
    sessions_path: str | PathLike,
    ratings_path: str | PathLike,
    static_dir: str | PathLike | None = None,
) -> FastAPI:
    """Build the service. Raises on unreadable input so startup fails loudly."""
    sessions = read_annotated(sessions_path)
    order = [s.id for s in sessions]
    by_id = {s.id: s for s in sessions}
    store = RatingStore(ratings_path)

    app = FastAPI(title="session assessment service")

    @app.get("/api/sessions")
    def list_sessions(offset: int = 0, limit: int = 20) -> dict:
        if offset < 0 or limit < 1:
            raise HTTPException(status_code=422, detail="offset must be >= 0 and limit >= 1")
        limit = min(limit, 500)
        page = sessions[offset : offset + limit]
        return {
            "total": len(sessions),
            "items": [_session_summary(s, store) for s in page],
        }

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        session = by_id.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        return _session_detail(session, store)

    @app.put("/api/sessions/{session_id}/rating", status_code=204)
    def put_rating(session_id: str, body: RatingBody) -> None:
        if session_id not in by_id:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        store.put(
            Rating(
                assessor=body.assessor,
                session_id=session_id,
                topic_quality=body.topic_quality,
                segmentation_quality=body.segmentation_quality,
                comment=body.comment,
                submitted_at=time.time(),
            )
        )

    @app.get("/api/assessors/{name}/progress")
    def progress(name: str) -> dict:
        rated = store.sessions_rated_by(name)
        next_id = next((sid for sid in order if sid not in rated), None)
        return {
            "rated": len(rated & set(order)),
            "total": len(order),
            "next_unrated_session_id": next_id,
        }

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
