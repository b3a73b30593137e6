"""Evaluation computations: rating aggregation, inter-rater agreement (ICC),
segmentation metrics against a gold numbering, and a timeout baseline.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from os import PathLike
from typing import Iterable, Sequence

import numpy as np

from .errors import ParseError, ValidationError

DNK = "dnk"
LIKERT_LEVELS = (-2, -1, 0, 1, 2)
QUESTIONS = ("topic", "segmentation")


@dataclass(frozen=True)
class Rating:
    """One assessor's judgment of one session on the two five-point scales."""

    assessor: str
    session_id: str
    topic_quality: int | str
    segmentation_quality: int | str
    comment: str | None = None
    submitted_at: float = 0.0

    def __post_init__(self):
        if not self.assessor:
            raise ValidationError("rating lacks an assessor name")
        for value in (self.topic_quality, self.segmentation_quality):
            if value == DNK:
                continue
            if not isinstance(value, int) or isinstance(value, bool) or value not in LIKERT_LEVELS:
                raise ValidationError(
                    f"rating value must be an integer in [-2, 2] or '{DNK}', got {value!r}"
                )

    def value(self, question: str) -> int | str:
        if question == "topic":
            return self.topic_quality
        if question == "segmentation":
            return self.segmentation_quality
        raise ValueError(f"unknown question {question!r}")

    def to_dict(self) -> dict:
        return {
            "assessor": self.assessor,
            "session_id": self.session_id,
            "topic_quality": self.topic_quality,
            "segmentation_quality": self.segmentation_quality,
            "comment": self.comment,
            "submitted_at": self.submitted_at,
        }

    @classmethod
    def from_dict(cls, record: dict) -> "Rating":
        return cls(
            assessor=str(record["assessor"]),
            session_id=str(record["session_id"]),
            topic_quality=record["topic_quality"],
            segmentation_quality=record["segmentation_quality"],
            comment=record.get("comment"),
            submitted_at=float(record.get("submitted_at", 0.0)),
        )


def load_ratings(path: str | PathLike) -> list[Rating]:
    """Read a ratings JSON Lines file (the store the rating service appends to)."""
    ratings = []
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
                ratings.append(Rating.from_dict(record))
            except (KeyError, TypeError, ValidationError) as exc:
                raise ParseError(f"malformed rating record: {exc}", str(path), lineno)
    return ratings


def latest_ratings(ratings: Iterable[Rating]) -> dict[tuple[str, str], Rating]:
    """Collapse an append log to its last-write-wins state per (assessor, session)."""
    state: dict[tuple[str, str], Rating] = {}
    for rating in ratings:
        key = (rating.assessor, rating.session_id)
        existing = state.get(key)
        if existing is None or rating.submitted_at >= existing.submitted_at:
            state[key] = rating
    return state


@dataclass(frozen=True)
class RatingSummary:
    mean: float
    n: int
    histogram: dict[int, int]


def rating_summary(ratings: Iterable[Rating], question: str) -> RatingSummary:
    """Mean and histogram of one question over all non-dnk values."""
    values = [r.value(question) for r in ratings]
    numeric = [v for v in values if v != DNK]
    if not numeric:
        raise ValidationError(f"no usable values for question {question!r} (all dnk or empty)")
    histogram = {level: 0 for level in LIKERT_LEVELS}
    for v in numeric:
        histogram[v] += 1
    return RatingSummary(mean=sum(numeric) / len(numeric), n=len(numeric), histogram=histogram)


def rating_matrix(
    ratings: Iterable[Rating], question: str
) -> tuple[list[str], list[str], np.ndarray]:
    """Sessions-by-assessors value matrix for one question; dnk and missing
    cells are NaN. Rows and columns are sorted for reproducibility."""
    state = latest_ratings(ratings)
    sessions = sorted({session_id for _, session_id in state})
    assessors = sorted({assessor for assessor, _ in state})
    matrix = np.full((len(sessions), len(assessors)), np.nan)
    for (assessor, session_id), rating in state.items():
        value = rating.value(question)
        if value != DNK:
            matrix[sessions.index(session_id), assessors.index(assessor)] = value
    return sessions, assessors, matrix


def icc(matrix: np.ndarray | Sequence[Sequence[float]], variant: str = "average") -> float:
    """Two-way random-effects, absolute-agreement intraclass correlation.

    Rows are subjects, columns raters. Rows with any missing (NaN) cell are
    dropped (complete-case rule). `variant` selects the single-measure or the
    average-measure form; the result is clamped to [-1, 1].
    """
    if variant not in ("single", "average"):
        raise ValueError(f"unknown ICC variant {variant!r}")
    data = np.asarray(matrix, dtype=float)
    if data.ndim != 2:
        raise ValidationError("rating matrix must be two-dimensional")
    data = data[~np.isnan(data).any(axis=1)]
    n, k = data.shape
    if n < 2 or k < 2:
        raise ValidationError(
            f"ICC needs at least 2 complete rows and 2 raters, got {n} x {k}"
        )
    if np.ptp(data) == 0:
        raise ValidationError("degenerate rating matrix: all values identical")

    grand = data.mean()
    row_means = data.mean(axis=1)
    col_means = data.mean(axis=0)
    ms_rows = k * np.sum((row_means - grand) ** 2) / (n - 1)
    ms_cols = n * np.sum((col_means - grand) ** 2) / (k - 1)
    residual = data - row_means[:, None] - col_means[None, :] + grand
    ms_error = np.sum(residual**2) / ((n - 1) * (k - 1))

    if variant == "single":
        denominator = ms_rows + (k - 1) * ms_error + (k / n) * (ms_cols - ms_error)
    else:
        denominator = ms_rows + (ms_cols - ms_error) / n
    if denominator == 0:
        raise ValidationError("degenerate rating matrix: zero variance denominator")
    return float(np.clip((ms_rows - ms_error) / denominator, -1.0, 1.0))


@dataclass(frozen=True)
class SegmentationMetrics:
    boundary_precision: float
    boundary_recall: float
    boundary_f1: float
    pairwise_precision: float
    pairwise_recall: float
    pairwise_f1: float
    rand_index: float


def _boundaries(numbers: Sequence[int]) -> set[int]:
    return {i for i in range(1, len(numbers)) if numbers[i] != numbers[i - 1]}


def _same_cluster_pairs(numbers: Sequence[int]) -> set[tuple[int, int]]:
    n = len(numbers)
    return {(i, j) for i in range(n) for j in range(i + 1, n) if numbers[i] == numbers[j]}


def _ratio(hits: int, total: int, other_total: int) -> float:
    if total == 0:
        return 1.0 if other_total == 0 else 0.0
    return hits / total


def _f1(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def segmentation_metrics(
    predicted: Sequence[int], gold: Sequence[int]
) -> SegmentationMetrics:
    """Boundary and pairwise agreement between two topic numberings.

    Only the induced partitions matter; the numeric labels do not. An empty
    positive set on both sides counts as perfect agreement.
    """
    if len(predicted) != len(gold):
        raise ValidationError(
            f"length mismatch: predicted {len(predicted)} vs gold {len(gold)}"
        )
    if not predicted:
        raise ValidationError("empty numbering")
    pred_bounds, gold_bounds = _boundaries(predicted), _boundaries(gold)
    boundary_hits = len(pred_bounds & gold_bounds)
    boundary_precision = _ratio(boundary_hits, len(pred_bounds), len(gold_bounds))
    boundary_recall = _ratio(boundary_hits, len(gold_bounds), len(pred_bounds))

    pred_pairs, gold_pairs = _same_cluster_pairs(predicted), _same_cluster_pairs(gold)
    pair_hits = len(pred_pairs & gold_pairs)
    pairwise_precision = _ratio(pair_hits, len(pred_pairs), len(gold_pairs))
    pairwise_recall = _ratio(pair_hits, len(gold_pairs), len(pred_pairs))

    n = len(predicted)
    total_pairs = n * (n - 1) // 2
    if total_pairs == 0:
        rand = 1.0
    else:
        disagreements = len(pred_pairs ^ gold_pairs)
        rand = (total_pairs - disagreements) / total_pairs
    return SegmentationMetrics(
        boundary_precision=boundary_precision,
        boundary_recall=boundary_recall,
        boundary_f1=_f1(boundary_precision, boundary_recall),
        pairwise_precision=pairwise_precision,
        pairwise_recall=pairwise_recall,
        pairwise_f1=_f1(pairwise_precision, pairwise_recall),
        rand_index=rand,
    )


def timeout_baseline(session, gap_threshold: float) -> list[int]:
    """Comparison baseline: open a new topic number whenever the gap to the
    previous action exceeds the threshold. Accepts plain or annotated sessions."""
    if gap_threshold <= 0:
        raise ValueError("gap_threshold must be > 0")
    timestamps = [a.ts if hasattr(a, "ts") else a.action.ts for a in session.actions]
    numbers = []
    current = 1
    for i, ts in enumerate(timestamps):
        if i > 0 and ts - timestamps[i - 1] > gap_threshold:
            current += 1
        numbers.append(current)
    return numbers
