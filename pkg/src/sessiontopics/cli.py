"""Command-line entry points for the full pipeline: build KOS artifacts,
sessionize logs, annotate, segment, render, evaluate, and serve."""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import NoReturn

import click

from . import serialize
from .annotate import KosBundle, annotate_sessions
from .corpus import StrModel, build_str_model, load_corpus
from .errors import ParseError, ValidationError
from .evaluate import (
    icc,
    load_ratings,
    latest_ratings,
    rating_matrix,
    rating_summary,
    segmentation_metrics,
)
from .kos import (
    DEFAULT_NATIVE_VOCABULARY,
    KeywordCategoryTable,
    build_keyword_category_table,
    load_classification,
    load_crosswalk,
    load_thesaurus,
)
from .logs import (
    DEFAULT_INACTIVITY_TIMEOUT_S,
    DEFAULT_MAX_ACTIONS,
    DEFAULT_MAX_DURATION_S,
    DEFAULT_MIN_ACTIONS,
    dataset_stats,
    filter_sessions,
    parse_log,
    sample_evaluation_set,
    sessionize,
)
from .segment import assign_topic_numbers, render_session, render_session_html
from .textnorm import default_stopwords, load_stopword_file
from .topics import DEFAULT_EPSILON, assign_session_topics


def _fail(message: str) -> NoReturn:
    raise click.ClickException(message)


def _stopwords(en: str | None, de: str | None) -> frozenset[str]:
    if en is None and de is None:
        return default_stopwords()
    words: set[str] = set()
    for path in (en, de):
        if path is not None:
            words |= load_stopword_file(path)
    return frozenset(words)


@click.group()
def main() -> None:
    """Search-session topic segmentation toolkit."""


@main.command("build-lookup")
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--thesaurus", "thesaurus_path", required=True, type=click.Path(exists=True))
@click.option("--vocabulary", default=DEFAULT_NATIVE_VOCABULARY, show_default=True,
              help="Native vocabulary tag of the keywords to count.")
@click.option("--out", "out_path", required=True, type=click.Path())
def build_lookup_cmd(corpus_path: str, thesaurus_path: str, vocabulary: str, out_path: str) -> None:
    """Build the keyword-to-category lookup table from corpus co-occurrence."""
    try:
        corpus = load_corpus(corpus_path)
        thesaurus = load_thesaurus(thesaurus_path)
        table = build_keyword_category_table(corpus, thesaurus, native_vocabulary=vocabulary)
    except (ParseError, ValidationError) as exc:
        _fail(str(exc))
    Path(out_path).write_text(json.dumps(table.to_json(), indent=2) + "\n", encoding="utf-8")
    click.echo(f"wrote {len(table.mapping)} descriptor-to-category entries to {out_path}")


@main.command("build-str")
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--thesaurus", "thesaurus_path", required=True, type=click.Path(exists=True))
@click.option("--min-count", default=1, show_default=True, type=int)
@click.option("--top-k", default=5, show_default=True, type=int)
@click.option("--vocabulary", default=DEFAULT_NATIVE_VOCABULARY, show_default=True)
@click.option("--stopwords-en", type=click.Path(exists=True), default=None)
@click.option("--stopwords-de", type=click.Path(exists=True), default=None)
@click.option("--workers", default=1, show_default=True, type=int)
@click.option("--out", "out_path", required=True, type=click.Path())
def build_str_cmd(
    corpus_path: str,
    thesaurus_path: str,
    min_count: int,
    top_k: int,
    vocabulary: str,
    stopwords_en: str | None,
    stopwords_de: str | None,
    workers: int,
    out_path: str,
) -> None:
    """Train the free-term to descriptor co-occurrence model."""
    try:
        corpus = load_corpus(corpus_path)
        thesaurus = load_thesaurus(thesaurus_path)
        model = build_str_model(
            corpus,
            thesaurus,
            min_count=min_count,
            top_k=top_k,
            stopwords=_stopwords(stopwords_en, stopwords_de),
            native_vocabulary=vocabulary,
            workers=workers,
        )
    except (ParseError, ValidationError, ValueError) as exc:
        _fail(str(exc))
    Path(out_path).write_text(json.dumps(model.to_json(), indent=2) + "\n", encoding="utf-8")
    click.echo(f"wrote mappings for {len(model.mapping)} terms to {out_path}")


@main.command("sessionize")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--timeout-min", default=DEFAULT_INACTIVITY_TIMEOUT_S / 60, show_default=True, type=float)
@click.option("--min-actions", default=DEFAULT_MIN_ACTIONS, show_default=True, type=int)
@click.option("--max-actions", default=DEFAULT_MAX_ACTIONS, show_default=True, type=int)
@click.option("--max-duration-min", default=DEFAULT_MAX_DURATION_S / 60, show_default=True, type=float)
@click.option("--sample", default=None, type=int, help="Draw an evaluation set of this size.")
@click.option("--cap", default=4, show_default=True, type=int,
              help="Max sessions per action count when sampling.")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--stats", is_flag=True, help="Print dataset statistics for the output.")
def sessionize_cmd(
    in_path: str,
    out_path: str,
    timeout_min: float,
    min_actions: int,
    max_actions: int,
    max_duration_min: float,
    sample: int | None,
    cap: int,
    seed: int,
    stats: bool,
) -> None:
    """Split a raw event log into filtered sessions."""
    try:
        events = parse_log(in_path)
        sessions = sessionize(events, inactivity_timeout=timeout_min * 60)
        sessions = filter_sessions(
            sessions,
            min_actions=min_actions,
            max_actions=max_actions,
            max_duration=max_duration_min * 60,
        )
        if sample is not None:
            sessions = sample_evaluation_set(sessions, target_n=sample, per_length_cap=cap, seed=seed)
    except (ParseError, ValidationError, ValueError) as exc:
        _fail(str(exc))
    serialize.write_sessions(sessions, out_path)
    click.echo(f"wrote {len(sessions)} sessions to {out_path}")
    if stats:
        summary = dataset_stats(sessions)
        click.echo(json.dumps(summary.__dict__, indent=2, sort_keys=True))


@main.command("annotate")
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--thesaurus", "thesaurus_path", required=True, type=click.Path(exists=True))
@click.option("--classification", "classification_path", required=True, type=click.Path(exists=True))
@click.option("--crosswalk", "crosswalk_path", default=None, type=click.Path(exists=True))
@click.option("--str-model", "str_model_path", required=True, type=click.Path(exists=True))
@click.option("--lookup", "lookup_path", required=True, type=click.Path(exists=True))
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--epsilon", default=DEFAULT_EPSILON, show_default=True, type=float)
@click.option("--stopwords-en", type=click.Path(exists=True), default=None)
@click.option("--stopwords-de", type=click.Path(exists=True), default=None)
@click.option("--workers", default=1, show_default=True, type=int)
def annotate_cmd(
    corpus_path: str,
    thesaurus_path: str,
    classification_path: str,
    crosswalk_path: str | None,
    str_model_path: str,
    lookup_path: str,
    in_path: str,
    out_path: str,
    epsilon: float,
    stopwords_en: str | None,
    stopwords_de: str | None,
    workers: int,
) -> None:
    """Attach weighted keywords, categories, and session topics to sessions."""
    try:
        corpus = load_corpus(corpus_path)
        thesaurus = load_thesaurus(thesaurus_path)
        load_classification(classification_path)  # validated even though topics key off codes
        crosswalk = load_crosswalk(crosswalk_path, thesaurus) if crosswalk_path else None
        str_model = StrModel.from_json(json.loads(Path(str_model_path).read_text(encoding="utf-8")))
        lookup = KeywordCategoryTable.from_json(json.loads(Path(lookup_path).read_text(encoding="utf-8")))
        bundle = KosBundle(
            thesaurus=thesaurus,
            lookup=lookup,
            crosswalk=crosswalk,
            str_model=str_model,
            stopwords=_stopwords(stopwords_en, stopwords_de),
        )
        sessions = serialize.read_sessions(in_path)
        annotated = annotate_sessions(sessions, corpus, bundle, workers=workers)
        for session in annotated:
            assign_session_topics(session, epsilon=epsilon)
    except (ParseError, ValidationError, ValueError) as exc:
        _fail(str(exc))
    serialize.write_annotated(annotated, out_path)
    click.echo(f"wrote {len(annotated)} annotated sessions to {out_path}")


@main.command("segment")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
def segment_cmd(in_path: str, out_path: str) -> None:
    """Assign topic numbers to annotated sessions."""
    try:
        sessions = serialize.read_annotated(in_path)
        for session in sessions:
            assign_topic_numbers(session)
    except (ParseError, ValidationError, ValueError) as exc:
        _fail(str(exc))
    serialize.write_annotated(sessions, out_path)
    click.echo(f"wrote {len(sessions)} segmented sessions to {out_path}")


@main.command("render")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--session", "session_id", required=True)
@click.option("--html", is_flag=True, help="Emit an HTML table instead of plain text.")
@click.option("--corpus", "corpus_path", default=None, type=click.Path(exists=True),
              help="Corpus for citation lookup when the file lacks embedded citations.")
def render_cmd(in_path: str, session_id: str, html: bool, corpus_path: str | None) -> None:
    """Print one session as a step table with segment separators."""
    try:
        sessions = serialize.read_annotated(in_path)
        session = next((s for s in sessions if s.id == session_id), None)
        if session is None:
            _fail(f"no session with id {session_id!r} in {in_path}")
        corpus = load_corpus(corpus_path) if corpus_path else None
    except (ParseError, ValidationError) as exc:
        _fail(str(exc))
    renderer = render_session_html if html else render_session
    click.echo(renderer(session, corpus=corpus))


@main.command("evaluate")
@click.option("--ratings", "ratings_path", required=True, type=click.Path(exists=True))
@click.option("--gold", "gold_path", default=None, type=click.Path(exists=True))
@click.option("--predicted", "predicted_path", default=None, type=click.Path(exists=True))
@click.option("--icc", "icc_variant", default="average", show_default=True,
              type=click.Choice(["single", "average"]))
def evaluate_cmd(
    ratings_path: str,
    gold_path: str | None,
    predicted_path: str | None,
    icc_variant: str,
) -> None:
    """Summarize assessor ratings; optionally score a predicted segmentation."""
    if (gold_path is None) != (predicted_path is None):
        _fail("--gold and --predicted must be given together")
    try:
        ratings = list(latest_ratings(load_ratings(ratings_path)).values())
    except ParseError as exc:
        _fail(str(exc))
    click.echo(f"ratings: {len(ratings)} (latest per assessor and session)")
    for question in ("topic", "segmentation"):
        try:
            summary = rating_summary(ratings, question)
            click.echo(
                f"{question:>13}: mean {summary.mean:+.3f} over {summary.n} "
                f"histogram {summary.histogram}"
            )
        except ValidationError as exc:
            click.echo(f"{question:>13}: {exc}")
        try:
            _, _, matrix = rating_matrix(ratings, question)
            value = icc(matrix, variant=icc_variant)
            click.echo(f"{question:>13}: ICC ({icc_variant} measure) {value:.3f}")
        except ValidationError as exc:
            click.echo(f"{question:>13}: ICC not computable ({exc})")

    if gold_path and predicted_path:
        try:
            gold = {s.id: s for s in serialize.read_annotated(gold_path)}
            predicted = {s.id: s for s in serialize.read_annotated(predicted_path)}
        except ParseError as exc:
            _fail(str(exc))
        shared = [sid for sid in predicted if sid in gold]
        if not shared:
            _fail("no session ids shared between --gold and --predicted")
        totals: dict[str, float] = {}
        for sid in shared:
            pred_numbers = [a.topic_number for a in predicted[sid].actions]
            gold_numbers = [a.topic_number for a in gold[sid].actions]
            if any(n is None for n in pred_numbers + gold_numbers):
                _fail(f"session {sid!r} has unassigned topic numbers")
            metrics = segmentation_metrics(pred_numbers, gold_numbers)
            for name, value in metrics.__dict__.items():
                totals[name] = totals.get(name, 0.0) + value
        click.echo(f"segmentation vs gold over {len(shared)} sessions (macro average):")
        for name, total in totals.items():
            click.echo(f"{name:>20}: {total / len(shared):.3f}")


@main.command("serve")
@click.option("--sessions", "sessions_path", required=True, type=click.Path(exists=True))
@click.option("--ratings", "ratings_path", required=True, type=click.Path())
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--ui", "ui_dir", default=None, type=click.Path(exists=True, file_okay=False),
              help="Directory with the built assessment frontend to serve at /.")
def serve_cmd(sessions_path: str, ratings_path: str, host: str, port: int, ui_dir: str | None) -> None:
    """Run the assessment HTTP service."""
    import uvicorn

    from .server import create_app

    try:
        app = create_app(sessions_path, ratings_path, static_dir=ui_dir)
    except (OSError, ParseError, ValidationError) as exc:
        _fail(f"cannot start service: {exc}")
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    sys.exit(main())
