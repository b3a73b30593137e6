from __future__ import annotations

from importlib import resources
from pathlib import Path

import pytest

from sessiontopics import (
    KosBundle,
    annotate_sessions,
    assign_session_topics,
    assign_topic_numbers,
    build_keyword_category_table,
    build_str_model,
    default_stopwords,
    filter_sessions,
    load_classification,
    load_corpus,
    load_crosswalk,
    load_thesaurus,
    parse_log,
    sessionize,
)


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return Path(str(resources.files("sessiontopics") / "fixtures"))


@pytest.fixture(scope="session")
def thesaurus(fixtures_dir):
    return load_thesaurus(fixtures_dir / "thesaurus.json")


@pytest.fixture(scope="session")
def classification(fixtures_dir):
    return load_classification(fixtures_dir / "classification.json")


@pytest.fixture(scope="session")
def crosswalk(fixtures_dir, thesaurus):
    return load_crosswalk(fixtures_dir / "crosswalk.json", thesaurus)


@pytest.fixture(scope="session")
def corpus(fixtures_dir):
    return load_corpus(fixtures_dir / "corpus.jsonl")


@pytest.fixture(scope="session")
def lookup(corpus, thesaurus):
    return build_keyword_category_table(corpus, thesaurus)


@pytest.fixture(scope="session")
def str_model(corpus, thesaurus):
    return build_str_model(corpus, thesaurus, stopwords=default_stopwords())


@pytest.fixture(scope="session")
def bundle(thesaurus, lookup, crosswalk, str_model):
    return KosBundle(
        thesaurus=thesaurus,
        lookup=lookup,
        crosswalk=crosswalk,
        str_model=str_model,
        stopwords=default_stopwords(),
    )


@pytest.fixture(scope="session")
def raw_sessions(fixtures_dir):
    events = parse_log(fixtures_dir / "log.jsonl")
    return filter_sessions(sessionize(events))


@pytest.fixture
def run_pipeline(raw_sessions, corpus, bundle):
    """Factory running annotate -> session topics -> topic numbers on the
    shipped fixture log. Function-scoped: annotated sessions are mutable."""

    def run(epsilon: float = 0.2):
        annotated = annotate_sessions(raw_sessions, corpus, bundle)
        for session in annotated:
            assign_session_topics(session, epsilon)
            assign_topic_numbers(session, default_stopwords())
        return annotated

    return run
