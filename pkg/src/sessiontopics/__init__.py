"""Topic segmentation of digital-library search sessions.

The pipeline turns raw usage logs into per-action topic labels and
contiguous topic segments: parse and sessionize the log, attach weighted
keywords from result documents, derive weighted subject categories,
pick one session topic per action, then number topics with a two-rule
backward scan so segments fall out of the number changes.
"""

from .annotate import (
    AnnotatedAction,
    AnnotatedSession,
    KosBundle,
    annotate_action,
    annotate_session,
    annotate_sessions,
    combine_weights,
    document_factor,
    keyword_weight,
)
from .corpus import Corpus, Document, StrModel, build_str_model, load_corpus
from .distance import BACKEND, levenshtein, within_distance
from .errors import ParseError, ValidationError
from .evaluate import (
    Rating,
    icc,
    load_ratings,
    rating_matrix,
    rating_summary,
    segmentation_metrics,
    timeout_baseline,
)
from .kos import (
    Classification,
    Crosswalk,
    KeywordCategoryTable,
    Thesaurus,
    build_keyword_category_table,
    load_classification,
    load_crosswalk,
    load_thesaurus,
)
from .logs import (
    Action,
    Session,
    dataset_stats,
    filter_sessions,
    parse_log,
    sample_evaluation_set,
    sessionize,
)
from .segment import Segment, assign_topic_numbers, render_session, segments
from .textnorm import default_stopwords, tokenize
from .topics import (
    UNCLASSIFIED,
    assign_session_topics,
    rerank_action_categories,
    session_category_profile,
)

__version__ = "0.1.0"

__all__ = [
    "Action",
    "AnnotatedAction",
    "AnnotatedSession",
    "BACKEND",
    "Classification",
    "Corpus",
    "Crosswalk",
    "Document",
    "KeywordCategoryTable",
    "KosBundle",
    "ParseError",
    "Rating",
    "Segment",
    "Session",
    "StrModel",
    "Thesaurus",
    "UNCLASSIFIED",
    "ValidationError",
    "annotate_action",
    "annotate_session",
    "annotate_sessions",
    "assign_session_topics",
    "assign_topic_numbers",
    "build_keyword_category_table",
    "build_str_model",
    "combine_weights",
    "dataset_stats",
    "default_stopwords",
    "document_factor",
    "filter_sessions",
    "icc",
    "keyword_weight",
    "levenshtein",
    "load_classification",
    "load_corpus",
    "load_crosswalk",
    "load_ratings",
    "load_thesaurus",
    "parse_log",
    "rating_matrix",
    "rating_summary",
    "render_session",
    "rerank_action_categories",
    "sample_evaluation_set",
    "segmentation_metrics",
    "segments",
    "session_category_profile",
    "sessionize",
    "timeout_baseline",
    "tokenize",
    "within_distance",
]
