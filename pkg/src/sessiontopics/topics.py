"""Session-topic assignment: build the session-global category profile,
re-sort each action's categories toward it, and pick one topic per action.

The goal is as few distinct session topics as possible: categories common
across the whole session are pushed up whenever an action ranks them only
marginally below a rarer one.
"""

from __future__ import annotations

from typing import Sequence

from .annotate import AnnotatedSession, WeightedLabel, combine_weights

UNCLASSIFIED = "UNCLASSIFIED"

DEFAULT_EPSILON = 0.2


def session_category_profile(session: AnnotatedSession) -> list[WeightedLabel]:
    """Category weights summed over every action, sorted descending (ties by code)."""
    pairs: list[WeightedLabel] = []
    for annotated in session.actions:
        pairs.extend(annotated.categories)
    return combine_weights(pairs)


def rerank_action_categories(
    action_categories: Sequence[WeightedLabel],
    profile: Sequence[WeightedLabel],
    epsilon: float = DEFAULT_EPSILON,
) -> list[WeightedLabel]:
    """Push session-common categories above near-tied rarer ones.

    Repeated adjacent-swap passes: a pair swaps when the lower entry's weight
    is within epsilon (relative) of the upper one AND the profile ranks it
    strictly higher. Entries keep their original weights; only the order
    changes. Every swap removes one profile-order inversion, so the passes
    terminate.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    rank = {label: position for position, (label, _) in enumerate(profile)}
    entries = list(action_categories)
    swapped = True
    while swapped:
        swapped = False
        for i in range(len(entries) - 1):
            upper_label, upper_weight = entries[i]
            lower_label, lower_weight = entries[i + 1]
            close = lower_weight >= (1.0 - epsilon) * upper_weight
            preferred = rank.get(lower_label, len(rank)) < rank.get(upper_label, len(rank))
            if close and preferred:
                entries[i], entries[i + 1] = entries[i + 1], entries[i]
                swapped = True
    return entries


def assign_session_topics(
    session: AnnotatedSession, epsilon: float = DEFAULT_EPSILON
) -> AnnotatedSession:
    """Set session_topic on every action, in place.

    A search takes the top entry of its re-ranked category list; a document
    view inherits from the nearest preceding search. Actions that neither
    have categories nor anything to inherit get the UNCLASSIFIED sentinel.
    """
    profile = session_category_profile(session)
    for annotated in session.actions:
        annotated.categories = rerank_action_categories(annotated.categories, profile, epsilon)

    previous_topic: str | None = None
    previous_search_topic: str | None = None
    for annotated in session.actions:
        own_top = annotated.categories[0][0] if annotated.categories else None
        if annotated.action.is_search:
            topic = own_top if own_top is not None else previous_topic
        else:
            topic = previous_search_topic
            if topic is None:
                topic = own_top if own_top is not None else previous_topic
        if topic is None:
            topic = UNCLASSIFIED
        annotated.session_topic = topic
        previous_topic = topic
        if annotated.action.is_search:
            previous_search_topic = topic
    return session
