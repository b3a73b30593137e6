"""Pure-Python fallback for the edit-distance kernel.

Same contract as the compiled module in _speedups.pyx; sessiontopics.distance
picks whichever is importable.
"""


def levenshtein(a: str, b: str) -> int:
    """Unit-cost Levenshtein distance (insert / delete / substitute)."""
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    current = [0] * (len(b) + 1)
    for i, ca in enumerate(a, 1):
        current[0] = i
        for j, cb in enumerate(b, 1):
            cost = 0 if ca == cb else 1
            current[j] = min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost)
        previous, current = current, previous
    return previous[len(b)]


def within_distance(a: str, b: str, limit: int) -> bool:
    """True iff levenshtein(a, b) <= limit, with early exits.

    The length difference is a lower bound on the distance, and once every
    cell of a DP row exceeds the limit no later row can come back under it.
    """
    if limit < 0:
        return False
    if a == b:
        return True
    if abs(len(a) - len(b)) > limit:
        return False
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a) <= limit
    previous = list(range(len(b) + 1))
    current = [0] * (len(b) + 1)
    for i, ca in enumerate(a, 1):
        current[0] = i
        row_min = i
        for j, cb in enumerate(b, 1):
            cost = 0 if ca == cb else 1
            value = min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost)
            current[j] = value
            if value < row_min:
                row_min = value
        if row_min > limit:
            return False
        previous, current = current, previous
    return previous[len(b)] <= limit
