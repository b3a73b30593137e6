# cython: language_level=3
"""Compiled edit-distance kernel.

Term comparison is the inner loop of session segmentation: every action may
be checked against every earlier search action, and every such check
compares all pairs of query terms. Keep this in C; the pure-Python twin in
_speedups_py.py mirrors the behaviour exactly.
"""

from libc.stdlib cimport free, malloc


cdef int _dp_distance(str a, str b, int limit, bint bounded) except -2:
    # Rolling two-row DP. With bounded=True, bail out as soon as a whole
    # row exceeds the limit and report limit+1.
    cdef Py_ssize_t la = len(a)
    cdef Py_ssize_t lb = len(b)
    cdef Py_ssize_t i, j
    cdef int cost, value, row_min
    cdef int *previous
    cdef int *current
    cdef int *swap
    cdef Py_UCS4 ca

    if la < lb:
        a, b = b, a
        la, lb = lb, la
    if lb == 0:
        return <int> la

    previous = <int *> malloc((lb + 1) * sizeof(int))
    current = <int *> malloc((lb + 1) * sizeof(int))
    if previous == NULL or current == NULL:
        if previous != NULL:
            free(previous)
        if current != NULL:
            free(current)
        raise MemoryError()

    try:
        for j in range(lb + 1):
            previous[j] = <int> j
        for i in range(1, la + 1):
            ca = a[i - 1]
            current[0] = <int> i
            row_min = <int> i
            for j in range(1, lb + 1):
                cost = 0 if ca == <Py_UCS4> b[j - 1] else 1
                value = previous[j] + 1
                if current[j - 1] + 1 < value:
                    value = current[j - 1] + 1
                if previous[j - 1] + cost < value:
                    value = previous[j - 1] + cost
                current[j] = value
                if value < row_min:
                    row_min = value
            if bounded and row_min > limit:
                return limit + 1
            swap = previous
            previous = current
            current = swap
        return previous[lb]
    finally:
        free(previous)
        free(current)


def levenshtein(str a, str b) -> int:
    """Unit-cost Levenshtein distance (insert / delete / substitute)."""
    if a == b:
        return 0
    return _dp_distance(a, b, 0, False)


def within_distance(str a, str b, int limit) -> bool:
    """True iff levenshtein(a, b) <= limit, with early exits."""
    if limit < 0:
        return False
    if a == b:
        return True
    cdef Py_ssize_t diff = len(a) - len(b)
    if diff < 0:
        diff = -diff
    if diff > limit:
        return False
    return _dp_distance(a, b, limit, True) <= limit
