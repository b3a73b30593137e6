"""Edit distance used for query-term comparison.

Imports the compiled kernel when the extension was built, otherwise the
pure-Python twin. Both expose the same two functions with identical
behaviour; BACKEND records which one is active.
"""

try:
    from ._speedups import levenshtein, within_distance

    BACKEND = "compiled"
except ImportError:  # extension not built on this install
    from ._speedups_py import levenshtein, within_distance

    BACKEND = "python"

__all__ = ["levenshtein", "within_distance", "BACKEND"]
