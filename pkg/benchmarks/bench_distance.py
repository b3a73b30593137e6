"""Compare the compiled edit-distance kernel against the pure-Python one.

Usage: python3 benchmarks/bench_distance.py [repeats]

Times levenshtein and within_distance over a workload shaped like real
topic-number assignment: many short lowercase terms compared pairwise.
"""

import random
import string
import sys
import time

from sessiontopics import _speedups_py

try:
    from sessiontopics import _speedups
except ImportError:
    _speedups = None


def make_terms(n: int, seed: int = 7) -> list[str]:
    rng = random.Random(seed)
    base = [
        "".join(rng.choice(string.ascii_lowercase) for _ in range(rng.randint(4, 14)))
        for _ in range(n // 2)
    ]
    # Half the terms are near misses of the other half, so the early-exit
    # path in within_distance sees both outcomes.
    mutated = []
    for term in base:
        chars = list(term)
        chars[rng.randrange(len(chars))] = rng.choice(string.ascii_lowercase)
        mutated.append("".join(chars))
    return base + mutated


def bench(module, terms: list[str], repeats: int) -> tuple[float, float]:
    pairs = [(a, b) for a in terms[:60] for b in terms[:60]]
    t0 = time.perf_counter()
    for _ in range(repeats):
        for a, b in pairs:
            module.levenshtein(a, b)
    t_full = time.perf_counter() - t0
    t0 = time.perf_counter()
    for _ in range(repeats):
        for a, b in pairs:
            module.within_distance(a, b, 2)
    t_within = time.perf_counter() - t0
    return t_full, t_within


def main() -> None:
    repeats = int(sys.argv[1]) if len(sys.argv) > 1 else 5
    terms = make_terms(120)
    py_full, py_within = bench(_speedups_py, terms, repeats)
    print(f"python   levenshtein     {py_full:8.3f}s")
    print(f"python   within_distance {py_within:8.3f}s")
    if _speedups is None:
        print("compiled backend not built; skipping comparison")
        return
    c_full, c_within = bench(_speedups, terms, repeats)
    print(f"compiled levenshtein     {c_full:8.3f}s  ({py_full / c_full:5.1f}x)")
    print(f"compiled within_distance {c_within:8.3f}s  ({py_within / c_within:5.1f}x)")


if __name__ == "__main__":
    main()
