"""Operation counters.

The complexity claims are checked by counting structure queries rather than
by wall-clock time, so the counters are always on.
"""

from collections import Counter

NAMES = ("wa_queries", "concat_queries", "lcp_calls", "sort_calls")

_counts: Counter = Counter()


def bump(name: str, k: int = 1) -> None:
    _counts[name] += k


def reset() -> None:
    _counts.clear()


def snapshot() -> dict[str, int]:
    return {name: _counts.get(name, 0) for name in NAMES}
