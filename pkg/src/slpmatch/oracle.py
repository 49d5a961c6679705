"""Brute-force reference implementations.

Deliberately naive and independent of the main code: the oracle expands
the grammar itself and searches with its own KMP.
"""

from __future__ import annotations

from dataclasses import dataclass


class OracleTooLong(Exception):
    pass


@dataclass(frozen=True)
class OracleConfig:
    decompress_limit: int = 10 ** 6

    def __post_init__(self):
        if self.decompress_limit <= 0:
            raise ValueError("decompress_limit must be positive")


def expand(slp, limit: int = 10 ** 6) -> bytes:
    """val(G) by memoized bottom-up expansion."""
    rules = slp.rules
    n = len(rules) - 1
    size = [0] * (n + 1)
    for i in range(n, 0, -1):
        r = rules[i]
        size[i] = 1 if hasattr(r, "symbol") else size[r.left] + size[r.right]
    if size[1] > limit:
        raise OracleTooLong(f"text has {size[1]} bytes, limit {limit}")
    val = [b""] * (n + 1)
    for i in range(n, 0, -1):
        r = rules[i]
        val[i] = bytes([r.symbol]) if hasattr(r, "symbol") else val[r.left] + val[r.right]
    return val[1]


def kmp_search(text: bytes, p: bytes) -> int:
    """Leftmost occurrence of p in text, or -1."""
    m = len(p)
    fail = [0] * m
    k = 0
    for i in range(1, m):
        while k and p[i] != p[k]:
            k = fail[k - 1]
        if p[i] == p[k]:
            k += 1
        fail[i] = k
    k = 0
    for i, ch in enumerate(text):
        while k and ch != p[k]:
            k = fail[k - 1]
        if ch == p[k]:
            k += 1
        if k == m:
            return i - m + 1
    return -1


def naive_search_all(text: bytes, p: bytes) -> list[int]:
    m = len(p)
    return [i for i in range(len(text) - m + 1) if text[i:i + m] == p]


def oracle_match(slp, p: bytes, config: OracleConfig = OracleConfig()):
    """(found, leftmost position or None)."""
    pos = kmp_search(expand(slp, config.decompress_limit), bytes(p))
    return (pos >= 0, pos if pos >= 0 else None)


def oracle_concat(p: bytes, u: bytes, v: bytes):
    """Leftmost 0-based occurrence of u+v in p, or None."""
    s = bytes(u) + bytes(v)
    for i in range(len(p) - len(s) + 1):
        if p[i:i + len(s)] == s:
            return i
    return None


def oracle_wa(parent, weight, node: int, k: int) -> int:
    """Ancestor of ``node`` nearest the root with weight >= k."""
    if k > weight[node]:
        raise ValueError("threshold exceeds the node weight")
    path = []
    v = node
    while v >= 0:
        path.append(v)
        v = parent[v]
    for v in reversed(path):
        if weight[v] >= k:
            return v
    raise AssertionError("unreachable")


def oracle_pref_suf(p: bytes, u: bytes):
    """(longest prefix of u that is a suffix of p, longest suffix of u that is a prefix of p)."""
    pre = max(l for l in range(len(u) + 1) if p.endswith(u[:l]) or l == 0)
    suf = max(l for l in range(len(u) + 1) if l == 0 or p.startswith(u[len(u) - l:]))
    return pre, suf


def oracle_smallest_period(s: bytes) -> int:
    for d in range(1, len(s) + 1):
        if all(s[i] == s[i + d] for i in range(len(s) - d)):
            return d
    return 0
