"""Pattern-side preprocessing shared by every query structure."""

from __future__ import annotations

from typing import NamedTuple

from .suffix_tree import Locator, SuffixTree


class SubstringRef(NamedTuple):
    """p[start..end], 1-based inclusive; (1, 0) is the empty substring."""

    start: int
    end: int

    @property
    def length(self) -> int:
        return self.end - self.start + 1

    def __bool__(self):
        return self.end >= self.start


EMPTY = SubstringRef(1, 0)


def check_ref(ref, m: int) -> SubstringRef:
    i, j = ref
    if type(ref) is SubstringRef and 1 <= i <= j <= m:
        return ref
    if j == i - 1 and 1 <= i <= m + 1:
        return EMPTY
    if not 1 <= i <= j <= m:
        raise ValueError(f"invalid substring reference ({i}, {j}) for m={m}")
    return SubstringRef(i, j)


def kmp_failure(s: bytes) -> list[int]:
    """fail[k] = length of the longest proper border of s[1..k] (1-based, fail[0] = -1)."""
    fail = [-1] + [0] * len(s)
    k = 0
    for q in range(1, len(s)):
        while k and s[q] != s[k]:
            k = fail[k]
        if s[q] == s[k]:
            k += 1
        fail[q + 1] = k
    if s:
        fail[1] = 0
    return fail


def prefix_periods(s: bytes) -> list[int]:
    """per[k] = smallest period of s[1..k]; per[0] = 0."""
    fail = kmp_failure(s)
    return [0] + [k - fail[k] for k in range(1, len(s) + 1)]


class PatternIndex:
    """Suffix trees of p and its reverse, lcp in O(1), and period tables.

    ``pref_period[k]`` is per(p[1..k]) and ``suf_period[k]`` is per(p[k..m]).
    """

    def __init__(self, p: bytes):
        p = bytes(p)
        if not p:
            raise ValueError("pattern must be nonempty")
        self.p = p
        m = self.m = len(p)
        self.fwd = SuffixTree(p)
        self.rev = SuffixTree(p[::-1])
        self.sa, self.isa = self.fwd.sa, self.fwd.isa
        self.sa_rev, self.isa_rev = self.rev.sa, self.rev.isa
        self.pref_period = prefix_periods(p)
        rp = prefix_periods(p[::-1])
        self.suf_period = [0] * (m + 2)
        for k in range(1, m + 1):
            self.suf_period[k] = rp[m - k + 1]

    def lcp(self, i: int, j: int) -> int:
        """lcp of p[i..m] and p[j..m]."""
        return self.fwd.lcp(i, j)

    def lcs(self, i: int, j: int) -> int:
        """Longest common suffix of p[1..i] and p[1..j]."""
        if i < 1 or j < 1:
            return 0
        return self.rev.lcp(self.m - i + 1, self.m - j + 1)

    def rev_ref(self, ref) -> SubstringRef:
        """The reference in p^R spelling the reverse of p[ref]."""
        i, j = ref
        if j < i:
            return EMPTY
        return SubstringRef(self.m - j + 1, self.m - i + 1)

    def locate(self, refs, tree: str = "fwd") -> list[Locator]:
        refs = [check_ref(r, self.m) for r in refs]
        if tree == "fwd":
            return self.fwd.locate_batch(refs)
        if tree == "rev":
            return self.rev.locate_batch(refs)
        raise ValueError(f"unknown tree {tree!r}")

    def prefix_lens(self, refs) -> list[int]:
        """|prefix(u)|: longest prefix of u that is a suffix of p."""
        locs = self.locate(refs, "fwd")
        return [self.fwd.longest_suffix_prefix(loc) for loc in locs]

    def suffix_lens(self, refs) -> list[int]:
        """|suffix(u)|: longest suffix of u that is a prefix of p."""
        locs = self.rev.locate_batch([self.rev_ref(check_ref(r, self.m)) for r in refs])
        return [self.rev.longest_suffix_prefix(loc) for loc in locs]

    def batched_pref_suf(self, refs) -> list[tuple[int, int]]:
        return list(zip(self.prefix_lens(refs), self.suffix_lens(refs)))


def build(p: bytes) -> PatternIndex:
    return PatternIndex(p)
