import random

import pytest

from conftest import periodic_bytes, random_bytes
from slpmatch import counters
from slpmatch.oracle import oracle_pref_suf, oracle_smallest_period
from slpmatch.pattern_index import (EMPTY, PatternIndex, SubstringRef, check_ref, kmp_failure,
                                    prefix_periods)
from slpmatch.suffix_tree import SuffixTree


def naive_lcp(p, i, j):
    n = 0
    while i + n <= len(p) and j + n <= len(p) and p[i + n - 1] == p[j + n - 1]:
        n += 1
    return n


def test_suffix_array_abaab():
    idx = PatternIndex(b"abaab")
    # suffixes sorted: aab(3) ab(4) abaab(1) b(5) baab(2)
    assert idx.sa[1:] == [3, 4, 1, 5, 2]
    assert idx.isa[6] == 0
    assert idx.pref_period[1:] == [1, 2, 2, 3, 3]
    assert idx.lcp(1, 4) == 2 and idx.lcp(2, 5) == 1 and idx.lcp(3, 3) == 3
    assert idx.lcp(6, 1) == 0


def test_suffix_array_matches_sorting():
    rng = random.Random(1)
    for _ in range(200):
        p = random_bytes(rng, rng.randint(1, 40), b"abc")
        idx = PatternIndex(p)
        assert idx.sa[1:] == sorted(range(1, len(p) + 1), key=lambda i: p[i - 1:])
        for i in range(1, len(p) + 1):
            for j in range(1, len(p) + 1):
                assert idx.lcp(i, j) == naive_lcp(p, i, j)


def test_lcs():
    p = b"abaabaab"
    idx = PatternIndex(p)
    for i in range(0, len(p) + 1):
        for j in range(0, len(p) + 1):
            n = 0
            while n < min(i, j) and p[i - 1 - n] == p[j - 1 - n]:
                n += 1
            assert idx.lcs(i, j) == n


def test_lcp_counts_calls():
    idx = PatternIndex(b"abab")
    counters.reset()
    idx.lcp(1, 3)
    assert counters.snapshot()["lcp_calls"] == 1


def test_occurrence_data():
    rng = random.Random(4)
    for _ in range(100):
        p = periodic_bytes(rng, rng.randint(1, 30))
        st = SuffixTree(p)
        m = len(p)
        for i in range(1, m + 1):
            for j in range(i, m + 1):
                loc = st.walk(i, j)
                occ = [s + 1 for s in range(m) if p[s:s + j - i + 1] == p[i - 1:j]]
                assert st.leaf_count[loc.node] == len(occ)
                assert st.first_occ[loc.node] == occ[0]
                assert st.second_occ[loc.node] == (occ[1] if len(occ) > 1 else m + 2)
                ranks = sorted(st.isa[s] for s in occ)
                assert (st.leaf_lo[loc.node], st.leaf_hi[loc.node]) == (ranks[0], ranks[-1])
                assert ranks == list(range(ranks[0], ranks[-1] + 1))


def test_locate_matches_walk():
    rng = random.Random(2)
    for _ in range(100):
        p = periodic_bytes(rng, rng.randint(1, 50), b"abc")
        idx = PatternIndex(p)
        refs = [(i, j) for i in range(1, len(p) + 1) for j in range(i, len(p) + 1)]
        assert idx.locate(refs) == [idx.fwd.walk(i, j) for i, j in refs]
        assert idx.locate([EMPTY]) == [(0, 0)]


def test_pref_suf_examples():
    idx = PatternIndex(b"abaab")
    assert idx.batched_pref_suf([(2, 5), EMPTY, (1, 5)]) == [(4, 2), (0, 0), (5, 5)]
    assert oracle_pref_suf(b"abaab", b"baab") == (4, 2)


def test_pref_suf_against_oracle():
    rng = random.Random(9)
    for _ in range(150):
        p = periodic_bytes(rng, rng.randint(1, 40))
        idx = PatternIndex(p)
        refs = [(i, j) for i in range(1, len(p) + 1) for j in range(i, len(p) + 1)]
        got = idx.batched_pref_suf(refs)
        for (i, j), ps in zip(refs, got):
            assert ps == oracle_pref_suf(p, p[i - 1:j])


def test_periods_against_brute_force():
    rng = random.Random(6)
    for _ in range(200):
        p = periodic_bytes(rng, rng.randint(1, 60), b"abc")
        idx = PatternIndex(p)
        for k in range(1, len(p) + 1):
            assert idx.pref_period[k] == oracle_smallest_period(p[:k])
            assert idx.suf_period[k] == oracle_smallest_period(p[k - 1:])


def test_kmp_failure():
    assert kmp_failure(b"abaab") == [-1, 0, 0, 1, 1, 2]
    assert prefix_periods(b"aaaa") == [0, 1, 1, 1, 1]


def test_refs():
    assert check_ref((1, 0), 5) == EMPTY
    assert check_ref((4, 3), 5) == EMPTY
    assert SubstringRef(2, 4).length == 3 and not EMPTY
    for bad in [(0, 2), (3, 6), (4, 2)]:
        with pytest.raises(ValueError):
            check_ref(bad, 5)
    with pytest.raises(ValueError):
        PatternIndex(b"")
