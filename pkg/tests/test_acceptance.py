"""Acceptance criteria, one test each; every test records a PASS/FAIL line.

Run alone with ``pytest -m acceptance -s``; the lines are also collected in
the terminal summary.
"""

import random
import time
from contextlib import contextmanager

import pytest

from conftest import ACCEPTANCE_LINES, periodic_bytes, random_bytes
from slpmatch import matcher
from slpmatch.concat import ConcatIndex
from slpmatch.generate import generate, text_length
from slpmatch.lcp_engine import HeavyPathIndex, SuffixTrie, naive_trie_walk, rooted_lcp_batch
from slpmatch.matcher import Triple, match, triple_offsets
from slpmatch.oracle import expand, oracle_match, oracle_wa
from slpmatch.pattern_index import EMPTY, PatternIndex, SubstringRef, prefix_periods
from slpmatch.slp import Terminal
from slpmatch.suffix_tree import Locator
from slpmatch.weighted_ancestor import MicroWaTree, WeightedAncestors, WeightedTree
from slpmatch.wordram import MicroGrid

pytestmark = pytest.mark.acceptance


@contextmanager
def criterion(num, title, budget):
    """Record a PASS/FAIL line; fail on an exception or a runtime over budget."""
    info = {}
    t0 = time.perf_counter()
    try:
        yield info
    except BaseException as exc:
        line = f"criterion {num}: FAIL {title}: {type(exc).__name__}: {str(exc)[:200]}"
        ACCEPTANCE_LINES[num] = line
        print(line)
        raise
    dt = time.perf_counter() - t0
    detail = ", ".join(f"{k}={v}" for k, v in info.items())
    ok = dt <= budget
    verdict = "PASS" if ok else "FAIL"
    line = f"criterion {num}: {verdict} {title} ({detail}; {dt:.1f}s, expected < {budget}s)"
    ACCEPTANCE_LINES[num] = line
    print(line)
    assert ok, f"correct, but runtime {dt:.1f}s exceeds the expected {budget}s"


def spell(p, ref):
    return p[ref[0] - 1:ref[1]]


def all_refs(m):
    return [SubstringRef(i, j) for i in range(1, m + 1) for j in range(i, m + 1)]


# 1 -------------------------------------------------------------------------

def draw_instance(rng):
    """Random (SLP, pattern) with n <= 60 and N <= 5000, by rejection."""
    sigma = rng.choice([2, 3, 4])
    alphabet = b"abcd"[:sigma]
    shape = rng.choice(["random-binary", "random-binary", "fibonacci", "skewed-chain", "power"])
    while True:
        slp = generate(shape, rng.randint(1, 60), alphabet, rng.randrange(10 ** 9), max_len=5000)
        if text_length(slp) <= 5000:
            break
    text = expand(slp)
    m = rng.randint(1, min(200, len(text) + 2))
    if len(text) >= m and rng.random() < 0.7:
        s = rng.randrange(len(text) - m + 1)
        p = bytearray(text[s:s + m])
        if rng.random() < 0.3:
            p[rng.randrange(m)] = rng.choice(alphabet)
        p = bytes(p)
    else:
        p = random_bytes(rng, m, alphabet)
    return shape, slp, text, p


def test_criterion_1_end_to_end():
    rng = random.Random(1001)
    with criterion(1, "end-to-end oracle equivalence", 120) as info:
        positives = 0
        for _ in range(10_000):
            shape, slp, text, p = draw_instance(rng)
            res = match(slp, p)
            found, _ = oracle_match(slp, p)
            assert res.found == found, (shape, slp, p)
            if not found:
                continue
            positives += 1
            if res.witness_triple is None:
                r = slp.rules[res.witness_rule]
                assert len(p) == 1 and isinstance(r, Terminal) and r.symbol == p[0]
            else:
                uvx = b"".join(spell(p, ref) for ref in res.witness_triple)
                assert uvx[res.witness_offset:res.witness_offset + len(p)] == p
            assert text[res.occurrence:res.occurrence + len(p)] == p
        info["instances"] = 10_000
        info["positives"] = positives


# 2 -------------------------------------------------------------------------

def test_criterion_2_concat_exhaustive():
    rng = random.Random(1002)
    with criterion(2, "exhaustive substring concatenation", 60) as info:
        total = 0
        for _ in range(20):
            m = rng.randint(1, 60)
            alphabet = rng.choice([b"a", b"ab", b"abc", b"aab"])
            p = periodic_bytes(rng, m, alphabet) if rng.random() < 0.5 else \
                random_bytes(rng, m, alphabet)
            c = ConcatIndex(PatternIndex(p))
            subs = [EMPTY] + all_refs(m)
            words = [spell(p, r) for r in subs]
            for lo in range(0, len(subs), 64):
                qs = [(u, v) for u in subs[lo:lo + 64] for v in subs]
                ws = [(a, b) for a in words[lo:lo + 64] for b in words]
                for (a, b), o in zip(ws, c.concat_batch(qs)):
                    s = a + b
                    if p.find(s) < 0:
                        assert o is None, (p, a, b, o)
                    else:
                        assert o is not None and p[o:o + len(s)] == s, (p, a, b, o)
                total += len(qs)
        info["pairs"] = total


# 3 -------------------------------------------------------------------------

def random_weighted_tree(rng, n, max_step):
    parent = [-1] + [rng.randrange(max(0, v - rng.choice([1, 3, v])), v) for v in range(1, n)]
    weight = [rng.randint(0, 3)] + [0] * (n - 1)
    for v in range(1, n):
        weight[v] = weight[parent[v]] + rng.randint(1, max_step)
    return parent, weight


def ordered_trees(n):
    """Parent arrays, in preorder, of every ordered tree with n nodes."""
    def grow(parent, path):
        if len(parent) == n:
            yield list(parent)
            return
        for keep in range(1, len(path) + 1):
            parent.append(path[keep - 1])
            yield from grow(parent, path[:keep] + [len(parent) - 1])
            parent.pop()
    yield from grow([-1], [0])


def test_criterion_3_weighted_ancestors():
    rng = random.Random(1003)
    with criterion(3, "weighted ancestors", 60) as info:
        queries = 0
        while queries < 10_000:
            n = rng.choice([rng.randint(1, 200), rng.randint(1, 10_000), 10_000])
            parent, weight = random_weighted_tree(rng, n, rng.choice([1, 5, 1000]))
            wa = WeightedAncestors(WeightedTree(parent, weight),
                                   x=rng.choice([1, 2, max(1, n.bit_length() - 1), 64]))
            qs = []
            for _ in range(1000):
                u = rng.randrange(n)
                qs.append((u, rng.randint(0, weight[u])))
            for (u, k), a in zip(qs, wa.batched_wa(qs)):
                assert a == oracle_wa(parent, weight, u, k), (n, u, k)
            queries += len(qs)
        info["queries"] = queries

        def check_micro(parent, weight):
            tree = WeightedTree(parent, weight)
            mt = MicroWaTree(tree.preorder, parent, weight)
            for u in range(len(parent)):
                for k in range(weight[u] + 1):
                    assert mt.query(u, k) == oracle_wa(parent, weight, u, k), (parent, weight)

        shapes = [t for n in range(1, 10) for t in ordered_trees(n)]
        for s, parent in enumerate(shapes):
            wrng = random.Random(s)
            weight = [wrng.randint(0, 2)]
            for v in range(1, len(parent)):
                weight.append(weight[parent[v]] + wrng.randint(1, 3))
            check_micro(parent, weight)
        for seed in range(1000):
            srng = random.Random(seed)
            check_micro(*random_weighted_tree(srng, srng.randint(1, 9), 3))
        info["micro_shapes"] = len(shapes)
        info["micro_seeds"] = 1000


# 4 -------------------------------------------------------------------------

def test_criterion_4_lcp():
    rng = random.Random(1004)
    with criterion(4, "rooted and unrooted lcp", 60) as info:
        rooted = unrooted = 0
        worst = 0
        for _ in range(20):
            m = rng.randint(1, 60)
            alphabet = rng.choice([b"ab", b"abc", b"abcd", b"a"])
            p = periodic_bytes(rng, m, alphabet) if rng.random() < 0.5 else \
                random_bytes(rng, m, alphabet)
            idx = PatternIndex(p)
            refs = [EMPTY] + all_refs(m)
            for starts in (list(range(1, m + 2)), rng.sample(range(1, m + 2), rng.randint(1, m + 1))):
                trie = SuffixTrie.from_suffixes(idx, starts)
                for ref, got in zip(refs, rooted_lcp_batch(trie, refs)):
                    assert tuple(got) == tuple(naive_trie_walk(trie, Locator(0, 0), *ref))
                rooted += len(refs)
                h = HeavyPathIndex(trie)
                s = len(trie.leaves)
                # light edges on a root-leaf path = heavy paths met minus one
                assert h.max_light_edges <= (s - 1).bit_length(), (p, starts)
                worst = max(worst, h.max_light_edges - (s - 1).bit_length())
                qs = []
                for ref in refs:
                    st = rng.choice(starts)
                    d = rng.randint(0, m - st + 1)
                    start = naive_trie_walk(trie, Locator(0, 0), st, st + d - 1)
                    qs.append((start, ref))
                for v in range(len(trie)):
                    qs.extend((Locator(v, trie.depth[v]), ref) for ref in refs)
                for (start, ref), got in zip(qs, h.unrooted_lcp_batch(qs)):
                    assert tuple(got) == tuple(naive_trie_walk(trie, start, *ref))
                unrooted += len(qs)
        info["rooted"] = rooted
        info["unrooted"] = unrooted
        info["light_edge_slack"] = -worst


# 5 -------------------------------------------------------------------------

def random_triple(rng, m):
    def sub():
        if rng.random() < 0.1:
            return EMPTY
        i = rng.randint(1, m)
        return SubstringRef(i, rng.randint(i, m))

    if rng.random() < 0.5:
        return Triple(sub(), sub(), sub())
    # u, v, x adjacent in p, so p itself often occurs
    i = rng.randint(1, m + 1)
    j = rng.randint(i - 1, m)
    u = SubstringRef(rng.randint(1, i), i - 1) if i > 1 else EMPTY
    x = SubstringRef(j + 1, rng.randint(j + 1, m)) if j < m else EMPTY
    return Triple(u, SubstringRef(i, j) if j >= i else EMPTY, x)


def test_criterion_5_triples(monkeypatch):
    monkeypatch.setattr(matcher, "DEBUG_CHECKS", True)
    monkeypatch.setitem(matcher.debug_stats, "case1_rounds", 0)
    rng = random.Random(1005)
    with criterion(5, "triple occurrence test", 120) as info:
        total = hits = 0
        while total < 100_000:
            m = rng.choice([rng.randint(1, 20), rng.randint(1, 300)])
            p = periodic_bytes(rng, m, rng.choice([b"ab", b"abc"])) if rng.random() < 0.7 \
                else random_bytes(rng, m, rng.choice([b"ab", b"abcd"]))
            idx = PatternIndex(p)
            triples = [random_triple(rng, m) for _ in range(500)]
            for t, off in zip(triples, triple_offsets(triples, idx)):
                uvx = b"".join(spell(p, r) for r in t)
                if p in uvx:
                    assert off is not None and uvx[off:off + m] == p, (p, t, off)
                    hits += 1
                else:
                    assert off is None, (p, t, off)
            total += len(triples)
        info["triples"] = total
        info["with_occurrence"] = hits
        rounds = matcher.debug_stats["case1_rounds"]
        assert 1 <= rounds <= 3
        info["max_case1_rounds_seen"] = rounds


# 6 -------------------------------------------------------------------------

def test_criterion_6_linearity():
    rng = random.Random(1006)
    p = random_bytes(rng, 32)
    with criterion(6, "linearity by counting", 60) as info:
        worst_ratio = 0.0
        for shape in ("random-binary", "skewed-chain"):
            prev = None
            for e in range(8, 15):
                n = 1 << e
                c = match(generate(shape, n, b"ab", seed=e), p).counters
                assert c["concat_queries"] <= 8 * n, (shape, n, c)
                assert c["wa_queries"] <= 40 * n, (shape, n, c)
                if shape == "random-binary" and prev is not None:
                    for key in ("concat_queries", "wa_queries"):
                        ratio = c[key] / max(1, prev[key])
                        worst_ratio = max(worst_ratio, ratio)
                        assert ratio <= 2 * 1.15, (shape, n, key, ratio)
                prev = c
        info["worst_doubling_ratio"] = f"{worst_ratio:.3f}"


# 7 -------------------------------------------------------------------------

def test_criterion_7_micro_grid():
    rng = random.Random(1007)
    with criterion(7, "micro-grid range emptiness", 30) as info:
        rects = 0
        for _ in range(1000):
            s = rng.randint(1, 64)
            universe = rng.choice([s, 4 * s, 1000])
            pts = [(rng.randrange(universe), rng.randrange(universe)) for _ in range(s)]
            g = MicroGrid(pts)
            xs = sorted({x for x, _ in pts})
            ys = sorted({y for _, y in pts})
            for a in range(len(xs)):
                for b in range(a, len(xs)):
                    x1, x2 = xs[a], xs[b]
                    col = sorted(y for x, y in pts if x1 <= x <= x2)
                    for c_ in range(len(ys)):
                        y1 = ys[c_]
                        # first point of the column band at or above y1
                        lo = 0
                        while lo < len(col) and col[lo] < y1:
                            lo += 1
                        for d in range(c_, len(ys)):
                            y2 = ys[d]
                            t = g.query_index(x1, x2, y1, y2)
                            if lo < len(col) and col[lo] <= y2:
                                assert t is not None
                                x, y = pts[t]
                                assert x1 <= x <= x2 and y1 <= y <= y2
                            else:
                                assert t is None
                            rects += 1
        info["rectangles"] = rects


# 8 -------------------------------------------------------------------------

def brute_prefix_periods(s):
    """per[k] = least d such that s[:k-d] == s[d:k], found by direct comparison."""
    m = len(s)
    per = [0] * (m + 1)
    k = 1
    for d in range(1, m + 1):
        # longest prefix with period d, by binary search over slice equality
        lo, hi = 0, m - d
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if s[:mid] == s[d:d + mid]:
                lo = mid
            else:
                hi = mid - 1
        while k <= min(m, d + lo):
            per[k] = d
            k += 1
    return per


def test_criterion_8_periods():
    rng = random.Random(1008)
    with criterion(8, "period tables", 10) as info:
        for _ in range(1000):
            m = rng.randint(1, 500)
            s = periodic_bytes(rng, m, rng.choice([b"ab", b"abc"])) if rng.random() < 0.6 \
                else random_bytes(rng, m, rng.choice([b"ab", b"abcd"]))
            assert prefix_periods(s) == brute_prefix_periods(s), s
            assert prefix_periods(s[::-1]) == brute_prefix_periods(s[::-1]), s
        # the tables as the pattern index exposes them
        for _ in range(50):
            s = periodic_bytes(rng, rng.randint(1, 500))
            idx = PatternIndex(s)
            fwd, rev = brute_prefix_periods(s), brute_prefix_periods(s[::-1])
            assert idx.pref_period[:len(s) + 1] == fwd
            assert [idx.suf_period[k] for k in range(1, len(s) + 1)] == \
                [rev[len(s) - k + 1] for k in range(1, len(s) + 1)]
        info["strings"] = 1050
