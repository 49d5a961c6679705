"""Suffix trees over byte strings.

Built with Ukkonen's algorithm on the byte string followed by an
out-of-band terminator, then flattened into preorder arrays with children
in lexicographic order (the terminator sorts first). Positions are 1-based;
suffix m+1 is the empty suffix, whose leaf hangs off the root.
"""

from __future__ import annotations

from typing import NamedTuple

from . import counters
from .weighted_ancestor import WeightedAncestors, WeightedTree

TERMINATOR = 0  # symbols are byte + 1, so the terminator sorts first
_OPEN = -1


def _ukkonen(text):
    """Raw suffix tree of ``text`` (last symbol unique); edges are text[start:end]."""
    start, end, link, kids = [0], [0], [0], [{}]

    def new_node(st, en):
        start.append(st)
        end.append(en)
        link.append(0)
        kids.append({})
        return len(start) - 1

    n = len(text)
    active_node = active_edge = active_len = remainder = 0
    for i, c in enumerate(text):
        remainder += 1
        last_new = 0
        while remainder:
            if active_len == 0:
                active_edge = i
            ec = text[active_edge]
            nxt = kids[active_node].get(ec)
            if nxt is None:
                kids[active_node][ec] = new_node(i, _OPEN)
                if last_new:
                    link[last_new] = active_node
                    last_new = 0
            else:
                elen = (i + 1 if end[nxt] == _OPEN else end[nxt]) - start[nxt]
                if active_len >= elen:
                    active_edge += elen
                    active_len -= elen
                    active_node = nxt
                    continue
                if text[start[nxt] + active_len] == c:
                    if last_new and active_node:
                        link[last_new] = active_node
                        last_new = 0
                    active_len += 1
                    break
                split = new_node(start[nxt], start[nxt] + active_len)
                kids[active_node][ec] = split
                kids[split][c] = new_node(i, _OPEN)
                start[nxt] += active_len
                kids[split][text[start[nxt]]] = nxt
                if last_new:
                    link[last_new] = split
                last_new = split
            remainder -= 1
            if active_node == 0 and active_len > 0:
                active_len -= 1
                active_edge = i - remainder + 1
            elif active_node:
                active_node = link[active_node]
    end = [n if e == _OPEN else e for e in end]
    return start, end, kids


class Locator(NamedTuple):
    """A possibly implicit location: the explicit node at or below it and its string depth."""

    node: int
    depth: int


class SuffixTree:
    """Suffix tree of a byte string, flattened into preorder arrays.

    Leaf depths include the terminator, so the leaf of suffix i has string
    depth m - i + 2. ``first`` holds the first symbol (byte + 1, 0 for the
    terminator) of each node's incoming edge.
    """

    def __init__(self, s: bytes):
        self.s = bytes(s)
        m = self.m = len(s)
        text = [b + 1 for b in s] + [TERMINATOR]
        rstart, rend, rkids = _ukkonen(text)
        size = len(rstart)
        parent = [-1] * size
        depth = [0] * size
        first = [TERMINATOR] * size
        edge_start = [0] * size
        children = [[] for _ in range(size)]
        raw_of = [0] * size
        stack = [(0, -1, 0)]
        nid = 0
        while stack:
            raw, par, d = stack.pop()
            v = nid
            nid += 1
            raw_of[v] = raw
            parent[v] = par
            if par >= 0:
                d += rend[raw] - rstart[raw]
                children[par].append(v)
                first[v] = text[rstart[raw]]
                edge_start[v] = rstart[raw]
            depth[v] = d
            for sym in sorted(rkids[raw], reverse=True):
                stack.append((rkids[raw][sym], v, d))
        self.size = size
        self.parent = parent
        self.depth = depth
        self.first = first
        self.edge_start = edge_start
        self.children = children

        # leaves, suffix array, leaf-rank intervals, occurrence counts
        leaf_start = [0] * size
        leaf_of = [0] * (m + 2)
        sa = [0]
        rank_of_leaf = [0] * size
        for v in range(size):
            if not children[v]:
                i = m + 2 - depth[v]
                leaf_start[v] = i
                leaf_of[i] = v
                if i <= m:
                    sa.append(i)
                    rank_of_leaf[v] = len(sa) - 1
        self.leaf_start = leaf_start
        self.leaf_of = leaf_of
        self.sa = sa
        isa = [0] * (m + 2)
        for r in range(1, m + 1):
            isa[sa[r]] = r
        self.isa = isa  # isa[m+1] = 0: the empty suffix ranks first

        INF = m + 2
        lo = [INF] * size
        hi = [0] * size
        count = [0] * size
        min1 = [INF] * size
        min2 = [INF] * size
        for v in range(size - 1, -1, -1):
            if not children[v]:
                i = leaf_start[v]
                if i <= m:
                    lo[v] = hi[v] = rank_of_leaf[v]
                    count[v] = 1
                    min1[v] = i
            p = parent[v]
            if p >= 0:
                if lo[v] < lo[p]:
                    lo[p] = lo[v]
                if hi[v] > hi[p]:
                    hi[p] = hi[v]
                count[p] += count[v]
                for cand in (min1[v], min2[v]):
                    if cand < min1[p]:
                        min1[p], min2[p] = cand, min1[p]
                    elif cand < min2[p]:
                        min2[p] = cand
        self.leaf_lo = lo
        self.leaf_hi = hi
        self.leaf_count = count
        self.first_occ = min1
        self.second_occ = min2

        dollar = [0] * size
        for v in range(size):
            kids = children[v]
            if kids and first[kids[0]] == TERMINATOR:
                dollar[v] = v
            else:
                dollar[v] = dollar[parent[v]] if v else 0
        self.dollar_ancestor = dollar

        self._build_lca()
        self.wa = WeightedAncestors(WeightedTree(parent, depth, children))

    def _build_lca(self):
        # Preorder ids: for u < v not nested, lca(u, v) is the parent of the
        # shallowest node in (u, v]. Keys pack (tree depth, id) into one int.
        size = self.size
        tdepth = [0] * size
        for v in range(1, size):
            tdepth[v] = tdepth[self.parent[v]] + 1
        self._tdepth = tdepth
        level = [tdepth[v] * size + v for v in range(size)]
        table = [level]
        span = 1
        while 2 * span <= size:
            prev = table[-1]
            level = [min(a, b) for a, b in zip(prev, prev[span:])]
            table.append(level)
            span *= 2
        self._rmq = table
        self._last = [0] * size  # last preorder id in each subtree
        for v in range(size - 1, -1, -1):
            kids = self.children[v]
            self._last[v] = self._last[kids[-1]] if kids else v

    def lca(self, u: int, v: int) -> int:
        if u > v:
            u, v = v, u
        if u == v or v <= self._last[u]:
            return u
        length = v - u
        j = length.bit_length() - 1
        row = self._rmq[j]
        key = min(row[u + 1], row[v - (1 << j) + 1])
        return self.parent[key % self.size]

    def lcp(self, i: int, j: int) -> int:
        """Longest common prefix of suffixes i and j (1-based; m+1 is empty)."""
        counters.bump("lcp_calls")
        m = self.m
        if i > m or j > m:
            return 0
        if i == j:
            return m - i + 1
        return self.depth[self.lca(self.leaf_of[i], self.leaf_of[j])]

    def child_by_symbol(self, v: int, sym: int):
        for c in self.children[v]:
            if self.first[c] == sym:
                return c
        return None

    def locate_batch(self, refs) -> list[Locator]:
        """Locators of substrings given as 1-based (start, end) pairs."""
        out = [Locator(0, 0)] * len(refs)
        live = [t for t, (i, j) in enumerate(refs) if j >= i]
        if live:
            found = self.wa.batched_wa([(self.leaf_of[refs[t][0]], refs[t][1] - refs[t][0] + 1)
                                        for t in live])
            for t, v in zip(live, found):
                out[t] = Locator(v, refs[t][1] - refs[t][0] + 1)
        return out

    def longest_suffix_prefix(self, loc: Locator) -> int:
        """Length of the longest prefix of the located string that is a suffix of s."""
        v, d = loc
        if d == 0:
            return 0
        if not self.children[v] and d == self.depth[v] - 1:
            return d
        if d < self.depth[v]:
            v = self.parent[v]
        return self.depth[self.dollar_ancestor[v]]

    def walk(self, start: int, end: int) -> Locator:
        """Naive character walk to the location of s[start..end] (for tests)."""
        v, d = 0, 0
        for pos in range(start, end + 1):
            sym = self.s[pos - 1] + 1
            if d == self.depth[v]:
                c = self.child_by_symbol(v, sym)
                if c is None:
                    raise KeyError("substring not present")
                v = c
            elif self._edge_symbol(v, d) != sym:
                raise KeyError("substring not present")
            d += 1
        return Locator(v, d)

    def _edge_symbol(self, v, d):
        """Symbol at string depth d+1 on the edge into v."""
        off = self.edge_start[v] + (d - self.depth[self.parent[v]])
        return self.s[off] + 1 if off < self.m else TERMINATOR
