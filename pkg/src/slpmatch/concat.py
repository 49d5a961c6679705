"""Batched substring concatenation: does uv occur in p, and where?

u and v are substrings of p. If u occurs often, the search for v starts at
u's location in the suffix tree and runs on the small top tree of an
x-decomposition (unrooted LCP), then drops into at most one bottom tree.
If u occurs rarely, u = u' a u'' with u'' its longest frequent suffix; all
occurrences of a u'' form one small group, and a rectangle query over that
group's points finds one preceded by u' and followed by v.
"""

from __future__ import annotations

from typing import NamedTuple

from . import counters
from .lcp_engine import HeavyPathIndex, SuffixTrie, copy_subtrees, rooted_lcp_batch
from .pattern_index import PatternIndex, SubstringRef, check_ref
from .suffix_tree import Locator
from .weighted_ancestor import XDecomposition
from .wordram import MicroGrid, SmallPredSet, radix_argsort


def ceil_log2(m: int) -> int:
    return (m - 1).bit_length()


class ConcatQuery(NamedTuple):
    u: SubstringRef
    v: SubstringRef
    tag: object = None


class ConcatIndex:
    """Preprocessed pattern answering batches of concatenation queries.

    ``threshold`` T: a substring is frequent when it occurs at least T
    times (T = ceil(log2 m), or 1 when m < 4). The decomposition uses
    x = max(1, floor(log2 m)) <= T, so the locus of every frequent
    substring lies on a root-to-chosen path.
    """

    def __init__(self, idx: PatternIndex):
        self.idx = idx
        m = idx.m
        st = idx.fwd
        self.threshold = 1 if m < 4 else ceil_log2(m)
        self.x = max(1, m.bit_length() - 1)
        tree = st.wa.tree
        d = self.decomp = XDecomposition(tree, self.x)
        lp = tree.leaf_pointer
        self.st_rep = [st.leaf_start[lp[v]] for v in range(st.size)]

        top = d.top_nodes
        top_id = {v: i for i, v in enumerate(top)}
        self.top_id = top_id
        t_parent = [-1 if v == tree.root else top_id[d.top_parent[v]] for v in top]
        t_children = [[top_id[c] for c in d.top_children[v]] for v in top]
        self.top_trie = SuffixTrie(idx, t_parent, [st.depth[v] for v in top], t_children,
                                   [self.st_rep[v] for v in top], origin=list(top))
        self.top_hp = HeavyPathIndex(self.top_trie)
        self._first = {}
        self._bottom = {}
        self._build_rare()

    # frequent side

    def first_symbols(self, v: int):
        """(SmallPredSet of first edge symbols, children in the same order)."""
        if v not in self._first:
            st = self.idx.fwd
            kids = st.children[v]
            self._first[v] = (SmallPredSet([st.first[c] for c in kids]), kids)
        return self._first[v]

    def child_by_symbol(self, v: int, sym: int):
        pred, kids = self.first_symbols(v)
        r = pred.rank(sym)
        if r and pred.keys[r - 1] == sym:
            return kids[r - 1]
        return None

    def bottom_trie(self, c: int) -> SuffixTrie:
        """Trie of the bottom tree rooted at ``c``, hung from c's parent."""
        if c not in self._bottom:
            st = self.idx.fwd
            self._bottom[c] = copy_subtrees(self.idx, st.parent, st.depth, st.children,
                                            self.st_rep, st.parent[c], [c])
        return self._bottom[c]

    # rare side

    def _build_rare(self):
        idx = self.idx
        m = idx.m
        rev = idx.rev
        T = self.threshold
        freq = [0] * rev.size
        for v in range(1, rev.size):  # preorder ids: parents come first
            freq[v] = rev.depth[v] if rev.leaf_count[v] >= T else freq[rev.parent[v]]
        self.freq_depth = freq
        self.groups = {}
        if T <= 1:
            return
        wa_q, members = [], []
        for j in range(1, m + 1):
            leaf = rev.leaf_of[m - j + 1]
            g = freq[leaf]
            if g >= j:
                continue
            wa_q.append((leaf, g + 1))
            members.append((j, j - g))
        keys = rev.wa.batched_wa(wa_q)
        order = radix_argsort(keys, rev.size)
        grouped = {}
        for o in order:
            grouped.setdefault(keys[o], []).append(members[o])
        bound = ceil_log2(m) + 1
        isa, isa_rev = idx.isa, idx.isa_rev
        for key, mem in grouped.items():
            assert len(mem) < bound, (key, len(mem))
            pts = [(isa[j + 1], isa_rev[m - i + 2]) for j, i in mem]
            self.groups[key] = (MicroGrid(pts), mem)

    def rare_concat_query(self, u_prime: Locator, au: Locator, v: Locator,
                          u_prime_len: int, v_len: int):
        """Occurrence (0-based) of u' a u'' v, given locators of u' and a u''
        in the reversed tree and of v in the forward tree, or None."""
        idx = self.idx
        m = idx.m
        if au.node not in self.groups:
            raise KeyError(f"no rare group for reversed-tree node {au.node}")
        grid, _ = self.groups[au.node]
        st, rev = idx.fwd, idx.rev
        if v_len:
            x1, x2 = st.leaf_lo[v.node], st.leaf_hi[v.node]
        else:
            x1, x2 = 0, m
        if u_prime_len:
            y1, y2 = rev.leaf_lo[u_prime.node], rev.leaf_hi[u_prime.node]
        else:
            y1, y2 = 0, m
        pt = grid.query(x1, x2, y1, y2)
        if pt is None:
            return None
        x, y = pt
        j = idx.sa[x] - 1 if x else m
        i = m + 2 - idx.sa_rev[y] if y else 1
        assert 1 <= i <= j
        return i - u_prime_len - 1

    # queries

    def concat_batch(self, queries) -> list:
        """0-based occurrence of u·v in p for each (u, v[, tag]), or None."""
        counters.bump("concat_queries", len(queries))
        idx = self.idx
        m = idx.m
        st = idx.fwd
        out = [None] * len(queries)
        qs = []
        for q in queries:
            qs.append((check_ref(q[0], m), check_ref(q[1], m)))

        # locate u (or v when u is empty) in the suffix tree
        loc_t, loc_r = [], []
        for t, (u, v) in enumerate(qs):
            if u:
                loc_t.append(t)
                loc_r.append(u)
            elif v:
                loc_t.append(t)
                loc_r.append(v)
            else:
                out[t] = 0
        locs = st.locate_batch(loc_r) if loc_r else []
        T = self.threshold
        freq_q, rare_q = [], []
        for t, loc in zip(loc_t, locs):
            u, v = qs[t]
            if not u or not v:
                out[t] = st.first_occ[loc.node] - 1
            elif st.leaf_count[loc.node] >= T:
                freq_q.append((t, loc))
            else:
                rare_q.append(t)
        if freq_q:
            self._frequent(qs, freq_q, out)
        if rare_q:
            self._rare(qs, rare_q, out)
        for t, o in enumerate(out):
            if o is not None:
                u, v = qs[t]
                assert 0 <= o and o + u.length + v.length <= m
        return out

    def _frequent(self, qs, freq_q, out):
        idx = self.idx
        st = idx.fwd
        d = self.decomp
        trie = self.top_trie
        hq = []
        for t, loc in freq_q:
            node = loc.node
            assert d.on_path[node], "frequent locus outside the top region"
            hq.append((Locator(self.top_id[d.top_below[node]], qs[t][0].length), qs[t][1]))
        res = self.top_hp.unrooted_lcp_batch(hq)
        wa_q, wa_t = [], []
        for (t, _), (tn, D) in zip(freq_q, res):
            u, v = qs[t]
            if D - u.length == v.length:
                out[t] = st.first_occ[trie.origin[tn]] - 1
            else:
                wa_q.append((st.leaf_of[trie.rep[tn]], D))
                wa_t.append(t)
        if not wa_q:
            return
        found = st.wa.batched_wa(wa_q)
        down_t, down_sym, down_v = [], [], []
        for t, y, (_, D) in zip(wa_t, found, wa_q):
            if D < st.depth[y]:
                continue
            u, v = qs[t]
            nxt = v.start + D - u.length
            down_t.append((t, y, nxt))
            down_sym.append(idx.p[nxt - 1] + 1)
        by_child = {}
        for o in radix_argsort(down_sym, 256):
            t, y, nxt = down_t[o]
            c = self.child_by_symbol(y, down_sym[o])
            if c is None:
                continue
            assert not d.on_path[c]
            by_child.setdefault(c, []).append((t, nxt))
        for c, items in by_child.items():
            bt = self.bottom_trie(c)
            res = rooted_lcp_batch(bt, [(nxt, qs[t][1].end) for t, nxt in items])
            for (t, nxt), (bn, bd) in zip(items, res):
                if bd == qs[t][1].end - nxt + 1:
                    out[t] = st.first_occ[bt.origin[bn]] - 1

    def _rare(self, qs, rare_q, out):
        idx = self.idx
        rev = idx.rev
        rlocs = rev.locate_batch([idx.rev_ref(qs[t][0]) for t in rare_q])
        wa_q, gs = [], []
        for t, (z, ulen) in zip(rare_q, rlocs):
            g = self.freq_depth[rev.parent[z]]
            assert g < ulen
            wa_q.append((z, g + 1))
            gs.append(g)
        keys = rev.wa.batched_wa(wa_q)
        u_primes = []
        for t, g in zip(rare_q, gs):
            u = qs[t][0]
            u_primes.append(idx.rev_ref(SubstringRef(u.start, u.end - g - 1)))
        up_locs = rev.locate_batch(u_primes)
        v_locs = idx.fwd.locate_batch([qs[t][1] for t in rare_q])
        for t, key, g, ul, vl in zip(rare_q, keys, gs, up_locs, v_locs):
            u, v = qs[t]
            out[t] = self.rare_concat_query(ul, Locator(key, g + 1), vl,
                                            u.length - g - 1, v.length)


def concat_build(idx: PatternIndex) -> ConcatIndex:
    return ConcatIndex(idx)


def concat_batch(c: ConcatIndex, queries) -> list:
    return c.concat_batch(queries)
