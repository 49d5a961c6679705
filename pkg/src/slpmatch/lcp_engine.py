"""Rooted and unrooted LCP queries on compacted tries of pattern suffixes.

A trie node spells a prefix of some suffix of p, recorded as ``rep[v]``
(a suffix start; m+1 is the empty suffix), so every edge label is a
substring of p and never materialized.
"""

from __future__ import annotations

from .pattern_index import PatternIndex
from .suffix_tree import Locator
from .weighted_ancestor import WeightedAncestors, WeightedTree
from .wordram import BlockedPredList, radix_argsort


class SuffixTrie:
    """Compacted trie over pattern suffixes (or prefixes of them).

    Nodes are 0..n-1 with root 0; ``children`` lists are in lexicographic
    order, so leaves read left to right are sorted by ``isa[rep]``.
    ``origin`` maps nodes back to the tree they were copied from, if any.
    """

    def __init__(self, idx: PatternIndex, parent, depth, children, rep, origin=None):
        self.idx = idx
        self.parent = parent
        self.depth = depth
        self.children = children
        self.rep = rep
        self.origin = origin
        self.tree = WeightedTree(parent, depth, children)
        self.leaves = [v for v in self.tree.preorder if not children[v]]
        isa = idx.isa
        keys = [isa[rep[v]] for v in self.leaves]
        self.ranks = BlockedPredList(keys)  # raises if the leaf order is not lexicographic
        self.wa = WeightedAncestors(self.tree)

    def __len__(self):
        return len(self.parent)

    @classmethod
    def from_suffixes(cls, idx: PatternIndex, starts):
        """Trie of the given suffixes, built from their sorted order and adjacent lcps."""
        m = idx.m
        isa = idx.isa
        order = sorted(set(starts), key=lambda s: isa[s])
        parent, depth, children, rep = [-1], [0], [[]], [0]

        def new(par, d, r):
            parent.append(par)
            depth.append(d)
            children.append([])
            rep.append(r)
            return len(parent) - 1

        stack = [0]
        prev = None
        for s in order:
            if prev is not None:
                l = idx.lcp(prev, s)
                last = None
                while depth[stack[-1]] > l:
                    last = stack.pop()
                top = stack[-1]
                if depth[top] < l:
                    mid = new(top, l, s)
                    children[top][-1] = mid
                    parent[last] = mid
                    children[mid].append(last)
                    stack.append(mid)
            leaf = new(stack[-1], m - s + 2, s)
            children[stack[-1]].append(leaf)
            stack.append(leaf)
            prev = s
        if children[0]:
            rep[0] = rep[children[0][0]]
        return cls(idx, parent, depth, children, rep, list(range(len(parent))))


def copy_subtrees(idx, parent, depth, children, rep, top, roots) -> SuffixTrie:
    """Trie rooted at ``top`` holding only the subtrees under ``roots``.

    Depths are shifted so ``top`` becomes the root: every suffix is
    truncated by depth[top] characters, which keeps the trie shape.
    """
    d0 = depth[top]
    n_parent, n_depth, n_children, n_rep, origin = [-1], [0], [[]], [rep[top] + d0], [top]
    stack = [(r, 0) for r in reversed(roots)]
    while stack:
        v, par = stack.pop()
        nid = len(n_parent)
        n_parent.append(par)
        n_depth.append(depth[v] - d0)
        n_children.append([])
        n_rep.append(rep[v] + d0)
        origin.append(v)
        n_children[par].append(nid)
        for c in reversed(children[v]):
            stack.append((c, nid))
    if roots:
        n_rep[0] = n_rep[n_children[0][0]]
    return SuffixTrie(idx, n_parent, n_depth, n_children, n_rep, origin)


def rooted_lcp_batch(trie: SuffixTrie, queries) -> list[Locator]:
    """Where the search for each p[i..j] from the root of ``trie`` stops.

    The located depth is the longest match against any stored string,
    capped at the query length. Queries are sorted by isa, ranked among the
    trie leaves in one merge, compared with both neighbours by lcp, and
    placed at their exact depth by one weighted ancestor batch.
    """
    idx = trie.idx
    out = [Locator(0, 0)] * len(queries)
    live = [t for t, (i, j) in enumerate(queries) if j >= i]
    leaves = trie.leaves
    if not live or not leaves:
        return out
    isa, rep, depth = idx.isa, trie.rep, trie.depth
    keys = [isa[queries[t][0]] for t in live]
    order = radix_argsort(keys, idx.m)
    ranks = trie.ranks.batched_rank([keys[o] for o in order])
    nl = len(leaves)
    wa_q, wa_t = [], []
    for o, r in zip(order, ranks):
        t = live[o]
        i, j = queries[t]
        best, best_leaf = -1, None
        for pos in (r - 1, r):
            if 0 <= pos < nl:
                leaf = leaves[pos]
                l = idx.lcp(i, rep[leaf])
                if depth[leaf] < l:
                    l = depth[leaf]
                if l > best:
                    best, best_leaf = l, leaf
        best = min(best, j - i + 1)
        if best > 0:
            wa_q.append((best_leaf, best))
            wa_t.append(t)
    if wa_q:
        for t, v, (_, k) in zip(wa_t, trie.wa.batched_wa(wa_q), wa_q):
            out[t] = Locator(v, k)
    return out


class HeavyPathIndex:
    """Heavy-path decomposition of a trie with per-node light-subtree tries.

    Each node's heavy path ends in a leaf whose string extends every node on
    the path, so walking along the path costs one lcp. The light trie of u
    (all light-child subtrees, truncated by depth[u]) is built on first use.
    """

    def __init__(self, trie: SuffixTrie):
        self.trie = trie
        children, parent = trie.children, trie.parent
        n = len(trie)
        leafcount = [0] * n
        heavy = [-1] * n
        path_leaf = list(range(n))
        for v in reversed(trie.tree.preorder):
            kids = children[v]
            if not kids:
                leafcount[v] = 1
                continue
            best = kids[0]
            for c in kids[1:]:
                if leafcount[c] > leafcount[best]:
                    best = c
            heavy[v] = best
            leafcount[v] = sum(leafcount[c] for c in kids)
            path_leaf[v] = path_leaf[best]
        self.leafcount = leafcount
        self.heavy = heavy
        self.path_leaf = path_leaf
        light_depth = [0] * n
        for v in trie.tree.preorder:
            if v:
                light_depth[v] = light_depth[parent[v]] + (heavy[parent[v]] != v)
        nleaves = len(trie.leaves)
        self.max_light_edges = max((light_depth[v] for v in trie.leaves), default=0)
        self.light_leaf_total = sum(leafcount[c] for v in range(n)
                                    for c in children[v] if c != heavy[v])
        bound = max(nleaves, 1).bit_length() - 1  # floor(log2 |S|)
        assert self.max_light_edges <= bound, (self.max_light_edges, nleaves)
        assert self.light_leaf_total <= nleaves * (bound + 1)
        self._light = {}

    def heavy_paths_on_leaf_paths(self) -> int:
        """Most distinct heavy paths met by any root-to-leaf path."""
        return self.max_light_edges + 1

    def light(self, v):
        if v not in self._light:
            t = self.trie
            roots = [c for c in t.children[v] if c != self.heavy[v]]
            self._light[v] = (copy_subtrees(t.idx, t.parent, t.depth, t.children, t.rep, v, roots)
                              if roots else None)
        return self._light[v]

    def unrooted_lcp_batch(self, queries) -> list[Locator]:
        """Where the search for p[i..j] starting at each Locator stops."""
        t = self.trie
        idx = t.idx
        m = idx.m
        depth, rep, children = t.depth, t.rep, t.children
        out = [None] * len(queries)
        wa_q, wa_t, walk = [], [], {}
        for qi, (loc, (i, j)) in enumerate(queries):
            node, dv = loc
            rem = j - i + 1
            if rem <= 0:
                out[qi] = Locator(node, dv)
                continue
            leaf = self.path_leaf[node]
            start = rep[leaf] + dv
            l = idx.lcp(i, start) if start <= m else 0
            l = min(l, depth[leaf] - dv, rem)
            walk[qi] = l
            if l:
                wa_q.append((leaf, dv + l))
                wa_t.append(qi)
            else:
                out[qi] = Locator(node, dv)
        for qi, w, (_, d) in zip(wa_t, t.wa.batched_wa(wa_q), wa_q):
            out[qi] = Locator(w, d)
        pending = {}
        for qi, l in walk.items():
            w, d = out[qi]
            i, j = queries[qi][1]
            if l == j - i + 1 or d < depth[w] or not children[w]:
                continue
            sub = self.light(w)
            if sub is not None:
                pending.setdefault(w, []).append((qi, (i + l, j)))
        for w, items in pending.items():
            sub = self.light(w)
            res = rooted_lcp_batch(sub, [q for _, q in items])
            for (qi, _), (tn, td) in zip(items, res):
                if td:
                    out[qi] = Locator(sub.origin[tn], depth[w] + td)
        return out


def unrooted_lcp_batch(h: HeavyPathIndex, queries) -> list[Locator]:
    return h.unrooted_lcp_batch(queries)


def naive_trie_walk(trie: SuffixTrie, loc: Locator, i: int, j: int) -> Locator:
    """Character-by-character search for p[i..j] from ``loc`` (test oracle)."""
    p = trie.idx.p
    m = len(p)
    depth, rep, children = trie.depth, trie.rep, trie.children

    def sym(v, d):
        # symbol spelled at string depth d+1 on the root path of v
        pos = rep[v] + d
        return p[pos - 1] if pos <= m else None

    v, d = loc
    for pos in range(i, j + 1):
        c = p[pos - 1]
        if d == depth[v]:
            nxt = [k for k in children[v] if sym(k, d) == c]
            if not nxt:
                break
            v = nxt[0]
        elif sym(v, d) != c:
            break
        d += 1
    return Locator(v, d)
