"""Batched weighted ancestor queries.

A query (u, k) asks for the ancestor of u nearest the root whose weight is at
least k, on a tree whose weights strictly increase from parent to child.
Queries are answered offline: the tree is split by an x-decomposition into a
small top tree and bottom trees of fewer than x nodes. Bottom-tree queries
use a one-word bitvector structure per tree; the rest are sorted by threshold
and resolved on the top tree, then finished on the unary path hidden under a
top-tree edge with a small predecessor set.
"""

from __future__ import annotations

from bisect import bisect_left
from typing import NamedTuple

from . import counters
from .wordram import WORD, SmallPredSet, radix_argsort


class WeightedTree:
    """Rooted tree given by a parent array (root has parent -1)."""

    def __init__(self, parent, weight, children=None):
        n = len(parent)
        if len(weight) != n:
            raise ValueError("parent and weight arrays differ in length")
        roots = [v for v in range(n) if parent[v] < 0]
        if len(roots) != 1:
            raise ValueError(f"expected exactly one root, found {len(roots)}")
        self.root = roots[0]
        self.parent = list(parent)
        self.weight = list(weight)
        if children is None:
            children = [[] for _ in range(n)]
            for v in range(n):
                if parent[v] >= 0:
                    children[parent[v]].append(v)
        self.children = children
        for v in range(n):
            p = parent[v]
            if p >= 0 and not weight[p] < weight[v]:
                raise ValueError(
                    f"weights must increase on edge {p}->{v}: {weight[p]} !< {weight[v]}")
        self.preorder = self._preorder()
        if len(self.preorder) != n:
            raise ValueError("parent array is not a single tree")
        leaf = [-1] * n
        for v in reversed(self.preorder):
            kids = children[v]
            leaf[v] = v if not kids else leaf[kids[0]]
        self.leaf_pointer = leaf

    def __len__(self):
        return len(self.parent)

    def _preorder(self):
        out = []
        stack = [self.root]
        children = self.children
        while stack:
            v = stack.pop()
            out.append(v)
            stack.extend(reversed(children[v]))
        return out


class MicroWaTree:
    """Constant-time weighted ancestors on a tree of at most O(w) nodes.

    Weights are made distinct as wt * 2^w + preorder index (a double word,
    held as one Python int). Each node keeps a bitvector of the ranks of its
    ancestors' weights, stored in descending rank order so the answer is the
    most significant surviving bit after masking.
    """

    __slots__ = ("nodes", "_pred", "_bits", "_size", "_by_rank")

    def __init__(self, nodes, parent, weight):
        # nodes: preorder list of global ids; parent/weight: global arrays
        self.nodes = list(nodes)
        s = len(self.nodes)
        self._size = s
        keyed = [(weight[v] << WORD) | i for i, v in enumerate(self.nodes)]
        self._pred = SmallPredSet(sorted(keyed))
        # node by ascending key rank, i.e. select() followed by the index mask
        self._by_rank = [self.nodes[key & ((1 << WORD) - 1)] for key in self._pred.keys]
        self._bits = {}
        for i, v in enumerate(self.nodes):
            asc = self._pred.rank(keyed[i]) - 1
            bits = 1 << (s - 1 - asc)
            p = parent[v]
            if p in self._bits:
                bits |= self._bits[p]
            self._bits[v] = bits

    def __len__(self):
        return self._size

    def query(self, u: int, k: int) -> int:
        size = self._size
        masked = self._bits[u] & ((1 << (size - self._pred.rank((k << WORD) - 1))) - 1)
        if not masked:
            raise ValueError(f"threshold {k} exceeds the weight of node {u}")
        # the most significant surviving bit is the smallest qualifying rank
        return self._by_rank[size - masked.bit_length()]


def micro_wa_query(mt: MicroWaTree, u: int, k: int) -> int:
    return mt.query(u, k)


class XDecomposition:
    """Top tree and bottom trees of an x-decomposition.

    Every x-th node in preorder is chosen; the top tree holds the root, the
    chosen nodes and the LCAs of chosen pairs. ``on_path`` marks nodes lying
    on a root-to-chosen path; every other node belongs to a bottom tree.
    """

    def __init__(self, tree: WeightedTree, x: int):
        if x < 1:
            raise ValueError("block parameter x must be >= 1")
        n = len(tree)
        parent, children = tree.parent, tree.children
        self.x = x
        self.chosen = [v for r, v in enumerate(tree.preorder, 1) if r % x == 0]
        on_path = [False] * n
        on_path[tree.root] = True
        for c in self.chosen:
            v = c
            while v >= 0 and not on_path[v]:
                on_path[v] = True
                v = parent[v]
        self.on_path = on_path
        is_top = [False] * n
        is_top[tree.root] = True
        for c in self.chosen:
            is_top[c] = True
        for v in range(n):
            if on_path[v] and sum(1 for c in children[v] if on_path[c]) >= 2:
                is_top[v] = True
        self.is_top = is_top
        self.top_nodes = [v for v in tree.preorder if is_top[v]]
        top_parent = {}
        top_below = [-1] * n
        edge_nodes = {}
        for t in self.top_nodes:
            if t == tree.root:
                top_below[t] = t
                continue
            path = []
            v = t
            while not is_top[v] or v == t:
                path.append(v)
                top_below[v] = t
                v = parent[v]
            top_parent[t] = v
            path.reverse()
            edge_nodes[t] = path
        self.top_parent = top_parent
        self.top_below = top_below
        self.edge_nodes = edge_nodes
        self.edge_pred = {t: SmallPredSet([tree.weight[v] for v in path])
                          for t, path in edge_nodes.items()}
        top_children = {t: [] for t in self.top_nodes}
        for t in self.top_nodes:
            if t != tree.root:
                top_children[top_parent[t]].append(t)
        self.top_children = top_children
        bottom_root_of = [-1] * n
        self.bottom_roots = []
        for v in tree.preorder:
            if on_path[v]:
                continue
            p = parent[v]
            bottom_root_of[v] = v if on_path[p] else bottom_root_of[p]
            if on_path[p]:
                self.bottom_roots.append(v)
        self.bottom_root_of = bottom_root_of


def offline_sorted_wa(root, children, weight, queries):
    """Answer (node, k) queries, pre-sorted by k, on an explicit tree.

    A DFS keeps the weights of the current root path on a stack; each query
    is resolved at its node by galloping down from the top of the stack.
    Returns the answer node per query, in input order.
    """
    pending = {}
    prev = None
    for qi, (node, k) in enumerate(queries):
        if prev is not None and k < prev:
            raise ValueError("queries must be sorted by threshold")
        prev = k
        pending.setdefault(node, []).append(qi)
    answers = [None] * len(queries)
    stack_w, stack_v = [], []
    todo = [(root, False)]
    while todo:
        v, leaving = todo.pop()
        if leaving:
            stack_w.pop()
            stack_v.pop()
            continue
        stack_w.append(weight[v])
        stack_v.append(v)
        n = len(stack_w)
        for qi in pending.get(v, ()):
            k = queries[qi][1]
            reach = 1
            while reach < n and stack_w[n - 1 - reach] >= k:
                reach *= 2
            j = bisect_left(stack_w, k, max(0, n - 1 - reach), n)
            answers[qi] = stack_v[j]
        todo.append((v, True))
        for c in reversed(children[v]):
            todo.append((c, False))
    return answers


class WaQuery(NamedTuple):
    node: int
    k: int


class WeightedAncestors:
    """Preprocessed tree answering batches of weighted ancestor queries."""

    def __init__(self, tree: WeightedTree, x: int = WORD):
        self.tree = tree
        self.decomp = XDecomposition(tree, x)
        d = self.decomp
        self.micro = {}
        parent = tree.parent
        members = {}
        for v in tree.preorder:
            b = d.bottom_root_of[v]
            if b >= 0:
                members.setdefault(b, []).append(v)
        for b, nodes in members.items():
            self.micro[b] = MicroWaTree(nodes, parent, tree.weight)

    def batched_wa(self, queries) -> list:
        """Answer a list of (node, k) pairs.

        Returns the answer node per query, or None when k exceeds the
        weight of the query node (no such ancestor); such queries do not
        disturb the rest of the batch.
        """
        counters.bump("wa_queries", len(queries))
        tree, d = self.tree, self.decomp
        weight, parent = tree.weight, tree.parent
        root = tree.root
        answers = [None] * len(queries)
        top_q = []
        for qi, (node, k) in enumerate(queries):
            if k > weight[node]:
                continue
            if k <= weight[root]:
                answers[qi] = root
                continue
            u = tree.leaf_pointer[node]
            if d.on_path[u]:
                top_q.append((qi, d.top_below[u], k))
                continue
            b = d.bottom_root_of[u]
            up = parent[b]
            if weight[up] < k:
                answers[qi] = self.micro[b].query(u, k)
            else:
                top_q.append((qi, d.top_below[up], k))
        if top_q:
            order = radix_argsort([k for _, _, k in top_q])
            batch = [(top_q[i][1], top_q[i][2]) for i in order]
            found = offline_sorted_wa(root, d.top_children, weight, batch)
            for pos, i in enumerate(order):
                qi, _, k = top_q[i]
                t = found[pos]
                if t != root:
                    path = d.edge_nodes[t]
                    t = path[d.edge_pred[t].rank(k - 1)]
                answers[qi] = t
        return answers

    def query(self, node: int, k: int):
        return self.batched_wa([(node, k)])[0]


def wa_build(tree: WeightedTree, x: int = WORD) -> WeightedAncestors:
    return WeightedAncestors(tree, x)


def batched_wa(wa: WeightedAncestors, queries) -> list:
    return wa.batched_wa(queries)
