"""Word-RAM toolbox.

Small-set predecessor with single-word parallel comparison, LSD radix sort,
blocked batched predecessor over a long sorted list, and the one-word
micro grid used for range emptiness on a handful of points.

Machine words are 64 bits throughout.
"""

from __future__ import annotations

from bisect import bisect_right
from functools import lru_cache
from math import isqrt

from . import counters

WORD = 64


def msb(x: int) -> int:
    """Index of the most significant set bit (x > 0)."""
    return x.bit_length() - 1


def lsb(x: int) -> int:
    return (x & -x).bit_length() - 1


class SmallPredSet:
    """Static sorted key set answering rank and select.

    ``rank(x)`` is the number of keys <= x and ``select(i)`` the i-th
    smallest key (1-based). When all keys fit in fields of b+1 bits packed
    into one word, rank is a subtract-and-popcount on that word; otherwise it
    falls back to binary search.
    """

    __slots__ = ("keys", "_packed", "_ones", "_high")

    def __init__(self, keys):
        keys = list(keys)
        for a, b in zip(keys, keys[1:]):
            if a >= b:
                raise ValueError(f"keys must be strictly increasing, got {a} before {b}")
        if keys and keys[0] < 0:
            raise ValueError("keys must be non-negative")
        self.keys = keys
        self._packed = None
        s = len(keys)
        if s:
            b = max(keys[-1].bit_length(), 1)
            field = b + 1
            if s * field <= WORD:
                ones = 0
                packed = 0
                for t, k in enumerate(keys):
                    ones |= 1 << (t * field)
                    packed |= (k | (1 << b)) << (t * field)
                self._ones = ones
                self._high = ones << b
                self._packed = packed

    def __len__(self):
        return len(self.keys)

    @property
    def packed(self) -> bool:
        return self._packed is not None

    def rank(self, x: int) -> int:
        keys = self.keys
        if not keys or x < keys[0]:
            return 0
        if x >= keys[-1]:
            return len(keys)
        if self._packed is not None:
            # 0 < x+1 < 2^b, so no field borrows from its neighbour; the
            # separator bit survives exactly in fields with key > x.
            diff = self._packed - (x + 1) * self._ones
            return len(keys) - (diff & self._high).bit_count()
        return bisect_right(keys, x)

    def select(self, i: int) -> int:
        if not 1 <= i <= len(self.keys):
            raise IndexError(f"select({i}) out of range 1..{len(self.keys)}")
        return self.keys[i - 1]

    def __contains__(self, x: int) -> bool:
        r = self.rank(x)
        return r > 0 and self.keys[r - 1] == x


def radix_argsort(values, universe: int | None = None) -> list[int]:
    """Stable order of indices sorting ``values`` (non-negative ints).

    LSD radix sort with byte digits. ``universe`` is an inclusive upper bound
    on the values; out-of-range values raise ValueError.
    """
    counters.bump("sort_calls")
    n = len(values)
    order = list(range(n))
    if n <= 1:
        if n and (values[0] < 0 or (universe is not None and values[0] > universe)):
            raise ValueError(f"value {values[0]} outside [0..{universe}]")
        return order
    lo = min(values)
    top = max(values)
    if lo < 0 or (universe is not None and top > universe):
        raise ValueError(f"values must lie in [0..{universe}], got range [{lo}..{top}]")
    shift = 0
    while True:
        buckets = [[] for _ in range(256)]
        for idx in order:
            buckets[(values[idx] >> shift) & 255].append(idx)
        order = [idx for bucket in buckets for idx in bucket]
        shift += 8
        if top >> shift == 0:
            return order


def radix_sort(values, tags=None, universe: int | None = None):
    """Sort ``values`` stably; with ``tags`` return (value, tag) pairs."""
    order = radix_argsort(values, universe)
    if tags is None:
        return [values[i] for i in order]
    return [(values[i], tags[i]) for i in order]


class BlockedPredList:
    """Sorted list cut into blocks of ``block`` keys for batched rank.

    A sorted batch of queries is merged with the block heads, then each
    query is finished inside its block by a SmallPredSet.
    """

    def __init__(self, keys, block: int = WORD):
        keys = list(keys)
        for a, b in zip(keys, keys[1:]):
            if a >= b:
                raise ValueError("keys must be strictly increasing")
        self.keys = keys
        self.block = block
        self.blocks = [SmallPredSet(keys[s:s + block]) for s in range(0, len(keys), block)]
        self.block_heads = [blk.keys[0] for blk in self.blocks]
        self._offsets = list(range(0, len(keys), block))

    def __len__(self):
        return len(self.keys)

    def batched_rank(self, xs) -> list[int]:
        """Rank (number of keys <= x) for each x of the ascending list ``xs``."""
        heads = self.block_heads
        nb = len(heads)
        out = []
        b = 0
        prev = None
        for x in xs:
            if prev is not None and x < prev:
                raise ValueError("query list must be sorted ascending")
            prev = x
            if not nb or x < heads[0]:
                out.append(0)
                continue
            while b + 1 < nb and heads[b + 1] <= x:
                b += 1
            out.append(self._offsets[b] + self.blocks[b].rank(x))
        return out


def batched_pred(lst: BlockedPredList, xs) -> list[int]:
    return lst.batched_rank(xs)


@lru_cache(maxsize=None)
def _grid_masks(side: int):
    """Filter masks for a side x side bit grid, cell (c, r) at bit r*side + c."""
    col_ge, col_le, row_ge, row_le = [], [], [], []
    for t in range(side):
        ge = le = rge = rle = 0
        for r in range(side):
            for c in range(side):
                bit = 1 << (r * side + c)
                if c >= t:
                    ge |= bit
                if c <= t:
                    le |= bit
                if r >= t:
                    rge |= bit
                if r <= t:
                    rle |= bit
        col_ge.append(ge)
        col_le.append(le)
        row_ge.append(rge)
        row_le.append(rle)
    return col_ge, col_le, row_ge, row_le


class _BitGrid:
    """Occupancy of a side x side grid packed into one word."""

    __slots__ = ("side", "word", "payload")

    def __init__(self, side, cells):
        if side * side > WORD:
            raise ValueError(f"a {side}x{side} grid does not fit in one word")
        self.side = side
        self.word = 0
        self.payload = [None] * (side * side)
        for c, r, item in cells:
            bit = r * side + c
            if not self.word >> bit & 1:
                self.word |= 1 << bit
                self.payload[bit] = item

    def find(self, c1, c2, r1, r2):
        if c1 > c2 or r1 > r2:
            return None
        col_ge, col_le, row_ge, row_le = _grid_masks(self.side)
        hit = self.word & col_ge[c1] & col_le[c2] & row_ge[r1] & row_le[r2]
        if not hit:
            return None
        return self.payload[msb(hit)]


class _Slice:
    """One row or column band of boxes, re-reduced to its own rank space.

    ``along`` is the point's offset inside the band (0..side-1), ``other``
    its global rank on the other axis.
    """

    __slots__ = ("others", "grid")

    def __init__(self, side, items):
        others = sorted(other for _, other, _ in items)
        self.others = SmallPredSet(others)
        local = {o: r for r, o in enumerate(others)}
        self.grid = _BitGrid(side, [(a, local[o], t) for a, o, t in items])

    def find(self, a1, a2, o1, o2):
        lo = self.others.rank(o1 - 1)
        hi = self.others.rank(o2) - 1
        if lo > hi:
            return None
        return self.grid.find(a1, a2, lo, hi)


class MicroGrid:
    """Range emptiness with witness over at most 64 points.

    Coordinates are reduced to rank space (ties broken by point index), the
    s x s rank grid is cut into boxes of side ceil(sqrt(s)), and every
    column band, row band and the box-occupancy grid is a single packed word
    queried with precomputed row/column masks.
    """

    def __init__(self, points):
        pts = [tuple(pt) for pt in points]
        s = len(pts)
        if s > WORD:
            raise ValueError(f"MicroGrid holds at most {WORD} points, got {s}")
        self.points = pts
        self._n = s
        if not s:
            return
        xr = self._ranks([x for x, _ in pts])
        yr = self._ranks([y for _, y in pts])
        self._xvals, self._xcum = self._axis([x for x, _ in pts])
        self._yvals, self._ycum = self._axis([y for _, y in pts])
        side = isqrt(s - 1) + 1
        self._side = side
        nb = (s + side - 1) // side
        cols = [[] for _ in range(nb)]
        rows = [[] for _ in range(nb)]
        boxes = []
        for t in range(s):
            cols[xr[t] // side].append((xr[t] % side, yr[t], t))
            rows[yr[t] // side].append((yr[t] % side, xr[t], t))
            boxes.append((xr[t] // side, yr[t] // side, t))
        self._cols = [_Slice(side, items) for items in cols]
        self._rows = [_Slice(side, items) for items in rows]
        self._boxes = _BitGrid(side, boxes)

    @staticmethod
    def _ranks(vals):
        order = sorted(range(len(vals)), key=lambda t: (vals[t], t))
        ranks = [0] * len(vals)
        for r, t in enumerate(order):
            ranks[t] = r
        return ranks

    @staticmethod
    def _axis(vals):
        distinct = sorted(set(vals))
        cum = [0]
        counts = {}
        for v in vals:
            counts[v] = counts.get(v, 0) + 1
        for v in distinct:
            cum.append(cum[-1] + counts[v])
        return SmallPredSet(distinct), cum

    def __len__(self):
        return self._n

    def query_index(self, x1, x2, y1, y2):
        """Index of some point in [x1..x2] x [y1..y2], or None."""
        if x1 > x2 or y1 > y2:
            raise ValueError(f"inverted rectangle [{x1}..{x2}]x[{y1}..{y2}]")
        if not self._n:
            return None
        X1 = self._xcum[self._xvals.rank(x1 - 1)]
        X2 = self._xcum[self._xvals.rank(x2)] - 1
        Y1 = self._ycum[self._yvals.rank(y1 - 1)]
        Y2 = self._ycum[self._yvals.rank(y2)] - 1
        if X1 > X2 or Y1 > Y2:
            return None
        side = self._side
        bx1, bx2 = X1 // side, X2 // side
        if bx1 == bx2:
            return self._cols[bx1].find(X1 - bx1 * side, X2 - bx1 * side, Y1, Y2)
        hit = self._cols[bx1].find(X1 - bx1 * side, side - 1, Y1, Y2)
        if hit is None:
            hit = self._cols[bx2].find(0, X2 - bx2 * side, Y1, Y2)
        if hit is not None or bx2 == bx1 + 1:
            return hit
        # middle columns: two partial row bands plus whole boxes
        mx1, mx2 = (bx1 + 1) * side, bx2 * side - 1
        by1, by2 = Y1 // side, Y2 // side
        if by1 == by2:
            return self._rows[by1].find(Y1 - by1 * side, Y2 - by1 * side, mx1, mx2)
        hit = self._rows[by1].find(Y1 - by1 * side, side - 1, mx1, mx2)
        if hit is None:
            hit = self._rows[by2].find(0, Y2 - by2 * side, mx1, mx2)
        if hit is None and by2 > by1 + 1:
            hit = self._boxes.find(bx1 + 1, bx2 - 1, by1 + 1, by2 - 1)
        return hit

    def query(self, x1, x2, y1, y2):
        """Some stored point in the rectangle, or None."""
        t = self.query_index(x1, x2, y1, y2)
        return None if t is None else self.points[t]


def micro_grid_build(points) -> MicroGrid:
    return MicroGrid(points)


def micro_grid_query(g: MicroGrid, x1, x2, y1, y2):
    return g.query(x1, x2, y1, y2)
