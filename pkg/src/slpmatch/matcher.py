"""Pattern matching on an SLP-compressed text.

For every rule A we compute either a substring of p equal to val(A), or
substring pairs covering the longest prefix of val(A) that is a suffix of p
and the longest suffix of val(A) that is a prefix of p. p occurs in the
text iff it occurs across some rule boundary, i.e. in u_B v_B x_C y_C for a
rule A -> BC; those quadruples are cut down to triples (u, v, x), and each
triple is decided with a constant number of lcp queries using periodicity.

All queries are issued in batches: one concatenation batch per height layer
while computing the rule information, then a few rounds of batched
prefix/suffix and locate requests driven by per-triple generators.
"""

from __future__ import annotations

from typing import NamedTuple

from . import counters
from .concat import ConcatIndex
from .pattern_index import EMPTY, PatternIndex, SubstringRef
from .slp import Binary, Slp, Terminal, analyze, exact_lengths

# When set, every candidate the periodicity arguments discard is checked
# against a materialized text (small instances only).
DEBUG_CHECKS = False

MAX_CASE1_ROUNDS = 3
# largest number of Case-1 halving rounds seen, tracked when DEBUG_CHECKS is on
debug_stats = {"case1_rounds": 0}
POSITION_LIMIT = 1 << 64


class Substring(NamedTuple):
    ref: SubstringRef


class PrefSuf(NamedTuple):
    x: SubstringRef
    y: SubstringRef
    u: SubstringRef
    v: SubstringRef


class Triple(NamedTuple):
    u: SubstringRef
    v: SubstringRef
    x: SubstringRef


class MatchResult(NamedTuple):
    found: bool
    occurrence: int | None = None
    witness_rule: int | None = None
    witness_offset: int | None = None  # offset of p inside u·v·x of the witness triple
    witness_triple: Triple | None = None
    counters: dict | None = None


def _ref(start: int, length: int) -> SubstringRef:
    return SubstringRef(start, start + length - 1) if length else EMPTY


def _concat_ref(o, a: SubstringRef, b: SubstringRef) -> SubstringRef:
    return _ref(o + 1, a.length + b.length)


# rule information

def compute_info(slp: Slp, analysis, idx: PatternIndex, c: ConcatIndex) -> list:
    """NonterminalInfo per rule (index 0 unused), one concat batch per layer."""
    p = idx.p
    first_pos = {}
    for pos in range(len(p) - 1, -1, -1):
        first_pos[p[pos]] = pos + 1
    info = [None] * (slp.n + 1)
    for layer in analysis.layers:
        batch, owners = [], []
        for a in layer:
            r = slp.rules[a]
            if isinstance(r, Terminal):
                pos = first_pos.get(r.symbol)
                info[a] = (Substring(SubstringRef(pos, pos)) if pos
                           else PrefSuf(EMPTY, EMPTY, EMPTY, EMPTY))
                continue
            ib, ic = info[r.left], info[r.right]
            if isinstance(ib, Substring) and isinstance(ic, Substring):
                batch.append((ib.ref, ic.ref))
            elif isinstance(ib, Substring):
                batch.append((ib.ref, ic.x))
            elif isinstance(ic, Substring):
                batch.append((ib.v, ic.ref))
            else:
                info[a] = PrefSuf(ib.x, ib.y, ic.u, ic.v)
                continue
            owners.append(a)
        if not batch:
            continue
        for a, (l, r), o in zip(owners, batch, c.concat_batch(batch)):
            rule = slp.rules[a]
            ib, ic = info[rule.left], info[rule.right]
            if isinstance(ib, Substring) and isinstance(ic, Substring):
                info[a] = (Substring(_concat_ref(o, l, r)) if o is not None
                           else PrefSuf(l, r, l, r))
            elif isinstance(ib, Substring):
                x, y = (_concat_ref(o, l, r), ic.y) if o is not None else (l, r)
                info[a] = PrefSuf(x, y, ic.u, ic.v)
            else:
                u, v = (ib.u, _concat_ref(o, l, r)) if o is not None else (l, r)
                info[a] = PrefSuf(ib.x, ib.y, u, v)
    return info


def suffix_side(inf):
    """(u, v) whose concatenation covers the suffix information."""
    return (EMPTY, inf.ref) if isinstance(inf, Substring) else (inf.u, inf.v)


def prefix_side(inf):
    return (inf.ref, EMPTY) if isinstance(inf, Substring) else (inf.x, inf.y)


def quadruples(slp: Slp, info) -> list:
    """(rule, (u_B, v_B, x_C, y_C)) for every binary rule A -> BC."""
    out = []
    for a in range(1, slp.n + 1):
        r = slp.rules[a]
        if isinstance(r, Binary):
            out.append((a, suffix_side(info[r.left]) + prefix_side(info[r.right])))
    return out


def reduce_quadruples(quads, c: ConcatIndex) -> list:
    """Triples (tag, shift, Triple): p occurs in some u·v·x·y iff it occurs in
    some triple; ``shift`` is the triple's offset inside its quadruple."""
    res = c.concat_batch([(q[1], q[2]) for _, q in quads])
    out = []
    for (tag, (u, v, x, y)), o in zip(quads, res):
        if o is not None:
            out.append((tag, 0, Triple(u, _concat_ref(o, v, x), y)))
        else:
            out.append((tag, 0, Triple(u, v, x)))
            out.append((tag, u.length, Triple(v, x, y)))
    return out


# text made of pattern pieces

class View:
    """The pattern read forwards, or backwards (p reversed)."""

    def __init__(self, idx: PatternIndex, reverse: bool = False):
        self.idx = idx
        self.m = idx.m
        self.reverse = reverse
        self.pattern = idx.p[::-1] if reverse else idx.p

    def lcp(self, i, j):
        if self.reverse:
            m1 = self.m + 1
            return self.idx.lcs(m1 - i, m1 - j)
        return self.idx.lcp(i, j)

    def lcs(self, i, j):
        if self.reverse:
            m1 = self.m + 1
            return self.idx.lcp(m1 - i, m1 - j)
        return self.idx.lcs(i, j)

    def prefix_period(self, a):
        if self.reverse:
            return self.idx.suf_period[self.m - a + 1]
        return self.idx.pref_period[a]

    def piece(self, ref):
        """A forward reference as a reference in this view."""
        return self.idx.rev_ref(ref) if self.reverse else SubstringRef(*ref)

    def half_request(self, a, half):
        """Request giving the longest suffix of view[a-half+1..a] that is a view prefix."""
        if self.reverse:
            m = self.m
            return ("pre", _ref(m - a + 1, half))
        return ("suf", _ref(a - half + 1, half))


class Text:
    """Concatenation of pattern pieces (view references), queried by lcp."""

    def __init__(self, view: View, pieces):
        self.view = view
        self.pieces = []
        self.offsets = []
        n = 0
        for s, e in pieces:
            if e >= s:
                self.pieces.append((s, e - s + 1))
                self.offsets.append(n)
                n += e - s + 1
        self.length = n

    def _at(self, pos):
        for k in range(len(self.pieces) - 1, -1, -1):
            if self.offsets[k] <= pos:
                return k if pos < self.offsets[k] + self.pieces[k][1] else None
        return None

    def match_pattern(self, pos, pstart, maxlen):
        """Common prefix length of text[pos..] and pattern[pstart..], capped."""
        n = 0
        while n < maxlen:
            k = self._at(pos + n)
            if k is None:
                break
            s, ln = self.pieces[k]
            within = pos + n - self.offsets[k]
            cap = min(ln - within, maxlen - n)
            l = min(self.view.lcp(s + within, pstart + n), cap)
            n += l
            if l < cap:
                break
        return n

    def self_lcp(self, p1, p2, maxlen):
        n = 0
        while n < maxlen:
            k1, k2 = self._at(p1 + n), self._at(p2 + n)
            if k1 is None or k2 is None:
                break
            w1 = p1 + n - self.offsets[k1]
            w2 = p2 + n - self.offsets[k2]
            cap = min(self.pieces[k1][1] - w1, self.pieces[k2][1] - w2, maxlen - n)
            l = min(self.view.lcp(self.pieces[k1][0] + w1, self.pieces[k2][0] + w2), cap)
            n += l
            if l < cap:
                break
        return n

    def self_lcs(self, e1, e2, maxlen):
        """Common suffix length of text[:e1] and text[:e2], capped."""
        n = 0
        while n < maxlen:
            q1, q2 = e1 - n - 1, e2 - n - 1
            if q1 < 0 or q2 < 0:
                break
            k1, k2 = self._at(q1), self._at(q2)
            w1 = q1 - self.offsets[k1]
            w2 = q2 - self.offsets[k2]
            cap = min(w1 + 1, w2 + 1, maxlen - n)
            l = min(self.view.lcs(self.pieces[k1][0] + w1, self.pieces[k2][0] + w2), cap)
            n += l
            if l < cap:
                break
        return n

    def materialize(self) -> bytes:
        pat = self.view.pattern
        return b"".join(pat[s - 1:s - 1 + ln] for s, ln in self.pieces)


# triple test

def _case1(view: View, a: int, rest):
    """Occurrences starting early in block·rest, where block = view[1..a].

    Each round either finds p, or rules out every start in the first half of
    the block and shrinks the block to (a pattern prefix inside) its second
    half. Returns ("found", pos) with pos relative to the original text,
    ("none",) when no occurrence can remain, or ("cont", a, dropped) once the
    block is at most m/4 long.
    """
    m = view.m
    dropped = 0
    rounds = 0
    while 4 * a > m:
        rounds += 1
        assert rounds <= MAX_CASE1_ROUNDS, "more than three halving rounds"
        text = Text(view, [(1, a)] + list(rest))
        L = text.length
        if L < m:
            return ("none",)
        d = view.prefix_period(a)
        k = d + view.lcp(1, d + 1)
        amax = min(a // (2 * d), (L - m) // d)
        l = text.match_pattern(amax * d, 1, k)
        if l == k:
            cand = amax
        else:
            reach = amax * d + l - k
            cand = reach // d if reach >= 0 else None
        if cand is not None and text.match_pattern(cand * d, 1, m) == m:
            return ("found", dropped + cand * d)
        if DEBUG_CHECKS:
            debug_stats["case1_rounds"] = max(debug_stats["case1_rounds"], rounds)
            s = text.materialize()
            bad = [i for i in range(0, a // 2 + 1) if s[i:i + m] == view.pattern]
            assert not bad, ("discarded occurrence", bad)
        half = a // 2
        new_a = yield view.half_request(a, half)
        dropped += a - new_a
        a = new_a
    return ("cont", a, dropped)


def _triple_gen(idx: PatternIndex, fwd: View, rev: View, t: Triple):
    m = idx.m
    u, v, x = t
    a = yield ("suf", u)
    b = yield ("pre", x)
    shift = u.length - a
    vlen = v.length
    if a + vlen + b < m:
        return None

    res = yield from _case1(fwd, a, [v, _ref(m - b + 1, b)])
    if res[0] == "found":
        return shift + res[1]
    if res[0] == "none":
        return None
    a, shift = res[1], shift + res[2]

    res = yield from _case1(rev, b, [rev.piece(v), rev.piece(_ref(1, a))])
    if res[0] == "found":
        return shift + (b + vlen + a) - res[1] - m
    if res[0] == "none":
        return None
    b = res[1]
    if 2 * vlen < m:
        return None

    # v is long: first occurrences inside u·v or v·x
    pv = yield ("pre", v)
    res = yield from _case1(rev, pv, [rev.piece(_ref(1, a))])
    if res[0] == "found":
        return shift + (pv + a) - res[1] - m
    sv = yield ("suf", v)
    res = yield from _case1(fwd, sv, [_ref(m - b + 1, b)])
    if res[0] == "found":
        return shift + a + vlen - sv + res[1]

    # any remaining occurrence covers v and starts in u, ends in x
    loc = yield ("loc", v)
    st = idx.fwd
    f1 = st.first_occ[loc.node]
    if st.leaf_count[loc.node] == 1:
        j = f1 + vlen - 1
        if f1 - 1 <= a and idx.lcs(a, f1 - 1) >= f1 - 1 \
                and m - j <= b and idx.lcp(m - b + 1, j + 1) >= m - j:
            return shift + a - (f1 - 1)
        return None
    d = st.second_occ[loc.node] - f1
    if 2 * d > vlen:
        return None
    s0 = f1 - idx.lcs(f1 - 1, f1 - 1 + d)
    e = f1 - 1 + d + idx.lcp(f1, f1 + d)
    slen = e - s0 + 1
    r_len, t_len = s0 - 1, m - e
    text = Text(fwd, [(1, a), v, _ref(m - b + 1, b)])
    g = text.self_lcs(a, a + d, a)
    h = text.self_lcp(a + vlen, a + vlen - d, b)
    r_start, r_size = a - g, g + vlen + h
    base = g - (f1 - s0)
    q_min = base % d
    if q_min > r_size - slen:
        return None
    q_max = base + ((r_size - slen - base) // d) * d
    q = q_min if r_len or not t_len else q_max
    pos = r_start + q - r_len
    if pos < 0 or pos + m > text.length:
        return None
    if text.match_pattern(pos, 1, m) == m:
        return shift + pos
    return None


def triple_offsets(triples, idx: PatternIndex) -> list:
    """Offset of some occurrence of p inside u·v·x for each triple, or None."""
    fwd, rev = View(idx), View(idx, True)
    gens = [_triple_gen(idx, fwd, rev, t) for t in triples]
    results = [None] * len(gens)
    to_send = {t: None for t in range(len(gens))}
    while to_send:
        reqs = {"pre": [], "suf": [], "loc": []}
        for t, val in to_send.items():
            try:
                kind, ref = gens[t].send(val)
            except StopIteration as stop:
                results[t] = stop.value
                continue
            reqs[kind].append((t, ref))
        to_send = {}
        for kind, items in reqs.items():
            if not items:
                continue
            refs = [r for _, r in items]
            if kind == "pre":
                vals = idx.prefix_lens(refs)
            elif kind == "suf":
                vals = idx.suffix_lens(refs)
            else:
                vals = idx.locate(refs)
            for (t, _), val in zip(items, vals):
                to_send[t] = val
    return results


def test_triples(triples, idx: PatternIndex, c: ConcatIndex | None = None):
    """(index, offset) of the first triple containing p, or None."""
    for t, off in enumerate(triple_offsets(triples, idx)):
        if off is not None:
            return t, off
    return None


test_triples.__test__ = False  # not a pytest test


# entry point

def _first_offsets(slp: Slp, lengths) -> list:
    """Start of the leftmost occurrence of each rule in the derivation of val(G)."""
    off = [None] * (slp.n + 1)
    off[1] = 0
    for i in range(1, slp.n + 1):
        r = slp.rules[i]
        if isinstance(r, Binary) and off[i] is not None:
            for child, o in ((r.left, off[i]), (r.right, off[i] + lengths[r.left])):
                if off[child] is None or o < off[child]:
                    off[child] = o
    return off


def match(slp: Slp, p) -> MatchResult:
    p = bytes(p)
    if not p:
        raise ValueError("pattern must be nonempty")
    counters.reset()
    m = len(p)
    if m == 1:
        hits = [i for i in range(1, slp.n + 1)
                if isinstance(slp.rules[i], Terminal) and slp.rules[i].symbol == p[0]]
        if not hits:
            return MatchResult(False, counters=counters.snapshot())
        off = _first_offsets(slp, exact_lengths(slp))
        best = min(hits, key=lambda i: off[i])
        occ = off[best] if off[best] < POSITION_LIMIT else None
        return MatchResult(True, occ, best, 0, None, counters.snapshot())
    analysis = analyze(slp, 4 * m + 4)
    if analysis.length[1] < m:
        return MatchResult(False, counters=counters.snapshot())
    idx = PatternIndex(p)
    c = ConcatIndex(idx)
    info = compute_info(slp, analysis, idx, c)
    triples = reduce_quadruples(quadruples(slp, info), c)
    offs = triple_offsets([t for _, _, t in triples], idx)
    for (rule, shift, t), o in zip(triples, offs):
        if o is None:
            continue
        lengths = exact_lengths(slp)
        r = slp.rules[rule]
        ub, vb = suffix_side(info[r.left])
        start = _first_offsets(slp, lengths)[rule] + lengths[r.left] - ub.length - vb.length
        occ = start + shift + o
        return MatchResult(True, occ if occ < POSITION_LIMIT else None, rule, o, t,
                           counters.snapshot())
    return MatchResult(False, counters=counters.snapshot())
