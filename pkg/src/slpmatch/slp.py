"""Straight-line programs in Chomsky normal form.

Text format: the first line is the rule count n, then one line per rule,
``T <byte>`` (a single character or a ``\\xHH`` escape) or ``N <j> <k>``.
Rules are 1-based, rule 1 is the start symbol, and children always have
larger indices than their parent.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union


class SlpError(ValueError):
    """Malformed or invalid SLP text."""

    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class TooLong(Exception):
    """The derived text exceeds the decompression limit."""

    def __init__(self, limit):
        self.limit = limit
        super().__init__(f"derived text longer than {limit} bytes")


@dataclass(frozen=True)
class Terminal:
    symbol: int


@dataclass(frozen=True)
class Binary:
    left: int
    right: int


Rule = Union[Terminal, Binary]


@dataclass(frozen=True)
class Slp:
    """Validated SLP. ``rules[0]`` is None so rule i lives at rules[i]."""

    rules: tuple

    @property
    def n(self) -> int:
        return len(self.rules) - 1

    @property
    def start(self) -> int:
        return 1

    @property
    def alphabet(self) -> frozenset:
        return frozenset(r.symbol for r in self.rules[1:] if isinstance(r, Terminal))

    def __len__(self):
        return self.n


@dataclass(frozen=True)
class SlpAnalysis:
    """Saturated lengths and heights (index 0 unused) and height layers."""

    cap: int
    length: list
    height: list
    layers: list


_HEX = re.compile(rb"\\x([0-9a-fA-F]{2})")


def _parse_symbol(tok: bytes, lineno: int) -> int:
    if len(tok) == 1:
        return tok[0]
    m = _HEX.fullmatch(tok)
    if m:
        return int(m.group(1), 16)
    raise SlpError(f"bad terminal symbol {tok!r}", lineno)


def validate(rules) -> Slp:
    """Check order and reachability of a rule list (rules[0] ignored)."""
    rules = [None] + list(rules[1:])
    n = len(rules) - 1
    if n < 1:
        raise SlpError("empty grammar")
    for i in range(1, n + 1):
        r = rules[i]
        if isinstance(r, Binary):
            for c in (r.left, r.right):
                if not 1 <= c <= n:
                    raise SlpError(f"rule {i} references missing rule {c}", i + 1)
                if c <= i:
                    raise SlpError(f"rule {i} references rule {c}; children must have larger indices",
                                   i + 1)
        elif isinstance(r, Terminal):
            if not 0 <= r.symbol <= 255:
                raise SlpError(f"rule {i} symbol {r.symbol} is not a byte", i + 1)
        else:
            raise SlpError(f"rule {i} is neither terminal nor binary", i + 1)
    reach = [False] * (n + 1)
    reach[1] = True
    for i in range(1, n + 1):
        r = rules[i]
        if reach[i] and isinstance(r, Binary):
            reach[r.left] = reach[r.right] = True
    missing = [i for i in range(1, n + 1) if not reach[i]]
    if missing:
        raise SlpError(f"rule {missing[0]} is unreachable from the start rule", missing[0] + 1)
    return Slp(tuple(rules))


def parse_slp(data) -> Slp:
    if isinstance(data, str):
        data = data.encode("latin-1")
    lines = bytes(data).split(b"\n")
    lines = [ln[:-1] if ln.endswith(b"\r") else ln for ln in lines]
    while lines and lines[-1] == b"":
        lines.pop()
    if not lines:
        raise SlpError("empty grammar")
    head = lines[0].strip()
    if not head.isdigit():
        raise SlpError(f"expected rule count, got {lines[0]!r}", 1)
    n = int(head)
    if n == 0:
        raise SlpError("empty grammar", 1)
    if len(lines) - 1 != n:
        # report the first missing line, or the first surplus one
        raise SlpError(f"expected {n} rules, found {len(lines) - 1}", min(len(lines), n + 1) + 1)
    rules = [None]
    for i in range(1, n + 1):
        lineno = i + 1
        ln = lines[i]
        if ln.startswith(b"T "):
            rules.append(Terminal(_parse_symbol(ln[2:], lineno)))
            continue
        parts = ln.split()
        if len(parts) == 3 and parts[0] == b"N" and parts[1].isdigit() and parts[2].isdigit():
            rules.append(Binary(int(parts[1]), int(parts[2])))
            continue
        raise SlpError(f"syntax error in rule {i}: {ln!r}", lineno)
    return validate(rules)


def _render_symbol(b: int) -> str:
    if 0x21 <= b <= 0x7E and b != 0x5C:
        return chr(b)
    return f"\\x{b:02x}"


def render_slp(slp: Slp) -> str:
    out = [str(slp.n)]
    for r in slp.rules[1:]:
        if isinstance(r, Terminal):
            out.append("T " + _render_symbol(r.symbol))
        else:
            out.append(f"N {r.left} {r.right}")
    return "\n".join(out) + "\n"


def analyze(slp: Slp, cap: int) -> SlpAnalysis:
    if cap < 2:
        raise ValueError("cap must be at least 2")
    n = slp.n
    length = [0] * (n + 1)
    height = [0] * (n + 1)
    for i in range(n, 0, -1):
        r = slp.rules[i]
        if isinstance(r, Terminal):
            length[i] = 1
        else:
            length[i] = min(length[r.left] + length[r.right], cap)
            height[i] = 1 + max(height[r.left], height[r.right])
    layers = [[] for _ in range(max(height[1:]) + 1)]
    for i in range(1, n + 1):
        layers[height[i]].append(i)
    return SlpAnalysis(cap, length, height, layers)


def exact_lengths(slp: Slp) -> list[int]:
    """Exact |val(A)| for every rule, as Python ints (index 0 unused)."""
    n = slp.n
    length = [0] * (n + 1)
    for i in range(n, 0, -1):
        r = slp.rules[i]
        length[i] = 1 if isinstance(r, Terminal) else length[r.left] + length[r.right]
    return length


def decompress_guarded(slp: Slp, limit: int, rule: int = 1) -> bytes:
    """val(rule) if it is at most ``limit`` bytes, else raise TooLong."""
    if exact_lengths(slp)[rule] > limit:
        raise TooLong(limit)
    out = bytearray()
    stack = [rule]
    rules = slp.rules
    while stack:
        r = rules[stack.pop()]
        if isinstance(r, Terminal):
            out.append(r.symbol)
        else:
            stack.append(r.right)
            stack.append(r.left)
    return bytes(out)
