"""Test-instance SLP generators, deterministic per seed."""

from __future__ import annotations

import random

from .slp import Binary, Terminal, exact_lengths, validate

SHAPES = ("random-binary", "fibonacci", "power", "skewed-chain")


def _terminals(alphabet: bytes, count: int):
    return [Terminal(b) for b in alphabet[:count]]


def fibonacci(n: int, alphabet: bytes = b"ab"):
    """rule i -> (i+1)(i+2); the last two rules are the first two letters."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return validate([None, Terminal(alphabet[0])])
    if n == 2:
        return validate([None, Binary(2, 2), Terminal(alphabet[0])])
    rules = [None] + [Binary(i + 1, i + 2) for i in range(1, n - 1)]
    rules += [Terminal(alphabet[0]), Terminal(alphabet[1 % len(alphabet)])]
    return validate(rules)


def power(n: int, alphabet: bytes = b"a"):
    """a^(2^(n-1)) by n-1 doubling rules."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return validate([None] + [Binary(i + 1, i + 1) for i in range(1, n)] + [Terminal(alphabet[0])])


def skewed_chain(n: int, alphabet: bytes, rng: random.Random):
    """A chain of depth about n: each rule appends or prepends one letter."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return validate([None, Terminal(rng.choice(alphabet))])
    sigma = max(1, min(len(alphabet), (n + 1) // 2))
    c = n - sigma
    first_term = c + 1
    slots = list(range(sigma))
    rng.shuffle(slots)
    slots += [rng.randrange(sigma) for _ in range(c + 1 - sigma)]
    rules = [None]
    for i in range(1, c + 1):
        t = first_term + slots[i - 1]
        other = i + 1 if i < c else first_term + slots[c]
        rules.append(Binary(other, t) if rng.random() < 0.5 else Binary(t, other))
    rules += _terminals(alphabet, sigma)
    return validate(rules)


def random_binary(n: int, alphabet: bytes, rng: random.Random, max_len: int | None = None):
    """Random DAG built bottom-up; every rule ends up referenced.

    ``max_len`` steers child choices towards short rules so the text stays
    below that length where possible (not a hard guarantee).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return validate([None, Terminal(rng.choice(alphabet))])
    sigma = max(1, min(len(alphabet), (n + 1) // 2))
    c = n - sigma
    rules = [None] * (n + 1)
    length = [0] * (n + 1)
    for t, term in enumerate(_terminals(alphabet, sigma)):
        rules[c + 1 + t] = term
        length[c + 1 + t] = 1
    unref = list(range(c + 1, n + 1))
    rng.shuffle(unref)
    for i in range(c, 0, -1):
        kids = [unref.pop()]
        if len(unref) + 1 > i:
            kids.append(unref.pop())
        else:
            pool = range(i + 1, n + 1)
            if max_len is not None:
                short = [j for j in pool if length[j] + length[kids[0]] <= max_len]
                pool = short or [min(pool, key=lambda j: length[j])]
            kids.append(rng.choice(list(pool)))
        if rng.random() < 0.5:
            kids.reverse()
        rules[i] = Binary(*kids)
        length[i] = length[kids[0]] + length[kids[1]]
        unref.append(i)
    return validate(rules)


def generate(shape: str, n: int, alphabet: bytes = b"ab", seed: int = 0,
             max_len: int | None = None):
    alphabet = bytes(alphabet)
    if not alphabet:
        raise ValueError("alphabet must be nonempty")
    rng = random.Random(seed)
    if shape == "fibonacci":
        return fibonacci(n, alphabet)
    if shape == "power":
        return power(n, alphabet)
    if shape == "skewed-chain":
        return skewed_chain(n, alphabet, rng)
    if shape == "random-binary":
        return random_binary(n, alphabet, rng, max_len)
    raise ValueError(f"unknown shape {shape!r}; expected one of {', '.join(SHAPES)}")


def text_length(slp) -> int:
    return exact_lengths(slp)[1]
