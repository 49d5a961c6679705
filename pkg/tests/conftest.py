import random

import pytest

from slpmatch.slp import parse_slp

FIB7 = "7\nN 2 3\nN 3 4\nN 4 5\nN 5 6\nN 6 7\nT a\nT b"


def fib_word(k):
    """Iterated concatenation f_k = f_{k-1} f_{k-2} with f_1 = 'b', f_2 = 'a'."""
    a, b = "b", "a"
    for _ in range(k - 2):
        a, b = b, b + a
    return b


def random_bytes(rng, n, alphabet=b"ab"):
    return bytes(rng.choice(alphabet) for _ in range(n))


def periodic_bytes(rng, n, alphabet=b"ab"):
    """Mostly periodic strings with an occasional defect; stresses period logic."""
    base = random_bytes(rng, rng.randint(1, 5), alphabet)
    s = bytearray((base * (n // len(base) + 1))[:n])
    if n and rng.random() < 0.5:
        s[rng.randrange(n)] = rng.choice(alphabet)
    return bytes(s)


@pytest.fixture
def fib7():
    return parse_slp(FIB7)


@pytest.fixture
def rng():
    return random.Random(12345)


# one summary line per acceptance criterion, filled in by test_acceptance
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for num in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[num])
