import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from perfectforms.forms import QuadForm, is_positive_definite  # noqa: E402


def random_unimodular(rng, d, steps=None):
    """Product of random elementary moves, signs and swaps."""
    u = [[int(i == j) for j in range(d)] for i in range(d)]
    for _ in range(steps if steps is not None else 3 * d):
        kind = rng.random()
        i, j = rng.sample(range(d), 2) if d > 1 else (0, 0)
        if kind < 0.7 and d > 1:
            c = rng.choice([-2, -1, 1, 2])
            for r in range(d):
                u[r][j] += c * u[r][i]
        elif kind < 0.85:
            for r in range(d):
                u[r][i] = -u[r][i]
        elif d > 1:
            for r in range(d):
                u[r][i], u[r][j] = u[r][j], u[r][i]
    return tuple(tuple(r) for r in u)


def random_pd_form(rng, d, entry=3):
    """``B^t B + small diagonal`` for a random small integer ``B``."""
    while True:
        b = [[rng.randint(-entry, entry) for _ in range(d)] for _ in range(d)]
        m = [[sum(b[k][i] * b[k][j] for k in range(d)) + (rng.randint(1, 2) if i == j else 0)
              for j in range(d)] for i in range(d)]
        q = QuadForm.from_int(m)
        if is_positive_definite(q):
            return q


@pytest.fixture
def rng():
    return random.Random(20240611)


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for ok, name, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}".rstrip())
