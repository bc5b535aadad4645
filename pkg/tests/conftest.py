import random
from fractions import Fraction

import pytest

from boundfree.algebra import UTMat2
from boundfree.decider import Instance

I2 = UTMat2.identity()

SMALL_VALUES = [Fraction(v) for v in (-2, -1, 1, 2, 3)] + [Fraction(1, 2), Fraction(-1, 2), Fraction(3, 2)]


def ut(e11, e12, e22):
    return UTMat2(Fraction(e11), Fraction(e12), Fraction(e22))


def example1():
    return Instance(2, ut(3, 0, 1), (I2, ut(2, 1, 3), I2))


def example2():
    # c = 1, b = 0
    return Instance(1, I2, (I2, I2))


def example3(a2, c2, c=2, b=1):
    return Instance(2, ut(c, c * b, c), (I2, ut(a2, 0, c2), I2))


def example4(c=2, b=1):
    n = ut(1, 0, 2)
    return Instance(3, ut(c, c * b, c), (I2, n, n, I2))


def random_utmat(rng, nonsingular=True):
    diag = SMALL_VALUES if nonsingular else SMALL_VALUES + [Fraction(0)]
    return UTMat2(rng.choice(diag), rng.choice(SMALL_VALUES + [Fraction(0)]), rng.choice(diag))


def random_instance(rng, max_t=3):
    t = rng.randint(1, max_t)
    x = random_utmat(rng, nonsingular=rng.random() < 0.85)
    return Instance(t, x, tuple(random_utmat(rng) for _ in range(t + 1)))


@pytest.fixture
def rng():
    return random.Random(20101)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_RESULTS: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(ACCEPTANCE_RESULTS[n])
