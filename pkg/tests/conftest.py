from fractions import Fraction

import pytest

from indhard import Graph, gen_complete, gen_cycle, gen_random_regular


def ball_to_fraction_bounds(ball):
    """Exact rational endpoints of an Arb ball."""
    def exact(x):
        if x.is_zero():
            return Fraction(0)
        m, e = x.man_exp()
        return Fraction(int(m)) * Fraction(2) ** int(e)

    mid, rad = exact(ball.mid()), exact(ball.rad())
    return mid - rad, mid + rad


def ball_contains_fraction(ball, q: Fraction) -> bool:
    lo, hi = ball_to_fraction_bounds(ball)
    return lo <= q <= hi


@pytest.fixture
def k2():
    return gen_complete(2)


@pytest.fixture
def c3():
    return gen_cycle(3)


@pytest.fixture
def c4():
    return gen_cycle(4)


@pytest.fixture
def k4():
    return gen_complete(4)


@pytest.fixture
def cubic10():
    return gen_random_regular(10, 3, 42)


@pytest.fixture
def path3():
    return Graph(3, ((0, 1), (1, 2)))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
