from functools import lru_cache

import pytest

from coadjoint_star import setup_split
from coadjoint_star.shapovalov import compute_B


@lru_cache(maxsize=None)
def split_for(series, rank, lam):
    return setup_split(series, rank, lam)


@lru_cache(maxsize=None)
def b_for(series, rank, lam, cutoff):
    return compute_B(split_for(series, rank, lam), cutoff)


@pytest.fixture(scope="session")
def a1():
    return split_for("A", 1, (5,))


@pytest.fixture(scope="session")
def a2():
    return split_for("A", 2, (2, 3))


@pytest.fixture(scope="session")
def b2():
    return split_for("B", 2, (1, 1))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
