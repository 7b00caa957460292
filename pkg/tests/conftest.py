import json
import os
from functools import lru_cache

import pytest

from polytope_rigidity.constructions import (enumerate_almost_pogorelov, enumerate_flag,
                                             enumerate_simple, named)

DATA = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")

ACCEPTANCE_LINES = []


@lru_cache(maxsize=None)
def frozen():
    with open(os.path.join(DATA, "frozen.json")) as fh:
        return json.load(fh)


@lru_cache(maxsize=None)
def simple_upto(m_max):
    return tuple(enumerate_simple(m_max))


@lru_cache(maxsize=None)
def flag_upto(m_max):
    return tuple(enumerate_flag(m_max))


@lru_cache(maxsize=None)
def apog_upto(m_max):
    return tuple(enumerate_almost_pogorelov(m_max))


@lru_cache(maxsize=None)
def catalog(name):
    return named(name)


@pytest.fixture
def as3():
    return catalog("as3")


@pytest.fixture
def pe3():
    return catalog("pe3")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
