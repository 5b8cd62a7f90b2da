"""Shared fixtures: seeded network corpora, oracle clouds, acceptance summary."""

import random
import time
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from cellgdof import IBC, IMAC, build_constraints, sample_region
from netgen import ctin_network

settings.register_profile(
    "suite",
    derandomize=True,
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

CORPUS_SEED = 2024
CORPUS_SIZE = 50
CORPUS_STEP = Fraction(1, 20)


def corpus_floor(net):
    """Deepest exponent needed for support matching at the corpus step.

    Any coordinate of an optimal allocation can be clipped to
    -(max strength + step) at a cost of at most one step per user,
    which the 4 x step tolerance absorbs; the full default floor would
    push six-user grids past the evaluation guard.
    """
    return -(net.max_strength + CORPUS_STEP)


class TimedClouds:
    """Per-network point clouds plus the wall time spent building them."""

    def __init__(self, clouds, build_seconds):
        self.clouds = clouds
        self.build_seconds = build_seconds

    def __getitem__(self, index):
        return self.clouds[index]


@pytest.fixture(scope="session")
def ctin_corpus():
    rng = random.Random(CORPUS_SEED)
    return [ctin_network(rng) for _ in range(CORPUS_SIZE)]


@pytest.fixture(scope="session")
def corpus_constraints(ctin_corpus):
    return [build_constraints(net) for net in ctin_corpus]


def _build_clouds(nets, mode):
    start = time.perf_counter()
    clouds = [sample_region(net, mode, CORPUS_STEP, corpus_floor(net)) for net in nets]
    return TimedClouds(clouds, time.perf_counter() - start)


@pytest.fixture(scope="session")
def imac_clouds(ctin_corpus):
    return _build_clouds(ctin_corpus, IMAC)


@pytest.fixture(scope="session")
def ibc_clouds(ctin_corpus):
    return _build_clouds(ctin_corpus, IBC)


_ACCEPTANCE_LINES = {}


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion, then assert it."""

    def record(number, passed, detail):
        verdict = "PASS" if passed else "FAIL"
        _ACCEPTANCE_LINES[number] = f"criterion {number:2d}: {verdict}  ({detail})"
        assert passed, f"acceptance criterion {number}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(_ACCEPTANCE_LINES[number])
