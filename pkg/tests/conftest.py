import pytest

from octadet import prng
from octadet.rings import ring_from_spec
from octadet.verify import random_matrix

ALL_RINGS = ("int", "mod:6", "mod:2", "poly:int")
SMALL_RINGS = ("int", "mod:6", "mod:2")

# filled by test_acceptance, printed after the run
ACCEPTANCE_LINES: list[str] = []


def rand_mat(spec_or_ring, rows, cols, rng):
    ring = ring_from_spec(spec_or_ring) if isinstance(spec_or_ring, str) else spec_or_ring
    return random_matrix(ring, rows, cols, rng)


def stream(label: str, seed: int = 20240601) -> prng.SplitMix64:
    return prng.derive(seed, label)


@pytest.fixture
def rng(request):
    return stream(request.node.nodeid)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
