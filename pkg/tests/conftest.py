import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from partglob.actions import PartialAction
from partglob.generators import example_action, unital01_action
from partglob.structures import cyclic_group

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def z2():
    return cyclic_group(2)


@pytest.fixture
def example():
    """The 4-element semigroup with x swapping u and v and leaving t out."""
    return example_action()


@pytest.fixture
def unital01():
    return unital01_action()


@pytest.fixture
def z4_shift():
    """Z_4 acting on itself by addition."""
    g = cyclic_group(4)
    return PartialAction(g, [[(x + a) % 4 for a in range(4)] for x in range(4)], ["0", "1", "2", "3"])


def rng_from(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


@pytest.fixture(scope="session")
def semigroup_corpus():
    """The stratified ideal-domain corpus (about 240 instances, both verdicts)."""
    from partglob.generators import semigroup_corpus as build

    return build(np.random.default_rng(20240501))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
