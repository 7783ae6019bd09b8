import math
import sys

import numpy as np
import pytest

from irdpi import Alphabet, JointDistribution, build_joint
from irdpi import identical_bsc_scenario, site_exclusive_scenario, two_site_bsc_scenario


def h2(p):
    """Closed-form binary entropy, independent of the engine."""
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def random_joint(rng, sizes, names=None, concentration=1.0):
    names = names or [f"a{i}" for i in range(len(sizes))]
    mass = rng.dirichlet(np.full(int(np.prod(sizes)), concentration)).reshape(sizes)
    return JointDistribution([Alphabet(n, k) for n, k in zip(names, sizes)], mass)


@pytest.fixture
def bsc_joint():
    return build_joint(two_site_bsc_scenario(0.1, 0.4))


@pytest.fixture
def same_bsc_joint():
    return build_joint(identical_bsc_scenario(0.1))


@pytest.fixture
def exclusive_joint():
    return build_joint(site_exclusive_scenario())


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
