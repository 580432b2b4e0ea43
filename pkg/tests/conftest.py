import itertools
import math

import hypothesis
import numpy as np
import pytest

hypothesis.settings.register_profile("default", max_examples=60, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile("default")


def leibniz_det(m):
    """Determinant by the permutation expansion; independent of any factorisation."""
    m = np.asarray(m, dtype=float)
    n = m.shape[0]
    total = 0.0
    for perm in itertools.permutations(range(n)):
        inversions = sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n))
        total += (-1) ** inversions * math.prod(m[i, perm[i]] for i in range(n))
    return total


def minor_square_sum(m):
    """Sum of squared maximal minors over all column subsets."""
    m = np.asarray(m, dtype=float)
    n, N = m.shape
    return sum(leibniz_det(m[:, list(s)]) ** 2 for s in itertools.combinations(range(N), n))


def within_se(estimate, target, se, k=3.0):
    return abs(estimate - target) <= k * se


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
