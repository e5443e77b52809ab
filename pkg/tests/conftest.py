import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from manifold_tv.manifolds import S1, S2, SO3, Euclidean, LCh, Pos3  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


ALL_MANIFOLDS = [S1(), S2(), SO3(), Pos3(), Euclidean(3), LCh()]


@pytest.fixture(params=ALL_MANIFOLDS, ids=lambda m: m.tag)
def manifold(request):
    return request.param


def near_pairs(M, rng, n, radius=1.0):
    """Random pairs at distance at most ``radius`` (inside injectivity radius)."""
    a = M.random_point(rng, n)
    c = rng.standard_normal((n, M.dim))
    c *= (radius * rng.uniform(0, 1, n) / np.linalg.norm(c, axis=1))[:, None]
    b = M.exp(a, M.tangent_from_coords(a, c))
    return a, b


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
