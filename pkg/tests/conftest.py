import sys

import numpy as np
import pytest

from abgc.graph import from_edges


def random_graph(rng, n_u, n_v, density=0.1, attr_dim=5, integer_weights=False, cover_u=False):
    """Random bipartite graph; ``cover_u`` gives every U node at least one edge."""
    mask = rng.random((n_u, n_v)) < density
    if cover_u:
        mask[np.arange(n_u), rng.integers(0, n_v, n_u)] = True
    rows, cols = np.nonzero(mask)
    if integer_weights:
        w = rng.integers(1, 4, rows.size).astype(float)
    else:
        w = rng.uniform(0.1, 2.0, rows.size)
    x = rng.standard_normal((n_u, attr_dim))
    return from_edges(n_u, n_v, rows, cols, w, attrs_u=x)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "REPORT_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
