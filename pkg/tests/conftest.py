import os
from pathlib import Path

import numpy as np
import pytest

from localspec.generators import random_connected_graph

ROOT = Path(__file__).resolve().parent.parent
ACCEPTANCE_LINES: list[str] = []


def random_graphs(seed, count, n_lo, n_hi, p=0.35, weighted=None):
    """``count`` random connected graphs; weighted alternates when ``weighted`` is None."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n = int(rng.integers(n_lo, n_hi + 1))
        w = (i % 2 == 1) if weighted is None else weighted
        out.append(random_connected_graph(n, p, rng, weighted=w))
    return out


def newman_path():
    env = os.environ.get("LOCALSPEC_NEWMAN_PATH")
    if env:
        return Path(env)
    for name in ("netscience.net", "netscience.paj", "netscience.edges"):
        p = ROOT / "data" / name
        if p.exists():
            return p
    return None


@pytest.fixture(scope="session")
def newman():
    """The coauthorship network (largest component, unweighted). Fails when absent."""
    from localspec.io import load_graph

    path = newman_path()
    if path is None or not path.exists():
        pytest.fail(
            "coauthorship network not found: put netscience.net in data/ or set LOCALSPEC_NEWMAN_PATH",
            pytrace=False,
        )
    return load_graph(path, largest_component=True, unweighted=True)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
