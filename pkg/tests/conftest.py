"""
Shared pytest configuration: the `slow` marker for desk-scale optimizer runs
and a factory for synthetic run results.
"""
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from codea.core.algorithm import AlgoConfig, RunResult  # noqa: E402
from codea.core.population import Population  # noqa: E402
from codea.core.selection import NormalizationState  # noqa: E402


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run desk-scale optimizer runs")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: desk-scale optimizer run, enabled with --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def make_result():
    """Factory for RunResults built without running the optimizer."""
    def factory(problem="dtlz2", m=3, seed=0, variant="codea", hv=0.5, rows=4):
        rng = np.random.default_rng(seed)
        F = rng.random((rows, m))
        P = Population(decisions=rng.random((rows, m + 9)), objectives=F, capacity=rows)
        return RunResult(
            problem=problem, m=m, final_population=P, seed=seed,
            config=AlgoConfig(G_max=10, seed=seed, variant=variant).to_dict(),
            elapsed=0.1, evaluations=rows * 11, generations=10,
            state=NormalizationState.initial(F), hv_history=[(10, hv)], hv=hv,
        )
    return factory
