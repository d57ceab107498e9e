import json
import os
from functools import lru_cache
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=100, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=300, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

FIXTURES = Path(__file__).parent / "fixtures"


@lru_cache(maxsize=None)
def regression():
    return json.loads((FIXTURES / "regression.json").read_text())


@lru_cache(maxsize=None)
def solved(word):
    """(bundle, shape solution, holonomy rep) for a hyperbolic word."""
    from ptorus.bundle import layered_triangulation, trichotomy
    from ptorus.geometry import solve_shapes
    from ptorus.holonomy import holonomy
    from ptorus.mapping_class import parse_word

    tb = layered_triangulation(trichotomy(parse_word(word)).rl)
    sol = solve_shapes(tb)
    return tb, sol, holonomy(sol, tb)


@pytest.fixture(scope="session")
def reg():
    return regression()


# acceptance lines are echoed in the terminal summary so they survive capture
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
