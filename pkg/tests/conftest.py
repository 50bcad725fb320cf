import numpy as np
import pytest

from cosserat_shell.material import MaterialParams
from cosserat_shell.surface_geometry import make_patch, point_geometry


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def mat():
    return MaterialParams(mu=1.0, lam=1.3, mu_c=0.7, Lc=0.3, b1=1.1, b2=0.9, b3=1.2, h=0.05)


def pg_at(name, u=0.37, v=0.61, **params):
    """Geometry at the normalized parameter point (u, v) of a named patch."""
    patch = make_patch(name, **params)
    (lo1, hi1), (lo2, hi2) = patch.bounds
    return point_geometry(patch, lo1 + u * (hi1 - lo1), lo2 + v * (hi2 - lo2))


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
