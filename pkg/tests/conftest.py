import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from bngeom.bitnet import BitnetModel
from bngeom.dag import parse_topology_name
from bngeom.gaussian import GaussianModel

settings.register_profile(
    "bngeom", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("bngeom")

BITNET_CATALOG = ["K1", "K2", "K3", "L2", "L3", "L4", "E3", "E4", "C2", "C3", "C4", "C5", "D4"]
GAUSSIAN_CATALOG = ["gauss:single", "gauss:chain", "gauss:v", "gauss:l3", "gauss:l4", "gauss:star3", "gauss:diamond"]

# One line per acceptance criterion, printed in the terminal summary.
ACCEPTANCE_LINES = {}


def model_for(name):
    kind, _, dag = parse_topology_name(name)
    return GaussianModel(dag) if kind == "gaussian" else BitnetModel(dag)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
