"""Fisher-information geometry of binary and Gaussian Bayesian networks."""

from bngeom.bitnet import BitnetModel
from bngeom.dag import Dag, TopologyId, build_catalog_dag, skeleton_summary
from bngeom.gaussian import GaussianModel
from bngeom.kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BitnetModel",
    "Dag",
    "GaussianModel",
    "TopologyId",
    "build_catalog_dag",
    "skeleton_summary",
]
