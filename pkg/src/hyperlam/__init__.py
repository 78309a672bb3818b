"""p-spectral radius of uniform hypergraphs, extremal partite and chromatic
families, explicit bounds and verification sweeps."""

from importlib import resources

from .bounds import BoundReport
from .hypergraph import (Hypergraph, Kind, PartitionSpec, SearchBudgetExceeded, balanced_chromatic,
                         complete_chromatic, complete_graph, complete_multipartite,
                         is_k_chromatic, is_k_partite, turan_hypergraph)
from .kernels import BACKEND
from .polyform import ClassWeights, evaluate, gradient
from .pspectral import (SolverConfig, SpectralResult, brute_force_oracle, kkt_residual, lagrangian,
                        p_spectral_radius, solve, symmetric_solve)
from .verify import SweepReport

__version__ = "0.1.0"


def schema_path(name: str):
    """Path of a shipped JSON schema, e.g. ``schema_path("sweep_report")``."""
    return resources.files(__name__) / "schemas" / f"{name}.json"
