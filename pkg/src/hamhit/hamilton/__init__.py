"""Hamilton cycle engines, certificates, linear forests and packing."""

from .core import (
    CycleCertificate,
    ForcedEdgeSet,
    HamiltonResult,
    Status,
    quick_refutation,
    reduce_instance,
    verify_cycle,
)
from .engine import Engine
from .exact import exact_hamilton
from .forest import LinearForest, reduce_endpoints, spanning_linear_forest
from .packing import IndeterminateError, PackResult, all_hamilton_cycles, exhaustive_packing, pairwise_disjoint
from .posa import posa_hamilton



def pack_disjoint_cycles(g, k, engine: Engine | None = None) -> PackResult:
    """Greedy peel of ``k`` edge-disjoint Hamilton cycles under ``engine``."""
    return (engine or Engine()).pack(g, k)
