"""Rainbow 1-factors in properly edge-colored complete uniform hypergraphs."""

from .core import (
    CapacityError,
    Edge,
    Matching,
    OneFactor,
    Params,
    ProperColoring,
    ProperVerdict,
    TheoremContradiction,
    UnsupportedError,
    ValidationError,
    edge_table,
    is_rainbow,
    rank_edge,
    unrank_edge,
    verify_one_factor,
    verify_proper,
)
from .gen import (
    GenSpec,
    gen_backtrack_factorization,
    gen_fixture,
    gen_random_greedy,
    gen_round_robin,
)
from .solver import (
    AugmentResult,
    K3rCertificate,
    OracleResult,
    Solution,
    augment_once,
    exhaustive_search,
    greedy_rainbow_matching,
    oracle_enumerate,
    solve,
    solve_graph,
    solve_k3r,
)
from .trace import AugmentationTrace, analyze_pair, check_counting

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "Edge",
    "Matching",
    "OneFactor",
    "Params",
    "ProperColoring",
    "ProperVerdict",
    "TheoremContradiction",
    "UnsupportedError",
    "ValidationError",
    "edge_table",
    "is_rainbow",
    "rank_edge",
    "unrank_edge",
    "verify_one_factor",
    "verify_proper",
    "GenSpec",
    "gen_backtrack_factorization",
    "gen_fixture",
    "gen_random_greedy",
    "gen_round_robin",
    "AugmentResult",
    "K3rCertificate",
    "OracleResult",
    "Solution",
    "augment_once",
    "exhaustive_search",
    "greedy_rainbow_matching",
    "oracle_enumerate",
    "solve",
    "solve_graph",
    "solve_k3r",
    "AugmentationTrace",
    "analyze_pair",
    "check_counting",
]
