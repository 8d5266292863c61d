"""Minimum input/output placement and sparsest feedback patterns for structured linear systems."""
from .digraph import (
    SccDecomposition,
    StructuralDigraph,
    StructureError,
    SystemStructure,
    reachable_set,
    scc_decompose,
)
from .bipartite import (
    BipartiteGraph,
    Matching,
    MatchingDecomposition,
    MatchingError,
    common_matching,
    matching_decomposition,
    maximum_matching,
    min_cost_max_matching,
    state_bipartite,
)
from .selection import (
    AssignabilityReport,
    DedicatedConfig,
    DesignError,
    DesignSolution,
    InformationPattern,
    assignability,
    build_I_M,
    enumerate_input_designs,
    enumerate_mix_pairings,
    io_reachability_bipartite,
    minimal_dedicated_input_config,
    minimal_dedicated_output_config,
    mix_pairing,
    solve_p1,
    solve_p1d,
    solve_p2,
)
from .verify import (
    VerificationReport,
    has_no_sfm,
    is_feasible_dedicated_config,
    is_structurally_controllable,
    is_structurally_observable,
    numeric_rank_oracle,
)

__version__ = "0.1.0"
