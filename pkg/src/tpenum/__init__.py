"""Projected CSP enumeration with polynomial delay over decomposition views."""
from .consistency import GacTrace, gac, is_pairwise_consistent
from .decomposition import MethodSpec, ViewPair, build_views, tp_covered_through_dm, views_hypergraph
from .enumeration import (
    CERTIFIED,
    DM_FAILURE,
    PROJECTED,
    EnumerationStats,
    SolutionEvent,
    SolutionStream,
    enumerate_all,
    enumerate_certified,
)
from .hypergraphs import (
    Hypergraph,
    JoinTree,
    build_join_tree,
    find_tree_projection,
    gyo_reduce,
    hg_leq,
    hypergraph_of,
    is_acyclic,
    is_tp_covered,
)
from .instance_io import InstanceFormatError, parse_instance, serialize_instance
from .structures import (
    PartialMap,
    RelationalStructure,
    StructureError,
    compute_cores,
    disjoint_union,
    domain_restricted_version,
    find_homomorphism,
    is_homomorphism,
    pin_outputs,
    singleton_structure,
    validate_instance,
)
from .testkit import OracleBudgetExceeded, gen_3col, gen_grid, measure_delay, oracle_enumerate

__version__ = "0.1.0"

__all__ = [
    "GacTrace",
    "gac",
    "is_pairwise_consistent",
    "MethodSpec",
    "ViewPair",
    "build_views",
    "tp_covered_through_dm",
    "views_hypergraph",
    "CERTIFIED",
    "DM_FAILURE",
    "PROJECTED",
    "EnumerationStats",
    "SolutionEvent",
    "SolutionStream",
    "enumerate_all",
    "enumerate_certified",
    "Hypergraph",
    "JoinTree",
    "build_join_tree",
    "find_tree_projection",
    "gyo_reduce",
    "hg_leq",
    "hypergraph_of",
    "is_acyclic",
    "is_tp_covered",
    "InstanceFormatError",
    "parse_instance",
    "serialize_instance",
    "PartialMap",
    "RelationalStructure",
    "StructureError",
    "compute_cores",
    "disjoint_union",
    "domain_restricted_version",
    "find_homomorphism",
    "is_homomorphism",
    "pin_outputs",
    "singleton_structure",
    "validate_instance",
    "OracleBudgetExceeded",
    "gen_3col",
    "gen_grid",
    "measure_delay",
    "oracle_enumerate",
]
