"""Pattern-aware subgraph mining on CSR graphs."""

from ._patminer import (
    CapacityError,
    Graph,
    IoError,
    ParseError,
    Pattern,
    PatminerError,
    ResourceError,
    UsageError,
    brute_force_count,
    clique,
    complete_graph,
    cycle,
    diamond,
    erdos_renyi,
    isomorphic,
    k_clique,
    k_fsm,
    k_motif,
    mine,
    motifs,
    path,
    power_law,
    random_labels,
    star,
    subgraph_count,
    subgraph_list,
    tailed_triangle,
    triangle_count,
    with_labels,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
