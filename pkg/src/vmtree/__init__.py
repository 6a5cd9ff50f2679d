"""Minimum-congestion placement of VM request graphs on tree networks."""

from .cluster_solver import ClusterRequest, ClusterSolution, cluster_solve, expand_counts
from .dp_solver import (CongestionTable, Embedding, EmbeddingError, PartitionTable, Solution,
                        backtrack, evaluate, solve)
from .hardness import (HardInstance, HardnessError, ThreePartitionInstance,
                       find_three_partition, gen_unweighted_tree, gen_weighted_path)
from .oracle import OracleLimitError, linear_scan
from .ratios import INFEASIBLE, UNBOUNDED, format_amount, parse_amount
from .request import (SUBSET_LIMIT, FlowTable, RequestError, RequestGraph, SubsetLimitError,
                      build_flow_table, clique_request, load_request, parse_request,
                      path_request)
from .topogen import apply_residuals, gen_three_tier
from .topology import (BinaryTopology, NetworkNode, Topology, TopologyError, load_topology,
                       make_topology, path_edges, to_binary, validate_topology)

__all__ = [
    "BinaryTopology", "ClusterRequest", "ClusterSolution", "CongestionTable", "Embedding",
    "EmbeddingError", "FlowTable", "HardInstance", "HardnessError", "INFEASIBLE",
    "NetworkNode", "OracleLimitError", "PartitionTable", "RequestError", "RequestGraph",
    "SUBSET_LIMIT", "Solution", "SubsetLimitError", "ThreePartitionInstance", "Topology",
    "TopologyError", "UNBOUNDED", "apply_residuals", "backtrack", "build_flow_table",
    "clique_request", "cluster_solve", "evaluate", "expand_counts", "find_three_partition",
    "format_amount", "gen_three_tier", "gen_unweighted_tree", "gen_weighted_path",
    "linear_scan", "load_request", "load_topology", "make_topology", "parse_amount",
    "parse_request", "path_edges", "path_request", "solve", "to_binary", "validate_topology",
]
