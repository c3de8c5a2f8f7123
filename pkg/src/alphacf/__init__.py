"""Alpha-current-flow betweenness centrality and companion network measures."""
from .centrality import (
    EdgeScores,
    Measure,
    NodeScores,
    PairSampler,
    alpha_cf_exact,
    alpha_cf_sampled,
    cf_betweenness_baseline,
    closeness,
    degree_centrality,
    pagerank,
    shortest_path_betweenness,
)
from .errors import AlphaCFError, BudgetError, ConvergenceError, ParameterError, ParseError
from .graph import (
    Graph,
    GraphStats,
    RelabelMap,
    bfs_distances,
    compute_stats,
    connected_components,
    generate_barabasi_albert,
    generate_erdos_renyi,
    generate_watts_strogatz,
    load_edge_list,
    read_graph,
)
from .solver import (
    PotentialRow,
    RowCache,
    SolverConfig,
    solve_kirchhoff_direct,
    solve_row,
    voltage_drop,
)

__all__ = [
    "AlphaCFError",
    "BudgetError",
    "ConvergenceError",
    "EdgeScores",
    "Graph",
    "GraphStats",
    "Measure",
    "NodeScores",
    "PairSampler",
    "ParameterError",
    "ParseError",
    "PotentialRow",
    "RelabelMap",
    "RowCache",
    "SolverConfig",
    "alpha_cf_exact",
    "alpha_cf_sampled",
    "bfs_distances",
    "cf_betweenness_baseline",
    "closeness",
    "compute_stats",
    "connected_components",
    "degree_centrality",
    "generate_barabasi_albert",
    "generate_erdos_renyi",
    "generate_watts_strogatz",
    "load_edge_list",
    "pagerank",
    "read_graph",
    "shortest_path_betweenness",
    "solve_kirchhoff_direct",
    "solve_row",
    "voltage_drop",
]

__version__ = "0.1.0"
