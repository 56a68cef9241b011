"""Continuous subgraph matching over dynamic labeled graphs."""

from .dag import QueryDag, build_dag, dag_height
from .dcs import (
    Dcs,
    UpdateStats,
    build_dcs,
    dcs_changed_edges,
    deletion_update,
    insertion_update,
)
from .graph import (
    NO_LABEL,
    Graph,
    LabelTable,
    ParseError,
    StreamError,
    UpdateOp,
    apply_update,
    parse_graph,
    parse_query,
    parse_update_stream,
)
from .harness import Engine, RunConfig, RunReport, run_continuous_matching
from .matching import (
    MatcherConfig,
    MatchReport,
    PartialEmbedding,
    compute_extendable_candidates,
    find_matches,
)
from .oracle import StreamOracle, delta_matches, enumerate_embeddings
from .workload import Workload, WorkloadParams, generate_workload

__version__ = "0.1.0"

__all__ = [
    "Dcs",
    "Engine",
    "Graph",
    "LabelTable",
    "MatchReport",
    "MatcherConfig",
    "NO_LABEL",
    "ParseError",
    "PartialEmbedding",
    "QueryDag",
    "RunConfig",
    "RunReport",
    "StreamError",
    "StreamOracle",
    "UpdateOp",
    "UpdateStats",
    "Workload",
    "WorkloadParams",
    "apply_update",
    "build_dag",
    "build_dcs",
    "compute_extendable_candidates",
    "dag_height",
    "dcs_changed_edges",
    "delta_matches",
    "deletion_update",
    "enumerate_embeddings",
    "find_matches",
    "generate_workload",
    "insertion_update",
    "parse_graph",
    "parse_query",
    "parse_update_stream",
    "run_continuous_matching",
]
