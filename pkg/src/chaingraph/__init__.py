"""Ethereum transaction networks: block ingestion, weighted interaction
graphs, and the complex-network metric suite (degrees, components,
clustering, distances, random baselines, small-world sigma, miner stats).
"""

__version__ = "0.1.0"

from chaingraph.ingest import (
    BlockCache,
    BlockRecord,
    JsonRpcEndpoint,
    SnapshotSpec,
    TxRecord,
    fetch_block,
    fetch_range,
    parse_block_json,
)
from chaingraph.graph import (
    EdgeData,
    SimpleGraph,
    TransactionGraph,
    build_graph,
    export_pajek,
    import_pajek,
    node_for_recipient,
    project_simple,
)
from chaingraph.metrics import (
    ComponentSet,
    DegreeHistogram,
    DistanceSummary,
    ExactnessPolicy,
    MetricsReport,
    average_local_clustering,
    connected_components,
    degree_distribution,
    distance_summary,
    general_metrics,
    largest_component,
    transitivity,
)
from chaingraph.baseline import (
    UNDEFINED,
    GnmParams,
    SmallWorldReport,
    gnm_random_graph,
    small_world_report,
    small_world_sigma,
)
from chaingraph.miners import MinerHistogram, miner_distribution

__all__ = [
    "BlockCache",
    "BlockRecord",
    "ComponentSet",
    "DegreeHistogram",
    "DistanceSummary",
    "EdgeData",
    "ExactnessPolicy",
    "GnmParams",
    "JsonRpcEndpoint",
    "MetricsReport",
    "MinerHistogram",
    "SimpleGraph",
    "SmallWorldReport",
    "SnapshotSpec",
    "TransactionGraph",
    "TxRecord",
    "UNDEFINED",
    "average_local_clustering",
    "build_graph",
    "connected_components",
    "degree_distribution",
    "distance_summary",
    "export_pajek",
    "fetch_block",
    "fetch_range",
    "general_metrics",
    "gnm_random_graph",
    "import_pajek",
    "largest_component",
    "miner_distribution",
    "node_for_recipient",
    "parse_block_json",
    "project_simple",
    "small_world_report",
    "small_world_sigma",
    "transitivity",
]
