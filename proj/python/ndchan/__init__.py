"""Channel assignment and L(p)-labeling for graphs of bounded neighbourhood diversity."""

from ._core import (
    ClassKind,
    Graph,
    InputError,
    InternalError,
    IterationCapExceeded,
    NdPartition,
    ResourceLimitExceeded,
    WeightedGraph,
    is_uniform,
    labeling_to_ca,
    min_vertex_cover,
    minimize,
    minimize_labeling,
    nd_partition,
    oracle,
    parse_instance,
    solve,
    solve_labeling,
    vc_refined_partition,
    verify,
)

__all__ = [
    "ClassKind",
    "Graph",
    "InputError",
    "InternalError",
    "IterationCapExceeded",
    "NdPartition",
    "ResourceLimitExceeded",
    "WeightedGraph",
    "is_uniform",
    "labeling_to_ca",
    "min_vertex_cover",
    "minimize",
    "minimize_labeling",
    "nd_partition",
    "oracle",
    "parse_instance",
    "solve",
    "solve_labeling",
    "vc_refined_partition",
    "verify",
]
