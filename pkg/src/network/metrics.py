"""
Structural metrics of an exposome: components, isolated nodes, per-node
multi-exposure and neighbour diversity.
"""

from dataclasses import dataclass
from typing import Dict, List, Tuple

import networkx as nx

try:
    from .exposome import ExposomeGraph, NodeKey
except ImportError:
    import sys
    import os
    sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    from network.exposome import ExposomeGraph, NodeKey


@dataclass(frozen=True)
class NodeMetrics:
    """
    Per-node structure.

    Attributes:
        degree: Number of incident edges
        multi_exposure: Distinct exposure elements over the graph's dimensions
        diversity: Number of distinct neighbouring OHP nodes
    """

    degree: int
    multi_exposure: int
    diversity: int

    def to_dict(self) -> Dict[str, int]:
        return {"degree": self.degree, "multi_exposure": self.multi_exposure, "diversity": self.diversity}


def components(graph: ExposomeGraph) -> List[Tuple[NodeKey, ...]]:
    """
    Connected components of the exposome.

    Args:
        graph: ExposomeGraph

    Returns:
        Components as sorted key tuples, ordered by their smallest key
    """
    view = graph.to_networkx()
    parts = [tuple(sorted(part)) for part in nx.connected_components(view)]
    return sorted(parts)


def isolated_nodes(graph: ExposomeGraph) -> Tuple[NodeKey, ...]:
    """Nodes sharing no exposure element with any other node."""
    return tuple(key for key in graph.nodes if graph.degree(key) == 0)


def node_metrics(graph: ExposomeGraph) -> Dict[NodeKey, NodeMetrics]:
    """
    Degree, multi-exposure and diversity for every node.

    Args:
        graph: ExposomeGraph

    Returns:
        Node key -> NodeMetrics, in key order
    """
    dims = graph.config.ordered_dims
    metrics = {}
    for key, node in graph.nodes.items():
        neighbours = graph.neighbours(key)
        metrics[key] = NodeMetrics(
            degree=len(neighbours),
            multi_exposure=node.element_count(dims),
            diversity=len(set(neighbours)),
        )
    return metrics
