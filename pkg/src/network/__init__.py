"""Exposome network construction, metrics, tripartite projection and exports."""
from .exposome import (
    DEFAULT_HUB_THRESHOLD,
    EdgeTable,
    ExposomeEdge,
    ExposomeGraph,
    ExposomeNode,
    GraphConfig,
    HubElement,
    aggregate,
    build_graph,
    node_key_for,
    pairwise_edges,
)
from .metrics import NodeMetrics, components, isolated_nodes, node_metrics
from .tripartite import TripartiteGraph, project_tripartite
from .exporters import FORMATS, export_dot, export_graph, export_graphml, export_json, read_json_graph

__all__ = [
    'DEFAULT_HUB_THRESHOLD',
    'EdgeTable',
    'ExposomeEdge',
    'ExposomeGraph',
    'ExposomeNode',
    'GraphConfig',
    'HubElement',
    'aggregate',
    'build_graph',
    'node_key_for',
    'pairwise_edges',
    'NodeMetrics',
    'components',
    'isolated_nodes',
    'node_metrics',
    'TripartiteGraph',
    'project_tripartite',
    'FORMATS',
    'export_dot',
    'export_graph',
    'export_graphml',
    'export_json',
    'read_json_graph',
]
