"""
Deterministic GraphML, DOT and JSON documents for exposome and tripartite graphs.

Vertices and edges are always written in lexicographic key order, so equal
graphs give byte-identical documents.
"""

import json
from typing import Any, Dict, Union

import networkx as nx
import pydot

try:
    from ..exceptions import ExposomeError, GraphFormatError
    from .exposome import DIMENSION_ORDER, ExposomeEdge, ExposomeGraph, ExposomeNode, GraphConfig, HubElement
    from .tripartite import SUPPORT_NOTE, TripartiteGraph
    from ..ohp.records import ExposureDimension, OhpIdentity
except ImportError:
    import sys
    import os
    sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    from exceptions import ExposomeError, GraphFormatError
    from network.exposome import DIMENSION_ORDER, ExposomeEdge, ExposomeGraph, ExposomeNode, GraphConfig, HubElement
    from network.tripartite import SUPPORT_NOTE, TripartiteGraph
    from ohp.records import ExposureDimension, OhpIdentity

AnyGraph = Union[ExposomeGraph, TripartiteGraph]
FORMATS = ("graphml", "dot", "json")
DOT_SHAPES = {"pathology": "circle", "agent": "box", "occupation": "triangle"}


def export_graphml(graph: AnyGraph) -> str:
    """
    GraphML document of a graph.

    Args:
        graph: ExposomeGraph or TripartiteGraph

    Returns:
        GraphML text
    """
    return "\n".join(nx.generate_graphml(graph.to_networkx(), prettyprint=True)) + "\n"


def export_dot(graph: AnyGraph) -> str:
    """
    DOT document of a graph; vertices get positional ids ``n0, n1, ...`` and
    carry their key as label.

    Args:
        graph: ExposomeGraph or TripartiteGraph

    Returns:
        DOT text
    """
    view = graph.to_networkx()
    kind = view.graph.get("kind", "graph")
    dot = pydot.Dot(kind, graph_type="graph")
    for name, value in sorted(view.graph.items()):
        if name != "kind":
            dot.set(name, str(value))

    ids = {}
    for position, (key, attributes) in enumerate(view.nodes(data=True)):
        ids[key] = f"n{position}"
        node_attributes = {name: str(value) for name, value in attributes.items()}
        if "class" in attributes:
            node_attributes["shape"] = DOT_SHAPES[attributes["class"]]
        dot.add_node(pydot.Node(ids[key], **node_attributes))
    for source, target, attributes in view.edges(data=True):
        dot.add_edge(pydot.Edge(ids[source], ids[target],
                                **{name: str(value) for name, value in attributes.items()}))
    return dot.to_string()


def _exposome_document(graph: ExposomeGraph) -> Dict[str, Any]:
    nodes = []
    for key, node in graph.nodes.items():
        entry = {
            "key": key,
            "pathology": node.pathology,
            "weight": node.weight,
            "level": graph.config.level.value,
            "exposure_elements": {dim.value: sorted(node.elements(dim)) for dim in DIMENSION_ORDER},
        }
        if node.identity is not None:
            entry["identity"] = {
                "pathology": node.identity.pathology,
                "agents": list(node.identity.agent_set),
                "occupation": node.identity.occupation,
                "sector": node.identity.sector,
            }
        nodes.append(entry)
    edges = [
        {
            "source": edge.source,
            "target": edge.target,
            "shared": {dim.value: sorted(edge.shared[dim]) for dim in DIMENSION_ORDER if dim in edge.shared},
        }
        for edge in graph.edges.values()
    ]
    return {
        "kind": "exposome",
        "config": graph.config.to_dict(),
        "nodes": nodes,
        "edges": edges,
        "hub_elements": [hub.to_dict() for hub in graph.hub_elements],
    }


def _tripartite_document(graph: TripartiteGraph) -> Dict[str, Any]:
    vertices = [{"id": f"{cls}:{token}", "class": cls, "label": token} for cls, token in graph.vertices()]
    edges = [
        {"source": f"agent:{agent}", "target": f"occupation:{occupation}", "kind": "agent-occupation",
         "support": support}
        for (agent, occupation), support in graph.agent_occupation.items()
    ]
    edges.extend(
        {"source": f"agent:{agent}", "target": f"pathology:{pathology}", "kind": "agent-pathology",
         "support": support}
        for (agent, pathology), support in graph.agent_pathology.items()
    )
    return {"kind": "tripartite", "support_note": SUPPORT_NOTE, "vertices": vertices, "edges": edges}


def export_json(graph: AnyGraph) -> str:
    """
    JSON document of a graph, readable back with ``read_json_graph``.

    Args:
        graph: ExposomeGraph or TripartiteGraph

    Returns:
        JSON text
    """
    if isinstance(graph, TripartiteGraph):
        document = _tripartite_document(graph)
    else:
        document = _exposome_document(graph)
    return json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def read_json_graph(text: Union[str, bytes]) -> AnyGraph:
    """
    Restore a graph written by ``export_json``.

    Args:
        text: JSON document

    Returns:
        ExposomeGraph or TripartiteGraph

    Raises:
        GraphFormatError: If the document is not a graph written by ``export_json``
    """
    try:
        return _read_document(json.loads(text))
    except ExposomeError:
        raise
    except (ValueError, KeyError, TypeError, AttributeError, IndexError) as exc:
        raise GraphFormatError(f"unreadable graph document: {exc!r}")


def _read_document(document: Dict[str, Any]) -> AnyGraph:
    kind = document.get("kind")
    if kind == "tripartite":
        classes: Dict[str, set] = {cls: set() for cls in DOT_SHAPES}
        for vertex in document["vertices"]:
            classes[vertex["class"]].add(vertex["label"])
        agent_occupation, agent_pathology = {}, {}
        for edge in document["edges"]:
            agent = edge["source"].split(":", 1)[1]
            other = edge["target"].split(":", 1)[1]
            if edge["kind"] == "agent-occupation":
                agent_occupation[(agent, other)] = edge["support"]
            else:
                agent_pathology[(agent, other)] = edge["support"]
        return TripartiteGraph(classes["pathology"], classes["agent"], classes["occupation"],
                               agent_occupation, agent_pathology)

    if kind != "exposome":
        raise GraphFormatError(f"unknown graph document kind {kind!r}")

    config = GraphConfig.from_strings(",".join(document["config"]["dims"]), document["config"]["level"])
    nodes = {}
    for entry in document["nodes"]:
        identity = None
        if "identity" in entry:
            raw = entry["identity"]
            identity = OhpIdentity(raw["pathology"], tuple(raw["agents"]), raw["occupation"], raw["sector"])
        elements = {ExposureDimension(dim): set(values) for dim, values in entry["exposure_elements"].items()}
        nodes[entry["key"]] = ExposomeNode(entry["key"], entry["pathology"], entry["weight"], elements, identity)
    edges = {}
    for entry in document["edges"]:
        shared = {ExposureDimension(dim): set(values) for dim, values in entry["shared"].items()}
        edge = ExposomeEdge(entry["source"], entry["target"], shared)
        edges[edge.key] = edge
    hubs = tuple(
        HubElement(ExposureDimension(hub["dimension"]), hub["element"], hub["node_count"])
        for hub in document.get("hub_elements", ())
    )
    return ExposomeGraph(config, nodes, edges, hubs)


def export_graph(graph: AnyGraph, fmt: str) -> str:
    """Dispatch on a format name (graphml, dot or json)."""
    writers = {"graphml": export_graphml, "dot": export_dot, "json": export_json}
    if fmt not in writers:
        raise ValueError(f"unknown export format {fmt!r} (expected one of {', '.join(FORMATS)})")
    return writers[fmt](graph)
