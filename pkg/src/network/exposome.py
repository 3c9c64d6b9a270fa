"""
The exposome: a weighted relational network of OHPs.

Nodes are OHP identities grouped at a pathology level, weighted by the number
of identical OHPs they stand for. Two nodes are connected when they share at
least one occupational-exposure element (agent, occupation or sector) along
the configured dimensions.

Edges are found through an inverted index element -> node keys, so the work
is bounded by co-exposure frequency rather than by the number of node pairs.
"""

import logging
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from types import MappingProxyType
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Set, Tuple, Union

import networkx as nx

try:
    from ..exceptions import ConfigError, LevelNotCoarserError
    from ..ingestion.ledger import IdentityLedger
    from ..ohp.hierarchy import PathologyHierarchy, PathologyLevel, pathology_at
    from ..ohp.records import ALL_DIMENSIONS, ExposureDimension, OhpIdentity
except ImportError:
    import sys
    import os
    sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    from exceptions import ConfigError, LevelNotCoarserError
    from ingestion.ledger import IdentityLedger
    from ohp.hierarchy import PathologyHierarchy, PathologyLevel, pathology_at
    from ohp.records import ALL_DIMENSIONS, ExposureDimension, OhpIdentity

logger = logging.getLogger(__name__)

DEFAULT_HUB_THRESHOLD = 5000
DIMENSION_ORDER = (ExposureDimension.AGENT, ExposureDimension.OCCUPATION, ExposureDimension.SECTOR)

NodeKey = str
EdgeKey = Tuple[NodeKey, NodeKey]
Element = Tuple[ExposureDimension, str]
SharedElements = Tuple[Element, ...]


def _freeze_elements(elements: Mapping[ExposureDimension, Iterable[str]]) -> Mapping[ExposureDimension, FrozenSet[str]]:
    return MappingProxyType({
        dim: frozenset(elements[dim]) for dim in DIMENSION_ORDER if dim in elements and elements[dim]
    })


@dataclass(frozen=True)
class GraphConfig:
    """Which exposure dimensions connect nodes, and at which pathology level."""

    dims: FrozenSet[ExposureDimension] = ALL_DIMENSIONS
    level: PathologyLevel = PathologyLevel.DISEASE

    def __post_init__(self):
        dims = frozenset(ExposureDimension.parse(dim) for dim in self.dims)
        if not dims:
            raise ConfigError("at least one exposure dimension is required")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "level", PathologyLevel.parse(self.level))

    @property
    def ordered_dims(self) -> Tuple[ExposureDimension, ...]:
        return tuple(dim for dim in DIMENSION_ORDER if dim in self.dims)

    def with_level(self, level: PathologyLevel) -> "GraphConfig":
        return GraphConfig(self.dims, level)

    def to_dict(self) -> Dict:
        return {"dims": [dim.value for dim in self.ordered_dims], "level": self.level.value}

    @classmethod
    def from_strings(cls, dims: str = "agent,occupation,sector", level: str = "disease") -> "GraphConfig":
        """Parse command-line style values (``"agent,sector"``, ``"subgroup"``)."""
        try:
            return cls(ExposureDimension.parse_list(dims), PathologyLevel.parse(level))
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc))


@dataclass(frozen=True)
class ExposomeNode:
    """A network vertex: one or several identical or grouped OHPs."""

    key: NodeKey
    pathology: str
    weight: int
    exposure_elements: Mapping[ExposureDimension, FrozenSet[str]]
    identity: Optional[OhpIdentity] = None

    def __post_init__(self):
        if self.weight < 1:
            raise ValueError(f"node {self.key} must have a positive weight")
        object.__setattr__(self, "exposure_elements", _freeze_elements(self.exposure_elements))
        if not self.exposure_elements.get(ExposureDimension.AGENT):
            raise ValueError(f"node {self.key} has no agent")

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExposomeNode):
            return NotImplemented
        return (self.key, self.pathology, self.weight, self.identity, dict(self.exposure_elements)) == \
            (other.key, other.pathology, other.weight, other.identity, dict(other.exposure_elements))

    def __hash__(self) -> int:
        return hash(self.key)

    def elements(self, dim: ExposureDimension) -> FrozenSet[str]:
        return self.exposure_elements.get(dim, frozenset())

    def element_count(self, dims: Iterable[ExposureDimension]) -> int:
        return sum(len(self.elements(dim)) for dim in dims)


@dataclass(frozen=True)
class ExposomeEdge:
    """Undirected shared-exposure relation; ``source < target``."""

    source: NodeKey
    target: NodeKey
    shared: Mapping[ExposureDimension, FrozenSet[str]]

    def __post_init__(self):
        if self.source == self.target:
            raise ValueError(f"self-loop on {self.source}")
        if self.target < self.source:
            source, target = self.target, self.source
            object.__setattr__(self, "source", source)
            object.__setattr__(self, "target", target)
        object.__setattr__(self, "shared", _freeze_elements(self.shared))
        if not self.shared:
            raise ValueError(f"edge {self.source} -- {self.target} shares nothing")

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExposomeEdge):
            return NotImplemented
        return (self.source, self.target, dict(self.shared)) == (other.source, other.target, dict(other.shared))

    def __hash__(self) -> int:
        return hash(self.key)

    @property
    def key(self) -> EdgeKey:
        return (self.source, self.target)

    def shared_elements(self) -> SharedElements:
        """Shared (dimension, element) pairs in dimension then element order."""
        return tuple((dim, element) for dim in DIMENSION_ORDER for element in sorted(self.shared.get(dim, ())))

    @classmethod
    def from_elements(cls, key: EdgeKey, elements: Iterable[Element]) -> "ExposomeEdge":
        shared: Dict[ExposureDimension, Set[str]] = {}
        for dim, element in elements:
            shared.setdefault(dim, set()).add(element)
        return cls(key[0], key[1], shared)


class EdgeTable(Mapping):
    """
    Read-only mapping edge key -> ExposomeEdge, in key order.

    Edges are held as the tuples of (dimension, element) pairs their endpoints
    share; ExposomeEdge objects are only built when an edge is looked up.
    """

    __slots__ = ("_shared",)

    def __init__(self, shared: Optional[Mapping[EdgeKey, SharedElements]] = None):
        self._shared: Dict[EdgeKey, SharedElements] = dict(sorted((shared or {}).items()))

    @classmethod
    def from_edges(cls, edges: Mapping[EdgeKey, ExposomeEdge]) -> "EdgeTable":
        if isinstance(edges, EdgeTable):
            return edges
        return cls({edge.key: edge.shared_elements() for edge in edges.values()})

    def __getitem__(self, key: EdgeKey) -> ExposomeEdge:
        return ExposomeEdge.from_elements(key, self._shared[key])

    def __contains__(self, key) -> bool:
        return key in self._shared

    def __iter__(self) -> Iterator[EdgeKey]:
        return iter(self._shared)

    def __len__(self) -> int:
        return len(self._shared)

    def __eq__(self, other) -> bool:
        if isinstance(other, EdgeTable):
            return self._shared == other._shared
        return super().__eq__(other)

    def __repr__(self) -> str:
        return f"EdgeTable(edges={len(self)})"

    def shared_elements(self, key: EdgeKey) -> SharedElements:
        return self._shared[key]


@dataclass(frozen=True)
class HubElement:
    """An exposure element carried by more nodes than the hub threshold."""

    dimension: ExposureDimension
    element: str
    node_count: int

    def to_dict(self) -> Dict:
        return {"dimension": self.dimension.value, "element": self.element, "node_count": self.node_count}


@dataclass(frozen=True, eq=False)
class ExposomeGraph:
    """
    Immutable exposome network; nodes and edges iterate in key order.

    ``edges`` accepts any mapping of ExposomeEdges and is stored as an EdgeTable.
    """

    config: GraphConfig
    nodes: Mapping[NodeKey, ExposomeNode]
    edges: Mapping[EdgeKey, ExposomeEdge]
    hub_elements: Tuple[HubElement, ...] = ()
    _adjacency: Mapping[NodeKey, Tuple[NodeKey, ...]] = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", MappingProxyType(dict(sorted(self.nodes.items()))))
        object.__setattr__(self, "edges", EdgeTable.from_edges(self.edges))
        adjacency: Dict[NodeKey, List[NodeKey]] = {key: [] for key in self.nodes}
        for source, target in self.edges:
            if source not in adjacency or target not in adjacency:
                raise ValueError(f"edge {source} -- {target} references an unknown node")
            adjacency[source].append(target)
            adjacency[target].append(source)
        object.__setattr__(self, "_adjacency", MappingProxyType(
            {key: tuple(sorted(neighbours)) for key, neighbours in adjacency.items()}
        ))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExposomeGraph):
            return NotImplemented
        return (self.config == other.config and dict(self.nodes) == dict(other.nodes)
                and self.edges == other.edges)

    def __repr__(self) -> str:
        return (f"ExposomeGraph(level={self.config.level.value}, nodes={len(self.nodes)}, "
                f"edges={len(self.edges)})")

    @property
    def total_weight(self) -> int:
        return sum(node.weight for node in self.nodes.values())

    def node_keys(self) -> Tuple[NodeKey, ...]:
        return tuple(self.nodes)

    def edge_keys(self) -> Tuple[EdgeKey, ...]:
        return tuple(self.edges)

    def neighbours(self, key: NodeKey) -> Tuple[NodeKey, ...]:
        return self._adjacency[key]

    def degree(self, key: NodeKey) -> int:
        return len(self._adjacency[key])

    def to_networkx(self) -> nx.Graph:
        """
        Build a networkx view with flat, string/int attributes.

        Nodes and edges are inserted in key order, which fixes the order of
        every export built from the view.
        """
        graph = nx.Graph(kind="exposome", level=self.config.level.value,
                         dims=",".join(dim.value for dim in self.config.ordered_dims))
        for key, node in self.nodes.items():
            attributes = {"label": key, "pathology": node.pathology, "weight": node.weight,
                          "level": self.config.level.value}
            for dim in DIMENSION_ORDER:
                attributes[f"n_{dim.value}"] = len(node.elements(dim))
            graph.add_node(key, **attributes)
        for source, target in self.edges:
            shared = {dim: [] for dim in self.config.ordered_dims}
            for dim, element in self.edges.shared_elements((source, target)):
                if dim in shared:
                    shared[dim].append(element)
            graph.add_edge(source, target, **{f"shared_{dim.value}": ";".join(elements)
                                             for dim, elements in shared.items()})
        return graph


def node_key_for(identity: OhpIdentity, level: PathologyLevel,
                 hierarchy: Optional[PathologyHierarchy] = None) -> NodeKey:
    """Key of the node an identity belongs to at ``level``."""
    if level is PathologyLevel.DISEASE:
        return identity.key
    return pathology_at(identity.pathology, level, hierarchy)


class _NodeAccumulator:
    """Mutable node state used while grouping identities or nodes."""

    __slots__ = ("pathology", "weight", "elements", "identity")

    def __init__(self, pathology: str, identity: Optional[OhpIdentity] = None):
        self.pathology = pathology
        self.weight = 0
        self.elements: Dict[ExposureDimension, Set[str]] = {dim: set() for dim in DIMENSION_ORDER}
        self.identity = identity

    def add(self, weight: int, elements: Mapping[ExposureDimension, Iterable[str]]):
        self.weight += weight
        for dim in DIMENSION_ORDER:
            self.elements[dim].update(elements.get(dim, ()))

    def freeze(self, key: NodeKey) -> ExposomeNode:
        return ExposomeNode(key, self.pathology, self.weight, self.elements, self.identity)


def _identity_elements(identity: OhpIdentity) -> Dict[ExposureDimension, FrozenSet[str]]:
    return {dim: identity.elements(dim) for dim in DIMENSION_ORDER}


def group_nodes(ledger: IdentityLedger, level: PathologyLevel,
                hierarchy: Optional[PathologyHierarchy] = None) -> Dict[NodeKey, ExposomeNode]:
    """
    Group ledger identities into nodes at a pathology level.

    Args:
        ledger: Weighted identities
        level: Pathology level of the nodes
        hierarchy: Optional explicit pathology hierarchy

    Returns:
        Node key -> ExposomeNode
    """
    groups: Dict[NodeKey, _NodeAccumulator] = {}
    for identity, entry in ledger.items():
        key = node_key_for(identity, level, hierarchy)
        if key not in groups:
            if level is PathologyLevel.DISEASE:
                groups[key] = _NodeAccumulator(identity.pathology, identity)
            else:
                groups[key] = _NodeAccumulator(key)
        groups[key].add(entry.weight, _identity_elements(identity))
    return {key: acc.freeze(key) for key, acc in groups.items()}


def build_inverted_index(nodes: Mapping[NodeKey, ExposomeNode],
                         dims: Iterable[ExposureDimension]) -> Dict[Element, List[NodeKey]]:
    """
    Index exposure elements to the sorted keys of the nodes carrying them.

    Args:
        nodes: Node key -> node
        dims: Dimensions to index

    Returns:
        (dimension, element) -> sorted node keys
    """
    index: Dict[Element, List[NodeKey]] = defaultdict(list)
    for key in sorted(nodes):
        node = nodes[key]
        for dim in dims:
            for element in node.elements(dim):
                index[(dim, element)].append(key)
    return dict(index)


def _bucket_pairs(buckets: List[Tuple[Element, List[NodeKey]]]) -> Dict[EdgeKey, List[Element]]:
    shared: Dict[EdgeKey, List[Element]] = {}
    for element, keys in buckets:
        for pair in combinations(keys, 2):
            found = shared.get(pair)
            if found is None:
                shared[pair] = [element]
            else:
                found.append(element)
    return shared


def _merge_pairs(target: Dict[EdgeKey, List[Element]], partial: Dict[EdgeKey, List[Element]]):
    for pair, elements in partial.items():
        existing = target.get(pair)
        if existing is None:
            target[pair] = elements
        else:
            existing.extend(elements)


def indexed_edges(nodes: Mapping[NodeKey, ExposomeNode], dims: Iterable[ExposureDimension],
                  workers: int = 1) -> EdgeTable:
    """
    Find all shared-exposure edges through the inverted index.

    Args:
        nodes: Node key -> node
        dims: Dimensions that connect nodes
        workers: Number of threads the index buckets are spread over

    Returns:
        EdgeTable in key order
    """
    index = build_inverted_index(nodes, list(dims))
    # Sorted buckets keep every pair's shared elements in (dimension, element) order.
    buckets = sorted((element, keys) for element, keys in index.items() if len(keys) > 1)

    if workers > 1 and len(buckets) > 1:
        chunk_size = -(-len(buckets) // workers)
        chunks = [buckets[i:i + chunk_size] for i in range(0, len(buckets), chunk_size)]
        shared: Dict[EdgeKey, List[Element]] = {}
        with ThreadPoolExecutor(max_workers=workers) as pool:
            # map() yields in chunk order, so the merge is deterministic.
            for partial in pool.map(_bucket_pairs, chunks):
                _merge_pairs(shared, partial)
    else:
        shared = _bucket_pairs(buckets)

    return EdgeTable({pair: tuple(elements) for pair, elements in shared.items()})


def pairwise_edges(nodes: Mapping[NodeKey, ExposomeNode],
                   dims: Iterable[ExposureDimension]) -> Dict[EdgeKey, ExposomeEdge]:
    """
    Definitional O(n^2) edge computation, kept for debugging and as an oracle.

    Args:
        nodes: Node key -> node
        dims: Dimensions that connect nodes

    Returns:
        Edge key -> ExposomeEdge, in key order
    """
    dims = [dim for dim in DIMENSION_ORDER if dim in set(dims)]
    edges: Dict[EdgeKey, ExposomeEdge] = {}
    for source, target in combinations(sorted(nodes), 2):
        shared = {}
        for dim in dims:
            common = nodes[source].elements(dim) & nodes[target].elements(dim)
            if common:
                shared[dim] = common
        if shared:
            edges[(source, target)] = ExposomeEdge(source, target, shared)
    return edges


def find_hub_elements(nodes: Mapping[NodeKey, ExposomeNode], dims: Iterable[ExposureDimension],
                      threshold: int = DEFAULT_HUB_THRESHOLD) -> Tuple[HubElement, ...]:
    """List elements carried by more than ``threshold`` nodes, most frequent first."""
    counts: Dict[Element, int] = defaultdict(int)
    for node in nodes.values():
        for dim in dims:
            for element in node.elements(dim):
                counts[(dim, element)] += 1
    hubs = [HubElement(dim, element, count) for (dim, element), count in counts.items() if count > threshold]
    hubs.sort(key=lambda hub: (-hub.node_count, DIMENSION_ORDER.index(hub.dimension), hub.element))
    return tuple(hubs)


def _assemble(nodes: Dict[NodeKey, ExposomeNode], config: GraphConfig, hub_threshold: int,
              quadratic: bool, workers: int) -> ExposomeGraph:
    dims = config.ordered_dims
    hubs = find_hub_elements(nodes, dims, hub_threshold)
    for hub in hubs:
        logger.warning("Hub element %s=%s is carried by %d nodes", hub.dimension.value, hub.element, hub.node_count)
    edges = pairwise_edges(nodes, dims) if quadratic else indexed_edges(nodes, dims, workers)
    graph = ExposomeGraph(config, nodes, edges, hubs)
    logger.info("Built %r", graph)
    return graph


def build_graph(ledger: IdentityLedger, config: GraphConfig,
                hierarchy: Optional[PathologyHierarchy] = None,
                hub_threshold: int = DEFAULT_HUB_THRESHOLD,
                quadratic: bool = False, workers: int = 1) -> ExposomeGraph:
    """
    Build the exposome network from an identity ledger.

    Args:
        ledger: Weighted OHP identities
        config: Connecting dimensions and pathology level
        hierarchy: Optional explicit pathology hierarchy
        hub_threshold: Elements carried by more nodes are reported as hubs
        quadratic: Use the definitional pairwise algorithm instead of the index
        workers: Threads used for the indexed edge search

    Returns:
        ExposomeGraph
    """
    nodes = group_nodes(ledger, config.level, hierarchy)
    return _assemble(nodes, config, hub_threshold, quadratic, workers)


def aggregate(graph: ExposomeGraph, level: Union[PathologyLevel, str],
              hierarchy: Optional[PathologyHierarchy] = None,
              hub_threshold: int = DEFAULT_HUB_THRESHOLD, workers: int = 1) -> ExposomeGraph:
    """
    Coarsen a graph to a higher pathology level.

    The result equals a direct build of the same ledger at ``level``.

    Args:
        graph: Graph built at a finer level
        level: Target level, strictly coarser than the graph's level
        hierarchy: Optional explicit pathology hierarchy (same as the build's)

    Returns:
        ExposomeGraph at ``level``

    Raises:
        LevelNotCoarserError: If ``level`` is not coarser than the graph's level
    """
    level = PathologyLevel.parse(level)
    if not level.is_coarser_than(graph.config.level):
        raise LevelNotCoarserError(
            f"cannot aggregate from {graph.config.level.value} to {level.value}"
        )
    groups: Dict[NodeKey, _NodeAccumulator] = {}
    for node in graph.nodes.values():
        key = pathology_at(node.pathology, level, hierarchy)
        if key not in groups:
            groups[key] = _NodeAccumulator(key)
        groups[key].add(node.weight, node.exposure_elements)
    nodes = {key: acc.freeze(key) for key, acc in groups.items()}
    return _assemble(nodes, graph.config.with_level(level), hub_threshold, False, workers)
