"""
Tripartite disease - noxious agent - occupation network.

Edges only run from agents: agent-occupation ("agent associated with the
occupation") and agent-pathology ("agent associated with the pathology").
Each edge carries a support count: the number of OHPs behind it.
"""

from collections import defaultdict
from dataclasses import dataclass
from types import MappingProxyType
from typing import Dict, FrozenSet, Mapping, Optional, Tuple, Union

import networkx as nx

try:
    from ..ingestion.ledger import IdentityLedger
    from ..ohp.hierarchy import PathologyHierarchy, PathologyLevel, pathology_at
except ImportError:
    import sys
    import os
    sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    from ingestion.ledger import IdentityLedger
    from ohp.hierarchy import PathologyHierarchy, PathologyLevel, pathology_at

VERTEX_CLASSES = ("pathology", "agent", "occupation")
SUPPORT_NOTE = "support = number of OHPs behind the edge"


@dataclass(frozen=True, eq=False)
class TripartiteGraph:
    """Three vertex classes with agent-centred edges and their support counts."""

    pathology_vertices: FrozenSet[str]
    agent_vertices: FrozenSet[str]
    occupation_vertices: FrozenSet[str]
    agent_occupation: Mapping[Tuple[str, str], int]
    agent_pathology: Mapping[Tuple[str, str], int]

    def __post_init__(self):
        for name in ("pathology_vertices", "agent_vertices", "occupation_vertices"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        for name in ("agent_occupation", "agent_pathology"):
            object.__setattr__(self, name, MappingProxyType(dict(sorted(getattr(self, name).items()))))

        for (agent, occupation), support in self.agent_occupation.items():
            if agent not in self.agent_vertices or occupation not in self.occupation_vertices:
                raise ValueError(f"agent-occupation edge ({agent}, {occupation}) has a missing endpoint")
            if support < 1:
                raise ValueError("edge supports must be positive")
        for (agent, pathology), support in self.agent_pathology.items():
            if agent not in self.agent_vertices or pathology not in self.pathology_vertices:
                raise ValueError(f"agent-pathology edge ({agent}, {pathology}) has a missing endpoint")
            if support < 1:
                raise ValueError("edge supports must be positive")

    def __eq__(self, other) -> bool:
        if not isinstance(other, TripartiteGraph):
            return NotImplemented
        return (self.pathology_vertices == other.pathology_vertices
                and self.agent_vertices == other.agent_vertices
                and self.occupation_vertices == other.occupation_vertices
                and dict(self.agent_occupation) == dict(other.agent_occupation)
                and dict(self.agent_pathology) == dict(other.agent_pathology))

    def __repr__(self) -> str:
        return (f"TripartiteGraph(pathologies={len(self.pathology_vertices)}, agents={len(self.agent_vertices)}, "
                f"occupations={len(self.occupation_vertices)}, edges={self.edge_count})")

    @property
    def edge_count(self) -> int:
        return len(self.agent_occupation) + len(self.agent_pathology)

    @property
    def is_empty(self) -> bool:
        return not (self.pathology_vertices or self.agent_vertices or self.occupation_vertices)

    def vertices(self) -> Tuple[Tuple[str, str], ...]:
        """(class, token) pairs in class then token order."""
        return tuple(
            (cls, token)
            for cls, tokens in zip(VERTEX_CLASSES, (self.pathology_vertices, self.agent_vertices,
                                                    self.occupation_vertices))
            for token in sorted(tokens)
        )

    def to_networkx(self) -> nx.Graph:
        """networkx view; vertex ids are ``class:token`` so classes never collide."""
        graph = nx.Graph(kind="tripartite", support_note=SUPPORT_NOTE)
        for cls, token in self.vertices():
            graph.add_node(f"{cls}:{token}", label=token, **{"class": cls})
        for (agent, occupation), support in self.agent_occupation.items():
            graph.add_edge(f"agent:{agent}", f"occupation:{occupation}", kind="agent-occupation", support=support)
        for (agent, pathology), support in self.agent_pathology.items():
            graph.add_edge(f"agent:{agent}", f"pathology:{pathology}", kind="agent-pathology", support=support)
        return graph


def project_tripartite(ledger: IdentityLedger, pathology_filter: Optional[str] = None,
                       level: Union[PathologyLevel, str] = PathologyLevel.DISEASE,
                       hierarchy: Optional[PathologyHierarchy] = None) -> TripartiteGraph:
    """
    Project OHP identities onto the disease - agent - occupation network.

    Args:
        ledger: Weighted OHP identities
        pathology_filter: Keep only identities whose pathology code starts with this prefix
        level: Pathology level of the pathology vertices (disease by default)
        hierarchy: Optional explicit pathology hierarchy

    Returns:
        TripartiteGraph
    """
    level = PathologyLevel.parse(level)
    agent_occupation: Dict[Tuple[str, str], int] = defaultdict(int)
    agent_pathology: Dict[Tuple[str, str], int] = defaultdict(int)
    pathologies, agents, occupations = set(), set(), set()

    for identity, entry in ledger.items():
        if pathology_filter and not identity.pathology.startswith(pathology_filter):
            continue
        pathology = pathology_at(identity.pathology, level, hierarchy)
        pathologies.add(pathology)
        occupations.add(identity.occupation)
        for agent in identity.agent_set:
            agents.add(agent)
            agent_occupation[(agent, identity.occupation)] += entry.weight
            agent_pathology[(agent, pathology)] += entry.weight

    return TripartiteGraph(pathologies, agents, occupations, agent_occupation, agent_pathology)
