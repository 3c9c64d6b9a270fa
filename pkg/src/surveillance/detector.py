"""
Prospective surveillance: replay a dated record stream against a baseline and
report emerging nodes, new connections between known nodes, and abnormal
weight growth.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass
from datetime import date
from itertools import groupby
from typing import Dict, Iterable, List, Optional, Set, Tuple

try:
    from ..analyzers.base_analyzer import BaseAnalyzer
    from ..exceptions import ConfigMismatchError
    from ..network.exposome import DIMENSION_ORDER, EdgeKey, ExposomeGraph, NodeKey, node_key_for
    from ..ohp.hierarchy import PathologyHierarchy
    from ..ohp.records import ExposureDimension, OhpRecord, identity_of
    from .events import EmergenceEvent, EmergenceKind, SurveillanceConfig
except ImportError:
    import sys
    import os
    sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    from analyzers.base_analyzer import BaseAnalyzer
    from exceptions import ConfigMismatchError
    from network.exposome import DIMENSION_ORDER, EdgeKey, ExposomeGraph, NodeKey, node_key_for
    from ohp.hierarchy import PathologyHierarchy
    from ohp.records import ExposureDimension, OhpRecord, identity_of
    from surveillance.events import EmergenceEvent, EmergenceKind, SurveillanceConfig

logger = logging.getLogger(__name__)

Elements = Dict[ExposureDimension, Set[str]]


@dataclass(frozen=True)
class GraphDiff:
    """Nodes and edges present in the later graph only."""

    added_nodes: Tuple[NodeKey, ...]
    added_edges: Tuple[EdgeKey, ...]

    @property
    def is_empty(self) -> bool:
        return not self.added_nodes and not self.added_edges


def diff_graphs(before: ExposomeGraph, after: ExposomeGraph) -> GraphDiff:
    """
    Set differences of node keys and edge keys between two graphs.

    Args:
        before: Earlier graph
        after: Later graph, built with the same configuration

    Returns:
        GraphDiff

    Raises:
        ConfigMismatchError: If the graphs were built with different configurations
    """
    if before.config != after.config:
        raise ConfigMismatchError(f"cannot diff {before.config} against {after.config}")
    added_nodes = tuple(sorted(set(after.nodes) - set(before.nodes)))
    added_edges = tuple(sorted(set(after.edges) - set(before.edges)))
    return GraphDiff(added_nodes, added_edges)


def _sort_records(records: Iterable[OhpRecord]) -> List[OhpRecord]:
    return sorted(records, key=lambda record: (record.reported_on, record.record_id))


class EmergenceDetector(BaseAnalyzer):
    """
    Keeps the surveillance history (node elements and an element index) and
    compares each window against it.
    """

    def __init__(self, config: SurveillanceConfig, hierarchy: Optional[PathologyHierarchy] = None):
        """
        Initialize the Emergence Detector.

        Args:
            config: Surveillance configuration
            hierarchy: Optional explicit pathology hierarchy
        """
        super().__init__("EmergenceDetector")
        self.config = config
        self.hierarchy = hierarchy
        self.dims = config.graph.ordered_dims
        self.reset()

    def reset(self):
        """Forget all history."""
        self.elements: Dict[NodeKey, Elements] = {}
        self.index: Dict[Tuple[ExposureDimension, str], Set[NodeKey]] = defaultdict(set)
        self.clear_results()

    def node_key(self, record: OhpRecord) -> NodeKey:
        return node_key_for(identity_of(record), self.config.graph.level, self.hierarchy)

    @staticmethod
    def record_elements(record: OhpRecord) -> Dict[ExposureDimension, frozenset]:
        identity = identity_of(record)
        return {dim: identity.elements(dim) for dim in DIMENSION_ORDER}

    def _apply(self, record: OhpRecord):
        key = self.node_key(record)
        elements = self.elements.setdefault(key, {dim: set() for dim in DIMENSION_ORDER})
        for dim, tokens in self.record_elements(record).items():
            elements[dim].update(tokens)
            if dim in self.dims:
                for token in tokens:
                    self.index[(dim, token)].add(key)

    def load_baseline(self, records: Iterable[OhpRecord]) -> int:
        """Add baseline records to the history without reporting anything."""
        count = 0
        for record in records:
            self._apply(record)
            count += 1
        logger.info("Baseline holds %d records in %d nodes", count, len(self.elements))
        return count

    def _shares(self, left: Elements, right: Elements) -> bool:
        return any(left[dim] & right[dim] for dim in self.dims)

    def process_window(self, window_start: date, window_end: date,
                       records: List[OhpRecord]) -> List[EmergenceEvent]:
        """
        Compare one window of records against the history, then absorb it.

        Args:
            window_start: First day of the window
            window_end: Last day of the window
            records: Records dated inside the window

        Returns:
            Events of the window in reporting order
        """
        by_key: Dict[NodeKey, List[OhpRecord]] = defaultdict(list)
        for record in records:
            by_key[self.node_key(record)].append(record)

        events: List[EmergenceEvent] = []
        known = self.elements

        for key, members in by_key.items():
            if key not in known:
                events.append(EmergenceEvent(EmergenceKind.NEW_NODE, window_start, window_end, (key,),
                                             tuple(record.record_id for record in members)))

        # Elements that already-known nodes gain during this window.
        gains: Dict[NodeKey, Elements] = {}
        for key, members in by_key.items():
            if key not in known:
                continue
            gained = {dim: set() for dim in DIMENSION_ORDER}
            for record in members:
                for dim, tokens in self.record_elements(record).items():
                    gained[dim].update(tokens - known[key][dim])
            if any(gained[dim] for dim in self.dims):
                gains[key] = gained

        gain_index: Dict[Tuple[ExposureDimension, str], Set[NodeKey]] = defaultdict(set)
        for key, gained in gains.items():
            for dim in self.dims:
                for token in gained[dim]:
                    gain_index[(dim, token)].add(key)

        def after(key: NodeKey) -> Elements:
            if key not in gains:
                return known[key]
            return {dim: known[key][dim] | gains[key][dim] for dim in DIMENSION_ORDER}

        candidates: Set[EdgeKey] = set()
        for key, gained in gains.items():
            for dim in self.dims:
                for token in gained[dim]:
                    for other in self.index.get((dim, token), set()) | gain_index[(dim, token)]:
                        if other != key:
                            candidates.add((min(key, other), max(key, other)))

        for source, target in sorted(candidates):
            if self._shares(known[source], known[target]):
                continue
            source_after, target_after = after(source), after(target)
            shared = {dim: frozenset(source_after[dim] & target_after[dim]) for dim in self.dims}
            shared = {dim: tokens for dim, tokens in shared.items() if tokens}
            if not shared:
                continue
            evidence = tuple(
                record.record_id
                for key in (source, target)
                for record in by_key.get(key, ())
                if any(self.record_elements(record)[dim] & shared[dim] for dim in shared)
            )
            events.append(EmergenceEvent(EmergenceKind.NEW_CONNECTION, window_start, window_end,
                                         (source, target), evidence, shared))

        for key, members in by_key.items():
            if len(members) >= self.config.growth_threshold:
                events.append(EmergenceEvent(EmergenceKind.WEIGHT_GROWTH, window_start, window_end, (key,),
                                             tuple(record.record_id for record in members)))

        for record in records:
            self._apply(record)

        events.sort(key=lambda event: event.sort_key)
        self.log_result({
            'window_start': window_start.isoformat(),
            'window_end': window_end.isoformat(),
            'records': len(records),
            'events': len(events),
        })
        logger.debug("Window %s..%s: %d records, %d events", window_start, window_end, len(records), len(events))
        return events

    def replay(self, records: Iterable[OhpRecord]) -> List[EmergenceEvent]:
        """
        Replay a record stream from scratch.

        Args:
            records: Validated records (sorted here by date, then record id)

        Returns:
            Events ordered by window, kind and subject
        """
        self.reset()
        ordered = _sort_records(records)
        if not ordered:
            logger.info("EMPTY_STREAM: nothing to replay")
            return []

        cutoff = self.config.baseline_end
        baseline = [record for record in ordered if record.reported_on <= cutoff]
        stream = [record for record in ordered if record.reported_on > cutoff]
        self.load_baseline(baseline)

        events: List[EmergenceEvent] = []
        for (start, end), members in groupby(stream, key=lambda record: self.config.window_of(record.reported_on)):
            events.extend(self.process_window(start, end, list(members)))
        logger.info("Replayed %d post-baseline records: %d events", len(stream), len(events))
        return events

    def analyze(self, data: Iterable[OhpRecord]) -> Dict:
        """
        Replay records and summarize the findings.

        Args:
            data: Validated records

        Returns:
            Dictionary with the events and their counts per kind
        """
        events = self.replay(data)
        by_kind = {kind.value: 0 for kind in EmergenceKind}
        for event in events:
            by_kind[event.kind.value] += 1
        return {
            'analyzer': self.analyzer_name,
            'windows': len(self.results),
            'events': events,
            'events_by_kind': by_kind,
        }


def replay(records: Iterable[OhpRecord], config: SurveillanceConfig,
           hierarchy: Optional[PathologyHierarchy] = None) -> List[EmergenceEvent]:
    """
    Replay a dated record stream and report emerging events.

    Args:
        records: Validated records
        config: Surveillance configuration
        hierarchy: Optional explicit pathology hierarchy

    Returns:
        Ordered list of EmergenceEvents
    """
    return EmergenceDetector(config, hierarchy).replay(records)
