"""
Exposome Pipeline

This module chains ingestion, network construction, statistics, tripartite
projection and surveillance, and prints human-readable run summaries.
"""

import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Sequence, TextIO, Union

try:
    from .analyzers.stats_analyzer import StatsAnalyzer
    from .ingestion.ledger import IdentityLedger, fold_identities
    from .ingestion.parsers import ParseResult, read_corpus
    from .network.exposome import DEFAULT_HUB_THRESHOLD, ExposomeGraph, GraphConfig, build_graph
    from .network.tripartite import TripartiteGraph, project_tripartite
    from .ohp.hierarchy import PathologyHierarchy, PathologyLevel
    from .surveillance.detector import EmergenceDetector
    from .surveillance.events import EmergenceEvent, SurveillanceConfig
except ImportError:
    import os
    sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
    from analyzers.stats_analyzer import StatsAnalyzer
    from ingestion.ledger import IdentityLedger, fold_identities
    from ingestion.parsers import ParseResult, read_corpus
    from network.exposome import DEFAULT_HUB_THRESHOLD, ExposomeGraph, GraphConfig, build_graph
    from network.tripartite import TripartiteGraph, project_tripartite
    from ohp.hierarchy import PathologyHierarchy, PathologyLevel
    from surveillance.detector import EmergenceDetector
    from surveillance.events import EmergenceEvent, SurveillanceConfig

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class ExposomePipeline:
    """
    Main pipeline that loads OHP corpora and runs every analysis over them.
    """

    def __init__(self, config: Optional[GraphConfig] = None,
                 hierarchy: Optional[PathologyHierarchy] = None,
                 hub_threshold: int = DEFAULT_HUB_THRESHOLD,
                 quadratic: bool = False, workers: int = 1,
                 stream: Optional[TextIO] = None):
        """
        Initialize the pipeline.

        Args:
            config: Graph configuration (all dimensions, disease level by default)
            hierarchy: Optional explicit pathology hierarchy
            hub_threshold: Bucket size above which an element is reported as a hub
            quadratic: Use the definitional pairwise edge search
            workers: Threads for loading several files and for the edge search
            stream: Where summaries are printed (standard error by default)
        """
        self.config = config or GraphConfig()
        self.hierarchy = hierarchy
        self.hub_threshold = hub_threshold
        self.quadratic = quadratic
        self.workers = max(1, workers)
        self.stream = stream
        self.stats_analyzer = StatsAnalyzer()
        self.parse_result = ParseResult()
        self.ledger = IdentityLedger()
        self.graph: Optional[ExposomeGraph] = None

    def _print(self, text: str = ""):
        print(text, file=self.stream or sys.stderr)

    def _banner(self, title: str):
        self._print(f"\n{'='*60}")
        self._print(title)
        self._print(f"{'='*60}")

    def load(self, paths: Sequence[PathLike]) -> ParseResult:
        """
        Parse corpus files and fold their records into the identity ledger.

        Files are parsed in parallel; results are merged in the given order.

        Args:
            paths: Corpus files (CSV by ``.csv`` suffix, JSON Lines otherwise)

        Returns:
            Combined ParseResult
        """
        paths = list(paths)
        if len(paths) > 1 and self.workers > 1:
            with ThreadPoolExecutor(max_workers=min(self.workers, len(paths))) as executor:
                results = list(executor.map(read_corpus, paths))
        else:
            results = [read_corpus(path) for path in paths]

        combined = ParseResult()
        ledger = IdentityLedger()
        for result in results:
            combined.extend(result)
            ledger = ledger.merge(fold_identities(result.records))

        self.parse_result = combined
        self.ledger = ledger
        self.graph = None
        logger.info("Loaded %d files: %d records, %d identities", len(paths), len(combined.records), len(ledger))
        return combined

    def build(self) -> ExposomeGraph:
        """Build (or reuse) the exposome network of the loaded corpus."""
        if self.graph is None:
            self.graph = build_graph(self.ledger, self.config, self.hierarchy,
                                     hub_threshold=self.hub_threshold,
                                     quadratic=self.quadratic, workers=self.workers)
            logger.info("Built graph: %d nodes, %d edges", len(self.graph.nodes), len(self.graph.edges))
        return self.graph

    def stats(self) -> Dict:
        """
        StatsReport of the loaded corpus.

        Returns:
            StatsReport dictionary
        """
        return self.stats_analyzer.analyze({'graph': self.build(), 'parse': self.parse_result})

    def project(self, pathology_filter: Optional[str] = None,
                level: Union[PathologyLevel, str] = PathologyLevel.DISEASE) -> TripartiteGraph:
        """Tripartite disease - agent - occupation projection of the loaded corpus."""
        return project_tripartite(self.ledger, pathology_filter, level, self.hierarchy)

    def surveil(self, config: SurveillanceConfig) -> List[EmergenceEvent]:
        """
        Replay the loaded records against a baseline.

        Args:
            config: Surveillance configuration

        Returns:
            Ordered EmergenceEvents
        """
        detector = EmergenceDetector(config, self.hierarchy)
        return detector.replay(self.parse_result.records)

    def print_summary(self, report: Dict):
        """Print a StatsReport for people."""
        counts = report['counts']
        self._banner("OCCUPATIONAL HEALTH PROBLEM EXPOSOME")
        self._print(f"Level: {report['config']['level']}  Dimensions: {', '.join(report['config']['dims'])}")
        self._print(f"\nRecords:")
        self._print(f"  Accepted: {counts['records_accepted']}")
        self._print(f"  Rejected: {counts['records_rejected']}")
        self._print(f"\nNetwork:")
        self._print(f"  Nodes: {counts['nodes']} ({counts['isolated_nodes']} isolated)")
        self._print(f"  Edges: {counts['edges']}")
        self._print(f"  Components: {counts['components']} (largest: {report['largest_component']})")
        if report['hub_elements']:
            self._print(f"\nHub elements:")
            for hub in report['hub_elements']:
                self._print(f"  {hub['dimension']} {hub['element']}: {hub['node_count']} nodes")

    def print_events(self, events: Sequence[EmergenceEvent]):
        """Print the event counts of a replay."""
        self._banner("SURVEILLANCE REPLAY")
        by_kind: Dict[str, int] = {}
        for event in events:
            by_kind[event.kind.value] = by_kind.get(event.kind.value, 0) + 1
        self._print(f"Events: {len(events)}")
        for kind, count in sorted(by_kind.items()):
            self._print(f"  {kind}: {count}")
