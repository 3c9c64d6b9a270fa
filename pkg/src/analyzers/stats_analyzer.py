"""
Statistics analyzer: the StatsReport of a built exposome.
"""

from typing import Dict, Iterable, Optional

import pandas as pd

try:
    from .base_analyzer import BaseAnalyzer
    from ..ingestion.parsers import ParseResult
    from ..network.exposome import ExposomeGraph
    from ..network.metrics import components, isolated_nodes, node_metrics
except ImportError:
    import sys
    import os
    sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    from analyzers.base_analyzer import BaseAnalyzer
    from ingestion.parsers import ParseResult
    from network.exposome import ExposomeGraph
    from network.metrics import components, isolated_nodes, node_metrics


def distribution(values: Iterable[int]) -> Dict:
    """
    Summary statistics and histogram of integer values.

    Args:
        values: Observed values

    Returns:
        Dictionary with count, min, max, mean, median, std and a value histogram
    """
    series = pd.Series(list(values), dtype="int64")
    if series.empty:
        return {'count': 0, 'min': 0, 'max': 0, 'mean': 0.0, 'median': 0.0, 'std': 0.0, 'histogram': {}}
    counts = series.value_counts().sort_index()
    return {
        'count': int(series.count()),
        'min': int(series.min()),
        'max': int(series.max()),
        'mean': round(float(series.mean()), 6),
        'median': float(series.median()),
        'std': round(float(series.std(ddof=0)), 6),
        'histogram': {str(int(value)): int(count) for value, count in counts.items()},
    }


class StatsAnalyzer(BaseAnalyzer):
    """Computes record, node, edge and component counts plus per-node distributions."""

    def __init__(self):
        """Initialize the Stats Analyzer."""
        super().__init__("StatsAnalyzer")

    def analyze(self, data: Dict) -> Dict:
        """
        Build the StatsReport of a graph.

        Args:
            data: Dictionary with 'graph' (ExposomeGraph) and optionally
                'parse' (ParseResult of the corpus)

        Returns:
            StatsReport dictionary
        """
        graph: ExposomeGraph = data['graph']
        parse: Optional[ParseResult] = data.get('parse')

        metrics = node_metrics(graph)
        isolated = isolated_nodes(graph)
        parts = components(graph)

        report = {
            'config': graph.config.to_dict(),
            'counts': {
                'records_accepted': len(parse.records) if parse else graph.total_weight,
                'records_rejected': len(parse.rejects) if parse else 0,
                'nodes': len(graph.nodes),
                'edges': len(graph.edges),
                'components': len(parts),
                'isolated_nodes': len(isolated),
                'connected_nodes': len(graph.nodes) - len(isolated),
            },
            'distributions': {
                'node_weight': distribution(node.weight for node in graph.nodes.values()),
                'degree': distribution(m.degree for m in metrics.values()),
                'multi_exposure': distribution(m.multi_exposure for m in metrics.values()),
            },
            'largest_component': len(max(parts, key=len)) if parts else 0,
            'hub_elements': [hub.to_dict() for hub in graph.hub_elements],
        }
        if parse is not None:
            report['rejects'] = [reject.to_dict() for reject in parse.rejects]
            report['warnings'] = [warning.to_dict() for warning in parse.warnings]

        self.log_result(report['counts'])
        return report
