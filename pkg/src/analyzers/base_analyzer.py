"""
Base class for exposome analyzers.
"""

from abc import ABC, abstractmethod
from typing import Any, Dict, List


class BaseAnalyzer(ABC):
    """Abstract base class for analyzers that turn graphs or record streams into findings."""

    def __init__(self, analyzer_name: str):
        """
        Initialize the base analyzer.

        Args:
            analyzer_name: Name identifier for the analyzer
        """
        self.analyzer_name = analyzer_name
        self.results: List[Dict] = []

    @abstractmethod
    def analyze(self, data: Any) -> Dict:
        """
        Perform analysis on the given data.

        Args:
            data: Input data to analyze

        Returns:
            Dictionary containing analysis results
        """

    def log_result(self, result: Dict):
        """Keep a result for the run summary."""
        self.results.append(result)

    def get_results(self) -> List[Dict]:
        return self.results

    def clear_results(self):
        self.results = []

    def summarize(self) -> Dict:
        """
        Summary of every analysis performed so far.

        Returns:
            Summary dictionary
        """
        return {
            'analyzer_name': self.analyzer_name,
            'total_analyses': len(self.results),
            'results': self.results
        }
