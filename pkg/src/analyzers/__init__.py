"""Exposome analyzers."""
from .base_analyzer import BaseAnalyzer
from .stats_analyzer import StatsAnalyzer, distribution

__all__ = [
    'BaseAnalyzer',
    'StatsAnalyzer',
    'distribution',
]
