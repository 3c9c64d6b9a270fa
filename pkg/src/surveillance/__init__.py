"""Emergence detection over dated OHP streams."""
from .events import (
    DEFAULT_GROWTH_THRESHOLD,
    DEFAULT_WINDOW_DAYS,
    EmergenceEvent,
    EmergenceKind,
    SurveillanceConfig,
    events_to_jsonl,
)
from .detector import EmergenceDetector, GraphDiff, diff_graphs, replay
from .trends import group_trends

__all__ = [
    'DEFAULT_GROWTH_THRESHOLD',
    'DEFAULT_WINDOW_DAYS',
    'EmergenceEvent',
    'EmergenceKind',
    'SurveillanceConfig',
    'events_to_jsonl',
    'EmergenceDetector',
    'GraphDiff',
    'diff_graphs',
    'replay',
    'group_trends',
]
