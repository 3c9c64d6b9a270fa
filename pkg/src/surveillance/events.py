"""
Surveillance configuration and emergence events.
"""

import json
from dataclasses import dataclass
from datetime import date, timedelta
from enum import Enum
from typing import Any, Dict, FrozenSet, Iterable, Mapping, Optional, Tuple

try:
    from ..exceptions import ConfigError
    from ..network.exposome import DIMENSION_ORDER, GraphConfig
    from ..ohp.records import ExposureDimension
except ImportError:
    import sys
    import os
    sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    from exceptions import ConfigError
    from network.exposome import DIMENSION_ORDER, GraphConfig
    from ohp.records import ExposureDimension

DEFAULT_WINDOW_DAYS = 30
DEFAULT_GROWTH_THRESHOLD = 3


@dataclass(frozen=True)
class SurveillanceConfig:
    """Baseline cut-off, window length and growth threshold of a replay."""

    graph: GraphConfig
    baseline_end: date
    window_days: int = DEFAULT_WINDOW_DAYS
    growth_threshold: int = DEFAULT_GROWTH_THRESHOLD

    def __post_init__(self):
        if self.window_days < 1:
            raise ConfigError("window length must be at least one day")
        if self.growth_threshold < 1:
            raise ConfigError("growth threshold must be at least 1")

    def window_of(self, day: date) -> Tuple[date, date]:
        """Window (first day, last day) containing a post-baseline date."""
        offset = (day - self.baseline_end).days - 1
        if offset < 0:
            raise ValueError(f"{day} is not after the baseline end {self.baseline_end}")
        start = self.baseline_end + timedelta(days=1 + (offset // self.window_days) * self.window_days)
        return start, start + timedelta(days=self.window_days - 1)


class EmergenceKind(str, Enum):
    """Kinds of surveillance findings, in reporting order."""

    NEW_NODE = "NEW_NODE"
    NEW_CONNECTION = "NEW_CONNECTION"
    WEIGHT_GROWTH = "WEIGHT_GROWTH"

    @property
    def rank(self) -> int:
        return list(EmergenceKind).index(self)


@dataclass(frozen=True, eq=False)
class EmergenceEvent:
    """
    One emerging finding in one window.

    ``subject`` holds one node key (NEW_NODE, WEIGHT_GROWTH) or the sorted
    pair of node keys (NEW_CONNECTION); ``shared`` is only set for connections.
    """

    kind: EmergenceKind
    window_start: date
    window_end: date
    subject: Tuple[str, ...]
    evidence: Tuple[str, ...]
    shared: Optional[Mapping[ExposureDimension, FrozenSet[str]]] = None

    def __post_init__(self):
        if not self.evidence:
            raise ValueError(f"{self.kind.value} event on {self.subject} has no evidence")
        expected = 2 if self.kind is EmergenceKind.NEW_CONNECTION else 1
        if len(self.subject) != expected:
            raise ValueError(f"{self.kind.value} needs {expected} subject key(s)")
        object.__setattr__(self, "evidence", tuple(sorted(set(self.evidence))))
        if self.kind is EmergenceKind.NEW_CONNECTION:
            object.__setattr__(self, "subject", tuple(sorted(self.subject)))

    @property
    def sort_key(self) -> Tuple:
        return (self.window_start, self.kind.rank, self.subject)

    def _shared_dict(self) -> Optional[Dict[str, list]]:
        if self.shared is None:
            return None
        return {dim.value: sorted(self.shared[dim]) for dim in DIMENSION_ORDER if dim in self.shared}

    def __eq__(self, other) -> bool:
        if not isinstance(other, EmergenceEvent):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __hash__(self) -> int:
        return hash((self.kind, self.window_start, self.subject))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "window_start": self.window_start.isoformat(),
            "window_end": self.window_end.isoformat(),
            "subject": self.subject[0] if len(self.subject) == 1 else list(self.subject),
            "shared": self._shared_dict(),
            "evidence": list(self.evidence),
        }


def events_to_jsonl(events: Iterable[EmergenceEvent]) -> str:
    """Serialize events to JSON Lines, one event per line."""
    return "".join(json.dumps(event.to_dict(), ensure_ascii=False) + "\n" for event in events)
