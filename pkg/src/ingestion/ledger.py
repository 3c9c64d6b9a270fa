"""
Identity ledger: validated records folded into weighted OHP identities.
"""

import logging
from dataclasses import dataclass
from datetime import date
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple

try:
    from ..ohp.records import OhpIdentity, OhpRecord, identity_of
except ImportError:
    import sys
    import os
    sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    from ohp.records import OhpIdentity, OhpRecord, identity_of

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LedgerEntry:
    """Aggregate of all records sharing one identity."""

    weight: int
    first_seen: date
    last_seen: date
    max_responsibility: Tuple[Tuple[str, int], ...]

    def responsibility_of(self, agent_code: str) -> Optional[int]:
        return dict(self.max_responsibility).get(agent_code)

    def combine(self, other: "LedgerEntry") -> "LedgerEntry":
        degrees = dict(self.max_responsibility)
        for code, degree in other.max_responsibility:
            degrees[code] = max(degree, degrees.get(code, degree))
        return LedgerEntry(
            weight=self.weight + other.weight,
            first_seen=min(self.first_seen, other.first_seen),
            last_seen=max(self.last_seen, other.last_seen),
            max_responsibility=tuple(sorted(degrees.items())),
        )

    @classmethod
    def of_record(cls, record: OhpRecord) -> "LedgerEntry":
        degrees: Dict[str, int] = {}
        for agent in record.agents:
            degrees[agent.code] = max(agent.responsibility, degrees.get(agent.code, agent.responsibility))
        return cls(
            weight=1,
            first_seen=record.reported_on,
            last_seen=record.reported_on,
            max_responsibility=tuple(sorted(degrees.items())),
        )


class IdentityLedger(Mapping):
    """
    Read-only mapping OhpIdentity -> LedgerEntry.

    Iteration follows identity order, so two ledgers folded from the same
    records in any order iterate identically.
    """

    def __init__(self, entries: Optional[Mapping[OhpIdentity, LedgerEntry]] = None):
        self._entries: Dict[OhpIdentity, LedgerEntry] = dict(sorted((entries or {}).items()))

    def __getitem__(self, identity: OhpIdentity) -> LedgerEntry:
        return self._entries[identity]

    def __iter__(self) -> Iterator[OhpIdentity]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __repr__(self) -> str:
        return f"IdentityLedger(identities={len(self)}, weight={self.total_weight})"

    @property
    def total_weight(self) -> int:
        return sum(entry.weight for entry in self._entries.values())

    def weights(self) -> Dict[OhpIdentity, int]:
        return {identity: entry.weight for identity, entry in self._entries.items()}

    def merge(self, other: "IdentityLedger") -> "IdentityLedger":
        """
        Combine two ledgers, e.g. folded from separate files.

        The result does not depend on which ledger is merged into which.
        """
        merged = dict(self._entries)
        for identity, entry in other.items():
            merged[identity] = merged[identity].combine(entry) if identity in merged else entry
        return IdentityLedger(merged)


def fold_identities(records: Iterable[OhpRecord]) -> IdentityLedger:
    """
    Fold validated records into weighted identities.

    Args:
        records: Validated OhpRecords

    Returns:
        IdentityLedger whose weights count the records per identity
    """
    entries: Dict[OhpIdentity, LedgerEntry] = {}
    count = 0
    for record in records:
        identity = identity_of(record)
        entry = LedgerEntry.of_record(record)
        entries[identity] = entries[identity].combine(entry) if identity in entries else entry
        count += 1
    logger.debug("Folded %d records into %d identities", count, len(entries))
    return IdentityLedger(entries)


def ledger_from_weights(weights: Mapping[OhpIdentity, int], seen_on: date) -> IdentityLedger:
    """
    Build a ledger directly from identity weights (no record history).

    Args:
        weights: Positive count per identity
        seen_on: Date used as first and last sighting of every identity

    Returns:
        IdentityLedger
    """
    entries = {}
    for identity, weight in weights.items():
        if weight < 1:
            raise ValueError(f"weight of {identity.key} must be positive")
        entries[identity] = LedgerEntry(weight, seen_on, seen_on, ())
    return IdentityLedger(entries)


