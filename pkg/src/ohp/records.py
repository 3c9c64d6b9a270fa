"""
Occupational health problem (OHP) records, their validation and their identity.

An OHP is one reported case: a principal pathology together with up to five
noxious agents (each with a degree of responsibility), the occupation and the
sector of activity. Two OHPs are identical when pathology, agent set,
occupation and sector coincide; responsibility degrees and dates are ignored.
"""

from dataclasses import dataclass, field
from datetime import date, datetime
from enum import Enum
from typing import Any, Dict, FrozenSet, List, Mapping, Optional, Tuple, Union

MAX_AGENTS = 5
RESPONSIBILITY_LEVELS = {0: "doubtful", 1: "low", 2: "medium", 3: "high"}
TEXT_FIELDS = ("record_id", "center", "pathology", "occupation", "sector")
# Identity fields end up in node keys, where these characters are separators.
KEY_SEPARATORS = frozenset("|+")
KEY_FIELDS = ("pathology", "occupation", "sector")


def has_key_separator(token: str) -> bool:
    """True when ``token`` contains a character reserved by identity keys."""
    return any(char in KEY_SEPARATORS for char in token)


class ErrorCode(str, Enum):
    """Record-level validation and parsing problems."""

    MAX_AGENTS_EXCEEDED = "MAX_AGENTS_EXCEEDED"
    NO_AGENTS = "NO_AGENTS"
    BAD_RESPONSIBILITY = "BAD_RESPONSIBILITY"
    BAD_DATE = "BAD_DATE"
    EMPTY_FIELD = "EMPTY_FIELD"
    SPARSE_AGENTS = "SPARSE_AGENTS"
    RESERVED_CHARACTER = "RESERVED_CHARACTER"
    MALFORMED_LINE = "MALFORMED_LINE"
    DUPLICATE_RECORD_ID = "DUPLICATE_RECORD_ID"


@dataclass(frozen=True)
class RecordError:
    """One violated rule, optionally naming the offending field."""

    code: ErrorCode
    field: Optional[str] = None

    def __str__(self) -> str:
        if self.field:
            return f"{self.code.value}({self.field})"
        return self.code.value


class ExposureDimension(str, Enum):
    """Kinds of occupational-exposure elements two OHPs can share."""

    AGENT = "agent"
    OCCUPATION = "occupation"
    SECTOR = "sector"

    @classmethod
    def parse(cls, value: Union[str, "ExposureDimension"]) -> "ExposureDimension":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            choices = ", ".join(dim.value for dim in cls)
            raise ValueError(f"unknown exposure dimension {value!r} (expected one of {choices})")

    @classmethod
    def parse_list(cls, text: str) -> FrozenSet["ExposureDimension"]:
        """Parse a comma separated list such as ``agent,occupation``."""
        return frozenset(cls.parse(part) for part in text.split(",") if part.strip())


ALL_DIMENSIONS = frozenset(ExposureDimension)


@dataclass(frozen=True)
class AgentExposure:
    """A noxious agent implicated in one OHP with its responsibility degree."""

    code: str
    responsibility: int

    @property
    def responsibility_label(self) -> str:
        return RESPONSIBILITY_LEVELS[self.responsibility]

    def to_dict(self) -> Dict[str, Any]:
        return {"code": self.code, "responsibility": self.responsibility}


@dataclass(frozen=True)
class OhpRecord:
    """A validated OHP report."""

    record_id: str
    reported_on: date
    center: str
    pathology: str
    occupation: str
    sector: str
    agents: Tuple[AgentExposure, ...]

    @property
    def agent_codes(self) -> Tuple[str, ...]:
        return tuple(agent.code for agent in self.agents)

    def to_dict(self) -> Dict[str, Any]:
        """Serialize to the canonical JSON Lines object."""
        return {
            "record_id": self.record_id,
            "reported_on": self.reported_on.isoformat(),
            "center": self.center,
            "pathology": self.pathology,
            "occupation": self.occupation,
            "sector": self.sector,
            "agents": [agent.to_dict() for agent in self.agents],
        }


@dataclass(frozen=True, order=True)
class OhpIdentity:
    """The part of an OHP that decides whether two reports are the same problem."""

    pathology: str
    agent_set: Tuple[str, ...]
    occupation: str
    sector: str
    _key: str = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        # Normalise so the identity does not depend on agent order or repeats.
        agent_set = tuple(sorted(set(self.agent_set)))
        object.__setattr__(self, "agent_set", agent_set)
        for token in (self.pathology, self.occupation, self.sector) + agent_set:
            if has_key_separator(token):
                raise ValueError(f"identity token {token!r} contains '|' or '+'")
        object.__setattr__(
            self, "_key", f"{self.pathology}|{'+'.join(agent_set)}|{self.occupation}|{self.sector}"
        )

    @property
    def key(self) -> str:
        """Stable string form, used as node key at disease level."""
        return self._key

    def elements(self, dimension: ExposureDimension) -> FrozenSet[str]:
        """Exposure elements of this identity along one dimension."""
        if dimension is ExposureDimension.AGENT:
            return frozenset(self.agent_set)
        if dimension is ExposureDimension.OCCUPATION:
            return frozenset((self.occupation,))
        return frozenset((self.sector,))


def _text(raw: Mapping[str, Any], name: str) -> Optional[str]:
    value = raw.get(name)
    if value is None or isinstance(value, (dict, list, bool)):
        return None
    text = str(value).strip()
    return text or None


def _parse_date(value: Any) -> Optional[date]:
    if isinstance(value, datetime):
        return value.date()
    if isinstance(value, date):
        return value
    if not isinstance(value, str):
        return None
    text = value.strip()
    # Strict YYYY-MM-DD; fromisoformat alone accepts more on newer Pythons.
    if len(text) != 10 or text[4] != "-" or text[7] != "-":
        return None
    try:
        return date.fromisoformat(text)
    except ValueError:
        return None


def _parse_responsibility(value: Any) -> Optional[int]:
    if isinstance(value, bool):
        return None
    if isinstance(value, int):
        degree = value
    elif isinstance(value, str) and value.strip().lstrip("-").isdigit():
        degree = int(value.strip())
    else:
        return None
    return degree if degree in RESPONSIBILITY_LEVELS else None


def validate_record(raw: Mapping[str, Any]) -> Union[OhpRecord, List[RecordError]]:
    """
    Validate a raw field mapping against the OHP record rules.

    Every violated rule is reported, not only the first one.

    Args:
        raw: Mapping with the schema fields (record_id, reported_on, center,
            pathology, occupation, sector, agents)

    Returns:
        OhpRecord when all rules hold, otherwise the list of RecordErrors
    """
    errors: List[RecordError] = []

    def report(error: RecordError):
        if error not in errors:
            errors.append(error)

    texts = {}
    for name in TEXT_FIELDS:
        texts[name] = _text(raw, name)
        if texts[name] is None:
            report(RecordError(ErrorCode.EMPTY_FIELD, name))
        elif name in KEY_FIELDS and has_key_separator(texts[name]):
            report(RecordError(ErrorCode.RESERVED_CHARACTER, name))

    reported_on = _parse_date(raw.get("reported_on"))
    if reported_on is None:
        report(RecordError(ErrorCode.BAD_DATE))

    raw_agents = raw.get("agents")
    agents: List[AgentExposure] = []
    if not isinstance(raw_agents, (list, tuple)) or len(raw_agents) == 0:
        report(RecordError(ErrorCode.NO_AGENTS))
        raw_agents = []
    elif len(raw_agents) > MAX_AGENTS:
        report(RecordError(ErrorCode.MAX_AGENTS_EXCEEDED))

    for entry in raw_agents:
        if isinstance(entry, AgentExposure):
            entry = entry.to_dict()
        if not isinstance(entry, Mapping):
            report(RecordError(ErrorCode.EMPTY_FIELD, "agent_code"))
            continue
        code = _text(entry, "code")
        degree = _parse_responsibility(entry.get("responsibility"))
        if code is None:
            report(RecordError(ErrorCode.EMPTY_FIELD, "agent_code"))
        elif has_key_separator(code):
            report(RecordError(ErrorCode.RESERVED_CHARACTER, "agent_code"))
        if degree is None:
            report(RecordError(ErrorCode.BAD_RESPONSIBILITY))
        if code is not None and degree is not None:
            agents.append(AgentExposure(code, degree))

    if errors:
        return errors

    return OhpRecord(
        record_id=texts["record_id"],
        reported_on=reported_on,
        center=texts["center"],
        pathology=texts["pathology"],
        occupation=texts["occupation"],
        sector=texts["sector"],
        agents=tuple(agents),
    )


def identity_of(record: OhpRecord) -> OhpIdentity:
    """
    Compute the identity of a validated record.

    Args:
        record: Validated OhpRecord

    Returns:
        OhpIdentity with the agents collapsed to a sorted set
    """
    return OhpIdentity(
        pathology=record.pathology,
        agent_set=record.agent_codes,
        occupation=record.occupation,
        sector=record.sector,
    )
