"""OHP domain model: records, identities and the pathology hierarchy."""
from .records import (
    MAX_AGENTS,
    ALL_DIMENSIONS,
    AgentExposure,
    ErrorCode,
    ExposureDimension,
    OhpIdentity,
    OhpRecord,
    RecordError,
    identity_of,
    validate_record,
)
from .hierarchy import PathologyHierarchy, PathologyLevel, pathology_at

__all__ = [
    'MAX_AGENTS',
    'ALL_DIMENSIONS',
    'AgentExposure',
    'ErrorCode',
    'ExposureDimension',
    'OhpIdentity',
    'OhpRecord',
    'RecordError',
    'identity_of',
    'validate_record',
    'PathologyHierarchy',
    'PathologyLevel',
    'pathology_at',
]
