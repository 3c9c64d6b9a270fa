"""
Exception hierarchy for the exposome toolkit.

Record-level validation problems are not exceptions (see ``ohp.records.RecordError``);
these classes cover failures that stop an operation.
"""


class ExposomeError(ValueError):
    """Base class for all fatal exposome errors."""

    code = "EXPOSOME_ERROR"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)
        self.message = message or self.code

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


class UnknownCodeError(ExposomeError):
    """A pathology code is absent from the supplied hierarchy table."""

    code = "UNKNOWN_CODE"


class LevelNotCoarserError(ExposomeError):
    """Aggregation was asked for a level that is not coarser than the source."""

    code = "LEVEL_NOT_COARSER"


class ConfigMismatchError(ExposomeError):
    """Two graphs built with different configurations were compared."""

    code = "CONFIG_MISMATCH"


class BadHeaderError(ExposomeError):
    """A CSV corpus does not carry the expected header row."""

    code = "BAD_HEADER"


class HierarchyFormatError(ExposomeError):
    """A pathology hierarchy table cannot be read."""

    code = "BAD_HIERARCHY"


class ConfigError(ExposomeError):
    """A configuration object violates its invariants."""

    code = "BAD_CONFIG"


class GraphFormatError(ExposomeError):
    """A graph document cannot be read back."""

    code = "BAD_GRAPH"
