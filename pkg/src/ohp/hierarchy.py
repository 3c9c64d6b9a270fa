"""
Pathology-code hierarchy: category > sub-group > disease.

Without a table, codes are cut with a prefix rule that fits ICD-10-like codes
("C34.1" -> sub-group "C34" -> category "C"). A TSV table overrides the rule.
"""

import logging
from enum import Enum
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

import pandas as pd

try:
    from ..exceptions import HierarchyFormatError, UnknownCodeError
except ImportError:
    import sys
    import os
    sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    from exceptions import HierarchyFormatError, UnknownCodeError

logger = logging.getLogger(__name__)

HIERARCHY_COLUMNS = ("code", "subgroup", "category")


class PathologyLevel(str, Enum):
    """Resolution at which pathologies are grouped into network nodes."""

    CATEGORY = "category"
    SUBGROUP = "subgroup"
    DISEASE = "disease"

    @property
    def rank(self) -> int:
        """0 for the coarsest level, 2 for the finest."""
        return _LEVEL_RANK[self]

    def is_coarser_than(self, other: "PathologyLevel") -> bool:
        return self.rank < other.rank

    @classmethod
    def parse(cls, value: Union[str, "PathologyLevel"]) -> "PathologyLevel":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            choices = ", ".join(level.value for level in cls)
            raise ValueError(f"unknown pathology level {value!r} (expected one of {choices})")


_LEVEL_RANK = {
    PathologyLevel.CATEGORY: 0,
    PathologyLevel.SUBGROUP: 1,
    PathologyLevel.DISEASE: 2,
}


class PathologyHierarchy:
    """Explicit code -> sub-group -> category table."""

    def __init__(self, rows: Dict[str, Tuple[str, str]]):
        """
        Initialize the hierarchy.

        Args:
            rows: Mapping of full code to its (subgroup, category) pair
        """
        self._rows = dict(rows)
        # Sub-group and category codes may be looked up themselves once a
        # graph has been coarsened, so they resolve to their own ancestors.
        self._subgroups: Dict[str, str] = {}
        self._categories = set()
        for code, (subgroup, category) in sorted(self._rows.items()):
            if self._subgroups.setdefault(subgroup, category) != category:
                raise HierarchyFormatError(
                    f"sub-group {subgroup!r} of {code!r} belongs to both {self._subgroups[subgroup]!r} and {category!r}"
                )
            self._categories.add(category)

    def __len__(self) -> int:
        return len(self._rows)

    def __contains__(self, code: str) -> bool:
        return code in self._rows or code in self._subgroups or code in self._categories

    def ancestor(self, code: str, level: PathologyLevel) -> str:
        """
        Find the ancestor of a code at the requested level.

        Args:
            code: Pathology code (full code, sub-group or category)
            level: Target level

        Returns:
            Ancestor code

        Raises:
            UnknownCodeError: If the code is not part of the table
        """
        if code in self._rows:
            subgroup, category = self._rows[code]
        elif code in self._subgroups:
            subgroup, category = code, self._subgroups[code]
        elif code in self._categories:
            subgroup, category = code, code
        else:
            raise UnknownCodeError(f"pathology code {code!r} is not in the hierarchy table")

        if level is PathologyLevel.CATEGORY:
            return category
        if level is PathologyLevel.SUBGROUP:
            return subgroup
        return code

    @classmethod
    def from_tsv(cls, path: Union[str, Path]) -> "PathologyHierarchy":
        """
        Load a hierarchy table (UTF-8 TSV, header ``code subgroup category``).

        Args:
            path: Path to the TSV file

        Returns:
            PathologyHierarchy instance
        """
        try:
            frame = pd.read_csv(path, sep="\t", dtype=str, keep_default_na=False, encoding="utf-8")
        except (OSError, UnicodeDecodeError, pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
            raise HierarchyFormatError(f"cannot read hierarchy table {path}: {exc}")

        columns = [str(c).strip().lower() for c in frame.columns]
        if tuple(columns) != HIERARCHY_COLUMNS:
            raise HierarchyFormatError(
                f"hierarchy header must be {' / '.join(HIERARCHY_COLUMNS)}, got {' / '.join(columns)}"
            )
        frame.columns = list(HIERARCHY_COLUMNS)
        frame = frame.apply(lambda column: column.str.strip())

        rows: Dict[str, Tuple[str, str]] = {}
        for line_offset, row in enumerate(frame.itertuples(index=False), start=2):
            if not row.code or not row.subgroup or not row.category:
                logger.warning("Skipping incomplete hierarchy row at line %d", line_offset)
                continue
            if row.code in rows and rows[row.code] != (row.subgroup, row.category):
                raise HierarchyFormatError(f"code {row.code!r} has conflicting ancestors (line {line_offset})")
            rows[row.code] = (row.subgroup, row.category)

        logger.info("Loaded %d pathology codes from %s", len(rows), path)
        return cls(rows)


def _prefix_subgroup(code: str) -> str:
    prefix = code.split(".", 1)[0]
    return prefix if prefix else code


def _prefix_category(code: str) -> str:
    subgroup = _prefix_subgroup(code)
    for char in subgroup:
        if char.isalpha():
            return char
    return subgroup


def pathology_at(code: str, level: PathologyLevel,
                 hierarchy: Optional[PathologyHierarchy] = None) -> str:
    """
    Project a pathology code onto a hierarchy level.

    Args:
        code: Pathology code
        level: Target level
        hierarchy: Optional explicit table; the prefix rule applies without one

    Returns:
        Code at the requested level
    """
    if not code:
        raise ValueError("pathology code must be non-empty")
    level = PathologyLevel.parse(level)
    if level is PathologyLevel.DISEASE:
        return code
    if hierarchy is not None:
        return hierarchy.ancestor(code, level)
    if level is PathologyLevel.SUBGROUP:
        return _prefix_subgroup(code)
    return _prefix_category(code)
