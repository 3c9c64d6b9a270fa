"""
Readers and writers for OHP corpora in JSON Lines and CSV form.

Every input line ends up as an accepted record, a reject carrying its line
number, or a skipped blank line. Rejects never abort a run; only I/O problems
and a wrong CSV header are fatal.
"""

import csv
import io
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, BinaryIO, Dict, Iterable, List, Optional, Tuple, Union

try:
    from ..exceptions import BadHeaderError
    from ..ohp.records import (MAX_AGENTS, ErrorCode, OhpRecord, RecordError,
                               validate_record)
except ImportError:
    import sys
    import os
    sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    from exceptions import BadHeaderError
    from ohp.records import (MAX_AGENTS, ErrorCode, OhpRecord, RecordError,
                             validate_record)

logger = logging.getLogger(__name__)

BASE_COLUMNS = ["record_id", "reported_on", "center", "pathology", "occupation", "sector"]
AGENT_COLUMNS = [
    column
    for slot in range(1, MAX_AGENTS + 1)
    for column in (f"agent{slot}_code", f"agent{slot}_resp")
]
CSV_COLUMNS = BASE_COLUMNS + AGENT_COLUMNS


@dataclass(frozen=True)
class RejectReport:
    """A rejected input line and every rule it broke."""

    line_number: int
    record_id: Optional[str]
    errors: Tuple[RecordError, ...]

    def __post_init__(self):
        if self.line_number < 1:
            raise ValueError("line_number must be positive")
        if not self.errors:
            raise ValueError("a reject must carry at least one error")

    @property
    def codes(self) -> Tuple[str, ...]:
        return tuple(str(error) for error in self.errors)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "line_number": self.line_number,
            "record_id": self.record_id,
            "errors": list(self.codes),
        }


@dataclass
class ParseResult:
    """Outcome of parsing one corpus."""

    records: List[OhpRecord] = field(default_factory=list)
    rejects: List[RejectReport] = field(default_factory=list)
    warnings: List[RejectReport] = field(default_factory=list)
    blank_lines: int = 0
    total_lines: int = 0

    def __iter__(self):
        # Allows ``records, rejects = parse_jsonl(stream)``.
        return iter((self.records, self.rejects))

    def extend(self, other: "ParseResult") -> "ParseResult":
        """Append another result; line numbers keep referring to their own files."""
        self.records.extend(other.records)
        self.rejects.extend(other.rejects)
        self.warnings.extend(other.warnings)
        self.blank_lines += other.blank_lines
        self.total_lines += other.total_lines
        return self


class _DuplicateTracker:
    """Flags repeated record ids without rejecting the record."""

    def __init__(self, result: ParseResult):
        self.result = result
        self.seen = set()

    def accept(self, line_number: int, record: OhpRecord):
        if record.record_id in self.seen:
            logger.warning("Duplicate record_id %s at line %d", record.record_id, line_number)
            self.result.warnings.append(
                RejectReport(line_number, record.record_id,
                             (RecordError(ErrorCode.DUPLICATE_RECORD_ID),))
            )
        self.seen.add(record.record_id)
        self.result.records.append(record)


def _record_id_of(raw: Any) -> Optional[str]:
    if isinstance(raw, dict):
        value = raw.get("record_id")
        if value is not None and not isinstance(value, (dict, list)):
            return str(value).strip() or None
    return None


def parse_jsonl(stream: BinaryIO) -> ParseResult:
    """
    Parse a JSON Lines corpus.

    Args:
        stream: Binary stream of UTF-8 text, one JSON object per line

    Returns:
        ParseResult with accepted records and rejects in input order
    """
    result = ParseResult()
    duplicates = _DuplicateTracker(result)

    for line_number, raw_line in enumerate(stream, start=1):
        result.total_lines += 1
        if isinstance(raw_line, str):
            raw_line = raw_line.encode("utf-8")
        if not raw_line.strip():
            result.blank_lines += 1
            continue

        try:
            raw = json.loads(raw_line.decode("utf-8"))
        except (UnicodeDecodeError, ValueError) as exc:
            logger.warning("Malformed JSON at line %d: %s", line_number, exc)
            result.rejects.append(RejectReport(line_number, None, (RecordError(ErrorCode.MALFORMED_LINE),)))
            continue
        if not isinstance(raw, dict):
            result.rejects.append(RejectReport(line_number, None, (RecordError(ErrorCode.MALFORMED_LINE),)))
            continue

        outcome = validate_record(raw)
        if isinstance(outcome, OhpRecord):
            duplicates.accept(line_number, outcome)
        else:
            result.rejects.append(RejectReport(line_number, _record_id_of(raw), tuple(outcome)))

    logger.info("Parsed %d lines: %d accepted, %d rejected, %d blank",
                result.total_lines, len(result.records), len(result.rejects), result.blank_lines)
    return result


def _csv_row_to_raw(row: Dict[str, str]) -> Tuple[Dict[str, Any], List[RecordError]]:
    """Turn a CSV row into the JSON-shaped mapping, checking agent packing."""
    raw: Dict[str, Any] = {name: row[name] for name in BASE_COLUMNS}
    slots = []
    for slot in range(1, MAX_AGENTS + 1):
        code = row[f"agent{slot}_code"].strip()
        resp = row[f"agent{slot}_resp"].strip()
        slots.append((code, resp) if (code or resp) else None)

    problems: List[RecordError] = []
    used = [slot for slot in slots if slot is not None]
    # Dense packing: used slots must be exactly 1..k.
    if any(slot is None for slot in slots[:len(used)]):
        problems.append(RecordError(ErrorCode.SPARSE_AGENTS))

    raw["agents"] = [{"code": code, "responsibility": resp} for code, resp in used]
    return raw, problems


def _split_csv_line(raw_line: bytes, encoding: str = "utf-8") -> List[str]:
    """Decode one physical line and split it into cells."""
    text = raw_line.decode(encoding).rstrip("\r\n")
    if not text.strip():
        return []
    return next(csv.reader([text], strict=True))


def parse_csv(stream: BinaryIO) -> ParseResult:
    """
    Parse a CSV corpus with the canonical header.

    Lines are decoded one at a time, so an undecodable or malformed row is
    rejected on its own and the rows after it are still read. Quoted cells
    cannot span lines.

    Args:
        stream: Binary stream of UTF-8 CSV text

    Returns:
        ParseResult with accepted records and rejects in input order

    Raises:
        BadHeaderError: If the header row does not match the schema
    """
    result = ParseResult()
    duplicates = _DuplicateTracker(result)
    lines = iter(enumerate(stream, start=1))

    columns = None
    for _, raw_line in lines:
        if isinstance(raw_line, str):
            raw_line = raw_line.encode("utf-8")
        try:
            header = _split_csv_line(raw_line, "utf-8-sig")
        except (UnicodeDecodeError, csv.Error) as exc:
            raise BadHeaderError(f"unreadable header: {exc}")
        columns = [name.strip() for name in header]
        break
    if columns is None:
        return result

    if sorted(columns) != sorted(CSV_COLUMNS):
        missing = sorted(set(CSV_COLUMNS) - set(columns))
        extra = sorted(set(columns) - set(CSV_COLUMNS))
        raise BadHeaderError(f"CSV header mismatch (missing: {missing}, unexpected: {extra})")

    for line_number, raw_line in lines:
        result.total_lines += 1
        if isinstance(raw_line, str):
            raw_line = raw_line.encode("utf-8")
        try:
            cells = _split_csv_line(raw_line)
        except (UnicodeDecodeError, csv.Error) as exc:
            logger.warning("Malformed CSV at line %d: %s", line_number, exc)
            result.rejects.append(RejectReport(line_number, None, (RecordError(ErrorCode.MALFORMED_LINE),)))
            continue

        if not cells or all(not cell.strip() for cell in cells):
            result.blank_lines += 1
            continue
        if len(cells) != len(columns):
            result.rejects.append(RejectReport(line_number, None, (RecordError(ErrorCode.MALFORMED_LINE),)))
            continue

        row = dict(zip(columns, cells))
        raw, problems = _csv_row_to_raw(row)
        outcome = validate_record(raw)
        if isinstance(outcome, OhpRecord) and not problems:
            duplicates.accept(line_number, outcome)
            continue
        errors = list(problems)
        if not isinstance(outcome, OhpRecord):
            errors.extend(error for error in outcome if error not in errors)
        result.rejects.append(RejectReport(line_number, _record_id_of(raw), tuple(errors)))

    logger.info("Parsed %d CSV rows: %d accepted, %d rejected, %d blank",
                result.total_lines, len(result.records), len(result.rejects), result.blank_lines)
    return result


def read_corpus(path: Union[str, Path]) -> ParseResult:
    """
    Read a corpus file, choosing the parser from the file suffix.

    Args:
        path: ``.csv`` files use the CSV schema, everything else JSON Lines

    Returns:
        ParseResult
    """
    path = Path(path)
    logger.info("Reading corpus %s", path)
    with open(path, "rb") as stream:
        if path.suffix.lower() == ".csv":
            return parse_csv(stream)
        return parse_jsonl(stream)


def records_to_jsonl(records: Iterable[OhpRecord]) -> str:
    """Serialize records to canonical JSON Lines text."""
    return "".join(json.dumps(record.to_dict(), ensure_ascii=False) + "\n" for record in records)


def records_to_csv(records: Iterable[OhpRecord]) -> str:
    """Serialize records to the canonical CSV schema (agents packed densely)."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for record in records:
        row = [record.record_id, record.reported_on.isoformat(), record.center,
               record.pathology, record.occupation, record.sector]
        for slot in range(MAX_AGENTS):
            if slot < len(record.agents):
                agent = record.agents[slot]
                row.extend([agent.code, str(agent.responsibility)])
            else:
                row.extend(["", ""])
        writer.writerow(row)
    return buffer.getvalue()


def write_records(records: Iterable[OhpRecord], path: Union[str, Path]):
    """Write records to ``path`` as CSV when the suffix is ``.csv``, JSON Lines otherwise."""
    path = Path(path)
    text = records_to_csv(records) if path.suffix.lower() == ".csv" else records_to_jsonl(records)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)
