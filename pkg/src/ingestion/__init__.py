"""Corpus ingestion: parsing with reject reporting and identity folding."""
from .parsers import (
    CSV_COLUMNS,
    ParseResult,
    RejectReport,
    parse_csv,
    parse_jsonl,
    read_corpus,
    records_to_csv,
    records_to_jsonl,
    write_records,
)
from .ledger import IdentityLedger, LedgerEntry, fold_identities, ledger_from_weights

__all__ = [
    'CSV_COLUMNS',
    'ParseResult',
    'RejectReport',
    'parse_csv',
    'parse_jsonl',
    'read_corpus',
    'records_to_csv',
    'records_to_jsonl',
    'write_records',
    'IdentityLedger',
    'LedgerEntry',
    'fold_identities',
    'ledger_from_weights',
]
