"""
Hypothesis strategies for OHP records, identities and ledgers.

Vocabularies are small on purpose so that generated corpora share elements
and produce edges.
"""

import os
import sys
from datetime import date

from hypothesis import strategies as st

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from ohp.records import AgentExposure, OhpIdentity, OhpRecord
from ingestion.ledger import ledger_from_weights

PATHOLOGIES = ["C34.1", "C34.9", "C45.0", "C15.2", "J61", "J62.8", "L23.5", "L24.0", "G62.2"]
AGENTS = [f"AG{i:02d}" for i in range(12)]
OCCUPATIONS = [f"OCC{i}" for i in range(6)]
SECTORS = [f"SEC{i}" for i in range(4)]
START = date(2001, 1, 1)
END = date(2002, 12, 31)

pathologies = st.sampled_from(PATHOLOGIES)
occupations = st.sampled_from(OCCUPATIONS)
sectors = st.sampled_from(SECTORS)
agent_sets = st.lists(st.sampled_from(AGENTS), min_size=1, max_size=5, unique=True)


@st.composite
def identities(draw) -> OhpIdentity:
    return OhpIdentity(draw(pathologies), tuple(draw(agent_sets)), draw(occupations), draw(sectors))


@st.composite
def ledgers(draw, max_size: int = 40):
    weights = draw(st.dictionaries(identities(), st.integers(min_value=1, max_value=4), max_size=max_size))
    return ledger_from_weights(weights, START)


@st.composite
def records(draw, record_id: str = "R00000", start: date = START, end: date = END) -> OhpRecord:
    codes = draw(agent_sets)
    agents = tuple(AgentExposure(code, draw(st.integers(min_value=0, max_value=3))) for code in codes)
    return OhpRecord(
        record_id=record_id,
        reported_on=draw(st.dates(min_value=start, max_value=end)),
        center=draw(st.sampled_from(["CTR01", "CTR02", "CTR03"])),
        pathology=draw(pathologies),
        occupation=draw(occupations),
        sector=draw(sectors),
        agents=agents,
    )


@st.composite
def record_streams(draw, max_size: int = 60, start: date = START, end: date = END):
    """Records with unique ids ``R00001, R00002, ...``."""
    size = draw(st.integers(min_value=0, max_value=max_size))
    return [draw(records(f"R{i:05d}", start, end)) for i in range(1, size + 1)]


def valid_raw_record(**overrides) -> dict:
    """A raw mapping that passes validation, with fields replaced by ``overrides``."""
    raw = {
        "record_id": "R00001",
        "reported_on": "2001-03-14",
        "center": "CTR01",
        "pathology": "C34.1",
        "occupation": "OCC1",
        "sector": "SEC1",
        "agents": [{"code": "AG01", "responsibility": 2}],
    }
    raw.update(overrides)
    return raw
