"""
Programmed surveillance of identified OHP groups: record counts per node key
and per window, with the baseline as the first column.
"""

from typing import Iterable, Optional, Sequence

import pandas as pd

try:
    from ..ohp.hierarchy import PathologyHierarchy
    from ..ohp.records import OhpRecord, identity_of
    from ..network.exposome import node_key_for
    from .events import SurveillanceConfig
except ImportError:
    import sys
    import os
    sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    from ohp.hierarchy import PathologyHierarchy
    from ohp.records import OhpRecord, identity_of
    from network.exposome import node_key_for
    from surveillance.events import SurveillanceConfig

BASELINE_COLUMN = "baseline"


def group_trends(records: Iterable[OhpRecord], config: SurveillanceConfig,
                 keys: Optional[Sequence[str]] = None,
                 hierarchy: Optional[PathologyHierarchy] = None) -> pd.DataFrame:
    """
    Count records per node key and surveillance window.

    Args:
        records: Validated records
        config: Surveillance configuration (level, baseline end, window length)
        keys: Node keys to watch; every key seen when omitted
        hierarchy: Optional explicit pathology hierarchy

    Returns:
        DataFrame indexed by node key; columns are ``baseline`` followed by
        the first day (ISO date) of each window that holds records
    """
    rows = []
    for record in records:
        key = node_key_for(identity_of(record), config.graph.level, hierarchy)
        if record.reported_on <= config.baseline_end:
            window = BASELINE_COLUMN
        else:
            window = config.window_of(record.reported_on)[0].isoformat()
        rows.append((key, window))

    if not rows:
        table = pd.DataFrame(columns=[BASELINE_COLUMN], dtype="int64")
        if keys is not None:
            table = table.reindex(index=list(keys), fill_value=0)
        table.index.name = "node"
        return table.sort_index().astype("int64")

    frame = pd.DataFrame(rows, columns=["node", "window"])
    table = frame.groupby(["node", "window"]).size().unstack(fill_value=0)
    windows = sorted(column for column in table.columns if column != BASELINE_COLUMN)
    table = table.reindex(columns=[BASELINE_COLUMN] + windows, fill_value=0)
    if keys is not None:
        table = table.reindex(index=list(keys), fill_value=0)
    table = table.sort_index().astype("int64")
    table.index.name = "node"
    table.columns.name = None
    return table
