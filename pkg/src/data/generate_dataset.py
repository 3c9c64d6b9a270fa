"""
Synthetic OHP Corpus Generator

This module generates seeded synthetic occupational-health-problem reports,
with Zipf-skewed element popularity and optional planted associations that
appear at chosen dates (useful to exercise emergence detection).

Randomness comes from numpy's PCG64 bit generator (128-bit state LCG with a
permuted 64-bit output), seeded with the configured 64-bit seed, so a given
configuration always yields the same corpus.
"""

import json
import logging
import string
import sys
from dataclasses import dataclass, field, fields, replace
from datetime import date, timedelta
from pathlib import Path
from typing import Any, List, Mapping, Sequence, Tuple, Union

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

try:
    from ..exceptions import ConfigError
    from ..ohp.records import (MAX_AGENTS, AgentExposure, OhpIdentity, OhpRecord, has_key_separator,
                               identity_of)
except ImportError:
    import os
    sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    from exceptions import ConfigError
    from ohp.records import (MAX_AGENTS, AgentExposure, OhpIdentity, OhpRecord, has_key_separator,
                             identity_of)

logger = logging.getLogger(__name__)

MAX_PATHOLOGIES = 26 * 100
MAX_REDRAWS = 100


def _to_date(value: Union[str, date]) -> date:
    if isinstance(value, date):
        return value
    try:
        return date.fromisoformat(str(value))
    except ValueError:
        raise ConfigError(f"invalid date {value!r}")


@dataclass(frozen=True)
class Plant:
    """
    An identity injected into the corpus from a start date on.

    Args:
        pathology: Pathology code of the planted OHP
        agents: Agent codes (1 to 5)
        occupation: Occupation token
        sector: Sector token
        start: Date of the first planted records
        records_per_window: Records added in each planted window
        windows: Number of consecutive windows receiving records
        window_days: Spacing between planted windows
    """

    pathology: str
    agents: Tuple[str, ...]
    occupation: str
    sector: str
    start: date
    records_per_window: int = 3
    windows: int = 1
    window_days: int = 30
    center: str = "CTR-PLANT"

    def __post_init__(self):
        # Repeated codes collapse, as they do in the identity.
        object.__setattr__(self, "agents", tuple(dict.fromkeys(self.agents)))
        object.__setattr__(self, "start", _to_date(self.start))
        if not 1 <= len(self.agents) <= MAX_AGENTS or not all(self.agents):
            raise ConfigError(f"a plant needs 1 to {MAX_AGENTS} non-empty agent codes")
        if not self.pathology or not self.occupation or not self.sector:
            raise ConfigError("a plant needs a pathology, an occupation and a sector")
        if any(has_key_separator(token) for token in (self.pathology, self.occupation, self.sector) + self.agents):
            raise ConfigError("plant tokens cannot contain '|' or '+'")
        if self.records_per_window < 1 or self.windows < 1 or self.window_days < 1:
            raise ConfigError("plant counts and spacing must be positive")

    @property
    def identity(self) -> OhpIdentity:
        return OhpIdentity(self.pathology, self.agents, self.occupation, self.sector)

    @classmethod
    def from_dict(cls, raw: Mapping[str, Any]) -> "Plant":
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown plant fields: {sorted(unknown)}")
        values = dict(raw)
        if isinstance(values.get("agents"), str):
            values["agents"] = values["agents"].split("+")
        return cls(**values)

    @classmethod
    def parse(cls, text: str) -> "Plant":
        """Parse ``pathology|agent+agent|occupation|sector|YYYY-MM-DD[|records_per_window]``."""
        parts = text.split("|")
        if len(parts) not in (5, 6):
            raise ConfigError(f"cannot parse plant {text!r}")
        values = {
            "pathology": parts[0], "agents": parts[1].split("+"), "occupation": parts[2],
            "sector": parts[3], "start": parts[4],
        }
        if len(parts) == 6:
            try:
                values["records_per_window"] = int(parts[5])
            except ValueError:
                raise ConfigError(f"invalid plant record count {parts[5]!r}")
        return cls(**values)


@dataclass(frozen=True)
class SynthConfig:
    """Parameters of a synthetic corpus."""

    seed: int = 42
    n_records: int = 1000
    n_pathologies: int = 200
    n_agents: int = 300
    n_occupations: int = 80
    n_sectors: int = 20
    n_centers: int = 30
    start_date: date = date(2001, 1, 1)
    end_date: date = date(2001, 12, 31)
    agent_count_probs: Tuple[float, ...] = (0.40, 0.30, 0.15, 0.10, 0.05)
    skew: float = 1.0
    plants: Tuple[Plant, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "start_date", _to_date(self.start_date))
        object.__setattr__(self, "end_date", _to_date(self.end_date))
        object.__setattr__(self, "agent_count_probs", tuple(float(p) for p in self.agent_count_probs))
        object.__setattr__(self, "plants", tuple(
            plant if isinstance(plant, Plant) else Plant.from_dict(plant) for plant in self.plants
        ))

        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if self.n_records < 1:
            raise ConfigError("n_records must be positive")
        for name in ("n_pathologies", "n_agents", "n_occupations", "n_sectors", "n_centers"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        if self.n_pathologies > MAX_PATHOLOGIES:
            raise ConfigError(f"n_pathologies cannot exceed {MAX_PATHOLOGIES}")
        if self.start_date > self.end_date:
            raise ConfigError("date range is empty")
        if self.skew < 0:
            raise ConfigError("skew must be >= 0")

        probs = self.agent_count_probs
        if len(probs) != MAX_AGENTS or any(p < 0 for p in probs) or abs(sum(probs) - 1.0) > 1e-9:
            raise ConfigError(f"agent_count_probs must be {MAX_AGENTS} non-negative values summing to 1")
        largest = max(k for k, p in enumerate(probs, start=1) if p > 0)
        if self.n_agents < largest:
            raise ConfigError(f"n_agents must be at least {largest} to draw distinct agents")

    @classmethod
    def from_dict(cls, raw: Mapping[str, Any]) -> "SynthConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown synthetic config fields: {sorted(unknown)}")
        values = dict(raw)
        try:
            if "plants" in values:
                values["plants"] = tuple(Plant.from_dict(plant) for plant in values["plants"])
            return cls(**values)
        except ConfigError:
            raise
        except (TypeError, ValueError, AttributeError) as exc:
            raise ConfigError(f"invalid synthetic config: {exc}")

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "SynthConfig":
        """
        Load a configuration from a TOML (``.toml``) or JSON file.

        Args:
            path: Configuration file

        Returns:
            SynthConfig
        """
        path = Path(path)
        try:
            with open(path, "rb") as handle:
                if path.suffix.lower() == ".toml":
                    raw = tomllib.load(handle)
                else:
                    raw = json.load(handle)
        except (tomllib.TOMLDecodeError, json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise ConfigError(f"cannot parse {path}: {exc}")
        if not isinstance(raw, dict):
            raise ConfigError(f"{path} must hold a table of settings")
        return cls.from_dict(raw)

    def with_overrides(self, **overrides) -> "SynthConfig":
        """Copy with every non-None override applied (command-line flags win over files)."""
        values = {name: value for name, value in overrides.items() if value is not None}
        return replace(self, **values)


def zipf_weights(size: int, skew: float) -> np.ndarray:
    """
    Popularity weights proportional to 1 / rank**skew (uniform when skew is 0).

    Args:
        size: Vocabulary size
        skew: Zipf exponent

    Returns:
        Probability vector of length ``size``
    """
    ranks = np.arange(1, size + 1, dtype=np.float64)
    weights = np.power(ranks, -skew)
    return weights / weights.sum()


def pathology_vocabulary(size: int) -> List[str]:
    """ICD-10-like codes: 100 sub-groups per letter, 10 diseases per sub-group."""
    letters = string.ascii_uppercase
    return [f"{letters[i // 100]}{(i // 10) % 100:02d}.{i % 10}" for i in range(size)]


def token_vocabulary(prefix: str, size: int) -> List[str]:
    width = max(2, len(str(size - 1)))
    return [f"{prefix}{i:0{width}d}" for i in range(size)]


class SyntheticOhpGenerator:
    """Generate synthetic OHP reports with Zipf-skewed exposure elements."""

    def __init__(self, config: SynthConfig):
        """
        Initialize the generator with its configuration.

        Args:
            config: Synthetic corpus configuration (the seed lives there)
        """
        self.config = config
        self.rng = np.random.Generator(np.random.PCG64(config.seed))
        self.pathologies = pathology_vocabulary(config.n_pathologies)
        self.agents = token_vocabulary("AG", config.n_agents)
        self.occupations = token_vocabulary("OCC", config.n_occupations)
        self.sectors = token_vocabulary("SEC", config.n_sectors)
        self.centers = token_vocabulary("CTR", config.n_centers)
        self.agent_weights = zipf_weights(config.n_agents, config.skew)
        self.agent_cdf = np.cumsum(self.agent_weights)

    def _draw_agents(self, count: int, responsibilities: Sequence[int]) -> Tuple[AgentExposure, ...]:
        # Weighted draws without replacement: repeats are redrawn.
        picks: List[int] = []
        while len(picks) < count:
            draws = np.searchsorted(self.agent_cdf, self.rng.random(count - len(picks)), side="right")
            for index in np.minimum(draws, self.config.n_agents - 1):
                if int(index) not in picks and len(picks) < count:
                    picks.append(int(index))
        return tuple(AgentExposure(self.agents[i], int(responsibilities[j])) for j, i in enumerate(picks))

    def generate_background(self) -> List[OhpRecord]:
        """
        Generate the ``n_records`` ordinary reports.

        Returns:
            Records sorted by date, with ids numbered in that order
        """
        cfg = self.config
        n = cfg.n_records
        days = (cfg.end_date - cfg.start_date).days + 1

        offsets = self.rng.integers(0, days, size=n)
        pathology_idx = self.rng.choice(cfg.n_pathologies, size=n, p=zipf_weights(cfg.n_pathologies, cfg.skew))
        occupation_idx = self.rng.choice(cfg.n_occupations, size=n, p=zipf_weights(cfg.n_occupations, cfg.skew))
        sector_idx = self.rng.choice(cfg.n_sectors, size=n, p=zipf_weights(cfg.n_sectors, cfg.skew))
        center_idx = self.rng.integers(0, cfg.n_centers, size=n)
        agent_counts = self.rng.choice(np.arange(1, MAX_AGENTS + 1), size=n, p=np.asarray(cfg.agent_count_probs))
        # Responsibility 0 (doubtful) is left to hand-made fixtures.
        responsibilities = self.rng.integers(1, 4, size=(n, MAX_AGENTS))

        planted = {plant.identity for plant in cfg.plants}
        order = np.argsort(offsets, kind="stable")
        records = []
        for position, i in enumerate(order, start=1):
            agents = self._draw_agents(int(agent_counts[i]), responsibilities[i])
            record = OhpRecord(
                record_id=f"OHP{position:07d}",
                reported_on=cfg.start_date + timedelta(days=int(offsets[i])),
                center=self.centers[center_idx[i]],
                pathology=self.pathologies[pathology_idx[i]],
                occupation=self.occupations[occupation_idx[i]],
                sector=self.sectors[sector_idx[i]],
                agents=agents,
            )
            attempts = 0
            # Planted identities must first appear at their own start dates.
            while planted and identity_of(record) in planted:
                if attempts == MAX_REDRAWS:
                    raise ConfigError(f"background records keep matching planted identity "
                                      f"{identity_of(record).key}; enlarge the vocabularies")
                record = replace(record, agents=self._draw_agents(len(agents), responsibilities[i]))
                attempts += 1
            records.append(record)
        return records

    def generate_plants(self) -> List[OhpRecord]:
        """Generate the records of every planted identity."""
        records = []
        for number, plant in enumerate(self.config.plants, start=1):
            serial = 0
            for window in range(plant.windows):
                day = plant.start + timedelta(days=window * plant.window_days)
                for _ in range(plant.records_per_window):
                    serial += 1
                    degrees = self.rng.integers(1, 4, size=len(plant.agents))
                    records.append(OhpRecord(
                        record_id=f"PLANT{number:02d}-{serial:05d}",
                        reported_on=day,
                        center=plant.center,
                        pathology=plant.pathology,
                        occupation=plant.occupation,
                        sector=plant.sector,
                        agents=tuple(AgentExposure(code, int(d)) for code, d in zip(plant.agents, degrees)),
                    ))
        return records

    def generate(self) -> List[OhpRecord]:
        """
        Generate the full corpus: background reports plus planted ones.

        Returns:
            Records sorted by (date, record id)
        """
        records = self.generate_background() + self.generate_plants()
        records.sort(key=lambda record: (record.reported_on, record.record_id))
        logger.info("Generated %d records (%d planted) with seed %d",
                    len(records), len(records) - self.config.n_records, self.config.seed)
        return records


def generate(config: SynthConfig) -> List[OhpRecord]:
    """
    Generate a synthetic corpus.

    Args:
        config: Synthetic corpus configuration

    Returns:
        Records sorted by (date, record id)
    """
    return SyntheticOhpGenerator(config).generate()
