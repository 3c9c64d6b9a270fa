"""
Test suite for the synthetic OHP corpus generator
"""

import unittest
import sys
import os
import json
import tempfile
import time
from collections import Counter
from datetime import date

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

# Add src directory to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from data.generate_dataset import Plant, SynthConfig, SyntheticOhpGenerator, generate, zipf_weights
from exceptions import ConfigError
from ingestion.ledger import fold_identities
from ingestion.parsers import records_to_jsonl
from network.exposome import GraphConfig, build_graph, node_key_for
from ohp.hierarchy import PathologyLevel
from ohp.records import OhpRecord, identity_of, validate_record
from surveillance.detector import replay
from surveillance.events import EmergenceKind, SurveillanceConfig

TOML_CONFIG = """\
seed = 7
n_records = 50
start_date = 2003-01-01
end_date = 2003-06-30
agent_count_probs = [0.5, 0.5, 0.0, 0.0, 0.0]

[[plants]]
pathology = "C45.0"
agents = ["ASB"]
occupation = "INSULATOR"
sector = "SHIPYARD"
start = 2003-05-01
records_per_window = 2
"""


@st.composite
def synth_configs(draw):
    weights = draw(st.lists(st.integers(min_value=0, max_value=4), min_size=5, max_size=5)
                   .filter(lambda values: any(values)))
    total = sum(weights)
    largest = max(k for k, w in enumerate(weights, start=1) if w)
    start = draw(st.dates(min_value=date(2000, 1, 1), max_value=date(2010, 1, 1)))
    end = draw(st.dates(min_value=start, max_value=date(2012, 1, 1)))
    return SynthConfig(
        seed=draw(st.integers(min_value=0, max_value=2 ** 64 - 1)),
        n_records=draw(st.integers(min_value=1, max_value=40)),
        n_pathologies=draw(st.integers(min_value=1, max_value=30)),
        n_agents=draw(st.integers(min_value=largest, max_value=30)),
        n_occupations=draw(st.integers(min_value=1, max_value=10)),
        n_sectors=draw(st.integers(min_value=1, max_value=10)),
        n_centers=draw(st.integers(min_value=1, max_value=5)),
        start_date=start,
        end_date=end,
        agent_count_probs=tuple(w / total for w in weights),
        skew=draw(st.floats(min_value=0.0, max_value=3.0)),
    )


class TestGenerator(unittest.TestCase):
    """Test corpus generation."""

    def test_same_seed_same_corpus(self):
        config = SynthConfig(seed=42, n_records=300)
        self.assertEqual(records_to_jsonl(generate(config)), records_to_jsonl(generate(config)))

    def test_different_seed_different_corpus(self):
        first = records_to_jsonl(generate(SynthConfig(seed=1, n_records=50)))
        second = records_to_jsonl(generate(SynthConfig(seed=2, n_records=50)))
        self.assertNotEqual(first, second)

    def test_small_corpus_is_valid(self):
        records = generate(SynthConfig(n_records=10))
        self.assertEqual(len(records), 10)
        for record in records:
            self.assertEqual(validate_record(record.to_dict()), record)

    def test_ids_follow_dates(self):
        records = generate(SynthConfig(n_records=100))
        self.assertEqual(records[0].record_id, "OHP0000001")
        self.assertEqual(records, sorted(records, key=lambda r: (r.reported_on, r.record_id)))
        self.assertTrue(all(SynthConfig().start_date <= r.reported_on <= SynthConfig().end_date for r in records))

    def test_responsibility_range(self):
        degrees = {agent.responsibility for record in generate(SynthConfig(n_records=500)) for agent in record.agents}
        self.assertEqual(degrees, {1, 2, 3})

    def test_uniform_popularity_without_skew(self):
        # Chi-square over 10 sectors (9 degrees of freedom); 40 is far above the 0.999 quantile (27.9).
        records = generate(SynthConfig(n_records=20000, n_sectors=10, skew=0.0))
        counts = np.array([Counter(r.sector for r in records)[f"SEC{i:02d}"] for i in range(10)])
        expected = len(records) / 10
        chi_square = float(((counts - expected) ** 2 / expected).sum())
        self.assertLess(chi_square, 40.0)

    def test_skew_favours_low_ranks(self):
        records = generate(SynthConfig(n_records=5000, n_occupations=20, skew=1.5))
        counts = Counter(r.occupation for r in records)
        self.assertGreater(counts["OCC00"], 5 * counts.get("OCC19", 0))

    def test_zipf_weights(self):
        weights = zipf_weights(4, 1.0)
        self.assertAlmostEqual(float(weights.sum()), 1.0)
        self.assertAlmostEqual(float(weights[0] / weights[1]), 2.0)
        self.assertTrue(np.allclose(zipf_weights(5, 0.0), 0.2))

    @settings(max_examples=60, deadline=None)
    @given(synth_configs())
    def test_any_valid_config_gives_valid_records(self, config):
        records = SyntheticOhpGenerator(config).generate()
        self.assertEqual(len(records), config.n_records)
        for record in records:
            self.assertIsInstance(validate_record(record.to_dict()), OhpRecord)


class TestPlants(unittest.TestCase):
    """Test planted identities."""

    def setUp(self):
        self.plant = Plant("Z99.9", ("AG0001", "AG0002"), "OCC001", "SEC01", date(2002, 3, 15),
                           records_per_window=4, windows=2, window_days=30)
        self.config = SynthConfig(seed=42, n_records=400, end_date=date(2002, 6, 30), plants=(self.plant,))

    def test_planted_records(self):
        records = generate(self.config)
        planted = [r for r in records if r.record_id.startswith("PLANT")]
        self.assertEqual(len(records), 400 + 8)
        self.assertEqual(len(planted), 8)
        self.assertEqual({r.reported_on for r in planted}, {date(2002, 3, 15), date(2002, 4, 14)})
        self.assertTrue(all(identity_of(r) == self.plant.identity for r in planted))

    def test_plant_first_appears_at_start(self):
        records = generate(self.config)
        first = min(r.reported_on for r in records if identity_of(r) == self.plant.identity)
        self.assertEqual(first, self.plant.start)

    def test_replay_reports_the_plant(self):
        records = generate(self.config)
        surveillance = SurveillanceConfig(GraphConfig(), date(2002, 1, 31), window_days=30)
        key = node_key_for(self.plant.identity, PathologyLevel.DISEASE)
        events = [e for e in replay(records, surveillance)
                  if e.kind is EmergenceKind.NEW_NODE and e.subject == (key,)]
        self.assertEqual(len(events), 1)
        start, end = surveillance.window_of(self.plant.start)
        self.assertEqual((events[0].window_start, events[0].window_end), (start, end))

    def test_parse(self):
        plant = Plant.parse("C45.0|ASB+SIL|INSULATOR|SHIPYARD|2003-05-01|5")
        self.assertEqual(plant.agents, ("ASB", "SIL"))
        self.assertEqual(plant.start, date(2003, 5, 1))
        self.assertEqual(plant.records_per_window, 5)
        with self.assertRaises(ConfigError):
            Plant.parse("C45.0|ASB|INSULATOR")
        with self.assertRaises(ConfigError):
            Plant.parse("C45.0|A+B+C+D+E+F|INSULATOR|SHIPYARD|2003-05-01")

    def test_repeated_agents_collapse(self):
        plant = Plant.parse("C45.0|A+A+B+C+D+E|OCC|SEC|2001-06-01")
        self.assertEqual(plant.agents, ("A", "B", "C", "D", "E"))
        records = generate(SynthConfig(seed=3, n_records=20, plants=(plant,)))
        planted = [r for r in records if r.record_id.startswith("PLANT")]
        self.assertEqual(len(planted), 3)
        for record in planted:
            self.assertIsInstance(validate_record(record.to_dict()), OhpRecord)

    def test_separator_in_plant_token(self):
        with self.assertRaises(ConfigError):
            Plant("C45.0", ("A|B",), "OCC", "SEC", date(2001, 6, 1))
        with self.assertRaises(ConfigError):
            SynthConfig.from_dict({"plants": [{"pathology": "C45.0", "agents": ["ASB"], "occupation": "A+B",
                                               "sector": "SEC", "start": "2001-06-01"}]})

    def test_background_that_cannot_avoid_a_plant(self):
        # A one-word vocabulary only ever produces the planted identity.
        plant = Plant("A00.0", ("AG00",), "OCC00", "SEC00", date(2001, 6, 1))
        config = SynthConfig(n_records=5, n_pathologies=1, n_agents=1, n_occupations=1, n_sectors=1,
                             agent_count_probs=(1.0, 0.0, 0.0, 0.0, 0.0), plants=(plant,))
        with self.assertRaises(ConfigError):
            generate(config)


class TestSynthConfig(unittest.TestCase):
    """Test configuration validation and loading."""

    def test_invalid_configs(self):
        cases = [
            dict(agent_count_probs=(0.5, 0.5, 0.5, 0.0, 0.0)),
            dict(agent_count_probs=(1.0,)),
            dict(start_date=date(2002, 1, 1), end_date=date(2001, 1, 1)),
            dict(n_records=0),
            dict(n_agents=3),
            dict(skew=-1.0),
            dict(seed=-1),
            dict(seed=2 ** 64),
        ]
        for overrides in cases:
            with self.subTest(**{k: str(v) for k, v in overrides.items()}):
                with self.assertRaises(ConfigError):
                    SynthConfig(**overrides)

    def test_toml_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'synth.toml')
            with open(path, 'w', encoding='utf-8') as handle:
                handle.write(TOML_CONFIG)
            config = SynthConfig.from_file(path)
        self.assertEqual(config.seed, 7)
        self.assertEqual(config.start_date, date(2003, 1, 1))
        self.assertEqual(config.plants[0].agents, ("ASB",))
        self.assertEqual(config.plants[0].start, date(2003, 5, 1))
        self.assertEqual(len(generate(config)), 52)

    def test_json_file_and_overrides(self):
        raw = {"seed": 7, "n_records": 50, "start_date": "2003-01-01", "end_date": "2003-06-30"}
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'synth.json')
            with open(path, 'w', encoding='utf-8') as handle:
                json.dump(raw, handle)
            config = SynthConfig.from_file(path)
        self.assertEqual(config.end_date, date(2003, 6, 30))
        overridden = config.with_overrides(seed=None, n_records=20)
        self.assertEqual((overridden.seed, overridden.n_records), (7, 20))

    def test_unknown_fields(self):
        with self.assertRaises(ConfigError):
            SynthConfig.from_dict({"n_records": 5, "colour": "red"})

    def test_badly_typed_fields(self):
        for raw in ({"n_records": "many"}, {"agent_count_probs": ["a", "b", "c", "d", "e"]},
                    {"plants": [{"pathology": "C45.0", "agents": ["ASB"], "occupation": "OCC",
                                 "sector": "SEC", "start": "2001-06-01", "windows": "two"}]}):
            with self.subTest(raw=raw):
                with self.assertRaises(ConfigError):
                    SynthConfig.from_dict(raw)


# Realistic co-exposure density: large vocabularies with a mild skew.
SCALE_CONFIG = dict(n_pathologies=2600, n_agents=20000, n_occupations=20000, n_sectors=700,
                    skew=0.3, start_date=date(2001, 1, 1), end_date=date(2020, 12, 31))
SCALE_DIMS = "agent,occupation"


def peak_memory_bytes():
    try:
        import resource
    except ImportError:
        return None
    # ru_maxrss is in kilobytes on Linux.
    return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss * 1024


class TestBuildCost(unittest.TestCase):
    """Indexed builds on a realistic corpus stay fast."""

    def test_ten_thousand_records(self):
        records = generate(SynthConfig(seed=11, n_records=10000, **SCALE_CONFIG))
        ledger = fold_identities(records)
        start = time.perf_counter()
        graph = build_graph(ledger, GraphConfig.from_strings(SCALE_DIMS, "disease"))
        elapsed = time.perf_counter() - start
        self.assertEqual(graph.total_weight, 10000)
        self.assertEqual(graph.hub_elements, ())
        self.assertLess(elapsed, 10.0)


@unittest.skipUnless(os.environ.get('EXPOSOME_SCALE_TEST') == '1', 'set EXPOSOME_SCALE_TEST=1 to run')
class TestScale(unittest.TestCase):
    """100,000 records, built at disease level."""

    def test_build_at_scale(self):
        records = generate(SynthConfig(n_records=100000, **SCALE_CONFIG))
        start = time.perf_counter()
        graph = build_graph(fold_identities(records), GraphConfig.from_strings(SCALE_DIMS, "disease"), workers=4)
        elapsed = time.perf_counter() - start
        self.assertEqual(graph.total_weight, 100000)
        self.assertGreater(len(graph.edges), 100000)
        self.assertLess(elapsed, 30.0)
        peak = peak_memory_bytes()
        if peak is not None:
            self.assertLess(peak, 2 * 1024 ** 3)


if __name__ == '__main__':
    unittest.main()
