"""
Test suite for exposome network construction, aggregation and metrics
"""

import unittest
import sys
import os
import random
import time
from datetime import date
from itertools import combinations

from hypothesis import given, settings

# Add src directory to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))
sys.path.insert(0, os.path.dirname(__file__))

from exceptions import ConfigError, LevelNotCoarserError
from ingestion.ledger import fold_identities, ledger_from_weights
from ingestion.parsers import read_corpus
from network.exposome import (EdgeTable, ExposomeEdge, ExposomeGraph, GraphConfig, aggregate, build_graph,
                              group_nodes, pairwise_edges)
from network.metrics import components, isolated_nodes, node_metrics
from ohp.hierarchy import PathologyHierarchy, PathologyLevel
from ohp.records import ExposureDimension, OhpIdentity
from strategies import AGENTS, OCCUPATIONS, PATHOLOGIES, SECTORS, ledgers

FIXTURE = os.path.join(os.path.dirname(__file__), 'fixtures', 'malignant_tumours_38.jsonl')

AGENT, OCCUPATION, SECTOR = ExposureDimension.AGENT, ExposureDimension.OCCUPATION, ExposureDimension.SECTOR
DIM_SUBSETS = [frozenset(subset) for size in (1, 2, 3)
               for subset in combinations((AGENT, OCCUPATION, SECTOR), size)]
TABLE = PathologyHierarchy({
    "C34.1": ("C34", "RESPIRATORY"), "C34.9": ("C34", "RESPIRATORY"), "C45.0": ("C45", "RESPIRATORY"),
    "C15.2": ("C15", "DIGESTIVE"), "J61": ("J60-J70", "RESPIRATORY"), "J62.8": ("J60-J70", "RESPIRATORY"),
    "L23.5": ("L23", "SKIN"), "L24.0": ("L24", "SKIN"), "G62.2": ("G62", "NERVOUS"),
})


def random_ledger(rng: random.Random, size: int):
    weights = {}
    for _ in range(size):
        identity = OhpIdentity(
            rng.choice(PATHOLOGIES),
            tuple(rng.sample(AGENTS, rng.randint(1, 5))),
            rng.choice(OCCUPATIONS),
            rng.choice(SECTORS),
        )
        weights[identity] = rng.randint(1, 4)
    return ledger_from_weights(weights, date(2001, 1, 1))


class TestFixtureNetwork(unittest.TestCase):
    """Test the 38-disease malignant tumour fixture."""

    @classmethod
    def setUpClass(cls):
        cls.parse = read_corpus(FIXTURE)
        cls.ledger = fold_identities(cls.parse.records)

    def test_isolated_split(self):
        start = time.perf_counter()
        graph = build_graph(self.ledger, GraphConfig.from_strings("agent", "disease"))
        elapsed = time.perf_counter() - start

        self.assertEqual(len(graph.nodes), 38)
        self.assertEqual(len(isolated_nodes(graph)), 22)
        self.assertEqual(len(graph.nodes) - len(isolated_nodes(graph)), 16)
        self.assertEqual(len(graph.edges), 15)
        self.assertEqual(max(len(part) for part in components(graph)), 16)
        self.assertLess(elapsed, 1.0)

    def test_weights_conserved(self):
        graph = build_graph(self.ledger, GraphConfig())
        self.assertEqual(graph.total_weight, len(self.parse.records))
        self.assertEqual(graph.total_weight, 51)

    def test_hub_elements(self):
        graph = build_graph(self.ledger, GraphConfig.from_strings("agent", "disease"), hub_threshold=1)
        self.assertEqual(len(graph.hub_elements), 15)
        self.assertEqual(graph.hub_elements[0].element, "AGL01")
        self.assertTrue(all(hub.node_count == 2 for hub in graph.hub_elements))

    def test_threads_give_the_same_graph(self):
        config = GraphConfig()
        self.assertEqual(build_graph(self.ledger, config, workers=4), build_graph(self.ledger, config))


class TestEdges(unittest.TestCase):
    """Test the connection rule."""

    def setUp(self):
        self.a = OhpIdentity("C34.1", ("AG1", "AG2"), "OCC1", "SEC1")
        self.b = OhpIdentity("C45.0", ("AG2",), "OCC2", "SEC1")
        self.c = OhpIdentity("J61", ("AG3",), "OCC3", "SEC2")
        self.ledger = ledger_from_weights({self.a: 3, self.b: 1, self.c: 2}, date(2001, 1, 1))

    def test_shared_elements_per_dimension(self):
        graph = build_graph(self.ledger, GraphConfig())
        edge = graph.edges[(self.a.key, self.b.key)]
        self.assertEqual(dict(edge.shared), {AGENT: frozenset({"AG2"}), SECTOR: frozenset({"SEC1"})})
        self.assertEqual(graph.edge_keys(), ((self.a.key, self.b.key),))
        self.assertEqual(graph.nodes[self.a.key].weight, 3)

    def test_dimensions_restrict_edges(self):
        graph = build_graph(self.ledger, GraphConfig.from_strings("occupation", "disease"))
        self.assertEqual(len(graph.edges), 0)
        self.assertEqual(len(isolated_nodes(graph)), len(graph.nodes))

    def test_edge_endpoints_are_ordered(self):
        edge = ExposomeEdge("z", "a", {AGENT: {"AG1"}})
        self.assertEqual(edge.key, ("a", "z"))
        with self.assertRaises(ValueError):
            ExposomeEdge("a", "a", {AGENT: {"AG1"}})
        with self.assertRaises(ValueError):
            ExposomeEdge("a", "b", {})

    def test_metrics(self):
        graph = build_graph(self.ledger, GraphConfig())
        metrics = node_metrics(graph)
        self.assertEqual(metrics[self.a.key].degree, 1)
        # AG1, AG2, OCC1, SEC1
        self.assertEqual(metrics[self.a.key].multi_exposure, 4)
        self.assertEqual(metrics[self.c.key].diversity, 0)

    def test_empty_ledger(self):
        graph = build_graph(ledger_from_weights({}, date(2001, 1, 1)), GraphConfig())
        self.assertEqual((len(graph.nodes), len(graph.edges)), (0, 0))
        self.assertEqual(components(graph), [])

    def test_edge_table(self):
        graph = build_graph(self.ledger, GraphConfig())
        key = (self.a.key, self.b.key)
        self.assertIsInstance(graph.edges, EdgeTable)
        self.assertIn(key, graph.edges)
        self.assertNotIn((self.b.key, self.a.key), graph.edges)
        self.assertEqual(graph.edges.shared_elements(key), ((AGENT, "AG2"), (SECTOR, "SEC1")))
        self.assertEqual(graph.edges[key].shared_elements(), graph.edges.shared_elements(key))
        with self.assertRaises(KeyError):
            graph.edges[(self.a.key, self.c.key)]

    def test_graph_from_plain_edge_mapping(self):
        built = build_graph(self.ledger, GraphConfig())
        rebuilt = ExposomeGraph(built.config, dict(built.nodes), dict(built.edges))
        self.assertEqual(rebuilt, built)
        self.assertEqual(rebuilt.edges, dict(built.edges))

    @settings(max_examples=60, deadline=None)
    @given(ledgers(max_size=40))
    def test_one_node_per_identity(self, ledger):
        graph = build_graph(ledger, GraphConfig())
        self.assertEqual(len(graph.nodes), len(ledger))
        self.assertEqual(set(graph.nodes), {identity.key for identity in ledger})


class TestEdgeOracle(unittest.TestCase):
    """The indexed build must equal the definitional pairwise build."""

    @settings(max_examples=60, deadline=None)
    @given(ledgers(max_size=60))
    def test_indexed_equals_pairwise(self, ledger):
        for dims in DIM_SUBSETS:
            config = GraphConfig(dims, PathologyLevel.DISEASE)
            self.assertEqual(build_graph(ledger, config), build_graph(ledger, config, quadratic=True))

    def test_seeded_trials_at_full_size(self):
        rng = random.Random(20240601)
        for trial in range(20):
            ledger = random_ledger(rng, 200)
            nodes = group_nodes(ledger, PathologyLevel.DISEASE)
            for dims in DIM_SUBSETS:
                indexed = build_graph(ledger, GraphConfig(dims), workers=1 + trial % 3)
                with self.subTest(trial=trial, dims=sorted(dim.value for dim in dims)):
                    self.assertEqual(dict(indexed.edges), pairwise_edges(nodes, dims))


class TestAggregation(unittest.TestCase):
    """Test coarsening along the pathology hierarchy."""

    @settings(max_examples=60, deadline=None)
    @given(ledgers(max_size=60))
    def test_aggregate_equals_direct_build(self, ledger):
        for hierarchy in (None, TABLE):
            fine = build_graph(ledger, GraphConfig(), hierarchy)
            subgroup = build_graph(ledger, GraphConfig(level=PathologyLevel.SUBGROUP), hierarchy)
            category = build_graph(ledger, GraphConfig(level=PathologyLevel.CATEGORY), hierarchy)
            self.assertEqual(aggregate(fine, PathologyLevel.SUBGROUP, hierarchy), subgroup)
            self.assertEqual(aggregate(fine, PathologyLevel.CATEGORY, hierarchy), category)
            self.assertEqual(aggregate(subgroup, PathologyLevel.CATEGORY, hierarchy), category)
            self.assertGreaterEqual(len(fine.nodes), len(subgroup.nodes))
            self.assertGreaterEqual(len(subgroup.nodes), len(category.nodes))
            self.assertEqual(category.total_weight, ledger.total_weight)

    def test_seeded_trials(self):
        rng = random.Random(7)
        for _ in range(20):
            ledger = random_ledger(rng, 200)
            fine = build_graph(ledger, GraphConfig())
            for level in (PathologyLevel.SUBGROUP, PathologyLevel.CATEGORY):
                self.assertEqual(aggregate(fine, level), build_graph(ledger, GraphConfig(level=level)))

    def test_coarse_node_keys(self):
        ledger = ledger_from_weights({
            OhpIdentity("C34.1", ("AG1",), "OCC1", "SEC1"): 2,
            OhpIdentity("C34.9", ("AG2",), "OCC2", "SEC2"): 1,
            OhpIdentity("C45.0", ("AG2",), "OCC3", "SEC3"): 4,
        }, date(2001, 1, 1))
        graph = build_graph(ledger, GraphConfig(level=PathologyLevel.SUBGROUP))
        self.assertEqual(graph.node_keys(), ("C34", "C45"))
        self.assertEqual(graph.nodes["C34"].weight, 3)
        self.assertEqual(graph.nodes["C34"].elements(AGENT), frozenset({"AG1", "AG2"}))
        self.assertEqual(graph.edge_keys(), (("C34", "C45"),))

    def test_level_must_be_coarser(self):
        graph = build_graph(ledger_from_weights({}, date(2001, 1, 1)), GraphConfig(level=PathologyLevel.SUBGROUP))
        for level in (PathologyLevel.SUBGROUP, PathologyLevel.DISEASE):
            with self.assertRaises(LevelNotCoarserError):
                aggregate(graph, level)


class TestGraphConfig(unittest.TestCase):
    """Test graph configuration parsing."""

    def test_from_strings(self):
        config = GraphConfig.from_strings("sector, agent", "Category")
        self.assertEqual(config.ordered_dims, (AGENT, SECTOR))
        self.assertEqual(config.to_dict(), {"dims": ["agent", "sector"], "level": "category"})

    def test_invalid_values(self):
        for dims, level in (("", "disease"), ("agent,colour", "disease"), ("agent", "chapter")):
            with self.subTest(dims=dims, level=level):
                with self.assertRaises(ConfigError):
                    GraphConfig.from_strings(dims, level)


if __name__ == '__main__':
    unittest.main()
