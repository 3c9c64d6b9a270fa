"""
Test suite for the disease - agent - occupation projection
"""

import unittest
import sys
import os
from datetime import date

from hypothesis import given, settings
from hypothesis import strategies as st

# Add src directory to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))
sys.path.insert(0, os.path.dirname(__file__))

from ingestion.ledger import ledger_from_weights
from network.tripartite import TripartiteGraph, project_tripartite
from ohp.hierarchy import PathologyLevel
from ohp.records import OhpIdentity
from strategies import ledgers


class TestProjection(unittest.TestCase):
    """Test tripartite projection."""

    def setUp(self):
        self.ledger = ledger_from_weights({
            OhpIdentity("C34.1", ("ASB", "SIL"), "MASON", "CONSTRUCTION"): 3,
            OhpIdentity("C45.0", ("ASB",), "PLUMBER", "CONSTRUCTION"): 2,
            OhpIdentity("L23.5", ("NICKEL",), "MASON", "METAL"): 1,
        }, date(2001, 1, 1))

    def test_vertices_and_supports(self):
        graph = project_tripartite(self.ledger)
        self.assertEqual(graph.pathology_vertices, frozenset({"C34.1", "C45.0", "L23.5"}))
        self.assertEqual(graph.agent_vertices, frozenset({"ASB", "SIL", "NICKEL"}))
        self.assertEqual(graph.occupation_vertices, frozenset({"MASON", "PLUMBER"}))
        self.assertEqual(graph.agent_occupation[("ASB", "MASON")], 3)
        self.assertEqual(graph.agent_occupation[("ASB", "PLUMBER")], 2)
        self.assertEqual(graph.agent_pathology[("ASB", "C34.1")], 3)
        self.assertEqual(graph.agent_pathology[("NICKEL", "L23.5")], 1)
        self.assertEqual(graph.edge_count, 8)

    def test_no_pathology_occupation_edges(self):
        view = project_tripartite(self.ledger).to_networkx()
        for source, target in view.edges():
            classes = {view.nodes[source]["class"], view.nodes[target]["class"]}
            self.assertIn("agent", classes)
            self.assertEqual(len(classes), 2)

    def test_pathology_filter(self):
        graph = project_tripartite(self.ledger, pathology_filter="C")
        self.assertEqual(graph.pathology_vertices, frozenset({"C34.1", "C45.0"}))
        self.assertNotIn("NICKEL", graph.agent_vertices)

    def test_filter_matching_nothing(self):
        graph = project_tripartite(self.ledger, pathology_filter="Z")
        self.assertTrue(graph.is_empty)
        self.assertEqual(graph.edge_count, 0)

    def test_coarser_pathology_level(self):
        graph = project_tripartite(self.ledger, level=PathologyLevel.CATEGORY)
        self.assertEqual(graph.pathology_vertices, frozenset({"C", "L"}))
        self.assertEqual(graph.agent_pathology[("ASB", "C")], 5)

    def test_edge_endpoints_must_exist(self):
        with self.assertRaises(ValueError):
            TripartiteGraph({"C34.1"}, {"ASB"}, set(), {("ASB", "MASON"): 1}, {})
        with self.assertRaises(ValueError):
            TripartiteGraph({"C34.1"}, {"ASB"}, set(), {}, {("ASB", "C34.1"): 0})

    @settings(max_examples=100)
    @given(ledgers(), st.sampled_from([None, "C", "C34", "J", "L23.5"]))
    def test_support_conservation(self, ledger, prefix):
        graph = project_tripartite(ledger, pathology_filter=prefix)
        kept = [(identity, entry) for identity, entry in ledger.items()
                if prefix is None or identity.pathology.startswith(prefix)]
        expected = sum(len(identity.agent_set) * entry.weight for identity, entry in kept)
        self.assertEqual(sum(graph.agent_pathology.values()), expected)
        self.assertEqual(sum(graph.agent_occupation.values()), expected)


if __name__ == '__main__':
    unittest.main()
