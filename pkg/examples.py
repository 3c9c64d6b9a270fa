"""
Example usage of the Occupational Health Problem Exposome toolkit

This file demonstrates various ways to use the library directly.
"""

import sys
import os
import tempfile
from datetime import date
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from data.generate_dataset import Plant, SynthConfig, generate
from ingestion.ledger import fold_identities
from ingestion.parsers import write_records
from network.exporters import export_graph
from network.exposome import GraphConfig, aggregate, build_graph
from network.metrics import components, isolated_nodes, node_metrics
from network.tripartite import project_tripartite
from ohp.hierarchy import PathologyLevel
from pipeline import ExposomePipeline
from surveillance.detector import replay
from surveillance.events import SurveillanceConfig

OUTPUT_DIR = tempfile.gettempdir()


def example_1_generate_corpus():
    """Example 1: Generate a synthetic OHP corpus."""
    print("\n" + "="*70)
    print("EXAMPLE 1: Generate Synthetic Corpus")
    print("="*70)

    config = SynthConfig(seed=42, n_records=500, n_pathologies=60, n_agents=80)
    records = generate(config)

    print(f"\nGenerated {len(records)} records")
    print(f"\nFirst few records:")
    for record in records[:3]:
        print(f"  {record.record_id} {record.reported_on} {record.pathology} "
              f"{'+'.join(record.agent_codes)} {record.occupation} {record.sector}")

    return records


def example_2_build_network(records):
    """Example 2: Fold identities and build the exposome network."""
    print("\n" + "="*70)
    print("EXAMPLE 2: Exposome Network")
    print("="*70)

    ledger = fold_identities(records)
    graph = build_graph(ledger, GraphConfig.from_strings("agent,occupation", "disease"))
    metrics = node_metrics(graph)

    print(f"\nIdentities: {len(ledger)}")
    print(f"Nodes: {len(graph.nodes)} ({len(isolated_nodes(graph))} isolated)")
    print(f"Edges: {len(graph.edges)}")
    print(f"Largest component: {max((len(part) for part in components(graph)), default=0)}")

    busiest = sorted(metrics.items(), key=lambda item: -item[1].degree)[:3]
    for key, node in busiest:
        print(f"  {key}: degree {node.degree}, multi-exposure {node.multi_exposure}")

    coarse = aggregate(graph, PathologyLevel.SUBGROUP)
    print(f"\nAt sub-group level: {len(coarse.nodes)} nodes, {len(coarse.edges)} edges")

    path = os.path.join(OUTPUT_DIR, 'example_exposome.graphml')
    with open(path, 'w', encoding='utf-8') as handle:
        handle.write(export_graph(graph, 'graphml'))
    print(f"Graph saved to {path}")


def example_3_tripartite(records):
    """Example 3: Disease - agent - occupation projection."""
    print("\n" + "="*70)
    print("EXAMPLE 3: Tripartite Projection")
    print("="*70)

    graph = project_tripartite(fold_identities(records), pathology_filter="A")
    strongest = sorted(graph.agent_occupation.items(), key=lambda item: -item[1])[:3]

    print(f"\n{graph!r}")
    for (agent, occupation), support in strongest:
        print(f"  {agent} -- {occupation}: {support} OHPs")


def example_4_surveillance():
    """Example 4: Plant an association and watch it emerge."""
    print("\n" + "="*70)
    print("EXAMPLE 4: Emergence Surveillance")
    print("="*70)

    plant = Plant("Z99.9", ("NANO", "RESIN"), "OCC00", "SEC00", date(2002, 4, 10),
                  records_per_window=4, windows=2)
    records = generate(SynthConfig(seed=7, n_records=800, end_date=date(2002, 8, 31), plants=(plant,)))
    config = SurveillanceConfig(GraphConfig(), baseline_end=date(2001, 12, 31), window_days=30)

    events = replay(records, config)
    planted = [event for event in events if plant.identity.key in event.subject]

    print(f"\nEvents: {len(events)}")
    for event in planted:
        print(f"  {event.window_start} {event.kind.value} {' / '.join(event.subject)}")


def example_5_pipeline():
    """Example 5: Full pipeline over corpus files."""
    print("\n" + "="*70)
    print("EXAMPLE 5: Full Pipeline")
    print("="*70)

    path = os.path.join(OUTPUT_DIR, 'example_corpus.csv')
    write_records(generate(SynthConfig(seed=123, n_records=300)), path)

    pipeline = ExposomePipeline(GraphConfig(), workers=2, stream=sys.stdout)
    pipeline.load([path])
    pipeline.print_summary(pipeline.stats())


def main():
    """Run all examples."""
    print("\n" + "="*70)
    print("OCCUPATIONAL HEALTH PROBLEM EXPOSOME - USAGE EXAMPLES")
    print("="*70)

    try:
        records = example_1_generate_corpus()
        example_2_build_network(records)
        example_3_tripartite(records)
        example_4_surveillance()
        example_5_pipeline()

        print("\n" + "="*70)
        print("ALL EXAMPLES COMPLETED SUCCESSFULLY")
        print("="*70 + "\n")

    except Exception as e:
        print(f"\nError running examples: {e}")
        import traceback
        traceback.print_exc()


if __name__ == "__main__":
    main()
