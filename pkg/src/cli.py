"""
Command-line interface of the exposome toolkit.

Machine-readable output (reports, events) goes to standard output as JSON;
human-readable summaries and logs go to standard error.
"""

import functools
import json
import logging
import sys
from datetime import date
from pathlib import Path
from typing import Dict, Optional, Tuple

import click

try:
    from .data.generate_dataset import Plant, SynthConfig, generate
    from .exceptions import ExposomeError
    from .ingestion.parsers import records_to_jsonl, write_records
    from .network.exporters import FORMATS, export_graph, read_json_graph
    from .network.exposome import DEFAULT_HUB_THRESHOLD, GraphConfig
    from .ohp.hierarchy import PathologyHierarchy, PathologyLevel
    from .pipeline import ExposomePipeline
    from .surveillance.events import (DEFAULT_GROWTH_THRESHOLD, DEFAULT_WINDOW_DAYS,
                                      EmergenceKind, SurveillanceConfig, events_to_jsonl)
    from .surveillance.trends import group_trends
except ImportError:
    import os
    sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
    from data.generate_dataset import Plant, SynthConfig, generate
    from exceptions import ExposomeError
    from ingestion.parsers import records_to_jsonl, write_records
    from network.exporters import FORMATS, export_graph, read_json_graph
    from network.exposome import DEFAULT_HUB_THRESHOLD, GraphConfig
    from ohp.hierarchy import PathologyHierarchy, PathologyLevel
    from pipeline import ExposomePipeline
    from surveillance.events import (DEFAULT_GROWTH_THRESHOLD, DEFAULT_WINDOW_DAYS,
                                     EmergenceKind, SurveillanceConfig, events_to_jsonl)
    from surveillance.trends import group_trends

logger = logging.getLogger(__name__)

LEVELS = [level.value for level in PathologyLevel]
EXIT_FATAL = 2


class FatalError(click.ClickException):
    """Unreadable input or invalid configuration."""

    exit_code = EXIT_FATAL


def fatal_errors(command):
    """Turn library and I/O failures into exit code 2 with a diagnostic."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except (ExposomeError, OSError) as exc:
            logger.debug("Fatal error", exc_info=True)
            raise FatalError(str(exc))

    return wrapper


def echo_json(document: Dict):
    click.echo(json.dumps(document, indent=2, sort_keys=True))


def write_text(text: str, output: Optional[str]):
    """Write to ``output``, or to standard output when no path is given."""
    if output is None:
        click.echo(text, nl=False)
        return
    with open(output, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)


def input_option(command):
    return click.option("--input", "-i", "inputs", multiple=True, required=True,
                        type=click.Path(dir_okay=False),
                        help="Corpus file (.csv, otherwise JSON Lines); repeatable.")(command)


def graph_options(command):
    """Flags shared by every command that builds a graph."""
    for option in reversed([
        click.option("--level", type=click.Choice(LEVELS), default=PathologyLevel.DISEASE.value,
                     show_default=True, help="Pathology level of the nodes."),
        click.option("--dims", default="agent,occupation,sector", show_default=True,
                     help="Comma-separated exposure dimensions that connect nodes."),
        click.option("--hierarchy", type=click.Path(dir_okay=False), default=None,
                     help="Pathology hierarchy TSV (code, subgroup, category)."),
        click.option("--hub-threshold", type=click.IntRange(min=1), default=DEFAULT_HUB_THRESHOLD,
                     show_default=True, help="Report elements shared by more nodes than this."),
        click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True,
                     help="Threads for loading and the edge search."),
        click.option("--quadratic", is_flag=True, help="Use the pairwise edge search (debugging)."),
    ]):
        command = option(command)
    return command


def make_pipeline(inputs: Tuple[str, ...], level: str, dims: str, hierarchy: Optional[str],
                  hub_threshold: int = DEFAULT_HUB_THRESHOLD, workers: int = 1,
                  quadratic: bool = False) -> ExposomePipeline:
    table = PathologyHierarchy.from_tsv(hierarchy) if hierarchy else None
    pipeline = ExposomePipeline(GraphConfig.from_strings(dims, level), table,
                                hub_threshold=hub_threshold, quadratic=quadratic, workers=workers)
    pipeline.load(inputs)
    return pipeline


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Log debugging detail to standard error.")
def cli(verbose: bool):
    """Build and survey the exposome of occupational health problems."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


@cli.command()
@input_option
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None,
              help="Graph file to write.")
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="graphml", show_default=True)
@graph_options
@fatal_errors
def build(inputs, output, fmt, level, dims, hierarchy, hub_threshold, workers, quadratic):
    """Build the exposome network and print its statistics."""
    pipeline = make_pipeline(inputs, level, dims, hierarchy, hub_threshold, workers, quadratic)
    report = pipeline.stats()
    if output is not None:
        write_text(export_graph(pipeline.build(), fmt), output)
    pipeline.print_summary(report)
    echo_json(report)


@cli.command()
@input_option
@graph_options
@fatal_errors
def stats(inputs, level, dims, hierarchy, hub_threshold, workers, quadratic):
    """Print the statistics of the exposome network."""
    pipeline = make_pipeline(inputs, level, dims, hierarchy, hub_threshold, workers, quadratic)
    report = pipeline.stats()
    pipeline.print_summary(report)
    echo_json(report)


@cli.command()
@input_option
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None,
              help="Graph file to write (standard output when omitted).")
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="graphml", show_default=True)
@click.option("--level", type=click.Choice(LEVELS), default=PathologyLevel.DISEASE.value, show_default=True)
@click.option("--pathology", "pathology_filter", default=None,
              help="Keep pathologies whose code starts with this prefix.")
@click.option("--hierarchy", type=click.Path(dir_okay=False), default=None)
@fatal_errors
def tripartite(inputs, output, fmt, level, pathology_filter, hierarchy):
    """Project the corpus onto the disease - agent - occupation network."""
    pipeline = make_pipeline(inputs, level, "agent,occupation,sector", hierarchy)
    graph = pipeline.project(pathology_filter, level)
    write_text(export_graph(graph, fmt), output)
    if output is not None:
        echo_json({
            "pathology_vertices": len(graph.pathology_vertices),
            "agent_vertices": len(graph.agent_vertices),
            "occupation_vertices": len(graph.occupation_vertices),
            "agent_occupation_edges": len(graph.agent_occupation),
            "agent_pathology_edges": len(graph.agent_pathology),
        })


@cli.command()
@input_option
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None,
              help="Event JSON Lines file (standard output when omitted).")
@click.option("--baseline-end", type=click.DateTime(formats=["%Y-%m-%d"]), required=True,
              help="Last day of the baseline (YYYY-MM-DD).")
@click.option("--window", "window_days", type=click.IntRange(min=1), default=DEFAULT_WINDOW_DAYS,
              show_default=True, help="Window length in days.")
@click.option("--growth-threshold", type=click.IntRange(min=1), default=DEFAULT_GROWTH_THRESHOLD,
              show_default=True, help="Records per window that flag a weight growth.")
@click.option("--trends", type=click.Path(dir_okay=False), default=None,
              help="Also write per-window record counts per node to this CSV file.")
@graph_options
@fatal_errors
def surveil(inputs, output, baseline_end, window_days, growth_threshold, trends,
            level, dims, hierarchy, hub_threshold, workers, quadratic):
    """Replay dated records and report emerging nodes and connections."""
    pipeline = make_pipeline(inputs, level, dims, hierarchy, hub_threshold, workers, quadratic)
    config = SurveillanceConfig(pipeline.config, baseline_end.date(), window_days, growth_threshold)
    events = pipeline.surveil(config)
    write_text(events_to_jsonl(events), output)
    if trends is not None:
        group_trends(pipeline.parse_result.records, config, hierarchy=pipeline.hierarchy).to_csv(trends)
    pipeline.print_events(events)
    if output is not None:
        by_kind = {kind.value: 0 for kind in EmergenceKind}
        for event in events:
            by_kind[event.kind.value] += 1
        echo_json({"events": len(events), "events_by_kind": by_kind})


def _parse_date(ctx, param, value) -> Optional[date]:
    if value is None:
        return None
    try:
        return date.fromisoformat(value)
    except ValueError:
        raise click.BadParameter(f"{value!r} is not a YYYY-MM-DD date")


@cli.command(name="generate")
@click.option("--config", "config_path", type=click.Path(dir_okay=False, exists=True), default=None,
              help="TOML (.toml) or JSON configuration; flags win over its values.")
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None,
              help="Corpus file (.csv for CSV, JSON Lines otherwise; standard output when omitted).")
@click.option("--seed", type=click.IntRange(min=0, max=2 ** 64 - 1), default=None, help="Generator seed.")
@click.option("--records", "n_records", type=click.IntRange(min=1), default=None)
@click.option("--pathologies", "n_pathologies", type=click.IntRange(min=1), default=None)
@click.option("--agents", "n_agents", type=click.IntRange(min=1), default=None)
@click.option("--occupations", "n_occupations", type=click.IntRange(min=1), default=None)
@click.option("--sectors", "n_sectors", type=click.IntRange(min=1), default=None)
@click.option("--centers", "n_centers", type=click.IntRange(min=1), default=None)
@click.option("--start-date", callback=_parse_date, default=None)
@click.option("--end-date", callback=_parse_date, default=None)
@click.option("--skew", type=click.FloatRange(min=0), default=None, help="Zipf exponent of element popularity.")
@click.option("--plant", "plants", multiple=True,
              help="Planted identity 'pathology|agent+agent|occupation|sector|YYYY-MM-DD[|records]'.")
@fatal_errors
def generate_command(config_path, output, seed, n_records, n_pathologies, n_agents, n_occupations,
                     n_sectors, n_centers, start_date, end_date, skew, plants):
    """Generate a seeded synthetic OHP corpus."""
    config = SynthConfig.from_file(config_path) if config_path else SynthConfig()
    config = config.with_overrides(
        seed=seed, n_records=n_records, n_pathologies=n_pathologies, n_agents=n_agents,
        n_occupations=n_occupations, n_sectors=n_sectors, n_centers=n_centers,
        start_date=start_date, end_date=end_date, skew=skew,
        plants=tuple(Plant.parse(text) for text in plants) or None,
    )
    records = generate(config)
    if output is None:
        click.echo(records_to_jsonl(records), nl=False)
    else:
        write_records(records, output)
        logger.info("Wrote %d records to %s", len(records), output)


@cli.command(name="export")
@click.option("--input", "-i", "input_path", type=click.Path(dir_okay=False), required=True,
              help="Graph saved as JSON by build or tripartite.")
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None)
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="graphml", show_default=True)
@fatal_errors
def export_command(input_path, output, fmt):
    """Convert a JSON graph document to GraphML, DOT or JSON."""
    graph = read_json_graph(Path(input_path).read_bytes())
    write_text(export_graph(graph, fmt), output)


def main():
    cli(prog_name="exposome")
