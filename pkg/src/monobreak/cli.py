"""Command-line entry point: scan, ingest, cluster, report."""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .community import best_partition
from .errors import FatalError
from .graph import apply_dynamic, build_static_graph, finalize_weights
from .ops import aggregate_edge_calls, load_ops
from .report import DotStage, Mode, assign_files, render_dot, render_json, render_text
from .scanner import ScanConfig, scan_project

THREADS_ENV = "MONOBREAK_THREADS"


@dataclass(frozen=True)
class RunConfig:
    project_dir: Path
    ops_path: Path | None = None
    static_only: bool = False
    services: int | None = None
    format: str = "text"
    dot_path: Path | None = None
    config_path: Path | None = None
    unweighted_betweenness: bool = False
    threads: int = 1


def _execute(config: RunConfig) -> tuple[str, str | None, list[str]]:
    if config.static_only and config.ops_path is not None:
        raise FatalError("--static-only and --ops are mutually exclusive")
    if config.services is not None and config.services < 1:
        raise FatalError("--services must be at least 1")
    if config.threads < 1:
        raise FatalError("thread count must be at least 1")

    scan_config = (
        ScanConfig.from_toml(config.config_path) if config.config_path else ScanConfig()
    )
    facts = scan_project(config.project_dir, scan_config, threads=config.threads)
    warnings = list(facts.warnings)

    graph = build_static_graph(facts)
    if config.ops_path is not None:
        dataset = load_ops(config.ops_path)
        edge_calls, ops_warnings = aggregate_edge_calls(dataset, facts)
        warnings.extend(ops_warnings)
        graph = apply_dynamic(graph, edge_calls)
        mode = Mode.COMBINED
    else:
        mode = Mode.STATIC_ONLY
    graph = finalize_weights(graph)
    warnings.extend(graph.warnings)

    partition = best_partition(
        graph,
        target=config.services,
        weighted=not config.unweighted_betweenness,
        threads=config.threads,
    )
    report = assign_files(partition, graph, facts, mode=mode, extra_warnings=warnings)

    text = render_json(report) if config.format == "json" else render_text(report)
    dot = None
    if config.dot_path is not None:
        stage = DotStage.COMBINED if mode is Mode.COMBINED else DotStage.STATIC
        dot = render_dot(graph, partition, stage=stage)
    return text, dot, report.warnings


def run(config: RunConfig) -> int:
    """Run the pipeline; the report goes to stdout, diagnostics to stderr."""
    try:
        text, dot, warnings = _execute(config)
        if config.dot_path is not None and dot is not None:
            config.dot_path.write_text(dot, encoding="utf-8")
    except FatalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for warning in warnings:
        print(f"warning: {warning}", file=sys.stderr)
    sys.stdout.write(text)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="monobreak",
        description="Suggest a microservice decomposition for a Django-style "
        "project from static structure and optional runtime data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    analyze = sub.add_parser("analyze", help="analyze a project directory")
    analyze.add_argument("project_dir", type=Path)
    analyze.add_argument("--ops", type=Path, help="ops-JSON file with runtime data")
    analyze.add_argument(
        "--static-only",
        action="store_true",
        help="build the graph from static analysis alone",
    )
    analyze.add_argument(
        "--services", type=int, help="ask for at least this many services"
    )
    analyze.add_argument("--format", choices=("text", "json"), default="text")
    analyze.add_argument("--dot", type=Path, help="write a Graphviz file here")
    analyze.add_argument("--config", type=Path, help="TOML scanner configuration")
    analyze.add_argument(
        "--unweighted-betweenness",
        action="store_true",
        help="ignore edge weights when computing betweenness",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    raw_threads = os.environ.get(THREADS_ENV, "1")
    try:
        threads = int(raw_threads)
    except ValueError:
        print(f"error: {THREADS_ENV} must be an integer", file=sys.stderr)
        return 1
    config = RunConfig(
        project_dir=args.project_dir,
        ops_path=args.ops,
        static_only=args.static_only,
        services=args.services,
        format=args.format,
        dot_path=args.dot,
        config_path=args.config,
        unweighted_betweenness=args.unweighted_betweenness,
        threads=threads,
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
