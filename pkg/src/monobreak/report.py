"""Decomposition suggestions: per-service file lists and their renderings."""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

from .community import Partition
from .graph import DependencyGraph
from .paths import ModulePath
from .scanner import Kind, ProjectFacts, Totals


class Mode(str, Enum):
    STATIC_ONLY = "static_only"
    COMBINED = "combined"


class DotStage(str, Enum):
    STATIC = "static"
    COMBINED = "combined"


@dataclass(frozen=True)
class ServiceCut:
    index: int
    members: tuple[ModulePath, ...]
    files: tuple[ModulePath, ...]
    shared: tuple[ModulePath, ...]


@dataclass
class DecompositionReport:
    totals: Totals
    mode: Mode
    services: list[ServiceCut]
    warnings: list[str]


def assign_files(
    partition: Partition,
    graph: DependencyGraph,
    facts: ProjectFacts,
    mode: Mode = Mode.COMBINED,
    extra_warnings: list[str] | None = None,
) -> DecompositionReport:
    """Expand each community into a service file list.

    A service owns its community members plus every model reachable over a
    single graph edge from one of its views; models pulled into several
    services this way are marked shared.
    """
    file_sets: list[set[ModulePath]] = []
    for community in partition.communities:
        files = set(community)
        for member in community:
            node = graph.nodes.get(member)
            if node is None or node.kind is not Kind.VIEW:
                continue
            for (a, b) in graph.edges:
                if a == member and graph.nodes[b].kind is Kind.MODEL:
                    files.add(b)
                elif b == member and graph.nodes[a].kind is Kind.MODEL:
                    files.add(a)
        file_sets.append(files)

    counts: dict[ModulePath, int] = {}
    for files in file_sets:
        for path in files:
            counts[path] = counts.get(path, 0) + 1
    shared_all = {path for path, n in counts.items() if n > 1}

    services = [
        ServiceCut(
            index=i,
            members=tuple(sorted(community)),
            files=tuple(sorted(files)),
            shared=tuple(sorted(files & shared_all)),
        )
        for i, (community, files) in enumerate(zip(partition.communities, file_sets))
    ]

    warnings = list(extra_warnings or [])
    covered = {c.module for c in facts.classes if c.node_path in graph.nodes}
    leftover = sorted(
        record.path for record in facts.files if record.module not in covered
    )
    if leftover:
        warnings.append(
            "files not assigned to any service: " + ", ".join(leftover)
        )
    return DecompositionReport(
        totals=facts.totals,
        mode=mode,
        services=services,
        warnings=warnings,
    )


def render_text(report: DecompositionReport) -> str:
    lines = [
        f"Total Files: {report.totals.files}",
        f"Django_Views: {report.totals.views}",
        f"Django_Models: {report.totals.models}",
    ]
    for service in report.services:
        lines.append("")
        lines.append(f"GraphNumber: {service.index}")
        lines.append("list_of_files: [")
        for i, path in enumerate(service.files):
            comma = "," if i < len(service.files) - 1 else ""
            lines.append(f"    '{path}'{comma}")
        lines.append("]")
    return "\n".join(lines) + "\n"


def render_json(report: DecompositionReport) -> str:
    payload = {
        "totals": {
            "files": report.totals.files,
            "views": report.totals.views,
            "models": report.totals.models,
        },
        "mode": report.mode.value,
        "services": [
            {
                "index": s.index,
                "members": [str(p) for p in s.members],
                "files": [str(p) for p in s.files],
                "shared": [str(p) for p in s.shared],
            }
            for s in report.services
        ],
        "warnings": list(report.warnings),
    }
    return json.dumps(payload, indent=2) + "\n"


def report_from_json(text: str) -> DecompositionReport:
    data = json.loads(text)
    return DecompositionReport(
        totals=Totals(
            files=data["totals"]["files"],
            views=data["totals"]["views"],
            models=data["totals"]["models"],
        ),
        mode=Mode(data["mode"]),
        services=[
            ServiceCut(
                index=s["index"],
                members=tuple(ModulePath.parse(p) for p in s["members"]),
                files=tuple(ModulePath.parse(p) for p in s["files"]),
                shared=tuple(ModulePath.parse(p) for p in s["shared"]),
            )
            for s in data["services"]
        ],
        warnings=list(data["warnings"]),
    )


_DOT_SHAPES = {
    Kind.MODEL: "box",
    Kind.VIEW: "ellipse",
    Kind.SERIALIZER: "diamond",
    Kind.OTHER: "plaintext",
}


def render_dot(
    graph: DependencyGraph,
    partition: Partition | None = None,
    stage: DotStage = DotStage.COMBINED,
) -> str:
    """Graphviz rendering; in the combined stage every edge carries a second,
    green label with its dynamic weight."""
    lines = ["graph dependencies {", '  node [fontname="Helvetica"];']

    def node_stmt(path: ModulePath, indent: str) -> str:
        shape = _DOT_SHAPES[graph.nodes[path].kind]
        return f'{indent}"{path}" [shape={shape}];'

    if partition is not None and partition.communities:
        for i, community in enumerate(partition.communities):
            lines.append(f"  subgraph cluster_{i} {{")
            lines.append(f'    label="service {i}";')
            for path in community:
                if path in graph.nodes:
                    lines.append(node_stmt(path, "    "))
            lines.append("  }")
    else:
        for path in sorted(graph.nodes):
            lines.append(node_stmt(path, "  "))

    for key in sorted(graph.edges):
        edge = graph.edges[key]
        total = f"{edge.total_weight:.1f}"
        if stage is DotStage.COMBINED:
            dyn = f"{edge.dyn_weight:.1f}"
            label = f'<{total}<br/><font color="green">{dyn}</font>>'
        else:
            label = f'"{total}"'
        lines.append(f'  "{key[0]}" -- "{key[1]}" [label={label}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
