"""Monolith decomposition analyzer for Django-style projects."""

from .community import (
    Dendrogram,
    DendrogramStep,
    Partition,
    best_partition,
    edge_betweenness,
    girvan_newman,
    modularity,
)
from .errors import FatalError, OpsError
from .graph import (
    DependencyGraph,
    Edge,
    Node,
    apply_dynamic,
    build_static_graph,
    edge_key,
    finalize_weights,
)
from .ops import OperationalDataset, OperationalRecord, aggregate_edge_calls, load_ops
from .paths import ModulePath, class_path
from .report import (
    DecompositionReport,
    DotStage,
    Mode,
    ServiceCut,
    assign_files,
    render_dot,
    render_json,
    render_text,
    report_from_json,
)
from .scanner import (
    CallFact,
    ClassFact,
    FileRecord,
    ImportFact,
    Kind,
    ProjectFacts,
    RelationFact,
    RelationKind,
    ScanConfig,
    Totals,
    classify_classes,
    parse_file,
    scan_project,
)

__version__ = "0.1.0"

__all__ = [
    "CallFact",
    "ClassFact",
    "DecompositionReport",
    "Dendrogram",
    "DendrogramStep",
    "DependencyGraph",
    "DotStage",
    "Edge",
    "FatalError",
    "FileRecord",
    "ImportFact",
    "Kind",
    "Mode",
    "ModulePath",
    "Node",
    "OperationalDataset",
    "OperationalRecord",
    "OpsError",
    "Partition",
    "ProjectFacts",
    "RelationFact",
    "RelationKind",
    "ScanConfig",
    "ServiceCut",
    "Totals",
    "aggregate_edge_calls",
    "apply_dynamic",
    "assign_files",
    "best_partition",
    "build_static_graph",
    "class_path",
    "classify_classes",
    "edge_betweenness",
    "edge_key",
    "finalize_weights",
    "girvan_newman",
    "load_ops",
    "modularity",
    "parse_file",
    "render_dot",
    "render_json",
    "render_text",
    "report_from_json",
    "scan_project",
]
