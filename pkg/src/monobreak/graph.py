"""Weighted dependency graph built from static facts and dynamic call counts.

Edge weights follow three rules: the static weight of a pair is the number
of imports plus counted method calls plus declared relations between them;
the dynamic weight rescales runtime call counts so their maximum equals the
maximum static weight; the final weight is the sum of the two.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .paths import ModulePath
from .scanner import Kind, ProjectFacts

EdgeKey = tuple[ModulePath, ModulePath]


def edge_key(a: ModulePath, b: ModulePath) -> EdgeKey:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class Node:
    id: ModulePath
    kind: Kind


@dataclass(frozen=True)
class Edge:
    a: ModulePath
    b: ModulePath
    num_imports: int = 0
    num_method_calls: int = 0
    relation_count: int = 0
    dyn_calls: int = 0
    dyn_weight: float = 0.0
    total_weight: float = 0.0

    @property
    def static_weight(self) -> float:
        return float(self.num_imports + self.num_method_calls + self.relation_count)

    @property
    def key(self) -> EdgeKey:
        return (self.a, self.b)


@dataclass
class DependencyGraph:
    nodes: dict[ModulePath, Node] = field(default_factory=dict)
    edges: dict[EdgeKey, Edge] = field(default_factory=dict)
    max_static_weight: float = 0.0
    max_dyn_calls: int = 0
    warnings: list[str] = field(default_factory=list)

    def edge(self, a: ModulePath, b: ModulePath) -> Edge | None:
        return self.edges.get(edge_key(a, b))

    def copy(self) -> "DependencyGraph":
        return DependencyGraph(
            nodes=dict(self.nodes),
            edges=dict(self.edges),
            max_static_weight=self.max_static_weight,
            max_dyn_calls=self.max_dyn_calls,
            warnings=list(self.warnings),
        )


_GRAPH_KINDS = (Kind.MODEL, Kind.VIEW, Kind.SERIALIZER)


def build_static_graph(facts: ProjectFacts) -> DependencyGraph:
    """Derive nodes and statically-weighted edges from scanned facts.

    Every model, view, and serializer class is a node even when isolated.
    Other-kind classes join the graph only when an import edge ties them to
    a model or a view.
    """
    kinds = {c.node_path: c.kind for c in facts.classes}
    calls_by_pair: dict[tuple[ModulePath, ModulePath], int] = {}
    for call in facts.calls:
        if call.target not in kinds or call.caller == call.target:
            continue
        calls_by_pair[(call.caller, call.target)] = (
            calls_by_pair.get((call.caller, call.target), 0) + call.count
        )

    imports_by_file: dict[ModulePath, set[ModulePath]] = {}
    for imp in facts.imports:
        if not imp.external:
            imports_by_file.setdefault(imp.importer, set()).add(imp.imported)

    classes_by_file: dict[ModulePath, list] = {}
    for cls in facts.classes:
        classes_by_file.setdefault(cls.module, []).append(cls)

    warnings: list[str] = []
    pair_imports: dict[tuple[ModulePath, ModulePath], int] = {}
    for cls in sorted(facts.classes, key=lambda c: c.node_path):
        for target in cls.refs:
            if target in kinds and target != cls.node_path:
                file_imports = imports_by_file.get(cls.module, set())
                if target in file_imports:
                    pair_imports[(cls.node_path, target)] = 1

    # Imports referenced by no class attach to a sole class, else drop.
    referenced_by_file: dict[ModulePath, set[ModulePath]] = {}
    for cls in facts.classes:
        referenced_by_file.setdefault(cls.module, set()).update(cls.refs)
    for importer, targets in sorted(imports_by_file.items()):
        for target in sorted(targets):
            if target not in kinds:
                continue
            if target in referenced_by_file.get(importer, set()):
                continue
            file_classes = classes_by_file.get(importer, [])
            if len(file_classes) == 1:
                owner = file_classes[0].node_path
                if owner != target:
                    pair_imports[(owner, target)] = 1
            else:
                warnings.append(
                    f"import of {target} in {importer} is referenced by no class; dropped"
                )

    components: dict[EdgeKey, dict[str, int]] = {}

    def bump(a: ModulePath, b: ModulePath, kind: str, amount: int) -> None:
        slot = components.setdefault(edge_key(a, b), {})
        slot[kind] = slot.get(kind, 0) + amount

    for (caller, target), count in sorted(calls_by_pair.items()):
        bump(caller, target, "calls", count)
    for (owner, target) in sorted(pair_imports):
        bump(owner, target, "imports", 1)
    for rel in facts.relations:
        if rel.source_model == rel.target_model:
            continue
        bump(rel.source_model, rel.target_model, "relations", 1)

    nodes: dict[ModulePath, Node] = {}
    for cls in sorted(facts.classes, key=lambda c: c.node_path):
        if cls.kind in _GRAPH_KINDS:
            nodes[cls.node_path] = Node(cls.node_path, cls.kind)

    edges: dict[EdgeKey, Edge] = {}
    for key in sorted(components):
        slot = components[key]
        a, b = key
        kind_a, kind_b = kinds[a], kinds[b]
        pair_kinds = {kind_a, kind_b}
        if Kind.OTHER in pair_kinds:
            # Other-kind classes qualify only through an import edge
            # touching a model or a view.
            partner = pair_kinds - {Kind.OTHER}
            if not slot.get("imports") or not partner & {Kind.MODEL, Kind.VIEW}:
                continue
        static = slot.get("imports", 0) + slot.get("calls", 0) + slot.get("relations", 0)
        if static == 0:
            continue
        edges[key] = Edge(
            a=a,
            b=b,
            num_imports=slot.get("imports", 0),
            num_method_calls=slot.get("calls", 0),
            relation_count=slot.get("relations", 0),
        )
        for path in key:
            if path not in nodes:
                nodes[path] = Node(path, kinds[path])

    max_static = max((e.static_weight for e in edges.values()), default=0.0)
    return DependencyGraph(
        nodes=nodes,
        edges=edges,
        max_static_weight=max_static,
        warnings=warnings,
    )


def apply_dynamic(
    graph: DependencyGraph,
    edge_calls: dict[tuple[ModulePath, ModulePath], int],
) -> DependencyGraph:
    """Attach dynamic call counts and normalized dynamic weights.

    The heaviest dynamic edge is scaled to the maximum static weight; pairs
    unseen statically get a fresh edge with zero static components. With no
    dynamic data the graph is returned unchanged.
    """
    if not edge_calls:
        return graph
    out = graph.copy()
    max_calls = max(edge_calls.values())
    out.max_dyn_calls = max_calls
    fallback = graph.max_static_weight == 0.0
    if fallback:
        out.warnings.append(
            "no static edges; dynamic weights fall back to raw call counts"
        )
    for (a, b), calls in sorted(edge_calls.items()):
        if a not in out.nodes or b not in out.nodes:
            out.warnings.append(f"dynamic edge {a} -- {b} names unknown nodes; dropped")
            continue
        if a == b:
            continue
        key = edge_key(a, b)
        edge = out.edges.get(key) or Edge(a=key[0], b=key[1])
        if fallback:
            weight = float(calls)
        else:
            # (calls / max) * scale keeps integer rescaling of the call
            # counts bitwise-invariant.
            weight = (calls / max_calls) * graph.max_static_weight
        out.edges[key] = replace(edge, dyn_calls=calls, dyn_weight=weight)
    return out


def finalize_weights(graph: DependencyGraph) -> DependencyGraph:
    """Set total weights and drop edges that carry no weight at all."""
    out = graph.copy()
    out.edges = {}
    for key in sorted(graph.edges):
        edge = graph.edges[key]
        total = edge.static_weight + edge.dyn_weight
        if total <= 0.0:
            continue
        out.edges[key] = replace(edge, total_weight=total)
    return out
