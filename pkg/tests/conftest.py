from __future__ import annotations

from pathlib import Path

import pytest

from monobreak import (
    DependencyGraph,
    Edge,
    Kind,
    ModulePath,
    Node,
    aggregate_edge_calls,
    apply_dynamic,
    build_static_graph,
    edge_key,
    finalize_weights,
    load_ops,
    scan_project,
)

FIXTURES = Path(__file__).parent / "fixtures"
ORDERS_DEMO = FIXTURES / "orders_demo"
OPS_JSON = FIXTURES / "ops.json"


def make_graph(
    weights: dict[tuple[str, str], float], extra_nodes: tuple[str, ...] = ()
) -> DependencyGraph:
    """Graph with given total weights, for clustering tests."""
    nodes: dict[ModulePath, Node] = {}
    edges: dict = {}
    for (a, b), w in weights.items():
        pa, pb = ModulePath.parse(a), ModulePath.parse(b)
        for p in (pa, pb):
            nodes.setdefault(p, Node(p, Kind.OTHER))
        key = edge_key(pa, pb)
        edges[key] = Edge(a=key[0], b=key[1], total_weight=float(w))
    for name in extra_nodes:
        p = ModulePath.parse(name)
        nodes.setdefault(p, Node(p, Kind.OTHER))
    return DependencyGraph(nodes=nodes, edges=edges)


@pytest.fixture(scope="session")
def demo_facts():
    return scan_project(ORDERS_DEMO)


@pytest.fixture(scope="session")
def demo_static_graph(demo_facts):
    return build_static_graph(demo_facts)


@pytest.fixture(scope="session")
def demo_edge_calls(demo_facts):
    calls, warnings = aggregate_edge_calls(load_ops(OPS_JSON), demo_facts)
    assert not warnings
    return calls


@pytest.fixture(scope="session")
def demo_graph(demo_static_graph, demo_edge_calls):
    return finalize_weights(apply_dynamic(demo_static_graph, demo_edge_calls))


def path(dotted: str) -> ModulePath:
    return ModulePath.parse(dotted)
