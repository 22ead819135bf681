"""Girvan-Newman clustering of the dependency graph.

Shortest paths treat an edge's distance as the reciprocal of its weight, so
strongly coupled components sit close together and removals land on weak
edges. All tie-breaking is lexicographic on node identifiers, which makes
the dendrogram reproducible bit for bit regardless of insertion order or
thread count.
"""

from __future__ import annotations

import heapq
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .errors import FatalError
from .graph import DependencyGraph, EdgeKey, edge_key
from .paths import ModulePath

Adjacency = dict[ModulePath, dict[ModulePath, float]]


@dataclass(frozen=True)
class Partition:
    communities: tuple[tuple[ModulePath, ...], ...]
    modularity: float


@dataclass(frozen=True)
class DendrogramStep:
    removed_edge: EdgeKey | None
    partition: Partition


Dendrogram = list[DendrogramStep]


def _adjacency(graph: DependencyGraph, weighted: bool) -> Adjacency:
    adj: Adjacency = {node: {} for node in graph.nodes}
    for (a, b), edge in graph.edges.items():
        distance = 1.0 / edge.total_weight if weighted else 1.0
        adj[a][b] = distance
        adj[b][a] = distance
    return adj


def _source_dependencies(adj: Adjacency, source: ModulePath) -> dict[EdgeKey, float]:
    """Brandes accumulation of shortest-path fractions from one source."""
    dist: dict[ModulePath, float] = {source: 0.0}
    sigma: dict[ModulePath, float] = {source: 1.0}
    preds: dict[ModulePath, list[ModulePath]] = {source: []}
    settled: list[ModulePath] = []
    done: set[ModulePath] = set()
    heap: list[tuple[float, ModulePath]] = [(0.0, source)]
    while heap:
        d, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        settled.append(v)
        for w, length in adj[v].items():
            nd = d + length
            cur = dist.get(w)
            if cur is None or nd < cur:
                dist[w] = nd
                sigma[w] = sigma[v]
                preds[w] = [v]
                heapq.heappush(heap, (nd, w))
            elif nd == cur:
                sigma[w] += sigma[v]
                preds[w].append(v)

    delta = {v: 0.0 for v in settled}
    contrib: dict[EdgeKey, float] = {}
    for w in reversed(settled):
        coeff = (1.0 + delta[w]) / sigma[w]
        for v in preds[w]:
            c = sigma[v] * coeff
            key = edge_key(v, w)
            contrib[key] = contrib.get(key, 0.0) + c
            delta[v] += c
    return contrib


def _accumulate(
    adj: Adjacency, sources: list[ModulePath], threads: int
) -> dict[EdgeKey, float]:
    if threads > 1 and len(sources) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda s: _source_dependencies(adj, s), sources))
    else:
        parts = [_source_dependencies(adj, s) for s in sources]
    total: dict[EdgeKey, float] = {}
    # Per-source contributions fold in source order, so parallel and
    # sequential runs produce identical floating-point sums.
    for part in parts:
        for key, value in part.items():
            total[key] = total.get(key, 0.0) + value
    return total


def edge_betweenness(
    graph: DependencyGraph, weighted: bool = True, threads: int = 1
) -> dict[EdgeKey, float]:
    """Shortest-path betweenness for every edge, halved for undirectedness."""
    adj = _adjacency(graph, weighted)
    acc = _accumulate(adj, sorted(adj), threads)
    return {key: acc.get(key, 0.0) / 2.0 for key in sorted(graph.edges)}


def _components(adj: Adjacency, nodes: set[ModulePath]) -> list[frozenset[ModulePath]]:
    comps: list[frozenset[ModulePath]] = []
    seen: set[ModulePath] = set()
    for start in sorted(nodes):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w in nodes and w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def modularity(graph: DependencyGraph, partition) -> float:
    """Newman weighted modularity of a partition over the graph's nodes.

    A graph without edges scores 0 by convention.
    """
    if isinstance(partition, Partition):
        communities = partition.communities
    else:
        communities = tuple(tuple(c) for c in partition)
    seen: set[ModulePath] = set()
    for community in communities:
        if not community:
            raise FatalError("partition contains an empty community")
        for node in community:
            if node in seen:
                raise FatalError(f"node {node} appears in more than one community")
            seen.add(node)
    if seen != set(graph.nodes):
        raise FatalError("partition does not cover the graph nodes")

    total = 0.0
    degree: dict[ModulePath, float] = {node: 0.0 for node in graph.nodes}
    for key in sorted(graph.edges):
        weight = graph.edges[key].total_weight
        total += weight
        degree[key[0]] += weight
        degree[key[1]] += weight
    if total == 0.0:
        return 0.0

    index = {node: i for i, community in enumerate(communities) for node in community}
    intra = [0.0] * len(communities)
    strength = [0.0] * len(communities)
    for key in sorted(graph.edges):
        a, b = key
        if index[a] == index[b]:
            intra[index[a]] += graph.edges[key].total_weight
    for node in sorted(degree):
        strength[index[node]] += degree[node]
    q = 0.0
    for i in range(len(communities)):
        q += intra[i] / total - (strength[i] / (2.0 * total)) ** 2
    return q


def _partition_of(
    comps: list[frozenset[ModulePath]], graph: DependencyGraph
) -> Partition:
    communities = tuple(sorted(tuple(sorted(c)) for c in comps))
    part = Partition(communities=communities, modularity=0.0)
    return Partition(communities=communities, modularity=modularity(graph, part))


def girvan_newman(
    graph: DependencyGraph, weighted: bool = True, threads: int = 1
) -> Dendrogram:
    """Divisive clustering by repeated removal of the max-betweenness edge.

    Betweenness ties resolve to the lexicographically greatest endpoint
    pair. A step is recorded whenever the component count grows; each
    partition's modularity is evaluated against the input graph.
    """
    nodes = set(graph.nodes)
    if not nodes:
        return []
    adj = _adjacency(graph, weighted)
    comps = _components(adj, nodes)
    steps: Dendrogram = [DendrogramStep(None, _partition_of(comps, graph))]

    bc: dict[EdgeKey, float] = {key: 0.0 for key in graph.edges}
    for comp in comps:
        if len(comp) > 1:
            _refresh_component(adj, comp, bc, threads)

    while bc:
        top = max(bc.values())
        target = max(key for key, value in bc.items() if value == top)
        a, b = target
        del bc[target]
        del adj[a][b]
        del adj[b][a]

        host = next(c for c in comps if a in c)
        parts = _components(adj, set(host))
        comps = [c for c in comps if c is not host] + parts
        for key in [k for k in bc if k[0] in host]:
            bc[key] = 0.0
        for part in parts:
            if len(part) > 1:
                _refresh_component(adj, part, bc, threads)
        if len(parts) > 1:
            steps.append(DendrogramStep(target, _partition_of(comps, graph)))
    return steps


def _refresh_component(
    adj: Adjacency,
    comp: frozenset[ModulePath],
    bc: dict[EdgeKey, float],
    threads: int,
) -> None:
    acc = _accumulate(adj, sorted(comp), threads)
    for key, value in acc.items():
        bc[key] = value / 2.0


def best_partition(
    graph: DependencyGraph,
    target: int | None = None,
    weighted: bool = True,
    threads: int = 1,
) -> Partition:
    """Pick a dendrogram step: the first one reaching ``target`` communities,
    or the max-modularity step (earliest on ties) when no target is given.
    """
    if not graph.nodes:
        return Partition(communities=(), modularity=0.0)
    if target is not None:
        if target < 1:
            raise FatalError("service count must be at least 1")
        if target > len(graph.nodes):
            raise FatalError(
                f"requested {target} services but the graph has only "
                f"{len(graph.nodes)} nodes"
            )
    dendrogram = girvan_newman(graph, weighted=weighted, threads=threads)
    if target is not None:
        for step in dendrogram:
            if len(step.partition.communities) >= target:
                return step.partition
        return dendrogram[-1].partition
    best = dendrogram[0].partition
    for step in dendrogram[1:]:
        if step.partition.modularity > best.modularity:
            best = step.partition
    return best
