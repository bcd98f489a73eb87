"""Network metrics: degrees, components, clustering, distances, diameter.

Everything runs on the undirected projection; weighted degrees pull edge
weights and loop counts from the TransactionGraph. Traversals break ties
by ascending node index so repeated runs (at any worker count) produce
identical output.
"""

from __future__ import annotations

import math
import random
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, TextIO

from chaingraph.graph import SimpleGraph, TransactionGraph, project_simple

EXACT = "exact"
SAMPLED = "sampled"
LOWER_BOUND = "lower_bound"


@dataclass(frozen=True)
class ExactnessPolicy:
    """When to fall back from all-pairs BFS to seeded source sampling."""

    exact_threshold: int = 50_000
    sample_sources: int = 1_000
    seed: int = 0


@dataclass
class DegreeHistogram:
    entries: dict[int, int]
    weighted: bool
    n: int

    def total_nodes(self) -> int:
        return sum(self.entries.values())

    def degree_sum(self) -> int:
        return sum(deg * count for deg, count in self.entries.items())


@dataclass
class ComponentSet:
    assignment: list[int]
    sizes: dict[int, tuple[int, int]]
    largest_id: int

    @property
    def num_components(self) -> int:
        return len(self.sizes)

    def members(self, component_id: int) -> list[int]:
        return [i for i, c in enumerate(self.assignment) if c == component_id]


@dataclass
class MetricsReport:
    n: int
    m: int
    avg_clustering: float
    transitivity: float
    num_components: int
    largest_component_nodes: int
    largest_component_edges: int


@dataclass
class DistanceSummary:
    average_distance: float
    diameter: int
    l_method: str
    diameter_method: str
    sample_sources: Optional[int] = None
    seed: Optional[int] = None


def degree_distribution(g: TransactionGraph, weighted: bool = False) -> DegreeHistogram:
    """Histogram of degrees. Unweighted: distinct neighbors, +1 if the
    node has any loop. Weighted: sum of incident edge weights plus the
    node's loop count."""
    degrees = {label: 0 for label in g.labels}
    for (u, v), data in g.edges.items():
        inc = data.weight if weighted else 1
        degrees[u] += inc
        degrees[v] += inc
    for label, count in g.loops.items():
        degrees[label] += count if weighted else 1
    entries: dict[int, int] = {}
    for deg in degrees.values():
        entries[deg] = entries.get(deg, 0) + 1
    return DegreeHistogram(entries=entries, weighted=weighted, n=g.n)


def connected_components(g: SimpleGraph) -> ComponentSet:
    """BFS component labeling; component ids follow ascending node index,
    the largest component breaks ties by smallest id."""
    assignment = [-1] * g.n
    sizes: dict[int, tuple[int, int]] = {}
    next_id = 0
    for start in range(g.n):
        if assignment[start] != -1:
            continue
        assignment[start] = next_id
        queue = deque([start])
        node_count = 0
        degree_sum = 0
        while queue:
            v = queue.popleft()
            node_count += 1
            degree_sum += len(g.adj[v])
            for u in g.adj[v]:
                if assignment[u] == -1:
                    assignment[u] = next_id
                    queue.append(u)
        sizes[next_id] = (node_count, degree_sum // 2)
        next_id += 1
    largest_id = 0
    best = -1
    for cid in sorted(sizes):
        if sizes[cid][0] > best:
            best = sizes[cid][0]
            largest_id = cid
    return ComponentSet(assignment=assignment, sizes=sizes, largest_id=largest_id)


def largest_component(g: SimpleGraph,
                      components: Optional[ComponentSet] = None) -> SimpleGraph:
    """Induced subgraph on the largest component (nodes in ascending
    original index order). Empty graph maps to itself."""
    if g.n == 0:
        return g
    if components is None:
        components = connected_components(g)
    members = components.members(components.largest_id)
    return g.subgraph(members)


def _triangles_and_triplets(g: SimpleGraph) -> tuple[int, int]:
    adj_sets = [set(neigh) for neigh in g.adj]
    triplets = sum(len(neigh) * (len(neigh) - 1) // 2 for neigh in g.adj)
    # Each triangle is seen once per edge from its lowest-index corner side;
    # counting common neighbors over edges (u < v) counts it 3 times.
    tri3 = 0
    for u in range(g.n):
        for v in g.adj[u]:
            if u < v:
                tri3 += len(adj_sets[u] & adj_sets[v])
    return tri3 // 3, triplets


def transitivity(g: SimpleGraph) -> float:
    """Global clustering: 3 * triangles / connected triplets; 0 when the
    graph has no connected triplet."""
    triangles, triplets = _triangles_and_triplets(g)
    if triplets == 0:
        return 0.0
    return 3.0 * triangles / triplets


def local_clustering(g: SimpleGraph, node: int) -> float:
    """Fraction of this node's neighbor pairs that are linked; 0 when the
    node has fewer than two neighbors."""
    neigh = g.adj[node]
    d = len(neigh)
    if d < 2:
        return 0.0
    neigh_set = set(neigh)
    links = sum(len(neigh_set.intersection(g.adj[u])) for u in neigh) // 2
    return links / (d * (d - 1) / 2)


def average_local_clustering(g: SimpleGraph, count_low_degree: bool = True) -> float:
    """Mean local clustering over nodes. Degree-<2 nodes count as zero by
    default; with count_low_degree=False they are excluded from the mean
    (the unbiased estimator of neighbor-pair closure probability)."""
    if g.n == 0:
        return 0.0
    values = [local_clustering(g, v) for v in range(g.n)]
    if count_low_degree:
        return sum(values) / g.n
    kept = [val for val, neigh in zip(values, g.adj) if len(neigh) >= 2]
    if not kept:
        return 0.0
    return sum(kept) / len(kept)


def bfs_distances(g: SimpleGraph, source: int) -> list[int]:
    """Hop distances from source; -1 for unreachable nodes."""
    dist = [-1] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        dv = dist[v]
        for u in g.adj[v]:
            if dist[u] == -1:
                dist[u] = dv + 1
                queue.append(u)
    return dist


def _sum_and_max_from_sources(g: SimpleGraph, sources: list[int],
                              workers: int = 1) -> tuple[int, int]:
    """Total distance and eccentricity max over BFS runs from `sources`.

    Work may be sharded across threads; shards are combined in a fixed
    order so the result is identical for any worker count.
    """

    def run(chunk: list[int]) -> tuple[int, int]:
        total = 0
        longest = 0
        for s in chunk:
            dist = bfs_distances(g, s)
            total += sum(dist)
            longest = max(longest, max(dist))
        return total, longest

    if workers <= 1 or len(sources) < 2 * workers:
        return run(sources)
    size = math.ceil(len(sources) / workers)
    chunks = [sources[i:i + size] for i in range(0, len(sources), size)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(run, chunks))
    total = sum(p[0] for p in parts)
    longest = max(p[1] for p in parts)
    return total, longest


def _double_sweep_lower_bound(g: SimpleGraph) -> int:
    # BFS from node 0 to its farthest node, then BFS again from there;
    # the second eccentricity lower-bounds the diameter.
    dist = bfs_distances(g, 0)
    far = max(range(g.n), key=lambda i: (dist[i], -i))
    return max(bfs_distances(g, far))


def distance_summary(g: SimpleGraph, policy: ExactnessPolicy = ExactnessPolicy(),
                     workers: int = 1) -> DistanceSummary:
    """Average shortest-path length and diameter of a connected graph.

    Below policy.exact_threshold both come from all-pairs BFS. Above it,
    L is averaged over policy.sample_sources seeded sources and the
    diameter is a double-sweep lower bound; both are labeled as such.
    """
    if g.n == 0:
        raise ValueError("distance_summary needs a non-empty graph")
    if g.n == 1:
        return DistanceSummary(0.0, 0, EXACT, EXACT)
    if -1 in bfs_distances(g, 0):
        raise ValueError("distance_summary requires a connected graph")

    if g.n <= policy.exact_threshold:
        total, longest = _sum_and_max_from_sources(g, list(range(g.n)), workers)
        return DistanceSummary(total / (g.n * (g.n - 1)), longest, EXACT, EXACT)

    rng = random.Random(policy.seed)
    k = min(policy.sample_sources, g.n)
    sources = sorted(rng.sample(range(g.n), k))
    total, _ = _sum_and_max_from_sources(g, sources, workers)
    avg = total / (k * (g.n - 1))
    return DistanceSummary(avg, _double_sweep_lower_bound(g), SAMPLED, LOWER_BOUND,
                           sample_sources=k, seed=policy.seed)


def general_metrics(g: TransactionGraph) -> MetricsReport:
    """The one-row summary: counts, both clustering variants, components."""
    simple = project_simple(g)
    comps = connected_components(simple)
    if comps.num_components == 0:
        largest_nodes, largest_edges = 0, 0
    else:
        largest_nodes, largest_edges = comps.sizes[comps.largest_id]
    return MetricsReport(
        n=g.n,
        m=g.m,
        avg_clustering=average_local_clustering(simple),
        transitivity=transitivity(simple),
        num_components=comps.num_components,
        largest_component_nodes=largest_nodes,
        largest_component_edges=largest_edges,
    )


def write_degree_csv(hist: DegreeHistogram, sink: TextIO) -> None:
    sink.write("degree,count\n")
    for deg in sorted(hist.entries):
        sink.write(f"{deg},{hist.entries[deg]}\n")


def write_degree_loglog_csv(hist: DegreeHistogram, sink: TextIO) -> None:
    """Plot-ready log-log points; zero-degree and zero-count bins have no
    logarithm and are skipped."""
    sink.write("log10_degree,log10_count\n")
    for deg in sorted(hist.entries):
        count = hist.entries[deg]
        if deg <= 0 or count <= 0:
            continue
        sink.write(f"{math.log10(deg)!r},{math.log10(count)!r}\n")
