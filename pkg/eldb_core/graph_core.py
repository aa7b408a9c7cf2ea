"""Graph families, gadget trees, products, distances and balls."""
import json
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from eldb_core.exceptions import (
    ConnectivityError,
    DuplicateEdgeError,
    EdgeCountError,
    InvalidInputError,
    InvalidParameterError,
    MalformedLineError,
    SelfLoopError,
    VertexRangeError,
)
from eldb_core.models import UNREACHABLE, Ball, DistanceMatrix, Family, Graph, ProductKind


# Smallest allowed size per family.
FAMILY_MIN_SIZE = {
    Family.PATH: 2,
    Family.CYCLE: 3,
    Family.COMPLETE: 2,
    Family.STAR: 2,
}


def graph_from_edges(
    n: int,
    edges: Iterable[Tuple[int, int]],
    labels: Optional[Sequence[str]] = None,
    allow_disconnected: bool = False,
) -> Graph:
    """
    Build a Graph from an edge list.

    Args:
        n: Vertex count
        edges: Pairs (u, v) in either orientation
        labels: Optional provenance label per vertex
        allow_disconnected: Skip the connectivity check

    Returns:
        Graph: Validated graph
    """
    if n < 2:
        raise InvalidParameterError(f"graph must have at least 2 vertices, got {n}")
    neighbours: List[set] = [set() for _ in range(n)]
    for u, v in edges:
        if u == v:
            raise InvalidInputError(f"self-loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise InvalidInputError(f"edge {u}-{v} out of range 0..{n - 1}")
        if v in neighbours[u]:
            raise InvalidInputError(f"duplicate edge {min(u, v)}-{max(u, v)}")
        neighbours[u].add(v)
        neighbours[v].add(u)

    g = Graph(
        vertex_count=n,
        adjacency=tuple(tuple(sorted(nbrs)) for nbrs in neighbours),
        labels=tuple(labels) if labels is not None else None,
    )
    if not allow_disconnected and not g.is_connected:
        pair = _unreachable_pair(g)
        raise ConnectivityError(f"graph is disconnected: no path between {pair[0]} and {pair[1]}", pair=pair)
    return g


def _unreachable_pair(g: Graph) -> Tuple[int, int]:
    reached = nx.node_connected_component(g.to_networkx(), 0)
    missing = min(v for v in range(g.vertex_count) if v not in reached)
    return (0, missing)


def from_networkx(nxg: nx.Graph, labels: Optional[Sequence[str]] = None) -> Graph:
    """Convert a networkx graph whose nodes are 0..n-1."""
    n = nxg.number_of_nodes()
    if sorted(nxg.nodes) != list(range(n)):
        raise InvalidInputError("networkx graph nodes must be exactly 0..n-1")
    return graph_from_edges(n, nxg.edges(), labels=labels)


def generate(family: Union[Family, str], size: int) -> Graph:
    """
    Canonical member of a basic family.

    Paths are numbered in order, cycles use edges (i, i+1 mod n) and the
    star K_{1,n-1} has its center at 0.
    """
    try:
        family = Family(family)
    except ValueError:
        raise InvalidParameterError(f"unknown family {family!r}; expected one of {[f.value for f in Family]}")

    minimum = FAMILY_MIN_SIZE[family]
    if size < minimum:
        raise InvalidParameterError(f"{family.value} size must be >= {minimum}, got {size}")

    if family == Family.PATH:
        nxg = nx.path_graph(size)
    elif family == Family.CYCLE:
        nxg = nx.cycle_graph(size)
    elif family == Family.COMPLETE:
        nxg = nx.complete_graph(size)
    else:
        nxg = nx.star_graph(size - 1)
    return from_networkx(nxg)


def subdivided_star(i: int, n: int) -> Graph:
    """
    The i-th subdivision of K_{1,n-1}.

    Leg j (0-based) holds vertices at distance t = 1..i+1 from the center 0
    with id 1 + j(i+1) + (t-1).
    """
    if i < 0:
        raise InvalidParameterError(f"subdivision count must be >= 0, got {i}")
    if n < 3:
        raise InvalidParameterError(f"star order must be >= 3 (a smaller star is a path), got {n}")

    leg_length = i + 1
    edges = []
    for j in range(n - 1):
        first = 1 + j * leg_length
        edges.append((0, first))
        for t in range(1, leg_length):
            edges.append((first + t - 1, first + t))
    return graph_from_edges(1 + leg_length * (n - 1), edges)


def build_tk(k: int) -> Graph:
    """
    Bicentral tree T_k on 4k-2 vertices.

    T_1 is K_2 on {0, 1}. Each later step hangs two new leaves on each of the
    two active endpoints, and the lower new id on each side becomes active.
    """
    if k < 1:
        raise InvalidParameterError(f"k must be >= 1, got {k}")

    edges = [(0, 1)]
    active = [0, 1]
    next_id = 2
    for _ in range(2, k + 1):
        new_active = []
        for a in active:
            edges.append((a, next_id))
            edges.append((a, next_id + 1))
            new_active.append(next_id)
            next_id += 2
        active = new_active
    return graph_from_edges(next_id, edges)


_PRODUCTS = {
    ProductKind.LEXICOGRAPHIC: nx.lexicographic_product,
    ProductKind.STRONG: nx.strong_product,
    ProductKind.CARTESIAN: nx.cartesian_product,
}


def product(kind: Union[ProductKind, str], g: Graph, h: Graph) -> Graph:
    """
    Graph product with vertex (i, j) at id i*|V(H)| + j.

    Labels record the pair of factor labels.
    """
    try:
        kind = ProductKind(kind)
    except ValueError:
        raise InvalidParameterError(f"unknown product {kind!r}; expected one of {[p.value for p in ProductKind]}")

    width = h.vertex_count
    nxp = _PRODUCTS[kind](g.to_networkx(), h.to_networkx())
    edges = [(a[0] * width + a[1], b[0] * width + b[1]) for a, b in nxp.edges()]
    labels = [
        f"({g.label(i)},{h.label(j)})"
        for i in range(g.vertex_count)
        for j in range(width)
    ]
    return graph_from_edges(g.vertex_count * width, edges, labels=labels)


def all_pairs_distances(g: Graph, allow_disconnected: bool = False) -> DistanceMatrix:
    """
    BFS hop distances between every pair of vertices.

    Unreachable pairs hold UNREACHABLE when allow_disconnected is set;
    eccentricities are then taken within each component.
    """
    n = g.vertex_count
    dist = np.full((n, n), UNREACHABLE, dtype=np.int64)
    nxg = g.to_networkx()
    for source, lengths in nx.all_pairs_shortest_path_length(nxg):
        for target, length in lengths.items():
            dist[source, target] = length

    connected = not bool((dist == UNREACHABLE).any())
    if not connected and not allow_disconnected:
        u, v = (int(x) for x in np.argwhere(dist == UNREACHABLE)[0])
        raise ConnectivityError(f"graph is disconnected: no path between {u} and {v}", pair=(u, v))

    finite = np.where(dist == UNREACHABLE, -1, dist)
    ecc = tuple(int(e) for e in finite.max(axis=1))
    radius = min(ecc)
    return DistanceMatrix(
        dist=dist,
        ecc=ecc,
        radius=radius,
        diameter=max(ecc),
        center=tuple(v for v, e in enumerate(ecc) if e == radius),
        connected=connected,
    )


def ball(g: Graph, d: DistanceMatrix, v: int, r: int) -> Ball:
    """Closed ball {u : d(u, v) <= r}."""
    if not 0 <= v < g.vertex_count:
        raise InvalidParameterError(f"vertex {v} out of range 0..{g.vertex_count - 1}")
    if r < 0:
        raise InvalidParameterError(f"radius must be >= 0, got {r}")
    covered = tuple(int(u) for u in np.flatnonzero(d.dist[v] <= r))
    return Ball(center=v, radius=r, covered=covered)


def parse_graph(text: str, allow_disconnected: bool = False) -> Graph:
    """
    Read the edge-list text format.

    Lines starting with '#' and blank lines are skipped. The first remaining
    line is "n m", followed by exactly m lines "u v".
    """
    header = None
    edges: List[Tuple[int, int]] = []
    seen = {}
    for line_number, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        try:
            numbers = [int(p) for p in parts]
        except ValueError:
            raise MalformedLineError("expected integers", line_number, line)
        if len(numbers) != 2:
            raise MalformedLineError(f"expected 2 integers, got {len(numbers)}", line_number, line)

        if header is None:
            n, m = numbers
            if n < 2:
                raise MalformedLineError(f"vertex count must be >= 2, got {n}", line_number, line)
            if m < 0:
                raise MalformedLineError(f"edge count must be >= 0, got {m}", line_number, line)
            header = (n, m)
            continue

        n, m = header
        u, v = numbers
        if u == v:
            raise SelfLoopError(f"self-loop at vertex {u}", line_number, line)
        if not (0 <= u < n and 0 <= v < n):
            raise VertexRangeError(f"vertex id out of range 0..{n - 1}", line_number, line)
        if len(edges) == m:
            raise EdgeCountError(f"more than the declared {m} edges", line_number, line)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DuplicateEdgeError(f"edge {key[0]}-{key[1]} already listed on line {seen[key]}", line_number, line)
        seen[key] = line_number
        edges.append(key)

    if header is None:
        raise MalformedLineError("missing 'n m' header line")
    n, m = header
    if len(edges) != m:
        raise EdgeCountError(f"header declares {m} edges but {len(edges)} were listed")
    return graph_from_edges(n, edges, allow_disconnected=allow_disconnected)


def serialize_graph(g: Graph) -> str:
    """Canonical text form: header then edges sorted lexicographically."""
    lines = [f"{g.vertex_count} {g.edge_count}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def serialize_labels(g: Graph) -> Optional[str]:
    """Labels as a JSON object keyed by vertex id string, or None."""
    if g.labels is None:
        return None
    return json.dumps({str(v): label for v, label in enumerate(g.labels)}, indent=2, sort_keys=False) + "\n"


def with_labels(g: Graph, labels: Optional[Sequence[str]]) -> Graph:
    """Copy of g carrying the given labels."""
    return Graph(
        vertex_count=g.vertex_count,
        adjacency=g.adjacency,
        labels=tuple(labels) if labels is not None else None,
    )
