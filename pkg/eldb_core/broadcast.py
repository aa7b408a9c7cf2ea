"""Hearing, domination and efficiency checks for broadcasts.

Everything here is computed straight from the hearing rule
H(u) = {v : f(v) >= 1, d(u, v) <= f(v)} and never looks at solver state.
"""
import json
from itertools import combinations
from typing import Iterable, List, Optional, Union

import numpy as np

from eldb_core.exceptions import InvalidInputError, InvalidParameterError
from eldb_core.models import Broadcast, DistanceMatrix, Graph, HearingReport, PackingViolation


def hearing_matrix(d: DistanceMatrix, f: Broadcast) -> np.ndarray:
    """Boolean matrix whose entry [u, v] says u hears v."""
    costs = np.asarray(f.costs, dtype=np.int64)
    return (d.dist <= costs[np.newaxis, :]) & (costs >= 1)[np.newaxis, :]


def hearing_counts(d: DistanceMatrix, costs) -> np.ndarray:
    """|H(u)| for every vertex, for one cost vector or a batch (rows)."""
    costs = np.atleast_2d(np.asarray(costs, dtype=np.int64))
    hears = (d.dist[np.newaxis, :, :] <= costs[:, np.newaxis, :]) & (costs >= 1)[:, np.newaxis, :]
    return hears.sum(axis=2)


def classify(g: Graph, d: DistanceMatrix, f: Broadcast) -> HearingReport:
    """
    Evaluate a broadcast on g.

    Costs above a broadcaster's eccentricity are accepted and listed in
    `exceeds_eccentricity`; the ball just saturates.
    """
    if f.vertex_count != g.vertex_count:
        raise InvalidInputError(
            f"broadcast has {f.vertex_count} costs but the graph has {g.vertex_count} vertices"
        )
    if d.vertex_count != g.vertex_count:
        raise InvalidInputError("distance matrix does not belong to this graph")

    hears = hearing_matrix(d, f)
    counts = hears.sum(axis=1)
    costs = np.asarray(f.costs, dtype=np.int64)
    strictly_inside = (d.dist < costs[np.newaxis, :]) & (costs >= 1)[np.newaxis, :]

    return HearingReport(
        hearers=[np.flatnonzero(row).tolist() for row in hears],
        coverage_count=int((counts >= 1).sum()),
        is_dominating=bool((counts >= 1).all()),
        is_efficient=bool((counts <= 1).all()),
        is_k_eldb=bool((counts == 1).all()),
        cost=f.cost,
        overdominated=np.flatnonzero(strictly_inside.any(axis=1)).tolist(),
        exceeds_eccentricity=[v for v in f.broadcasters if f.costs[v] > d.ecc[v]],
    )


def influence(g: Graph, s: Iterable[int]) -> Union[int, PackingViolation]:
    """
    I(S) = sum of (1 + deg v) over S when S is a 2-packing.

    Returns the first pair (in sorted order) whose closed neighbourhoods
    meet otherwise.
    """
    vertices = sorted(set(s))
    for v in vertices:
        if not 0 <= v < g.vertex_count:
            raise InvalidParameterError(f"vertex {v} out of range 0..{g.vertex_count - 1}")

    closed = {v: {v, *g.neighbors(v)} for v in vertices}
    for u, v in combinations(vertices, 2):
        shared = closed[u] & closed[v]
        if shared:
            return PackingViolation(u=u, v=v, shared=tuple(sorted(shared)))
    return sum(1 + g.degree(v) for v in vertices)


def support_vertex_conflicts(g: Graph, d: DistanceMatrix, f: Broadcast) -> List[int]:
    """
    Support vertices sitting on the boundary of some broadcast ball.

    A support vertex s at distance exactly f(v) from a broadcaster v, with a
    leaf neighbour outside that ball, leaves the leaf hearing v not at all and
    any other broadcaster the leaf hears is also heard by s. No efficient
    dominating broadcast has such a vertex.
    """
    leaves = {v for v in range(g.vertex_count) if g.degree(v) == 1}
    conflicts = []
    for s in range(g.vertex_count):
        leaf_neighbours = [u for u in g.neighbors(s) if u in leaves]
        if not leaf_neighbours:
            continue
        for v in f.broadcasters:
            r = f.costs[v]
            if d.d(s, v) == r and any(d.d(leaf, v) > r for leaf in leaf_neighbours):
                conflicts.append(s)
                break
    return conflicts


def is_efficiently_dominatable(g: Graph, node_limit: Optional[int] = None) -> bool:
    """True when g has a 1-ELDB, i.e. an efficient dominating set."""
    from eldb_core.solver import exists_k_eldb

    return exists_k_eldb(g, 1, node_limit=node_limit).feasible


def parse_broadcast(text: str, cap: Optional[int] = None) -> Broadcast:
    """Broadcast from a JSON array of non-negative integers."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidInputError(f"broadcast is not valid JSON: {e}") from e
    if not isinstance(raw, list) or not all(isinstance(c, int) and not isinstance(c, bool) for c in raw):
        raise InvalidInputError("broadcast must be a JSON array of integers")
    return Broadcast.from_costs(raw, cap=cap)


def serialize_broadcast(f: Broadcast) -> str:
    return json.dumps(f.to_list())
