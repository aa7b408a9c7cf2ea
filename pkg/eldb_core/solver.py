"""Exact solvers for efficient k-limited dominating broadcasts.

A k-ELDB is a partition of V into balls of radius 1..k (every broadcaster
hears itself, so chosen balls are disjoint and must cover V). All objectives
run on one exact-cover search over integer bitmasks.
"""
from fractions import Fraction
from itertools import islice, product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from eldb_core.broadcast import classify, hearing_counts
from eldb_core.config import Settings, load_settings
from eldb_core.error_logger import get_logger
from eldb_core.exceptions import ConnectivityError, InstanceTooLargeError, InvalidParameterError
from eldb_core.graph_core import all_pairs_distances, ball
from eldb_core.models import Ball, Broadcast, DistanceMatrix, Graph, Objective, SolveResult


logger = get_logger("solver")

ORACLE_BATCH = 4096


class _Exhausted(Exception):
    """Raised inside the search when the node limit is hit."""


def _resolve_limit(node_limit: Optional[int]) -> int:
    if node_limit is not None:
        if node_limit < 1:
            raise InvalidParameterError(f"node limit must be >= 1, got {node_limit}")
        return node_limit
    return load_settings().node_limit


def _distances(g: Graph, distances: Optional[DistanceMatrix]) -> DistanceMatrix:
    if distances is not None:
        return distances
    return all_pairs_distances(g, allow_disconnected=True)


def _check_k(k: int) -> None:
    if k < 1:
        raise InvalidParameterError(f"k must be >= 1, got {k}")


def enumerate_balls(
    g: Graph,
    d: DistanceMatrix,
    k: int,
    forbid_cost_one: bool = False,
) -> List[Ball]:
    """
    Candidate balls in (center, radius) order.

    Radii run over 1..k (2..k with forbid_cost_one). Per center, a radius
    whose covered set equals that of a smaller emitted radius is dropped.
    """
    _check_k(k)
    smallest = 2 if forbid_cost_one else 1
    balls = []
    for v in range(g.vertex_count):
        previous = None
        for r in range(smallest, k + 1):
            b = ball(g, d, v, r)
            if b.covered == previous:
                continue
            balls.append(b)
            previous = b.covered
    return balls


def _merge_identical(balls: Sequence[Ball]) -> List[Ball]:
    """Keep one ball per covered set: lowest radius, then first in order."""
    kept: Dict[Tuple[int, ...], Ball] = {}
    for b in balls:
        current = kept.get(b.covered)
        if current is None or b.radius < current.radius:
            kept[b.covered] = b
    survivors = set(id(b) for b in kept.values())
    return [b for b in balls if id(b) in survivors]


class ExactCoverSearch:
    """
    Backtracking exact cover of {0..n-1} by a fixed list of balls.

    The uncovered vertex lying in the fewest still-usable balls is branched
    on first; its balls are tried in list order.
    """

    def __init__(
        self,
        n: int,
        balls: Sequence[Ball],
        node_limit: int,
        merge_identical: bool = True,
    ):
        self.n = n
        self.full = (1 << n) - 1
        self.balls = _merge_identical(balls) if merge_identical else list(balls)
        self.masks = [b.mask for b in self.balls]
        self.radii = [b.radius for b in self.balls]
        self.containing: List[List[int]] = [[] for _ in range(n)]
        for i, b in enumerate(self.balls):
            for v in b.covered:
                self.containing[v].append(i)
        self.node_limit = node_limit
        self.nodes = 0
        self.exhausted = False
        self.max_size = max((b.size for b in self.balls), default=1)
        self.min_ratio = min((Fraction(b.radius, b.size) for b in self.balls), default=Fraction(0))

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.node_limit:
            self.exhausted = True
            raise _Exhausted

    def _choose(self, covered: int) -> Tuple[int, List[int]]:
        best_v, best_options = -1, None
        free = self.full & ~covered
        while free:
            low = free & -free
            v = low.bit_length() - 1
            free ^= low
            options = [i for i in self.containing[v] if not self.masks[i] & covered]
            if best_options is None or len(options) < len(best_options):
                best_v, best_options = v, options
                if not options:
                    break
        return best_v, best_options or []

    def lower_bound(self, remaining: int) -> int:
        """Admissible bound on the cost of covering `remaining` vertices."""
        if remaining == 0:
            return 0
        by_size = -(-remaining // self.max_size)
        by_ratio = remaining * self.min_ratio
        by_ratio = -((-by_ratio.numerator) // by_ratio.denominator)
        return max(by_size, by_ratio)

    def costs(self, chosen: Sequence[int]) -> Tuple[int, ...]:
        costs = [0] * self.n
        for i in chosen:
            costs[self.balls[i].center] = self.radii[i]
        return tuple(costs)

    def first(self) -> Optional[List[int]]:
        """Any exact cover, or None (check `exhausted`)."""
        chosen: List[int] = []

        def search(covered: int) -> bool:
            self._tick()
            if covered == self.full:
                return True
            _, options = self._choose(covered)
            for i in options:
                chosen.append(i)
                if search(covered | self.masks[i]):
                    return True
                chosen.pop()
            return False

        try:
            return list(chosen) if search(0) else None
        except _Exhausted:
            return None

    def minimum(self) -> Optional[Tuple[int, List[int]]]:
        """Cheapest exact cover; the first one found wins ties."""
        best: List = [None, None]
        chosen: List[int] = []

        def search(covered: int, cost: int) -> None:
            self._tick()
            if covered == self.full:
                if best[0] is None or cost < best[0]:
                    best[0], best[1] = cost, list(chosen)
                return
            if best[0] is not None:
                remaining = self.n - covered.bit_count()
                if cost + self.lower_bound(remaining) >= best[0]:
                    return
            _, options = self._choose(covered)
            for i in options:
                chosen.append(i)
                search(covered | self.masks[i], cost + self.radii[i])
                chosen.pop()

        try:
            search(0, 0)
        except _Exhausted:
            return None
        if best[0] is None:
            return None
        return best[0], best[1]

    def enumerate(self, optimal_only: bool = False) -> Optional[List[List[int]]]:
        """Every exact cover, or only the cheapest ones."""
        found: List[Tuple[int, List[int]]] = []
        best: List = [None]
        chosen: List[int] = []

        def search(covered: int, cost: int) -> None:
            self._tick()
            if covered == self.full:
                if optimal_only:
                    if best[0] is None or cost < best[0]:
                        best[0] = cost
                        found.clear()
                    if cost == best[0]:
                        found.append((cost, list(chosen)))
                else:
                    found.append((cost, list(chosen)))
                return
            if optimal_only and best[0] is not None:
                remaining = self.n - covered.bit_count()
                if cost + self.lower_bound(remaining) > best[0]:
                    return
            _, options = self._choose(covered)
            for i in options:
                chosen.append(i)
                search(covered | self.masks[i], cost + self.radii[i])
                chosen.pop()

        try:
            search(0, 0)
        except _Exhausted:
            return None
        return [selection for _, selection in found]

    def max_packing(self) -> Optional[Tuple[int, List[int]]]:
        """
        Largest total size of pairwise disjoint balls.

        Branches on the highest-id undecided vertex: each usable ball
        containing it, then leaving it uncovered. Equal coverage goes to the
        lexicographically smallest cost vector.
        """
        best: List = [-1, None, None]
        chosen: List[int] = []

        def search(covered: int, skipped: int) -> None:
            self._tick()
            undecided = self.full & ~(covered | skipped)
            value = covered.bit_count()
            if undecided == 0:
                costs = self.costs(chosen)
                if value > best[0] or (value == best[0] and costs < best[2]):
                    best[0], best[1], best[2] = value, list(chosen), costs
                return
            if value + undecided.bit_count() < best[0]:
                return
            v = undecided.bit_length() - 1
            blocked = covered | skipped
            for i in self.containing[v]:
                if not self.masks[i] & blocked:
                    chosen.append(i)
                    search(covered | self.masks[i], skipped)
                    chosen.pop()
            search(covered, skipped | (1 << v))

        try:
            search(0, 0)
        except _Exhausted:
            return None
        return best[0], best[1]


def _log_result(result: SolveResult) -> SolveResult:
    logger.info(
        f"{result.objective.value} k={result.k} feasible={result.feasible} "
        f"value={result.value} nodes={result.nodes_explored} exhausted={result.exhausted}"
    )
    return result


def exists_k_eldb(
    g: Graph,
    k: int,
    node_limit: Optional[int] = None,
    distances: Optional[DistanceMatrix] = None,
    forbid_cost_one: bool = False,
) -> SolveResult:
    """Whether g has a k-ELDB, with a witness when it does."""
    _check_k(k)
    d = _distances(g, distances)
    search = ExactCoverSearch(
        g.vertex_count,
        enumerate_balls(g, d, k, forbid_cost_one=forbid_cost_one),
        _resolve_limit(node_limit),
    )
    selection = search.first()
    if search.exhausted:
        return _log_result(SolveResult(
            objective=Objective.EXISTS, feasible=False, nodes_explored=search.nodes, exhausted=True, k=k,
        ))
    if selection is None:
        return _log_result(SolveResult(
            objective=Objective.EXISTS, feasible=False, value=0, nodes_explored=search.nodes, k=k,
        ))
    return _log_result(SolveResult(
        objective=Objective.EXISTS,
        feasible=True,
        value=1,
        witness=Broadcast(costs=search.costs(selection), cap=k),
        nodes_explored=search.nodes,
        k=k,
    ))


def gamma_ebk(
    g: Graph,
    k: int,
    node_limit: Optional[int] = None,
    distances: Optional[DistanceMatrix] = None,
) -> SolveResult:
    """
    Minimum cost of a k-ELDB.

    Infeasible (value None) exactly when k < mcr(g).
    """
    _check_k(k)
    d = _distances(g, distances)
    search = ExactCoverSearch(g.vertex_count, enumerate_balls(g, d, k), _resolve_limit(node_limit))
    outcome = search.minimum()
    if outcome is None:
        return _log_result(SolveResult(
            objective=Objective.MIN_COST,
            feasible=False,
            nodes_explored=search.nodes,
            exhausted=search.exhausted,
            k=k,
        ))
    cost, selection = outcome
    return _log_result(SolveResult(
        objective=Objective.MIN_COST,
        feasible=True,
        value=cost,
        witness=Broadcast(costs=search.costs(selection), cap=k),
        nodes_explored=search.nodes,
        k=k,
    ))


def f_k(
    g: Graph,
    k: int,
    node_limit: Optional[int] = None,
    distances: Optional[DistanceMatrix] = None,
) -> SolveResult:
    """Largest number of vertices an efficient broadcast with costs <= k can reach."""
    _check_k(k)
    d = _distances(g, distances)
    search = ExactCoverSearch(g.vertex_count, enumerate_balls(g, d, k), _resolve_limit(node_limit))
    outcome = search.max_packing()
    if outcome is None:
        return _log_result(SolveResult(
            objective=Objective.MAX_COVERAGE,
            feasible=False,
            nodes_explored=search.nodes,
            exhausted=True,
            k=k,
        ))
    value, selection = outcome
    return _log_result(SolveResult(
        objective=Objective.MAX_COVERAGE,
        feasible=True,
        value=value,
        witness=Broadcast(costs=search.costs(selection), cap=k),
        nodes_explored=search.nodes,
        k=k,
    ))


def _smallest_feasible_k(
    g: Graph,
    ks: Sequence[int],
    objective: Objective,
    node_limit: Optional[int],
    distances: Optional[DistanceMatrix],
    forbid_cost_one: bool,
) -> SolveResult:
    if not g.is_connected:
        raise ConnectivityError(f"{objective.value} needs a connected graph")
    d = _distances(g, distances)
    limit = _resolve_limit(node_limit)
    nodes = 0
    for k in ks:
        result = exists_k_eldb(g, k, node_limit=limit, distances=d, forbid_cost_one=forbid_cost_one)
        nodes += result.nodes_explored
        if result.exhausted:
            return _log_result(SolveResult(objective=objective, feasible=False, nodes_explored=nodes, exhausted=True, k=k))
        if result.feasible:
            return _log_result(SolveResult(
                objective=objective, feasible=True, value=k, witness=result.witness, nodes_explored=nodes, k=k,
            ))
    # Unreachable for connected graphs: a center with cost rad covers V.
    return _log_result(SolveResult(objective=objective, feasible=False, value=None, nodes_explored=nodes))


def mcr(
    g: Graph,
    node_limit: Optional[int] = None,
    distances: Optional[DistanceMatrix] = None,
) -> SolveResult:
    """Smallest k in 1..rad(g) admitting a k-ELDB."""
    d = _distances(g, distances)
    return _smallest_feasible_k(g, range(1, d.radius + 1), Objective.MCR, node_limit, d, False)


def min_k_without_cost_one(
    g: Graph,
    node_limit: Optional[int] = None,
    distances: Optional[DistanceMatrix] = None,
) -> SolveResult:
    """
    Smallest k admitting a k-ELDB with no cost-1 broadcaster.

    Searched over 2..max(2, rad); a radius-1 graph is settled by a cost-2
    center.
    """
    d = _distances(g, distances)
    return _smallest_feasible_k(
        g, range(2, max(2, d.radius) + 1), Objective.MCR_NO_COST_ONE, node_limit, d, True,
    )


def perfect_code(
    g: Graph,
    radius: int,
    node_limit: Optional[int] = None,
    distances: Optional[DistanceMatrix] = None,
) -> SolveResult:
    """Exact cover of V by balls of one fixed radius (a perfect code)."""
    _check_k(radius)
    d = _distances(g, distances)
    balls = [ball(g, d, v, radius) for v in range(g.vertex_count)]
    search = ExactCoverSearch(g.vertex_count, balls, _resolve_limit(node_limit))
    selection = search.first()
    if selection is None:
        return _log_result(SolveResult(
            objective=Objective.EXISTS,
            feasible=False,
            value=None if search.exhausted else 0,
            nodes_explored=search.nodes,
            exhausted=search.exhausted,
            k=radius,
        ))
    return _log_result(SolveResult(
        objective=Objective.EXISTS,
        feasible=True,
        value=1,
        witness=Broadcast(costs=search.costs(selection), cap=radius),
        nodes_explored=search.nodes,
        k=radius,
    ))


def enumerate_k_eldbs(
    g: Graph,
    k: int,
    optimal_only: bool = False,
    node_limit: Optional[int] = None,
    distances: Optional[DistanceMatrix] = None,
) -> List[Broadcast]:
    """
    Every k-ELDB, each center using its smallest radius for a covered set.

    Returned in search order; raises InstanceTooLargeError when the node
    limit is hit.
    """
    _check_k(k)
    d = _distances(g, distances)
    search = ExactCoverSearch(
        g.vertex_count, enumerate_balls(g, d, k), _resolve_limit(node_limit), merge_identical=False,
    )
    selections = search.enumerate(optimal_only=optimal_only)
    if selections is None:
        raise InstanceTooLargeError(f"enumeration stopped after {search.nodes} nodes")
    return [Broadcast(costs=search.costs(s), cap=k) for s in selections]


def brute_force_oracle(
    g: Graph,
    k: int,
    objective: Objective,
    settings: Optional[Settings] = None,
    distances: Optional[DistanceMatrix] = None,
) -> SolveResult:
    """
    Exhaustive check of every cost vector in {0..k}^n through the hearing rule.

    Only for tiny instances; the first optimal vector in enumeration order is
    the witness.
    """
    _check_k(k)
    settings = settings or load_settings()
    n = g.vertex_count
    if n > settings.oracle_max_vertices:
        raise InstanceTooLargeError(f"oracle limited to {settings.oracle_max_vertices} vertices, got {n}")
    if k > settings.oracle_max_k:
        raise InstanceTooLargeError(f"oracle limited to k <= {settings.oracle_max_k}, got {k}")
    objective = Objective(objective)
    d = _distances(g, distances)

    if objective in (Objective.MCR, Objective.MCR_NO_COST_ONE):
        no_one = objective == Objective.MCR_NO_COST_ONE
        nodes = 0
        for kk in range(2 if no_one else 1, k + 1):
            result = _oracle_scan(g, d, kk, Objective.EXISTS, no_one)
            nodes += result.nodes_explored
            if result.feasible:
                return _log_result(SolveResult(
                    objective=objective, feasible=True, value=kk, witness=result.witness, nodes_explored=nodes, k=kk,
                ))
        return _log_result(SolveResult(objective=objective, feasible=False, nodes_explored=nodes, k=k))

    return _log_result(_oracle_scan(g, d, k, objective, False))


def _oracle_scan(g: Graph, d: DistanceMatrix, k: int, objective: Objective, no_cost_one: bool) -> SolveResult:
    values = [0] + list(range(2 if no_cost_one else 1, k + 1))
    vectors = product(values, repeat=g.vertex_count)
    examined = 0
    best_value: Optional[int] = None
    best_costs: Optional[Tuple[int, ...]] = None

    while True:
        chunk = list(islice(vectors, ORACLE_BATCH))
        if not chunk:
            break
        costs = np.array(chunk, dtype=np.int64)
        counts = hearing_counts(d, costs)

        if objective == Objective.MAX_COVERAGE:
            efficient = (counts <= 1).all(axis=1)
            coverage = np.where(efficient, (counts >= 1).sum(axis=1), -1)
            i = int(np.argmax(coverage))
            if coverage[i] >= 0 and (best_value is None or coverage[i] > best_value):
                best_value, best_costs = int(coverage[i]), chunk[i]
        else:
            valid = np.flatnonzero((counts == 1).all(axis=1))
            if valid.size:
                if objective == Objective.EXISTS:
                    examined += int(valid[0]) + 1
                    best_value, best_costs = 1, chunk[int(valid[0])]
                    break
                totals = costs[valid].sum(axis=1)
                j = int(np.argmin(totals))
                if best_value is None or totals[j] < best_value:
                    best_value, best_costs = int(totals[j]), chunk[int(valid[j])]
        examined += len(chunk)

    if best_costs is None:
        return SolveResult(
            objective=objective,
            feasible=False,
            value=0 if objective == Objective.EXISTS else None,
            nodes_explored=examined,
            k=k,
        )
    witness = Broadcast(costs=tuple(best_costs), cap=k)
    report = classify(g, d, witness)
    if objective == Objective.MAX_COVERAGE:
        assert report.is_efficient and report.coverage_count == best_value
    else:
        assert report.is_k_eldb
    return SolveResult(
        objective=objective, feasible=True, value=best_value, witness=witness, nodes_explored=examined, k=k,
    )

