"""EXACT 3-SAT gadget graphs and their empirical verification.

Vertex layout for n variables and m clauses at parameter k:
  - variable i (0-based) owns a copy of T_k at ids i(4k-2) .. i(4k-2)+4k-3,
    its two centers being pos (local 0) and neg (local 1);
  - clause j sits at n(4k-2) + j;
  - clause j's path to its literal in position l has internal vertices
    at distance t = 1..k-1 from the clause, in (clause, literal, t) order.
"""
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from eldb_core.broadcast import classify
from eldb_core.config import Settings, load_settings
from eldb_core.error_logger import get_logger
from eldb_core.exceptions import (
    ClauseWidthError,
    CnfFormatError,
    InstanceTooLargeError,
    InvalidInputError,
    InvalidParameterError,
    PreconditionError,
    RepeatedVariableError,
    TautologyError,
    VariableRangeError,
)
from eldb_core.graph_core import all_pairs_distances, build_tk, graph_from_edges
from eldb_core.models import (
    Broadcast,
    CnfFormula,
    DecodeResult,
    DistanceMatrix,
    ReductionGraph,
    ReductionReport,
)
from eldb_core.solver import exists_k_eldb


logger = get_logger("reduction")

Assignment = Tuple[bool, ...]


def parse_cnf(text: str) -> CnfFormula:
    """
    Read DIMACS CNF restricted to clauses of three literals.

    "c" lines are comments; the header is "p cnf n m"; every clause line
    holds three non-zero literals followed by 0.
    """
    header: Optional[Tuple[int, int]] = None
    clauses: List[Tuple[int, int, int]] = []
    for line_number, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("c"):
            continue
        if stripped.startswith("%"):
            break
        if stripped.startswith("p"):
            parts = stripped.split()
            if header is not None:
                raise CnfFormatError("second problem line", line_number, line)
            if len(parts) != 4 or parts[1] != "cnf":
                raise CnfFormatError("expected 'p cnf <variables> <clauses>'", line_number, line)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise CnfFormatError("problem line counts must be integers", line_number, line)
            if header[0] < 1 or header[1] < 0:
                raise CnfFormatError("problem line counts out of range", line_number, line)
            continue
        if header is None:
            raise CnfFormatError("clause before the problem line", line_number, line)

        try:
            numbers = [int(p) for p in stripped.split()]
        except ValueError:
            raise CnfFormatError("clause literals must be integers", line_number, line)
        if not numbers or numbers[-1] != 0:
            raise CnfFormatError("clause must end with 0", line_number, line)
        literals = numbers[:-1]
        if 0 in literals:
            raise CnfFormatError("one clause per line", line_number, line)
        if len(literals) != 3:
            raise ClauseWidthError(f"clause has {len(literals)} literals, expected 3", line_number, line)
        n = header[0]
        for lit in literals:
            if abs(lit) > n:
                raise VariableRangeError(f"literal {lit} outside variables 1..{n}", line_number, line)
        if len(set(literals)) != 3:
            raise RepeatedVariableError("clause repeats a literal", line_number, line)
        if len({abs(lit) for lit in literals}) != 3:
            raise TautologyError("clause contains a literal and its negation", line_number, line)
        clauses.append(tuple(literals))

    if header is None:
        raise CnfFormatError("missing 'p cnf' problem line")
    if len(clauses) != header[1]:
        raise CnfFormatError(f"problem line declares {header[1]} clauses but {len(clauses)} were given")
    return CnfFormula(variable_count=header[0], clauses=tuple(clauses))


def serialize_cnf(cnf: CnfFormula) -> str:
    lines = [f"p cnf {cnf.variable_count} {cnf.clause_count}"]
    lines.extend(" ".join(str(lit) for lit in clause) + " 0" for clause in cnf.clauses)
    return "\n".join(lines) + "\n"


def build_reduction(cnf: CnfFormula, k: int) -> ReductionGraph:
    """Gadget graph with (3k-2)m + (4k-2)n vertices."""
    if k < 2:
        raise InvalidParameterError(f"gadget parameter k must be >= 2, got {k}")

    n, m = cnf.variable_count, cnf.clause_count
    tk = build_tk(k)
    block = tk.vertex_count
    edges: List[Tuple[int, int]] = []
    labels: List[str] = []

    for i in range(n):
        offset = i * block
        edges.extend((offset + u, offset + v) for u, v in tk.edges())
        labels.append(f"pos:{i + 1}")
        labels.append(f"neg:{i + 1}")
        labels.extend(f"tk:{i + 1}:{v}" for v in range(2, block))
    pos_vertex = tuple(i * block for i in range(n))
    neg_vertex = tuple(i * block + 1 for i in range(n))

    clause_base = n * block
    clause_vertex = tuple(clause_base + j for j in range(m))
    labels.extend(f"clause:{j + 1}" for j in range(m))

    path_base = clause_base + m
    path_vertices: Dict[Tuple[int, int], Tuple[int, ...]] = {}
    for j, clause in enumerate(cnf.clauses):
        for position, literal in enumerate(clause):
            first = path_base + (3 * j + position) * (k - 1)
            internal = tuple(range(first, first + k - 1))
            path_vertices[(j, position)] = internal
            labels.extend(f"path:{j + 1}:{position + 1}:{t}" for t in range(1, k))
            target = pos_vertex[literal - 1] if literal > 0 else neg_vertex[-literal - 1]
            chain = (clause_vertex[j],) + internal + (target,)
            edges.extend(zip(chain, chain[1:]))

    graph = graph_from_edges(path_base + 3 * m * (k - 1), edges, labels=labels, allow_disconnected=True)
    rg = ReductionGraph(
        graph=graph,
        k=k,
        formula=cnf,
        pos_vertex=pos_vertex,
        neg_vertex=neg_vertex,
        clause_vertex=clause_vertex,
        path_vertices=path_vertices,
    )
    logger.info(f"gadget n={n} m={m} k={k}: {graph.vertex_count} vertices, {graph.edge_count} edges")
    return rg


def gadget_distances(rg: ReductionGraph) -> DistanceMatrix:
    return all_pairs_distances(rg.graph, allow_disconnected=True)


def check_clause_distances(rg: ReductionGraph, d: Optional[DistanceMatrix] = None) -> List[str]:
    """
    Problems with the clause-to-literal distances; empty when all hold.

    Each clause must be at distance exactly k from its three literal
    centers and farther from every other literal center.
    """
    d = d or gadget_distances(rg)
    problems = []
    all_literals = [v for i in range(rg.formula.variable_count) for v in (i + 1, -(i + 1))]
    for j, clause in enumerate(rg.formula.clauses):
        c = rg.clause_vertex[j]
        for literal in all_literals:
            dist = d.d(c, rg.literal_vertex(literal))
            if literal in clause and dist != rg.k:
                problems.append(f"clause {j + 1} is {dist} from its literal {literal}, expected {rg.k}")
            if literal not in clause and dist <= rg.k:
                problems.append(f"clause {j + 1} is within {dist} of outside literal {literal}")
    return problems


def assignment_to_broadcast(rg: ReductionGraph, assignment: Sequence[bool]) -> Broadcast:
    """Cost k on the center of each true literal, 0 elsewhere."""
    if len(assignment) != rg.formula.variable_count:
        raise InvalidInputError(
            f"assignment has {len(assignment)} values for {rg.formula.variable_count} variables"
        )
    costs = [0] * rg.graph.vertex_count
    for i, value in enumerate(assignment):
        costs[rg.pos_vertex[i] if value else rg.neg_vertex[i]] = rg.k
    return Broadcast(costs=tuple(costs), cap=rg.k)


def broadcast_to_assignment(
    rg: ReductionGraph,
    f: Broadcast,
    d: Optional[DistanceMatrix] = None,
) -> DecodeResult:
    """
    Read the assignment off a k-ELDB of the gadget.

    The broadcasters must be exactly one literal center per variable, each
    at cost k; any other shape is rejected with a reason.
    """
    d = d or gadget_distances(rg)
    report = classify(rg.graph, d, f)
    if not report.is_k_eldb:
        raise PreconditionError("broadcast is not an efficient k-limited dominating broadcast of the gadget")

    centers = set(rg.pos_vertex) | set(rg.neg_vertex)
    stray = [v for v in f.broadcasters if v not in centers]
    if stray:
        return DecodeResult(
            accepted=False,
            reason=f"broadcaster outside the literal centers at {rg.graph.label(stray[0])}",
        )

    assignment = []
    for i in range(rg.formula.variable_count):
        pos_cost, neg_cost = f.costs[rg.pos_vertex[i]], f.costs[rg.neg_vertex[i]]
        if (pos_cost, neg_cost) == (rg.k, 0):
            assignment.append(True)
        elif (pos_cost, neg_cost) == (0, rg.k):
            assignment.append(False)
        else:
            return DecodeResult(
                accepted=False,
                reason=f"variable {i + 1} has center costs ({pos_cost}, {neg_cost}), expected one of them at {rg.k}",
            )
    return DecodeResult(accepted=True, assignment=tuple(assignment))


def _literal_true(literal: int, assignment: Assignment) -> bool:
    value = assignment[abs(literal) - 1]
    return value if literal > 0 else not value


def x3sat_brute(cnf: CnfFormula, settings: Optional[Settings] = None) -> List[Assignment]:
    """All assignments giving every clause exactly one true literal."""
    settings = settings or load_settings()
    if cnf.variable_count > settings.x3sat_max_variables:
        raise InstanceTooLargeError(
            f"exact-one enumeration limited to {settings.x3sat_max_variables} variables, got {cnf.variable_count}"
        )
    return [
        assignment
        for assignment in product([False, True], repeat=cnf.variable_count)
        if all(sum(_literal_true(lit, assignment) for lit in clause) == 1 for clause in cnf.clauses)
    ]


def verify_reduction(
    cnf: CnfFormula,
    k: int,
    node_limit: Optional[int] = None,
    settings: Optional[Settings] = None,
) -> ReductionReport:
    """
    Cross-check exact-one satisfiability against k-ELDB existence on the gadget.

    Also round-trips every satisfying assignment and decodes the solver's
    witness. The verdict is withheld when the solver runs out of nodes.
    """
    rg = build_reduction(cnf, k)
    d = gadget_distances(rg)
    distance_problems = check_clause_distances(rg, d)
    satisfying = x3sat_brute(cnf, settings)

    notes = list(distance_problems)
    round_trip_ok = True
    for assignment in satisfying:
        f = assignment_to_broadcast(rg, assignment)
        if not classify(rg.graph, d, f).is_k_eldb:
            round_trip_ok = False
            notes.append(f"assignment {_bits(assignment)} does not give a k-ELDB")
            continue
        decoded = broadcast_to_assignment(rg, f, d)
        if not decoded.accepted or decoded.assignment != assignment:
            round_trip_ok = False
            notes.append(f"assignment {_bits(assignment)} did not round-trip")

    result = exists_k_eldb(rg.graph, k, node_limit=node_limit, distances=d)
    gadget_feasible: Optional[bool] = None
    equivalence: Optional[bool] = None
    witness_decoded: Optional[bool] = None
    if result.exhausted:
        notes.append(f"solver exhausted after {result.nodes_explored} nodes; verdict withheld")
    else:
        gadget_feasible = result.feasible
        equivalence = bool(satisfying) == result.feasible
        if result.feasible:
            decoded = broadcast_to_assignment(rg, result.witness, d)
            witness_decoded = decoded.accepted and decoded.assignment in satisfying
            if not decoded.accepted:
                notes.append(f"solver witness rejected: {decoded.reason}")
            elif decoded.assignment not in satisfying:
                notes.append(f"solver witness decodes to non-satisfying {_bits(decoded.assignment)}")

    report = ReductionReport(
        variable_count=cnf.variable_count,
        clause_count=cnf.clause_count,
        k=k,
        vertex_count=rg.graph.vertex_count,
        expected_vertex_count=rg.expected_vertex_count,
        distances_ok=not distance_problems,
        satisfying_assignments=len(satisfying),
        gadget_feasible=gadget_feasible,
        equivalence_holds=equivalence,
        round_trip_ok=round_trip_ok,
        witness_decoded=witness_decoded,
        nodes_explored=result.nodes_explored,
        exhausted=result.exhausted,
        notes=notes,
    )
    logger.info(f"reduction n={cnf.variable_count} m={cnf.clause_count} k={k}: {report.verdict}")
    return report


def _bits(assignment: Assignment) -> str:
    return "".join("1" if v else "0" for v in assignment)
