"""Data models for broadcast domination computations."""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, List, Optional, Tuple, Union

import networkx as nx
import numpy as np

from eldb_core.exceptions import (
    ClauseWidthError,
    InvalidInputError,
    InvalidParameterError,
    RepeatedVariableError,
    TautologyError,
    VariableRangeError,
)


# Distance recorded between vertices of different components.
UNREACHABLE = 2**31 - 1


class Family(str, Enum):
    """Basic graph families."""
    PATH = "path"
    CYCLE = "cycle"
    COMPLETE = "complete"
    STAR = "star"


class ProductKind(str, Enum):
    """Graph products."""
    LEXICOGRAPHIC = "lexicographic"
    STRONG = "strong"
    CARTESIAN = "cartesian"


class Objective(str, Enum):
    """What a solve call optimises."""
    EXISTS = "exists"
    MIN_COST = "min_cost"
    MAX_COVERAGE = "max_coverage"
    MCR = "mcr"
    MCR_NO_COST_ONE = "mcr_no_cost_one"


class Quantity(str, Enum):
    """Quantities a closed form can predict."""
    MCR = "mcr"
    GAMMA_EBK = "gamma_ebk"
    GAMMA_EB1 = "gamma_eb1"
    GAMMA_EB2 = "gamma_eb2"
    MCR_NO_COST_ONE = "mcr_no_cost_one"
    BOUND_INTERVAL = "bound_interval"


class BoundKind(str, Enum):
    """Whether a formula value is exact or only a bound."""
    EXACT = "exact"
    LOWER = "lower"
    UPPER = "upper"
    INTERVAL = "interval"


@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph on vertices 0..n-1."""
    vertex_count: int
    adjacency: Tuple[Tuple[int, ...], ...]
    labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        """Check the simple-graph invariants."""
        n = self.vertex_count
        if n < 2:
            raise InvalidParameterError(f"graph must have at least 2 vertices, got {n}")
        if len(self.adjacency) != n:
            raise InvalidInputError(f"adjacency has {len(self.adjacency)} rows for {n} vertices")
        if self.labels is not None and len(self.labels) != n:
            raise InvalidInputError(f"{len(self.labels)} labels for {n} vertices")
        for v, nbrs in enumerate(self.adjacency):
            if list(nbrs) != sorted(set(nbrs)):
                raise InvalidInputError(f"neighbours of {v} must be sorted and distinct")
            for u in nbrs:
                if u == v:
                    raise InvalidInputError(f"self-loop at vertex {v}")
                if not 0 <= u < n:
                    raise InvalidInputError(f"neighbour {u} of {v} out of range")
                if v not in self.adjacency[u]:
                    raise InvalidInputError(f"edge {v}-{u} is not symmetric")

    @property
    def edge_count(self) -> int:
        """Number of edges."""
        return sum(len(nbrs) for nbrs in self.adjacency) // 2

    def edges(self) -> List[Tuple[int, int]]:
        """Edges (u, v) with u < v in lexicographic order."""
        return [(u, v) for u, nbrs in enumerate(self.adjacency) for v in nbrs if u < v]

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def max_degree(self) -> int:
        return max(len(nbrs) for nbrs in self.adjacency)

    @property
    def min_degree(self) -> int:
        return min(len(nbrs) for nbrs in self.adjacency)

    def label(self, v: int) -> str:
        """Provenance label of v, or its id when unlabeled."""
        if self.labels is None:
            return str(v)
        return self.labels[v]

    @cached_property
    def is_connected(self) -> bool:
        return nx.is_connected(self.to_networkx())

    def degree_sequence(self) -> List[int]:
        """Degrees in non-increasing order."""
        return sorted((len(nbrs) for nbrs in self.adjacency), reverse=True)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.vertex_count))
        g.add_edges_from(self.edges())
        return g


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """All-pairs hop distances with eccentricity views."""
    dist: np.ndarray
    ecc: Tuple[int, ...]
    radius: int
    diameter: int
    center: Tuple[int, ...]
    connected: bool = True

    @property
    def vertex_count(self) -> int:
        return self.dist.shape[0]

    def d(self, u: int, v: int) -> int:
        return int(self.dist[u, v])


@dataclass(frozen=True)
class Ball:
    """Closed neighbourhood of radius `radius` around `center`."""
    center: int
    radius: int
    covered: Tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.covered)

    @cached_property
    def mask(self) -> int:
        """Covered set as an integer bitmask."""
        bits = 0
        for v in self.covered:
            bits |= 1 << v
        return bits


@dataclass(frozen=True)
class Broadcast:
    """Per-vertex broadcast costs limited by `cap`."""
    costs: Tuple[int, ...]
    cap: int

    def __post_init__(self):
        """Check costs are non-negative and within the cap."""
        if self.cap < 0:
            raise InvalidParameterError(f"cap must be >= 0, got {self.cap}")
        for v, c in enumerate(self.costs):
            if c < 0:
                raise InvalidParameterError(f"cost of vertex {v} is negative ({c})")
            if c > self.cap:
                raise InvalidParameterError(f"cost {c} of vertex {v} exceeds cap {self.cap}")

    @classmethod
    def from_costs(cls, costs, cap: Optional[int] = None) -> "Broadcast":
        costs = tuple(int(c) for c in costs)
        if cap is None:
            cap = max(costs, default=0)
        return cls(costs=costs, cap=cap)

    @property
    def vertex_count(self) -> int:
        return len(self.costs)

    @property
    def broadcasters(self) -> Tuple[int, ...]:
        """V_f^+: vertices with positive cost."""
        return tuple(v for v, c in enumerate(self.costs) if c >= 1)

    @property
    def idle(self) -> Tuple[int, ...]:
        """V_f^0: vertices with zero cost."""
        return tuple(v for v, c in enumerate(self.costs) if c == 0)

    @property
    def cost(self) -> int:
        """Total cost w(f)."""
        return sum(self.costs)

    def to_list(self) -> List[int]:
        return list(self.costs)


@dataclass
class HearingReport:
    """Who hears whom under a broadcast."""
    hearers: List[List[int]]
    coverage_count: int
    is_dominating: bool
    is_efficient: bool
    is_k_eldb: bool
    cost: int
    overdominated: List[int] = field(default_factory=list)
    exceeds_eccentricity: List[int] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "hearers": self.hearers,
            "coverage_count": self.coverage_count,
            "is_dominating": self.is_dominating,
            "is_efficient": self.is_efficient,
            "is_k_eldb": self.is_k_eldb,
            "cost": self.cost,
            "overdominated": self.overdominated,
            "exceeds_eccentricity": self.exceeds_eccentricity,
        }


@dataclass(frozen=True)
class PackingViolation:
    """Two vertices of a candidate 2-packing whose closed neighbourhoods meet."""
    u: int
    v: int
    shared: Tuple[int, ...]


@dataclass
class SolveResult:
    """Outcome of one exact solve."""
    objective: Objective
    feasible: bool
    value: Optional[int] = None
    witness: Optional[Broadcast] = None
    nodes_explored: int = 0
    exhausted: bool = False
    k: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "objective": self.objective.value,
            "k": self.k,
            "feasible": self.feasible,
            "value": self.value,
            "witness": self.witness.to_list() if self.witness is not None else None,
            "nodes_explored": self.nodes_explored,
            "exhausted": self.exhausted,
        }


@dataclass
class FormulaStep:
    """A single step of a closed-form evaluation."""
    id: str
    description: str
    formula: str
    values: str
    result: Union[int, str]
    rule: Optional[str] = None


@dataclass(frozen=True)
class Interval:
    """Closed interval with exact rational endpoints."""
    lower: Fraction
    upper: Fraction

    @property
    def lower_ceil(self) -> int:
        return -((-self.lower.numerator) // self.lower.denominator)

    def __str__(self) -> str:
        return f"[{self.lower}, {self.upper}]"


@dataclass
class FormulaResult:
    """Value predicted by a closed form."""
    quantity: Quantity
    source: str
    value: Union[int, Interval, None] = None
    applicable: bool = True
    reason: Optional[str] = None
    bound: BoundKind = BoundKind.EXACT
    steps: List[FormulaStep] = field(default_factory=list)
    related: Dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        """Value is present exactly when the formula applies."""
        if self.applicable and self.value is None:
            raise InvalidInputError(f"{self.source}: applicable result needs a value")
        if not self.applicable and self.value is not None:
            raise InvalidInputError(f"{self.source}: inapplicable result must not carry a value")

    def display_value(self) -> str:
        if self.value is None:
            return "n/a"
        prefix = {BoundKind.LOWER: ">=", BoundKind.UPPER: "<="}.get(self.bound, "")
        return f"{prefix}{self.value}"

    def to_dict(self) -> Dict[str, Any]:
        value: Any = self.value
        if isinstance(value, Interval):
            value = {"lower": str(value.lower), "upper": str(value.upper)}
        return {
            "quantity": self.quantity.value,
            "source": self.source,
            "value": value,
            "applicable": self.applicable,
            "reason": self.reason,
            "bound": self.bound.value,
            "related": self.related,
        }


@dataclass
class BoundCheck:
    """Degree bounds compared against a solved value."""
    interval: Interval
    solver_value: Optional[int]
    applicable: bool
    lower_holds: Optional[bool] = None
    upper_holds: Optional[bool] = None
    reason: Optional[str] = None


@dataclass
class SweepRow:
    """One (instance, quantity) comparison."""
    family: str
    params: str
    quantity: str
    formula: str
    solver: Union[int, str, None]
    agree: Optional[bool]
    note: str = ""
    expected_discrepancy: bool = False
    exhausted: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "family": self.family,
            "params": self.params,
            "quantity": self.quantity,
            "formula": self.formula,
            "solver": self.solver,
            "agree": self.agree,
            "note": self.note,
            "expected_discrepancy": self.expected_discrepancy,
            "exhausted": self.exhausted,
        }


@dataclass
class SweepReport:
    """Rows of a formula-vs-solver sweep."""
    suite: str
    rows: List[SweepRow] = field(default_factory=list)

    @property
    def exhausted_rows(self) -> List[SweepRow]:
        return [r for r in self.rows if r.exhausted]

    @property
    def disagreements(self) -> List[SweepRow]:
        return [r for r in self.rows if r.agree is False]

    @property
    def unexpected_disagreements(self) -> List[SweepRow]:
        return [r for r in self.disagreements if not r.expected_discrepancy]

    @property
    def all_agree(self) -> bool:
        """True when every row outside the known discrepancies agrees."""
        return not self.unexpected_disagreements


@dataclass(frozen=True)
class CnfFormula:
    """CNF formula whose clauses are triples of signed literals."""
    variable_count: int
    clauses: Tuple[Tuple[int, int, int], ...]

    def __post_init__(self):
        """Check clause width, distinct variables and index range."""
        if self.variable_count < 1:
            raise InvalidParameterError("formula needs at least one variable")
        for j, clause in enumerate(self.clauses, 1):
            if len(clause) != 3:
                raise ClauseWidthError(f"clause {j} has {len(clause)} literals, expected 3")
            for lit in clause:
                if lit == 0 or abs(lit) > self.variable_count:
                    raise VariableRangeError(f"clause {j}: literal {lit} out of range 1..{self.variable_count}")
            if len(set(clause)) != 3:
                raise RepeatedVariableError(f"clause {j} repeats a literal")
            if len({abs(lit) for lit in clause}) != 3:
                raise TautologyError(f"clause {j} contains a literal and its negation")

    @property
    def clause_count(self) -> int:
        return len(self.clauses)


@dataclass(frozen=True, eq=False)
class ReductionGraph:
    """Gadget graph for an EXACT 3-SAT instance with its role map."""
    graph: Graph
    k: int
    formula: CnfFormula
    pos_vertex: Tuple[int, ...]
    neg_vertex: Tuple[int, ...]
    clause_vertex: Tuple[int, ...]
    path_vertices: Dict[Tuple[int, int], Tuple[int, ...]]

    @property
    def expected_vertex_count(self) -> int:
        """(3k-2)m + (4k-2)n."""
        m = self.formula.clause_count
        n = self.formula.variable_count
        return (3 * self.k - 2) * m + (4 * self.k - 2) * n

    def literal_vertex(self, literal: int) -> int:
        """Central vertex standing for a signed literal."""
        if literal > 0:
            return self.pos_vertex[literal - 1]
        return self.neg_vertex[-literal - 1]


@dataclass
class DecodeResult:
    """Truth assignment read back from a broadcast, or why it was refused."""
    accepted: bool
    assignment: Optional[Tuple[bool, ...]] = None
    reason: Optional[str] = None


@dataclass
class ReductionReport:
    """Cross-check of EXACT 3-SAT satisfiability against gadget domination."""
    variable_count: int
    clause_count: int
    k: int
    vertex_count: int
    expected_vertex_count: int
    distances_ok: bool
    satisfying_assignments: int
    gadget_feasible: Optional[bool]
    equivalence_holds: Optional[bool]
    round_trip_ok: bool
    witness_decoded: Optional[bool]
    nodes_explored: int = 0
    exhausted: bool = False
    notes: List[str] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        if self.exhausted:
            return "withheld"
        ok = (
            self.equivalence_holds
            and self.round_trip_ok
            and self.distances_ok
            and self.vertex_count == self.expected_vertex_count
            and self.witness_decoded is not False
        )
        return "holds" if ok else "fails"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "variable_count": self.variable_count,
            "clause_count": self.clause_count,
            "k": self.k,
            "vertex_count": self.vertex_count,
            "expected_vertex_count": self.expected_vertex_count,
            "distances_ok": self.distances_ok,
            "satisfying_assignments": self.satisfying_assignments,
            "gadget_feasible": self.gadget_feasible,
            "equivalence_holds": self.equivalence_holds,
            "round_trip_ok": self.round_trip_ok,
            "witness_decoded": self.witness_decoded,
            "nodes_explored": self.nodes_explored,
            "exhausted": self.exhausted,
            "verdict": self.verdict,
            "notes": self.notes,
        }
