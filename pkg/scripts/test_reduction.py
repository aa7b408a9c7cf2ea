"""Test the EXACT 3-SAT gadget construction and its verification."""
import sys
from itertools import combinations, product
from pathlib import Path

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

import pytest

from eldb_core.broadcast import classify
from eldb_core.config import Settings
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
from eldb_core.models import Broadcast, CnfFormula
from eldb_core.reduction import (
    assignment_to_broadcast,
    broadcast_to_assignment,
    build_reduction,
    check_clause_distances,
    gadget_distances,
    parse_cnf,
    serialize_cnf,
    verify_reduction,
    x3sat_brute,
)
from harness import run_tests


TWO_CLAUSES = """c two overlapping clauses, variable 4 unused
p cnf 5 2
1 2 3 0
1 -2 -5 0
"""

SINGLE = "p cnf 3 1\n1 2 3 0\n"

UNSATISFIABLE = "p cnf 3 2\n1 2 3 0\n-1 -2 -3 0\n"


def test_parse_cnf():
    cnf = parse_cnf(TWO_CLAUSES)
    assert cnf.variable_count == 5 and cnf.clause_count == 2
    assert cnf.clauses == ((1, 2, 3), (1, -2, -5))
    assert serialize_cnf(cnf) == "p cnf 5 2\n1 2 3 0\n1 -2 -5 0\n"


def test_parse_cnf_errors():
    cases = [
        ("p cnf 3 1\n1 2 0\n", ClauseWidthError),
        ("p cnf 3 1\n1 1 2 0\n", RepeatedVariableError),
        ("p cnf 3 1\n1 -1 2 0\n", TautologyError),
        ("p cnf 3 1\n1 2 4 0\n", VariableRangeError),
        ("1 2 3 0\n", CnfFormatError),
        ("p cnf 3 2\n1 2 3 0\n", CnfFormatError),
        ("p cnf 3 1\n1 2 3\n", CnfFormatError),
        ("p dnf 3 1\n1 2 3 0\n", CnfFormatError),
        ("c only a comment\n", CnfFormatError),
    ]
    for text, error in cases:
        with pytest.raises(error):
            parse_cnf(text)


def test_formula_model_validation():
    with pytest.raises(ClauseWidthError):
        CnfFormula(variable_count=3, clauses=((1, 2),))
    with pytest.raises(TautologyError):
        CnfFormula(variable_count=3, clauses=((1, -1, 2),))
    with pytest.raises(VariableRangeError):
        CnfFormula(variable_count=2, clauses=((1, 2, 3),))


def test_gadget_sizes_and_layout():
    rg = build_reduction(parse_cnf(TWO_CLAUSES), 2)
    assert rg.graph.vertex_count == 38 == rg.expected_vertex_count
    assert rg.pos_vertex == (0, 6, 12, 18, 24)
    assert rg.neg_vertex == (1, 7, 13, 19, 25)
    assert rg.clause_vertex == (30, 31)
    assert rg.path_vertices[(0, 0)] == (32,)
    assert rg.path_vertices[(1, 2)] == (37,)
    assert rg.graph.label(30) == "clause:1"
    assert rg.graph.label(37) == "path:2:3:1"
    assert rg.literal_vertex(-5) == 25
    assert not rg.graph.is_connected

    single = parse_cnf(SINGLE)
    assert build_reduction(single, 2).graph.vertex_count == 22
    assert build_reduction(single, 3).graph.vertex_count == 37
    with pytest.raises(InvalidParameterError):
        build_reduction(single, 1)


def test_clause_distances():
    for k in (2, 3):
        rg = build_reduction(parse_cnf(TWO_CLAUSES), k)
        d = gadget_distances(rg)
        assert check_clause_distances(rg, d) == []
        for j, clause in enumerate(rg.formula.clauses):
            for literal in clause:
                assert d.d(rg.clause_vertex[j], rg.literal_vertex(literal)) == k


def test_exact_one_assignments():
    solutions = x3sat_brute(parse_cnf(TWO_CLAUSES))
    assert len(solutions) == 4
    assert all(not a[0] for a in solutions)
    assert x3sat_brute(parse_cnf(UNSATISFIABLE)) == []
    with pytest.raises(InstanceTooLargeError):
        x3sat_brute(parse_cnf(SINGLE), settings=Settings(x3sat_max_variables=2))


def test_assignment_round_trip():
    cnf = parse_cnf(TWO_CLAUSES)
    rg = build_reduction(cnf, 2)
    d = gadget_distances(rg)
    for assignment in x3sat_brute(cnf):
        f = assignment_to_broadcast(rg, assignment)
        assert f.cost == 2 * cnf.variable_count
        assert classify(rg.graph, d, f).is_k_eldb
        decoded = broadcast_to_assignment(rg, f, d)
        assert decoded.accepted and decoded.assignment == assignment

    with pytest.raises(InvalidInputError):
        assignment_to_broadcast(rg, (True, False))


def test_non_satisfying_assignment_is_not_an_eldb():
    cnf = parse_cnf(SINGLE)
    rg = build_reduction(cnf, 2)
    f = assignment_to_broadcast(rg, (True, True, False))
    assert not classify(rg.graph, gadget_distances(rg), f).is_k_eldb
    with pytest.raises(PreconditionError):
        broadcast_to_assignment(rg, f)
    with pytest.raises(PreconditionError):
        broadcast_to_assignment(rg, Broadcast.from_costs([0] * rg.graph.vertex_count, cap=2))


def test_verify_satisfiable_formula():
    report = verify_reduction(parse_cnf(TWO_CLAUSES), 2)
    assert report.verdict == "holds"
    assert report.satisfying_assignments == 4
    assert report.gadget_feasible is True
    assert report.witness_decoded is True
    assert report.to_dict()["verdict"] == "holds"


def test_verify_unsatisfiable_formula():
    report = verify_reduction(parse_cnf(UNSATISFIABLE), 2)
    assert report.satisfying_assignments == 0
    assert report.gadget_feasible is False
    assert report.equivalence_holds is True
    assert report.witness_decoded is None
    assert report.verdict == "holds"


def test_verify_single_clause_at_k3():
    report = verify_reduction(parse_cnf(SINGLE), 3)
    assert report.vertex_count == 37
    assert report.satisfying_assignments == 3
    assert report.verdict == "holds"


def _small_formulas():
    """Exact-one 3-CNFs on 3 or 4 variables with up to 3 clauses, thinned to about a dozen per shape."""
    for n in (3, 4):
        clauses = [
            tuple(sign * v for sign, v in zip(signs, trio))
            for trio in combinations(range(1, n + 1), 3)
            for signs in product((1, -1), repeat=3)
        ]
        for m in (1, 2, 3):
            chosen = list(combinations(clauses, m))
            for picked in chosen[:: max(1, len(chosen) // 12)]:
                yield CnfFormula(variable_count=n, clauses=picked)


def test_reduction_holds_on_small_formulas():
    checked = 0
    for cnf in _small_formulas():
        for k in (2, 3):
            report = verify_reduction(cnf, k)
            assert report.verdict == "holds", (cnf.clauses, k, report.notes)
            assert report.gadget_feasible == (report.satisfying_assignments > 0)
            checked += 1
    assert checked > 100


def test_verdict_withheld_on_exhaustion():
    report = verify_reduction(parse_cnf(TWO_CLAUSES), 2, node_limit=1)
    assert report.exhausted
    assert report.verdict == "withheld"
    assert report.gadget_feasible is None
    assert any("withheld" in note for note in report.notes)


if __name__ == "__main__":
    sys.exit(run_tests("Reduction", globals()))
