"""Test the exact-cover solvers against the brute-force oracle and known values."""
import sys
from pathlib import Path

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eldb_core.broadcast import classify
from eldb_core.config import Settings
from eldb_core.corpus import get_corpus_graph, small_corpus_keys
from eldb_core.exceptions import ConnectivityError, InstanceTooLargeError, InvalidParameterError
from eldb_core.graph_core import all_pairs_distances, build_tk, from_networkx, generate, graph_from_edges
from eldb_core.models import Objective
from eldb_core.solver import (
    ExactCoverSearch,
    brute_force_oracle,
    enumerate_balls,
    enumerate_k_eldbs,
    exists_k_eldb,
    f_k,
    gamma_ebk,
    mcr,
    min_k_without_cost_one,
    perfect_code,
)
from harness import run_tests


ORACLE_OBJECTIVES = {
    Objective.EXISTS: exists_k_eldb,
    Objective.MIN_COST: gamma_ebk,
    Objective.MAX_COVERAGE: f_k,
}


def _agrees_with_oracle(g, k):
    d = all_pairs_distances(g)
    for objective, solve in ORACLE_OBJECTIVES.items():
        fast = solve(g, k, distances=d)
        slow = brute_force_oracle(g, k, objective, distances=d)
        assert (fast.feasible, fast.value) == (slow.feasible, slow.value), (objective, k)
        if fast.witness is not None:
            report = classify(g, d, fast.witness)
            if objective == Objective.MAX_COVERAGE:
                assert report.is_efficient and report.coverage_count == fast.value
            else:
                assert report.is_k_eldb
                assert max(fast.witness.costs) <= k
            if objective == Objective.MIN_COST:
                assert report.cost == fast.value


def test_solver_matches_oracle_on_corpus():
    for key in small_corpus_keys(max_vertices=8):
        g = get_corpus_graph(key)
        for k in (1, 2, 3):
            _agrees_with_oracle(g, k)


@st.composite
def _connected_graph(draw):
    n = draw(st.integers(min_value=2, max_value=7))
    seed = draw(st.integers(min_value=0, max_value=10_000))
    p = draw(st.sampled_from([0.2, 0.4, 0.7]))
    nxg = nx.gnp_random_graph(n, p, seed=seed)
    nxg.add_edges_from(nx.path_graph(n).edges())
    return from_networkx(nxg)


@settings(max_examples=30, deadline=None)
@given(g=_connected_graph(), k=st.integers(min_value=1, max_value=2))
def test_solver_matches_oracle_on_random_graphs(g, k):
    _agrees_with_oracle(g, k)


def test_mcr_matches_oracle():
    # C_8 needs radius 4 without cost-1 broadcasters
    wide = Settings(oracle_max_k=4)
    for key in small_corpus_keys(max_vertices=8):
        g = get_corpus_graph(key)
        d = all_pairs_distances(g)
        cap = max(3, d.radius)
        assert mcr(g, distances=d).value == brute_force_oracle(g, cap, Objective.MCR, settings=wide, distances=d).value, key
        assert min_k_without_cost_one(g, distances=d).value == brute_force_oracle(
            g, cap, Objective.MCR_NO_COST_ONE, settings=wide, distances=d,
        ).value, key


def test_ball_enumeration():
    p3 = generate("path", 3)
    assert len(enumerate_balls(p3, all_pairs_distances(p3), 1)) == 3

    c7 = generate("cycle", 7)
    balls = enumerate_balls(c7, all_pairs_distances(c7), 3, forbid_cost_one=True)
    assert len(balls) == 14
    assert {b.radius for b in balls} == {2, 3}

    # radius 2 on P3 saturates at the center and repeats radius 1 there
    p3_balls = enumerate_balls(p3, all_pairs_distances(p3), 2)
    assert [(b.center, b.radius) for b in p3_balls] == [(0, 1), (0, 2), (1, 1), (2, 1), (2, 2)]


def test_cycle_values():
    c7 = generate("cycle", 7)
    assert exists_k_eldb(c7, 2).value == 0
    assert exists_k_eldb(c7, 3).feasible
    assert mcr(c7).value == 3
    assert mcr(generate("cycle", 4)).value == 2
    assert mcr(generate("cycle", 6)).value == 1
    assert gamma_ebk(c7, 3).value == 3

    infeasible = gamma_ebk(c7, 1)
    assert not infeasible.feasible and infeasible.value is None and not infeasible.exhausted


def test_known_costs_and_packings():
    assert gamma_ebk(generate("path", 9), 2).value == 3
    c4 = generate("cycle", 4)
    assert f_k(c4, 1).value == 3
    assert f_k(c4, 2).value == 4
    assert f_k(generate("cycle", 7), 2).value == 6
    assert gamma_ebk(get_corpus_graph("petersen"), 2).value == 2


def test_existence_is_monotone_in_k():
    for key in ("C4", "C5", "C7", "T2", "bull", "house", "cube"):
        g = get_corpus_graph(key)
        d = all_pairs_distances(g)
        found = [exists_k_eldb(g, k, distances=d).feasible for k in range(1, d.radius + 2)]
        first = found.index(True)
        assert all(found[first:]), key
        assert first + 1 == mcr(g, distances=d).value


def test_cost_one_free_values():
    assert min_k_without_cost_one(get_corpus_graph("K13")).value == 2
    assert min_k_without_cost_one(generate("path", 5)).value == 2
    assert min_k_without_cost_one(generate("cycle", 6)).value == 3
    result = min_k_without_cost_one(generate("cycle", 7))
    assert result.value == 3
    assert 1 not in result.witness.costs


def test_tk_has_two_optimal_witnesses():
    for k in range(1, 5):
        g = build_tk(k)
        assert mcr(g).value == k
        optimal = enumerate_k_eldbs(g, k, optimal_only=True)
        assert len(optimal) == 2
        chosen = sorted(f.broadcasters for f in optimal)
        assert chosen == [(0,), (1,)]
        assert all(f.cost == k for f in optimal)
        assert gamma_ebk(g, k).value == k


def test_enumerate_all_eldbs_of_p3():
    found = enumerate_k_eldbs(generate("path", 3), 1)
    assert [f.to_list() for f in found] == [[0, 1, 0]]
    with_radius_two = enumerate_k_eldbs(generate("path", 3), 2)
    assert sorted(f.to_list() for f in with_radius_two) == [[0, 1, 0], [2, 0, 0], [0, 0, 2]]


def test_perfect_codes():
    p5 = generate("path", 5)
    code = perfect_code(p5, 1)
    assert code.feasible and set(code.witness.costs) <= {0, 1}
    assert perfect_code(p5, 2).feasible
    square = perfect_code(generate("cycle", 4), 1)
    assert not square.feasible and square.value == 0


def test_node_limit_exhaustion():
    petersen = get_corpus_graph("petersen")
    result = exists_k_eldb(petersen, 1, node_limit=1)
    assert result.exhausted and result.value is None and not result.feasible
    with pytest.raises(InstanceTooLargeError):
        enumerate_k_eldbs(petersen, 2, node_limit=1)
    with pytest.raises(InvalidParameterError):
        exists_k_eldb(petersen, 1, node_limit=0)


def test_exact_cover_search_lower_bound():
    g = generate("path", 9)
    search = ExactCoverSearch(9, enumerate_balls(g, all_pairs_distances(g), 2), node_limit=10_000)
    assert search.lower_bound(0) == 0
    assert search.lower_bound(9) == 3
    assert search.minimum()[0] == 3


def test_disconnected_and_invalid_inputs():
    split = graph_from_edges(4, [(0, 1), (2, 3)], allow_disconnected=True)
    assert exists_k_eldb(split, 1).feasible
    with pytest.raises(ConnectivityError):
        mcr(split)
    with pytest.raises(InvalidParameterError):
        gamma_ebk(generate("path", 3), 0)


def test_oracle_guards():
    with pytest.raises(InstanceTooLargeError):
        brute_force_oracle(generate("path", 11), 1, Objective.EXISTS)
    with pytest.raises(InstanceTooLargeError):
        brute_force_oracle(generate("path", 4), 4, Objective.EXISTS)
    relaxed = Settings(oracle_max_k=4)
    assert brute_force_oracle(generate("path", 4), 4, Objective.MIN_COST, settings=relaxed).value == 2


if __name__ == "__main__":
    sys.exit(run_tests("Solver", globals()))
