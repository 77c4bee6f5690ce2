"""Exact solver: oracle agreement, frozen values, caps, principal lines."""

from functools import lru_cache

import pytest

from gridseek import solver
from gridseek.adversaries import (
    DiagonalAdversary,
    GreedyAdversary,
    HonestAdversary,
)
from gridseek.core import (
    CandidateSet,
    GameStateError,
    apply_reply,
    grid_shape,
)
from gridseek.solver import (
    ResourceCapError,
    best_response,
    exact_qc,
    extract_optimal_adversary,
)


def brute_qc(shape):
    """Reference minimax: plain recursion on raw bitsets, no pruning."""
    points = list(shape.points())
    corners = list(shape.corners())

    @lru_cache(maxsize=None)
    def cost(bits):
        cs = CandidateSet(shape, bits)
        if len(cs) == 1:
            return 1
        best = None
        for q in points:
            worst = 0
            stalled = False
            for corner in corners:
                child = apply_reply(cs, q, corner)
                if not child.bits:
                    continue
                if child.bits == bits:
                    stalled = True
                    break
                worst = max(worst, cost(child.bits))
            if stalled:
                continue
            best = worst + 1 if best is None else min(best, worst + 1)
        assert best is not None
        return best

    return cost(CandidateSet.full(shape).bits)


ORACLE_SHAPES = [
    (1,), (2,), (3,), (5,), (7,), (8,), (12,),
    (2, 2), (3, 2), (2, 3), (4, 2), (5, 2), (6, 2),
    (3, 3), (4, 3), (2, 4), (3, 4), (4, 1), (12, 1),
    (2, 2, 2), (3, 2, 2), (2, 2, 3), (2, 3, 2),
]


def test_matches_brute_force_oracle():
    for dims in ORACLE_SHAPES:
        shape = grid_shape(*dims)
        assert exact_qc(shape).value == brute_qc(shape), dims


def test_one_axis_matches_binary_search():
    for n in range(1, 25):
        assert exact_qc(grid_shape(n)).value == n.bit_length()


def test_frozen_values():
    frozen = {
        (2, 2): 4, (3, 2): 4, (4, 2): 6, (5, 2): 6, (6, 2): 6,
        (7, 2): 6, (8, 2): 8, (3, 3): 5, (4, 3): 6, (5, 3): 7,
        (4, 4): 8, (2, 2, 2): 8, (3, 2, 2): 8, (2, 2, 2, 2): 16,
    }
    for dims, value in frozen.items():
        assert exact_qc(grid_shape(*dims)).value == value, dims


def test_symmetry_toggle_changes_nothing_but_work():
    for dims in [(4, 3), (2, 2, 2), (5, 2)]:
        shape = grid_shape(*dims)
        fast = exact_qc(shape)
        slow = exact_qc(shape, symmetry=False)
        assert fast.value == slow.value
        assert fast.states_explored <= slow.states_explored


def test_value_grows_with_the_grid():
    assert exact_qc(grid_shape(2, 2)).value <= exact_qc(grid_shape(3, 2)).value
    assert exact_qc(grid_shape(3, 2)).value <= exact_qc(grid_shape(4, 2)).value
    assert exact_qc(grid_shape(3, 3)).value <= exact_qc(grid_shape(4, 3)).value


def test_max_cells_cap():
    with pytest.raises(ResourceCapError) as err:
        exact_qc(grid_shape(9, 9))
    assert err.value.cap_name == "max_cells"
    assert err.value.cap_value == 64
    with pytest.raises(ResourceCapError):
        exact_qc(grid_shape(3, 3), max_cells=8)


def test_max_states_cap():
    with pytest.raises(ResourceCapError) as err:
        exact_qc(grid_shape(4, 4), max_states=10)
    assert err.value.cap_name == "max_states"
    assert "4, 4" in str(err.value)


def test_report_counters():
    report = exact_qc(grid_shape(3, 3))
    assert report.value == 5
    assert report.states_explored >= report.peak_memo >= 1
    assert not report.heuristic


def test_principal_line_replays_to_the_value():
    shape = grid_shape(3, 3)
    report = exact_qc(shape)
    line = report.principal_line
    assert len(line) == report.value
    bits = CandidateSet.full(shape).bits
    for query, corner in line[:-1]:
        shape.index(query)
        assert corner is not None
        child = apply_reply(CandidateSet(shape, bits), query, corner)
        assert 0 < child.bits < bits  # legal and strictly shrinking
        bits = child.bits
    last_query, last_corner = line[-1]
    assert last_corner is None
    assert CandidateSet(shape, bits).sole_point() == last_query


def test_restricted_search_is_flagged_and_never_cheaper():
    shape = grid_shape(3, 2)
    solver._SOLVED.pop(shape.dims, None)
    restricted = exact_qc(shape, restrict_queries=True)
    assert restricted.heuristic
    # a heuristic solve must not feed the optimal adversary
    with pytest.raises(GameStateError):
        extract_optimal_adversary(shape)
    full = exact_qc(shape)
    assert restricted.value >= full.value
    assert extract_optimal_adversary(shape).name == "optimal"


def test_best_response_to_optimal_meets_the_exact_value():
    for dims in [(2, 2), (3, 2), (3, 3)]:
        shape = grid_shape(*dims)
        report = exact_qc(shape)
        adversary = extract_optimal_adversary(shape)
        assert best_response(shape, adversary) == report.value, dims


def test_best_response_to_greedy_on_one_axis():
    for n in range(1, 17):
        shape = grid_shape(n)
        assert best_response(shape, GreedyAdversary(shape)) == n.bit_length()


def test_best_response_to_honest_is_one_query():
    shape = grid_shape(5, 4)
    adversary = HonestAdversary(shape, (3, 2))
    assert best_response(shape, adversary) == 1


def test_best_response_to_diagonal_frozen():
    frozen = {(2, 2): 2, (3, 2): 3, (3, 3): 3, (4, 2): 3}
    for dims, value in frozen.items():
        shape = grid_shape(*dims)
        assert best_response(shape, DiagonalAdversary(shape)) == value, dims


def test_best_response_cap():
    shape = grid_shape(4, 4)
    with pytest.raises(ResourceCapError) as err:
        best_response(shape, GreedyAdversary(shape), max_states=5)
    assert err.value.cap_name == "max_states"
