"""Match running, worst-case evaluation, transcript serialization."""

import pytest

from gridseek.adversaries import GreedyAdversary, HonestAdversary
from gridseek.bounds import budget_d, ceil_lower, lower_3d
from gridseek.core import FOUND, Reply, grid_shape
from gridseek.evaluator import (
    ProtocolViolationError,
    Transcript,
    run_match,
    transcript_is_legal,
    transcript_to_jsonl,
    worst_case,
)
from gridseek.solver import (
    ResourceCapError,
    exact_qc,
    extract_optimal_adversary,
)
from gridseek.strategies import Binary1D, Grid2D, Slicing


class ScriptedStrategy:
    """Plays a fixed query list, then gives up."""

    name = "scripted"

    def __init__(self, shape, queries):
        self.shape = shape
        self._queries = list(queries)
        self._at = 0

    def next_query(self):
        if self._at >= len(self._queries):
            return None
        return self._queries[self._at]

    def observe(self, reply):
        self._at += 1

    def key(self):
        return f"sc|{self._at}".encode()

    def clone(self):
        fork = ScriptedStrategy(self.shape, self._queries)
        fork._at = self._at
        return fork


class ScriptedAdversary:
    """Plays a fixed reply list, game rules be damned."""

    name = "scripted"

    def __init__(self, shape, replies):
        self.shape = shape
        self._replies = list(replies)
        self._at = 0

    def reply(self, query):
        reply = self._replies[self._at]
        self._at += 1
        return reply

    def key(self):
        return f"sa|{self._at}".encode()

    def clone(self):
        fork = ScriptedAdversary(self.shape, self._replies)
        fork._at = self._at
        return fork

    def metadata(self):
        return None


# --- run_match ---------------------------------------------------------------


def test_match_trace_on_one_axis():
    shape = grid_shape(8)
    transcript = run_match(
        Binary1D(shape), HonestAdversary(shape, (5,)), shape, target=(5,)
    )
    assert transcript.outcome == "found"
    assert transcript.total_queries == 2
    assert transcript.events == (((3,), Reply((0,))), ((5,), FOUND))


def test_match_against_optimal_adversary_is_exact():
    shape = grid_shape(2, 2)
    value = exact_qc(shape).value
    transcript = run_match(Grid2D(shape), extract_optimal_adversary(shape), shape)
    assert transcript.outcome == "found"
    assert transcript.total_queries == value == 4


def test_match_depth_cap():
    shape = grid_shape(3, 3)
    transcript = run_match(
        Grid2D(shape), HonestAdversary(shape, (2, 2)), shape, depth_cap=1
    )
    assert transcript.outcome == "depth_capped"
    assert transcript.total_queries == 1


def test_match_exhausted_when_the_strategy_gives_up():
    shape = grid_shape(2, 2)
    strategy = ScriptedStrategy(shape, [(0, 0)])
    transcript = run_match(strategy, GreedyAdversary(shape), shape)
    assert transcript.outcome == "exhausted"
    assert transcript.total_queries == 1


def test_match_rejects_reply_that_leaves_no_target():
    shape = grid_shape(2, 2)
    strategy = ScriptedStrategy(shape, [(0, 0)])
    adversary = ScriptedAdversary(shape, [Reply((1, 1))])
    with pytest.raises(ProtocolViolationError, match="no consistent target"):
        run_match(strategy, adversary, shape)


def test_match_rejects_found_at_an_excluded_cell():
    shape = grid_shape(2, 2)
    strategy = ScriptedStrategy(shape, [(0, 0), (0, 0)])
    adversary = ScriptedAdversary(shape, [Reply((0, 0)), FOUND])
    with pytest.raises(ProtocolViolationError, match="contradicts earlier"):
        run_match(strategy, adversary, shape)


def test_match_rejects_malformed_corner():
    shape = grid_shape(2, 2)
    strategy = ScriptedStrategy(shape, [(0, 0)])
    adversary = ScriptedAdversary(shape, [Reply((0,))])
    with pytest.raises(ProtocolViolationError, match="malformed"):
        run_match(strategy, adversary, shape)


def test_match_validation_errors():
    shape = grid_shape(8)
    other = grid_shape(4)
    with pytest.raises(ValueError):
        run_match(Binary1D(shape), HonestAdversary(other, (1,)), other)
    with pytest.raises(ValueError):
        run_match(Binary1D(shape), GreedyAdversary(shape), shape, target=(5,))
    with pytest.raises(ValueError):
        run_match(
            Binary1D(shape), HonestAdversary(shape, (5,)), shape, target=(4,)
        )


# --- worst_case ---------------------------------------------------------------


def test_worst_case_binary1d():
    report = worst_case(Binary1D(grid_shape(8)))
    assert report.worst_case == 4
    assert report.correct
    assert report.witness.total_queries == 4
    assert report.witness.outcome == "found"
    assert transcript_is_legal(report.witness)


def test_worst_case_grid2d_frozen():
    report = worst_case(Grid2D(grid_shape(8, 3)))
    assert report.worst_case == 9
    assert report.correct
    assert report.nodes == 184
    assert report.witness.total_queries == 9
    assert transcript_is_legal(report.witness)
    assert worst_case(Grid2D(grid_shape(4, 4))).worst_case == 9
    assert worst_case(Grid2D(grid_shape(5, 4))).worst_case == 10


def test_worst_case_never_beats_the_exact_value():
    for dims, value in [((4, 2), 6), ((3, 3), 5), ((5, 3), 7), ((8, 2), 8)]:
        shape = grid_shape(*dims)
        assert exact_qc(shape).value == value
        assert worst_case(Grid2D(shape)).worst_case >= value


def test_worst_case_slicing_doubles_the_plane():
    shape = grid_shape(4, 2, 2)
    report = worst_case(Slicing(shape))
    assert report.worst_case == 12
    assert report.correct
    assert report.worst_case == 2 * worst_case(Grid2D(grid_shape(4, 2))).worst_case
    assert ceil_lower(lower_3d(4, 2, 2)) <= report.worst_case <= budget_d(shape.dims)


def test_worst_case_cap_and_shape_check():
    with pytest.raises(ResourceCapError) as err:
        worst_case(Slicing(grid_shape(4, 2, 2)), max_states=5)
    assert err.value.cap_name == "max_states"
    with pytest.raises(ValueError):
        worst_case(Grid2D(grid_shape(3, 3)), grid_shape(3, 2))


# --- transcripts ---------------------------------------------------------------


def test_transcript_jsonl_golden():
    shape = grid_shape(8)
    transcript = run_match(
        Binary1D(shape), HonestAdversary(shape, (5,)), shape, target=(5,)
    )
    assert transcript_to_jsonl(transcript) == (
        '{"shape":[8],"strategy":"binary1d","adversary":"honest",'
        '"target":[5],"outcome":"found"}\n'
        '{"q":[3],"reply":{"corner":[0]}}\n'
        '{"q":[5],"reply":"found"}\n'
    )


def test_transcript_legality_catches_tampering():
    shape = grid_shape(8)
    honest = run_match(
        Binary1D(shape), HonestAdversary(shape, (5,)), shape, target=(5,)
    )
    assert transcript_is_legal(honest)

    flipped = Transcript(
        shape=shape,
        strategy=honest.strategy,
        adversary=honest.adversary,
        target=honest.target,
        # claiming t < 3 first makes the later found at (5,) inconsistent
        events=(((3,), Reply((1,))), ((5,), FOUND)),
        outcome="found",
    )
    assert not transcript_is_legal(flipped)

    emptied = Transcript(
        shape=grid_shape(2, 2),
        strategy="scripted",
        adversary="scripted",
        target=None,
        events=(((0, 0), Reply((1, 1))),),
        outcome="exhausted",
    )
    assert not transcript_is_legal(emptied)


def test_transcript_legality_checks_the_declared_target():
    shape = grid_shape(8)
    transcript = Transcript(
        shape=shape,
        strategy="binary1d",
        adversary="honest",
        target=(2,),  # the recorded replies rule this cell out
        events=(((3,), Reply((0,))),),
        outcome="exhausted",
    )
    assert not transcript_is_legal(transcript)
