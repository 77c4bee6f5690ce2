"""Strategy measurement: single matches and full worst-case evaluation.

`run_match` plays one strategy against one adversary, validating every
reply against the game rules before accepting it, and records the match as
a Transcript.  `worst_case` instead branches over every legal corner reply
at every query, memoizing on (strategy state, candidate set); the result
is the exact worst-case query count of the fixed strategy together with
whether every line of play ends in a found reply.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Literal

from .core import (
    CandidateSet,
    FOUND,
    GridShape,
    Point,
    Reply,
    apply_reply,
    valid_corner_replies,
)
from .solver import DEFAULT_MAX_STATES, ResourceCapError
from .strategies import Strategy

__all__ = [
    "EvaluationReport",
    "Outcome",
    "ProtocolViolationError",
    "Transcript",
    "run_match",
    "transcript_is_legal",
    "transcript_to_jsonl",
    "worst_case",
]

Outcome = Literal["found", "exhausted", "depth_capped"]


class ProtocolViolationError(RuntimeError):
    """An adversary reply broke the game rules."""


@dataclass(frozen=True, slots=True)
class Transcript:
    """One full match, replayable through the game rules."""

    shape: GridShape
    strategy: str
    adversary: str
    target: Point | None
    events: tuple[tuple[Point, Reply], ...]
    outcome: Outcome

    @property
    def total_queries(self) -> int:
        return len(self.events)


@dataclass(frozen=True, slots=True)
class EvaluationReport:
    """Worst-case evaluation of one strategy on one shape."""

    shape: GridShape
    strategy: str
    worst_case: int
    correct: bool
    nodes: int
    witness: Transcript


def run_match(
    strategy: Strategy,
    adversary,
    shape: GridShape,
    target: Point | None = None,
    *,
    depth_cap: int | None = None,
) -> Transcript:
    """Play one match to found, exhaustion, or the depth cap.

    Every adversary reply is validated before acceptance: a corner must
    leave at least one consistent target and a found reply must name a
    cell no earlier reply ruled out.  A declared target requires the
    honest adversary committed to that same target.
    """
    if strategy.shape != shape or adversary.shape != shape:
        raise ValueError("strategy, adversary, and match must share one shape")
    if target is not None:
        shape.index(target)
        if getattr(adversary, "target", None) != target:
            raise ValueError("a declared target requires the honest adversary "
                             "committed to that target")
    cap = 4 * shape.ncells if depth_cap is None else depth_cap
    candidates = CandidateSet.full(shape)
    events: list[tuple[Point, Reply]] = []
    outcome: Outcome = "depth_capped"
    for _ in range(cap):
        query = strategy.next_query()
        if query is None:
            outcome = "exhausted"
            break
        rank = shape.index(query)
        reply = adversary.reply(query)
        events.append((query, reply))
        if reply.is_found:
            if not (candidates.bits >> rank) & 1:
                raise ProtocolViolationError(
                    f"found reply at {query} contradicts earlier replies"
                )
            outcome = "found"
            break
        corner = reply.corner
        assert corner is not None
        if len(corner) != shape.ndim or any(b not in (0, 1) for b in corner):
            raise ProtocolViolationError(f"malformed corner {corner} to {query}")
        after = apply_reply(candidates, query, corner)
        if not after.bits:
            raise ProtocolViolationError(
                f"corner {corner} to {query} leaves no consistent target"
            )
        candidates = after
        strategy.observe(reply)
    return Transcript(
        shape=shape,
        strategy=strategy.name,
        adversary=adversary.name,
        target=target,
        events=tuple(events),
        outcome=outcome,
    )


def worst_case(
    strategy: Strategy,
    shape: GridShape | None = None,
    *,
    max_states: int = DEFAULT_MAX_STATES,
) -> EvaluationReport:
    """Exact worst-case query count of a fixed strategy.

    Depth-first search over every legal corner reply at every query; the
    answerer concedes found only when forced.  Memoized on (strategy
    state key, candidate bitset): the pair determines the entire subgame,
    whereas the candidate set alone would not, since strategies carry
    history such as pending rectangles.
    """
    if shape is None:
        shape = strategy.shape
    elif shape != strategy.shape:
        raise ValueError("shape does not match the strategy's shape")
    memo: dict[tuple[bytes, int], tuple[int, bool]] = {}
    nodes = 0

    def explore(state: Strategy, candidates: CandidateSet) -> tuple[int, bool]:
        nonlocal nodes
        key = (state.key(), candidates.bits)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if len(memo) >= max_states:
            raise ResourceCapError("max_states", max_states,
                                   f"evaluating {strategy.name} on {shape.dims}")
        nodes += 1
        query = state.next_query()
        if query is None:
            result = (0, False)  # gave up with candidates still alive
        elif candidates.bits == 1 << shape.index(query):
            result = (1, True)  # forced found
        else:
            depth = 0
            all_found = True
            for corner in valid_corner_replies(candidates, query):
                child = state.clone()
                child.observe(Reply(corner))
                sub_depth, sub_ok = explore(child, apply_reply(candidates, query, corner))
                depth = max(depth, 1 + sub_depth)
                all_found = all_found and sub_ok
            result = (depth, all_found)
        memo[key] = result
        return result

    total, correct = explore(strategy.clone(), CandidateSet.full(shape))
    witness = _witness(strategy, shape, memo)
    return EvaluationReport(
        shape=shape,
        strategy=strategy.name,
        worst_case=total,
        correct=correct,
        nodes=nodes,
        witness=witness,
    )


def _witness(strategy: Strategy, shape: GridShape, memo) -> Transcript:
    """Rebuild one deepest line of play from the filled memo."""
    state = strategy.clone()
    candidates = CandidateSet.full(shape)
    events: list[tuple[Point, Reply]] = []
    outcome: Outcome = "depth_capped"
    while True:
        query = state.next_query()
        if query is None:
            outcome = "exhausted"
            break
        if candidates.bits == 1 << shape.index(query):
            events.append((query, FOUND))
            outcome = "found"
            break
        best_depth = -1
        best = None
        for corner in valid_corner_replies(candidates, query):
            child = state.clone()
            child.observe(Reply(corner))
            child_candidates = apply_reply(candidates, query, corner)
            depth, _ = memo[(child.key(), child_candidates.bits)]
            if depth + 1 > best_depth:
                best_depth = depth + 1
                best = (corner, child, child_candidates)
        assert best is not None
        corner, state, candidates = best
        events.append((query, Reply(corner)))
    return Transcript(
        shape=shape,
        strategy=strategy.name,
        adversary="worst-case",
        target=None,
        events=tuple(events),
        outcome=outcome,
    )


def transcript_to_jsonl(transcript: Transcript) -> str:
    """Serialize a transcript as JSON lines: one header, one line per event."""
    header = {
        "shape": list(transcript.shape.dims),
        "strategy": transcript.strategy,
        "adversary": transcript.adversary,
        "target": None if transcript.target is None else list(transcript.target),
        "outcome": transcript.outcome,
    }
    lines = [json.dumps(header, separators=(",", ":"))]
    for query, reply in transcript.events:
        event = {
            "q": list(query),
            "reply": "found" if reply.is_found else {"corner": list(reply.corner)},
        }
        lines.append(json.dumps(event, separators=(",", ":")))
    return "\n".join(lines) + "\n"


def transcript_is_legal(transcript: Transcript) -> bool:
    """Replay a transcript through the game rules, checking every reply."""
    shape = transcript.shape
    candidates = CandidateSet.full(shape)
    for query, reply in transcript.events:
        rank = shape.index(query)
        if reply.is_found:
            if not (candidates.bits >> rank) & 1:
                return False
            candidates = CandidateSet(shape, 1 << rank)
            continue
        corner = reply.corner
        if corner is None or len(corner) != shape.ndim:
            return False
        candidates = apply_reply(candidates, query, corner)
        if not candidates.bits:
            return False
    if transcript.target is not None and transcript.events:
        if (candidates.bits >> shape.index(transcript.target)) & 1 == 0:
            return False
    return True
