"""Exact game solving on small grids.

`exact_qc` computes the minimax query count: the searcher minimizes over
query cells, the answerer maximizes over legal corner replies, and a
position is worth 1 when a single candidate remains (one forced found
query).  States are memoized on the candidate bitset, optionally
canonicalized under the grid's automorphisms (per-axis reversal and
permutation of equal-size axes), with branch-and-bound pruning against the
trivial query-every-candidate budget.

A query whose reply could remove nothing is skipped by the min player: the
answerer would repeat that reply forever.  Querying inside the candidate
set always shrinks it, so the searcher always has progress moves and the
recursion terminates.

`best_response` answers the opposite question: how fast can an
unconstrained searcher finish against one fixed deterministic answer
policy?  It is a breadth-first shortest path over the policy's reachable
states.  `extract_optimal_adversary` turns a solved shape's memo into the
strongest answer policy, replying with an argmax corner (stalling replies
included, since repeating a state costs the searcher a turn and the
answerer nothing).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import (
    CandidateSet,
    Corner,
    FOUND,
    GameStateError,
    GridShape,
    Point,
    Reply,
    _exclusion_mask,
)

__all__ = [
    "DEFAULT_MAX_CELLS",
    "DEFAULT_MAX_STATES",
    "OptimalAdversary",
    "ResourceCapError",
    "SolveReport",
    "best_response",
    "exact_qc",
    "extract_optimal_adversary",
]

DEFAULT_MAX_CELLS = 64
DEFAULT_MAX_STATES = 2_000_000


class ResourceCapError(RuntimeError):
    """A configured resource cap was hit; carries the cap's name and value."""

    def __init__(self, cap_name: str, cap_value: int, detail: str = ""):
        self.cap_name = cap_name
        self.cap_value = cap_value
        suffix = f": {detail}" if detail else ""
        super().__init__(f"{cap_name} cap of {cap_value} exceeded{suffix}")


@dataclass(frozen=True, slots=True)
class SolveReport:
    """Outcome of one exact solve."""

    shape: GridShape
    value: int
    states_explored: int
    peak_memo: int
    principal_line: tuple[tuple[Point, Corner | None], ...]
    heuristic: bool = False

    def __post_init__(self) -> None:
        assert 1 <= self.value <= self.shape.ncells


class _SolveContext:
    def __init__(self, shape: GridShape, symmetry: bool, max_states: int,
                 restrict_queries: bool):
        self.shape = shape
        self.symmetry = symmetry
        self.max_states = max_states
        self.restrict_queries = restrict_queries
        self.memo: dict[int, int] = {}
        self.principal: dict[int, int] = {}  # canonical bits -> query rank
        self.states_explored = 0
        # per-rank reply masks, lexicographic corner order
        self.moves: list[tuple[tuple[Corner, int], ...]] = [
            tuple(
                (corner, _exclusion_mask(shape, shape.point_at(rank), corner))
                for corner in shape.corners()
            )
            for rank in range(shape.ncells)
        ]
        self.remaps = _remap_tables(shape) if symmetry else ()

    def canonical(self, bits: int) -> int:
        best = bits
        for table in self.remaps:
            out = 0
            rest = bits
            while rest:
                low = rest & -rest
                out |= 1 << table[low.bit_length() - 1]
                rest ^= low
            if out < best:
                best = out
        return best


def _remap_tables(shape: GridShape) -> tuple[tuple[int, ...], ...]:
    """Rank-to-rank tables for the grid automorphisms, identity excluded.

    Combines permutations of equal-size axes with per-axis reversals.  Both
    map games to equal-valued games: a reversal flips the corner bit of its
    axis, a permutation relabels bits, and legality is preserved either
    way.  Falls back to reversals only if the group would be large.
    """
    dims = shape.dims
    d = len(dims)
    perms = [
        p
        for p in itertools.permutations(range(d))
        if all(dims[p[i]] == dims[i] for i in range(d))
    ]
    if len(perms) * (1 << d) > 1024:
        perms = [tuple(range(d))]
    tables = []
    for perm in perms:
        for flips in itertools.product((False, True), repeat=d):
            if perm == tuple(range(d)) and not any(flips):
                continue
            table = []
            for rank in range(shape.ncells):
                u = shape.point_at(rank)
                v = tuple(
                    (dims[i] - 1 - u[perm[i]]) if flips[i] else u[perm[i]]
                    for i in range(d)
                )
                table.append(shape.index(v))
            tables.append(tuple(table))
    return tuple(tables)


def _query_ranks(ctx: _SolveContext, bits: int) -> list[int]:
    # candidate cells first (their replies always make progress), then the
    # rest of the grid unless restricted
    inside = []
    rest = bits
    while rest:
        low = rest & -rest
        inside.append(low.bit_length() - 1)
        rest ^= low
    if ctx.restrict_queries:
        return inside
    member = set(inside)
    return inside + [r for r in range(ctx.shape.ncells) if r not in member]


def _cost(ctx: _SolveContext, bits: int) -> int:
    count = bits.bit_count()
    if count == 1:
        return 1
    key = ctx.canonical(bits) if ctx.symmetry else bits
    cached = ctx.memo.get(key)
    if cached is not None:
        return cached
    if len(ctx.memo) >= ctx.max_states:
        raise ResourceCapError("max_states", ctx.max_states,
                               f"solving {ctx.shape.dims}")
    ctx.states_explored += 1
    best = count  # querying candidates one by one always achieves |P|
    best_rank = -1
    for rank in _query_ranks(ctx, bits):
        children = []
        stall = False
        for _, mask in ctx.moves[rank]:
            child = bits & ~mask
            if child == bits:
                stall = True  # the answerer could repeat this reply forever
                break
            if child:
                children.append(child)
        if stall or not children:
            continue
        children.sort(key=int.bit_count, reverse=True)
        worst = 0
        pruned = False
        for child in children:
            child_cost = _cost(ctx, child)
            if child_cost + 1 >= best:
                pruned = True
                break
            if child_cost > worst:
                worst = child_cost
        if not pruned:
            best = worst + 1
            best_rank = rank
    ctx.memo[key] = best
    if best_rank >= 0:
        ctx.principal[key] = best_rank
    return best


def _principal_line(ctx: _SolveContext) -> tuple[tuple[Point, Corner | None], ...]:
    """Replay one optimal line: searcher argmin, answerer first argmax."""
    shape = ctx.shape
    bits = CandidateSet.full(shape).bits
    line: list[tuple[Point, Corner | None]] = []
    while bits.bit_count() > 1:
        value = _cost(ctx, bits)
        key = ctx.canonical(bits) if ctx.symmetry else bits
        rank = ctx.principal.get(key, -1)
        if rank < 0 or not _achieves(ctx, bits, rank, value):
            rank = next(
                r for r in _query_ranks(ctx, bits) if _achieves(ctx, bits, r, value)
            )
        worst_cost = -1
        worst_child = 0
        worst_corner: Corner | None = None
        for corner, mask in ctx.moves[rank]:
            child = bits & ~mask
            if not child or child == bits:
                continue
            child_cost = _cost(ctx, child)
            if child_cost > worst_cost:
                worst_cost, worst_child, worst_corner = child_cost, child, corner
        assert worst_corner is not None
        line.append((shape.point_at(rank), worst_corner))
        bits = worst_child
    line.append((shape.point_at(bits.bit_length() - 1), None))
    return tuple(line)


def _achieves(ctx: _SolveContext, bits: int, rank: int, value: int) -> bool:
    worst = 0
    for _, mask in ctx.moves[rank]:
        child = bits & ~mask
        if child == bits:
            return False
        if child:
            worst = max(worst, _cost(ctx, child))
    return worst + 1 == value


# last exact solve per shape, for extract_optimal_adversary
_SOLVED: dict[tuple[int, ...], _SolveContext] = {}


def exact_qc(
    shape: GridShape,
    *,
    symmetry: bool = True,
    max_cells: int = DEFAULT_MAX_CELLS,
    max_states: int = DEFAULT_MAX_STATES,
    restrict_queries: bool = False,
) -> SolveReport:
    """Exact minimax query count of a shape.

    ``restrict_queries`` limits the searcher to cells inside the current
    candidate set; that is not known to preserve the value, so the report
    is then flagged heuristic and not reused for the optimal adversary.
    """
    if shape.ncells > max_cells:
        raise ResourceCapError("max_cells", max_cells,
                               f"shape {shape.dims} has {shape.ncells} cells")
    ctx = _SolveContext(shape, symmetry, max_states, restrict_queries)
    value = _cost(ctx, CandidateSet.full(shape).bits)
    line = _principal_line(ctx)
    if not restrict_queries:
        _SOLVED[shape.dims] = ctx
    return SolveReport(
        shape=shape,
        value=value,
        states_explored=ctx.states_explored,
        peak_memo=len(ctx.memo),
        principal_line=line,
        heuristic=restrict_queries,
    )


class OptimalAdversary:
    """Answer policy reading argmax replies off a solved shape's memo.

    Any searcher needs at least the solved minimax value of queries against
    it: every reply hands back a position worth no less than the current
    one minus one, stalls included.
    """

    name = "optimal"

    def __init__(self, ctx: _SolveContext):
        self._ctx = ctx
        self.shape = ctx.shape
        self.candidates = CandidateSet.full(ctx.shape)

    def reply(self, query: Point) -> Reply:
        ctx = self._ctx
        bits = self.candidates.bits
        rank = self.shape.index(query)
        if bits == 1 << rank:
            return FOUND
        best_corner: Corner | None = None
        best_child = 0
        best_cost = -1
        for corner, mask in ctx.moves[rank]:
            child = bits & ~mask
            if not child:
                continue
            child_cost = _cost(ctx, child)  # child == bits reuses the memo
            if child_cost > best_cost:
                best_corner, best_child, best_cost = corner, child, child_cost
        assert best_corner is not None  # some corner keeps a candidate
        self.candidates = CandidateSet(self.shape, best_child)
        return Reply(best_corner)

    def key(self) -> bytes:
        return f"op|{self.candidates.bits:x}".encode()

    def clone(self) -> "OptimalAdversary":
        fork = OptimalAdversary.__new__(OptimalAdversary)
        fork._ctx = self._ctx
        fork.shape = self.shape
        fork.candidates = self.candidates
        return fork

    def metadata(self) -> dict | None:
        return None


def extract_optimal_adversary(shape: GridShape) -> OptimalAdversary:
    """The argmax policy for a shape already solved by `exact_qc`."""
    ctx = _SOLVED.get(shape.dims)
    if ctx is None:
        raise GameStateError(
            f"shape {shape.dims} has not been solved; run exact_qc first"
        )
    return OptimalAdversary(ctx)


def best_response(
    shape: GridShape,
    adversary,
    *,
    max_states: int = DEFAULT_MAX_STATES,
) -> int:
    """Fewest queries any searcher needs to force found from ``adversary``.

    Breadth-first search over the policy's reachable states; each edge is
    one query, answered deterministically.  Queries that leave the policy's
    state unchanged lead back to a visited state and drop out, so the
    search terminates.
    """
    start = adversary.clone()
    seen = {start.key()}
    frontier = [start]
    queries = list(shape.points())
    depth = 0
    while frontier:
        depth += 1
        bulge: list = []
        for state in frontier:
            for query in queries:
                probe = state.clone()
                if probe.reply(query).is_found:
                    return depth
                key = probe.key()
                if key not in seen:
                    if len(seen) >= max_states:
                        raise ResourceCapError(
                            "max_states", max_states,
                            f"best response on {shape.dims}"
                        )
                    seen.add(key)
                    bulge.append(probe)
        frontier = bulge
    raise GameStateError(f"no query sequence reaches found on {shape.dims}")
