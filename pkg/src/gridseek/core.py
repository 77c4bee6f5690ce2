"""Game state primitives for multidimensional comparison-search games.

The game: a target cell is hidden in an integer grid S_1 x ... x S_d.  Each
round the searching side queries one cell q.  Unless the round ends with a
"found" reply, the answering side returns one bit per axis, where bit i = 1
claims target_i < q_i and bit i = 0 claims target_i > q_i, and at least one
of the d claims is guaranteed true.  A reply therefore rules out the closed
box of cells that falsify every claim, a box that always contains q itself.

`CandidateSet` tracks the cells still compatible with every reply so far.
Sets are big-integer bitsets in row-major order (last axis fastest), which
keeps removal, membership, and counting cheap with no dependencies.  All
types here are immutable and all functions are pure.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, TypeAlias

Point: TypeAlias = tuple[int, ...]
Corner: TypeAlias = tuple[int, ...]

__all__ = [
    "Box",
    "CandidateSet",
    "Corner",
    "DimensionMismatchError",
    "FOUND",
    "GameStateError",
    "GridShape",
    "Point",
    "Reply",
    "apply_reply",
    "excluded_box",
    "grid_shape",
    "honest_replies",
    "is_compatible",
    "valid_corner_replies",
]


class DimensionMismatchError(ValueError):
    """A point, corner, or interval tuple has the wrong number of axes."""


class GameStateError(RuntimeError):
    """An operation was asked of a game state that cannot support it."""


@dataclass(frozen=True, slots=True)
class GridShape:
    """Extents of the search grid, one positive size per axis."""

    dims: tuple[int, ...]
    strides: tuple[int, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not self.dims:
            raise ValueError("grid needs at least one axis")
        if any(n < 1 for n in self.dims):
            raise ValueError(f"axis sizes must be positive, got {self.dims}")
        strides = [1] * len(self.dims)
        for i in range(len(self.dims) - 2, -1, -1):
            strides[i] = strides[i + 1] * self.dims[i + 1]
        object.__setattr__(self, "strides", tuple(strides))

    @property
    def ndim(self) -> int:
        return len(self.dims)

    @property
    def ncells(self) -> int:
        return math.prod(self.dims)

    def index(self, point: Point) -> int:
        """Row-major rank of ``point``, validating bounds."""
        if len(point) != len(self.dims):
            raise DimensionMismatchError(
                f"point {point} has {len(point)} axes, grid has {len(self.dims)}"
            )
        rank = 0
        for value, size, stride in zip(point, self.dims, self.strides):
            if not 0 <= value < size:
                raise ValueError(f"point {point} outside grid {self.dims}")
            rank += value * stride
        return rank

    def point_at(self, rank: int) -> Point:
        """Inverse of `index`."""
        if not 0 <= rank < self.ncells:
            raise ValueError(f"rank {rank} outside grid of {self.ncells} cells")
        out = []
        for stride in self.strides:
            out.append(rank // stride)
            rank %= stride
        return tuple(out)

    def points(self) -> Iterator[Point]:
        """All cells in row-major order."""
        return itertools.product(*(range(n) for n in self.dims))

    def corners(self) -> Iterator[Corner]:
        """All 2**ndim reply corners in lexicographic order."""
        return itertools.product((0, 1), repeat=len(self.dims))


def grid_shape(*sizes: int) -> GridShape:
    """Convenience constructor: ``grid_shape(9, 6) == GridShape((9, 6))``."""
    return GridShape(tuple(sizes))


@dataclass(frozen=True, slots=True)
class Reply:
    """One answer: the found sentinel, or a corner of per-axis claim bits."""

    corner: Corner | None

    @property
    def is_found(self) -> bool:
        return self.corner is None


FOUND = Reply(None)


@dataclass(frozen=True, slots=True)
class Box:
    """Axis-aligned closed box, one (lo, hi) pair per axis; hi < lo is empty."""

    intervals: tuple[tuple[int, int], ...]

    @property
    def is_empty(self) -> bool:
        return any(hi < lo for lo, hi in self.intervals)

    def __contains__(self, point: Point) -> bool:
        if len(point) != len(self.intervals):
            raise DimensionMismatchError(
                f"point {point} has {len(point)} axes, box has {len(self.intervals)}"
            )
        return all(lo <= v <= hi for v, (lo, hi) in zip(point, self.intervals))


def excluded_box(shape: GridShape, query: Point, corner: Corner) -> Box:
    """Cells a corner reply rules out: those falsifying every per-axis claim.

    Claim bit 1 on axis i asserts target_i < query_i and fails on
    [query_i, n_i - 1]; bit 0 asserts target_i > query_i and fails on
    [0, query_i].  The queried cell falsifies every claim, so it always
    lies in the box.
    """
    shape.index(query)
    _check_corner(shape, corner)
    return Box(
        tuple(
            (q, n - 1) if bit else (0, q)
            for q, n, bit in zip(query, shape.dims, corner)
        )
    )


def is_compatible(target: Point, query: Point, corner: Corner) -> bool:
    """True when at least one per-axis claim of the reply holds for ``target``."""
    if not len(target) == len(query) == len(corner):
        raise DimensionMismatchError(
            f"lengths differ: target {len(target)}, query {len(query)}, "
            f"corner {len(corner)}"
        )
    return any(
        (t < q) if bit else (t > q) for t, q, bit in zip(target, query, corner)
    )


def honest_replies(target: Point, query: Point) -> list[Reply]:
    """Replies a truthful answerer may give, in lexicographic corner order.

    Exactly ``[FOUND]`` when target == query: every claim about the queried
    cell itself is false, so honesty forces the concession.  Otherwise the
    corners whose claims keep ``target`` alive.
    """
    if len(target) != len(query):
        raise DimensionMismatchError(
            f"target has {len(target)} axes, query has {len(query)}"
        )
    if target == query:
        return [FOUND]
    return [
        Reply(corner)
        for corner in itertools.product((0, 1), repeat=len(target))
        if is_compatible(target, query, corner)
    ]


@dataclass(frozen=True, slots=True)
class CandidateSet:
    """Immutable set of grid cells, stored as a big-integer bitmask."""

    shape: GridShape
    bits: int

    @classmethod
    def full(cls, shape: GridShape) -> CandidateSet:
        return cls(shape, (1 << shape.ncells) - 1)

    @classmethod
    def of(cls, shape: GridShape, points: Iterable[Point]) -> CandidateSet:
        bits = 0
        for point in points:
            bits |= 1 << shape.index(point)
        return cls(shape, bits)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, point: Point) -> bool:
        return (self.bits >> self.shape.index(point)) & 1 == 1

    def __iter__(self) -> Iterator[Point]:
        bits = self.bits
        while bits:
            low = bits & -bits
            yield self.shape.point_at(low.bit_length() - 1)
            bits ^= low

    def sole_point(self) -> Point:
        """The unique remaining cell; error unless exactly one remains."""
        if self.bits.bit_count() != 1:
            raise GameStateError(f"expected one candidate, have {len(self)}")
        return self.shape.point_at(self.bits.bit_length() - 1)


def apply_reply(candidates: CandidateSet, query: Point, corner: Corner) -> CandidateSet:
    """Candidate set after a corner reply to ``query``: remove the excluded box.

    The result is a subset of the input and never contains the queried cell.
    It may be empty; emptiness is the caller's validity concern.
    """
    shape = candidates.shape
    return CandidateSet(
        shape, candidates.bits & ~_exclusion_mask(shape, query, corner)
    )


def valid_corner_replies(candidates: CandidateSet, query: Point) -> list[Corner]:
    """Corners the answering side may legally give, in lexicographic order.

    Legal means at least one live candidate survives the reply.  The list is
    empty exactly when the queried cell is the only candidate left, the one
    state where the answerer is forced to concede found.  Raises
    GameStateError on an empty set: that state is already contradictory.
    """
    if candidates.bits == 0:
        raise GameStateError("no candidates remain")
    shape = candidates.shape
    return [
        corner
        for corner in shape.corners()
        if candidates.bits & ~_exclusion_mask(shape, query, corner)
    ]


def _check_corner(shape: GridShape, corner: Corner) -> None:
    if len(corner) != shape.ndim:
        raise DimensionMismatchError(
            f"corner {corner} has {len(corner)} axes, grid has {shape.ndim}"
        )
    if any(bit not in (0, 1) for bit in corner):
        raise ValueError(f"corner bits must be 0 or 1, got {corner}")


@lru_cache(maxsize=None)
def _box_mask(shape: GridShape, intervals: tuple[tuple[int, int], ...]) -> int:
    # Fold axes last-to-first so each step shifts by that axis' stride.
    acc = 1
    for (lo, hi), stride in zip(reversed(intervals), reversed(shape.strides)):
        if hi < lo:
            return 0
        layer = 0
        for value in range(lo, hi + 1):
            layer |= acc << (value * stride)
        acc = layer
    return acc


@lru_cache(maxsize=None)
def _exclusion_mask(shape: GridShape, query: Point, corner: Corner) -> int:
    return _box_mask(shape, excluded_box(shape, query, corner).intervals)
