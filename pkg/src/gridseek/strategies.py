"""Deterministic searcher-side strategies.

Three policies cover every dimension count: classical binary search on a
single axis, a two-dimensional recursion that binary-searches the middle
row of each pending rectangle and keeps the at-most-two leftover
rectangles, and an any-dimension policy that sweeps the smallest axis one
slice at a time.

Strategies speak a four-method protocol.  ``next_query()`` returns the
cell to probe next, or None once the policy has nowhere left to look (in a
legal match that only happens after the target cannot be hidden anywhere
the policy is responsible for).  ``observe(reply)`` advances the state and
is the only mutator; ``next_query`` is a pure peek, so calling it twice is
safe.  ``key()`` serializes the state to bytes for memoization and
``clone()`` forks the state so an evaluator can branch over replies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Protocol

from .core import (
    Corner,
    DimensionMismatchError,
    GameStateError,
    GridShape,
    Point,
    Reply,
)

__all__ = [
    "Binary1D",
    "Grid2D",
    "PermutedAxes",
    "Rectangle",
    "SegmentSearchOutcome",
    "Slicing",
    "Strategy",
    "STRATEGY_NAMES",
    "default_strategy_name",
    "make_strategy",
    "segment_binary_search",
]

STRATEGY_NAMES = ("binary1d", "grid2d", "slicing")


class Strategy(Protocol):
    """Searcher-side policy protocol; see the module docstring."""

    name: str
    shape: GridShape

    def next_query(self) -> Point | None: ...

    def observe(self, reply: Reply) -> None: ...

    def key(self) -> bytes: ...

    def clone(self) -> "Strategy": ...


@dataclass(frozen=True, slots=True)
class Rectangle:
    """Closed 2D cell range [x_lo, x_hi] x [y_lo, y_hi]; never empty."""

    x_lo: int
    x_hi: int
    y_lo: int
    y_hi: int

    def __post_init__(self) -> None:
        if self.x_lo > self.x_hi or self.y_lo > self.y_hi:
            raise ValueError(f"empty rectangle {self.as_tuple()}")

    @property
    def width(self) -> int:
        return self.x_hi - self.x_lo + 1

    @property
    def height(self) -> int:
        return self.y_hi - self.y_lo + 1

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.x_lo, self.x_hi, self.y_lo, self.y_hi)


@dataclass(frozen=True, slots=True)
class SegmentSearchOutcome:
    """Result of binary-searching one row of a rectangle.

    The four markers tell where the corner replies pinned the leftover
    candidates.  ``below_left`` is the largest probed column whose reply
    claimed "target right of here or above the row" (so candidates below
    the row must sit to its right); ``below_right`` is the smallest probed
    column forcing below-row candidates to its left; the ``above_*`` pair
    does the same for candidates above the row.  Unused markers hold the
    sentinels x_lo - 1 / x_hi + 1.  On every run that ends without a found
    reply, max(below_left, above_left) + 1 == min(below_right, above_right).

    ``byproducts`` holds the leftover rectangle below the row first, then
    the one above, each omitted when empty.
    """

    below_left: int
    above_left: int
    below_right: int
    above_right: int
    byproducts: tuple[Rectangle, ...]
    found: Point | None


class Binary1D:
    """Classical binary search over a one-axis grid."""

    name = "binary1d"

    def __init__(self, shape: GridShape):
        if shape.ndim != 1:
            raise ValueError(f"binary1d needs a one-axis grid, got {shape.dims}")
        self.shape = shape
        self._lo = 0
        self._hi = shape.dims[0] - 1

    def next_query(self) -> Point | None:
        if self._lo > self._hi:
            return None
        return ((self._lo + self._hi) // 2,)

    def observe(self, reply: Reply) -> None:
        if self._lo > self._hi:
            raise GameStateError("strategy is exhausted")
        if reply.is_found:
            self._lo, self._hi = 0, -1
            return
        corner = reply.corner
        assert corner is not None
        if len(corner) != 1:
            raise DimensionMismatchError(f"expected a 1-bit corner, got {corner}")
        mid = (self._lo + self._hi) // 2
        if corner[0]:
            self._hi = mid - 1
        else:
            self._lo = mid + 1

    def key(self) -> bytes:
        return f"b1|{self._lo}|{self._hi}".encode()

    def clone(self) -> "Binary1D":
        fork = Binary1D.__new__(Binary1D)
        fork.shape = self.shape
        fork._lo = self._lo
        fork._hi = self._hi
        return fork


class _LineEngine:
    """Binary search along one free axis of a template point."""

    def __init__(self, template: Point, axis: int, lo: int, hi: int):
        self.template = template
        self.axis = axis
        self.lo = lo
        self.hi = hi

    @property
    def done(self) -> bool:
        return self.lo > self.hi

    def next_query(self) -> Point:
        q = list(self.template)
        q[self.axis] = (self.lo + self.hi) // 2
        return tuple(q)

    def observe_corner(self, corner: Corner) -> None:
        mid = (self.lo + self.hi) // 2
        if corner[self.axis]:
            self.hi = mid - 1
        else:
            self.lo = mid + 1

    def byproducts(self) -> tuple[Rectangle, ...]:
        return ()

    def state(self) -> tuple:
        return ("ln", self.template, self.axis, self.lo, self.hi)

    def clone(self) -> "_LineEngine":
        return _LineEngine(self.template, self.axis, self.lo, self.hi)


class _SegmentEngine:
    """Binary search on one row of a rectangle, tracking leftover markers.

    A reply corner (rx, ry) to a probe (mid, row) claims target_x < mid
    (rx = 1) or > mid (rx = 0), and likewise on y against the row.  For a
    candidate strictly below the row the y claim of an ry = 0 corner is
    false, so the x claim binds it; symmetric for ry = 1 above.  Tracking,
    per ry, the extreme mids of each x direction therefore pins every
    off-row survivor into one rectangle below and one above.
    """

    def __init__(self, rect: Rectangle, row: int):
        if not rect.y_lo <= row <= rect.y_hi:
            raise ValueError(f"row {row} outside rectangle {rect.as_tuple()}")
        self.rect = rect
        self.row = row
        self.lo = rect.x_lo
        self.hi = rect.x_hi
        self.below_left = rect.x_lo - 1
        self.above_left = rect.x_lo - 1
        self.below_right = rect.x_hi + 1
        self.above_right = rect.x_hi + 1

    @property
    def done(self) -> bool:
        return self.lo > self.hi

    def next_query(self) -> Point:
        return ((self.lo + self.hi) // 2, self.row)

    def observe_corner(self, corner: Corner) -> None:
        mid = (self.lo + self.hi) // 2
        rx, ry = corner
        if rx == 0:
            if ry == 0:
                self.below_left = max(self.below_left, mid)
            else:
                self.above_left = max(self.above_left, mid)
            self.lo = mid + 1
        else:
            if ry == 0:
                self.below_right = min(self.below_right, mid)
            else:
                self.above_right = min(self.above_right, mid)
            self.hi = mid - 1

    def byproducts(self) -> tuple[Rectangle, ...]:
        # the left markers sit one step left of the live interval and the
        # right markers one step right of it, so on completion
        # max(lefts) + 1 == min(rights)
        assert self.done
        assert max(self.below_left, self.above_left) + 1 == min(
            self.below_right, self.above_right
        )
        out = []
        if self.below_left + 1 <= self.below_right - 1 and self.rect.y_lo < self.row:
            out.append(
                Rectangle(
                    self.below_left + 1,
                    self.below_right - 1,
                    self.rect.y_lo,
                    self.row - 1,
                )
            )
        if self.above_left + 1 <= self.above_right - 1 and self.row < self.rect.y_hi:
            out.append(
                Rectangle(
                    self.above_left + 1,
                    self.above_right - 1,
                    self.row + 1,
                    self.rect.y_hi,
                )
            )
        return tuple(out)

    def markers(self) -> tuple[int, int, int, int]:
        return (self.below_left, self.above_left, self.below_right, self.above_right)

    def state(self) -> tuple:
        return ("sg", self.rect.as_tuple(), self.row, self.lo, self.hi, *self.markers())

    def clone(self) -> "_SegmentEngine":
        fork = _SegmentEngine.__new__(_SegmentEngine)
        fork.rect = self.rect
        fork.row = self.row
        fork.lo = self.lo
        fork.hi = self.hi
        fork.below_left = self.below_left
        fork.above_left = self.above_left
        fork.below_right = self.below_right
        fork.above_right = self.above_right
        return fork


def segment_binary_search(
    rect: Rectangle, row: int, reply_fn: Callable[[Point], Reply]
) -> SegmentSearchOutcome:
    """Drive one row search to completion, answering probes via ``reply_fn``.

    A found reply short-circuits: the outcome then carries the found point
    and no byproducts.
    """
    engine = _SegmentEngine(rect, row)
    while not engine.done:
        query = engine.next_query()
        reply = reply_fn(query)
        if reply.is_found:
            return SegmentSearchOutcome(*engine.markers(), byproducts=(), found=query)
        corner = reply.corner
        assert corner is not None
        if len(corner) != 2:
            raise DimensionMismatchError(f"expected a 2-bit corner, got {corner}")
        engine.observe_corner(corner)
    return SegmentSearchOutcome(
        *engine.markers(), byproducts=engine.byproducts(), found=None
    )


class Grid2D:
    """Two-dimensional search by repeated middle-row segment searches.

    Keeps a stack of pending rectangles, initially the whole grid.  A
    rectangle of height or width 1 is searched along its free axis like a
    line; anything larger gets a segment search on its middle row, whose
    two leftover rectangles are pushed so the one below the row is
    processed first.
    """

    name = "grid2d"

    def __init__(self, shape: GridShape):
        if shape.ndim != 2:
            raise ValueError(f"grid2d needs a two-axis grid, got {shape.dims}")
        self.shape = shape
        m, n = shape.dims
        self._pending: list[Rectangle] = [Rectangle(0, m - 1, 0, n - 1)]
        self._active: _LineEngine | _SegmentEngine | None = None
        self._activate()

    def _activate(self) -> None:
        while self._active is None and self._pending:
            rect = self._pending.pop()
            if rect.height == 1:
                self._active = _LineEngine((0, rect.y_lo), 0, rect.x_lo, rect.x_hi)
            elif rect.width == 1:
                self._active = _LineEngine((rect.x_lo, 0), 1, rect.y_lo, rect.y_hi)
            else:
                row = (rect.y_lo + rect.y_hi) // 2
                self._active = _SegmentEngine(rect, row)

    def next_query(self) -> Point | None:
        if self._active is None:
            return None
        return self._active.next_query()

    def observe(self, reply: Reply) -> None:
        if self._active is None:
            raise GameStateError("strategy is exhausted")
        if reply.is_found:
            self._active = None
            self._pending.clear()
            return
        corner = reply.corner
        assert corner is not None
        if len(corner) != 2:
            raise DimensionMismatchError(f"expected a 2-bit corner, got {corner}")
        self._active.observe_corner(corner)
        if self._active.done:
            leftovers = self._active.byproducts()
            # stack order: push the above-row leftover first so the
            # below-row one is processed first
            for rect in reversed(leftovers):
                self._pending.append(rect)
            self._active = None
            self._activate()

    def key(self) -> bytes:
        active = None if self._active is None else self._active.state()
        pending = tuple(r.as_tuple() for r in self._pending)
        return f"g2|{active}|{pending}".encode()

    def clone(self) -> "Grid2D":
        fork = Grid2D.__new__(Grid2D)
        fork.shape = self.shape
        fork._pending = list(self._pending)
        fork._active = None if self._active is None else self._active.clone()
        return fork


class Slicing:
    """Any-dimension search sweeping the last (smallest) axis slice by slice.

    Runs the one-lower-dimensional policy inside the current slice,
    forwarding all but the last reply bit.  When a query stays inside the
    target's slice, both claims about the slice axis are false, so at
    least one forwarded bit is true and the sub-search stays sound; when
    the sub-search exhausts a slice the target cannot be there, and the
    sweep moves on.
    """

    name = "slicing"

    def __init__(self, shape: GridShape):
        if shape.ndim < 3:
            raise ValueError(f"slicing needs at least three axes, got {shape.dims}")
        dims = shape.dims
        if any(a < b for a, b in zip(dims, dims[1:])):
            raise ValueError(f"slicing needs extents sorted non-increasing, got {dims}")
        self.shape = shape
        self._slice = 0
        self._done = False
        self._sub = self._make_sub()

    def _make_sub(self) -> "Grid2D | Slicing":
        prefix = GridShape(self.shape.dims[:-1])
        return Grid2D(prefix) if prefix.ndim == 2 else Slicing(prefix)

    def next_query(self) -> Point | None:
        if self._done:
            return None
        sub_query = self._sub.next_query()
        assert sub_query is not None  # observe() never leaves an exhausted sub
        return (*sub_query, self._slice)

    def observe(self, reply: Reply) -> None:
        if self._done:
            raise GameStateError("strategy is exhausted")
        if reply.is_found:
            self._done = True
            return
        corner = reply.corner
        assert corner is not None
        if len(corner) != self.shape.ndim:
            raise DimensionMismatchError(
                f"expected a {self.shape.ndim}-bit corner, got {corner}"
            )
        self._sub.observe(Reply(corner[:-1]))
        while self._sub.next_query() is None:
            self._slice += 1
            if self._slice >= self.shape.dims[-1]:
                self._done = True
                return
            self._sub = self._make_sub()

    def key(self) -> bytes:
        if self._done:
            return b"sl|done"
        return f"sl|{self._slice}|".encode() + self._sub.key()

    def clone(self) -> "Slicing":
        fork = Slicing.__new__(Slicing)
        fork.shape = self.shape
        fork._slice = self._slice
        fork._done = self._done
        fork._sub = self._sub.clone()
        return fork


class PermutedAxes:
    """Adapter presenting an axis-reordered view of the grid to a strategy.

    ``order[j]`` names the outer axis that the inner strategy sees as its
    axis j.  Queries map inner to outer, reply corners outer to inner.
    """

    def __init__(self, shape: GridShape, order: tuple[int, ...], inner: Strategy):
        self.shape = shape
        self.order = order
        self.inner = inner
        self.name = inner.name

    def next_query(self) -> Point | None:
        inner_query = self.inner.next_query()
        if inner_query is None:
            return None
        outer = [0] * len(self.order)
        for j, axis in enumerate(self.order):
            outer[axis] = inner_query[j]
        return tuple(outer)

    def observe(self, reply: Reply) -> None:
        if reply.is_found:
            self.inner.observe(reply)
            return
        corner = reply.corner
        assert corner is not None
        if len(corner) != len(self.order):
            raise DimensionMismatchError(
                f"expected a {len(self.order)}-bit corner, got {corner}"
            )
        self.inner.observe(Reply(tuple(corner[axis] for axis in self.order)))

    def key(self) -> bytes:
        return f"pm|{self.order}|".encode() + self.inner.key()

    def clone(self) -> "PermutedAxes":
        return PermutedAxes(self.shape, self.order, self.inner.clone())


def default_strategy_name(shape: GridShape) -> str:
    """The policy that matches the grid's dimension count."""
    if shape.ndim == 1:
        return "binary1d"
    if shape.ndim == 2:
        return "grid2d"
    return "slicing"


def make_strategy(name: str, shape: GridShape) -> Strategy:
    """Build a strategy by name, reordering axes for slicing when needed."""
    if name == "binary1d":
        return Binary1D(shape)
    if name == "grid2d":
        return Grid2D(shape)
    if name == "slicing":
        dims = shape.dims
        if all(a >= b for a, b in zip(dims, dims[1:])):
            return Slicing(shape)
        order = tuple(sorted(range(len(dims)), key=lambda i: (-dims[i], i)))
        inner_shape = GridShape(tuple(dims[axis] for axis in order))
        return PermutedAxes(shape, order, Slicing(inner_shape))
    raise ValueError(f"unknown strategy {name!r}; choose from {STRATEGY_NAMES}")
