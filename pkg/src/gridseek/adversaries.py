"""Answer-side policies.

Two generic adversaries and three surface constructions.  The honest
policy commits to a real target and answers truthfully but as unhelpfully
as possible; the greedy policy commits to nothing and always keeps the
largest candidate set alive.  The three surface policies hide the target
on a monotone discrete surface (a staircase diagonal in 2D, a sloped plane
in 3D, a hyperplane in a cube) and answer only toward the all-zeros or
all-ones corner, which provably never eliminates surface points on
off-surface queries; they are what makes searching expensive, so probing
them with a best-response search exhibits lower bounds on query counts.

Every adversary keeps a candidate set, concedes found only when the query
is its last candidate, and exposes ``key()``/``clone()`` so a best-response
search can branch over its states.  All surface membership arithmetic is
exact integer math; a float floor here would silently corrupt the
constructions.
"""

from __future__ import annotations

import itertools
from typing import Protocol

from .core import (
    CandidateSet,
    Corner,
    FOUND,
    GameStateError,
    GridShape,
    Point,
    Reply,
    apply_reply,
    honest_replies,
    valid_corner_replies,
)

__all__ = [
    "Adversary",
    "ADVERSARY_NAMES",
    "CubeAdversary",
    "DiagonalAdversary",
    "GreedyAdversary",
    "HonestAdversary",
    "Plane3DAdversary",
    "cube_height",
    "cube_points",
    "cube_response_floor",
    "diagonal_points",
    "diagonal_response_floor",
    "diagonal_run_lengths",
    "diagonal_y",
    "make_adversary",
    "plane3d_height",
    "plane3d_points",
]

ADVERSARY_NAMES = ("greedy", "diagonal", "plane3d", "cube", "optimal", "honest")


class Adversary(Protocol):
    """Answer-side policy protocol."""

    name: str
    shape: GridShape

    def reply(self, query: Point) -> Reply: ...

    def key(self) -> bytes: ...

    def clone(self) -> "Adversary": ...

    def metadata(self) -> dict | None: ...


def diagonal_y(m: int, n: int, x: int) -> int:
    """Height of the staircase diagonal above column x on an m x n grid."""
    if m < 2:
        raise ValueError(f"the diagonal needs width at least 2, got {m}")
    return (n - 1) * (m - 1 - x) // (m - 1)

def diagonal_points(m: int, n: int) -> tuple[Point, ...]:
    """The staircase diagonal, one point per column, left to right."""
    return tuple((x, diagonal_y(m, n, x)) for x in range(m))


def plane3d_height(n1: int, n2: int, n3: int, x1: int, x3: int) -> int:
    """Height of the sloped plane over (x1, x3) on an n1 x n2 x n3 grid."""
    if not n1 >= n2 >= n3 >= 2:
        raise ValueError(f"extents must satisfy n1 >= n2 >= n3 >= 2, got {(n1, n2, n3)}")
    denom = 2 * (n1 - 1) * (n3 - 1)
    return (n2 - 1) * (denom - x1 * (n3 - 1) - x3 * (n1 - 1)) // denom

def plane3d_points(n1: int, n2: int, n3: int) -> tuple[Point, ...]:
    """The sloped plane, one point per (x1, x3) pair, lexicographic."""
    return tuple(
        (x1, plane3d_height(n1, n2, n3, x1, x3), x3)
        for x1 in range(n1)
        for x3 in range(n3)
    )


def cube_height(n: int, d: int, prefix: tuple[int, ...]) -> int:
    """Last coordinate of the cube hyperplane over a (d-1)-long prefix."""
    if d < 3:
        raise ValueError(f"the cube hyperplane needs at least 3 axes, got {d}")
    if len(prefix) != d - 1:
        raise ValueError(f"prefix must have {d - 1} coordinates, got {prefix}")
    return ((n - 1) * (d - 1) - sum(prefix)) // (d - 1)

def cube_points(n: int, d: int) -> tuple[Point, ...]:
    """The cube hyperplane, one point per prefix; n^(d-1) points total."""
    return tuple(
        (*prefix, cube_height(n, d, prefix))
        for prefix in itertools.product(range(n), repeat=d - 1)
    )


def diagonal_run_lengths(m: int, n: int) -> tuple[int, ...]:
    """Lengths of the diagonal's maximal constant-height runs, left to right."""
    lengths: list[int] = []
    previous = -1
    for _, y in diagonal_points(m, n):
        if y == previous:
            lengths[-1] += 1
        else:
            lengths.append(1)
            previous = y
    return tuple(lengths)


def diagonal_response_floor(m: int, n: int) -> int:
    """Queries any searcher needs to beat the diagonal answerer.

    Replies never remove candidates outside the queried constant-height
    run, and keep-more leaves at least half of it, so a run of length L
    costs at least L.bit_length() queries to clear.
    """
    return sum(length.bit_length() for length in diagonal_run_lengths(m, n))


def cube_response_floor(n: int, d: int) -> int:
    """Queries any searcher needs to beat the cube-hyperplane answerer.

    Any corner reply removes at most the largest down-set or up-set of a
    single surface point within the surface; the found reply claims the
    last survivor.
    """
    surface = cube_points(n, d)
    biggest = 1
    for q in surface:
        below = sum(all(u[i] <= q[i] for i in range(d)) for u in surface)
        above = sum(all(u[i] >= q[i] for i in range(d)) for u in surface)
        biggest = max(biggest, below, above)
    return -(-(len(surface) - 1) // biggest) + 1


class HonestAdversary:
    """Truthful answers for a fixed target, greedily unhelpful among them."""

    name = "honest"

    def __init__(self, shape: GridShape, target: Point):
        shape.index(target)
        self.shape = shape
        self.target = target
        self.candidates = CandidateSet.full(shape)

    def reply(self, query: Point) -> Reply:
        if query == self.target:
            self.candidates = CandidateSet.of(self.shape, [self.target])
            return FOUND
        best: Reply | None = None
        best_kept = -1
        for candidate_reply in honest_replies(self.target, query):
            corner = candidate_reply.corner
            assert corner is not None
            kept = len(apply_reply(self.candidates, query, corner))
            if kept > best_kept:
                best, best_kept = candidate_reply, kept
        assert best is not None and best.corner is not None
        self.candidates = apply_reply(self.candidates, query, best.corner)
        return best

    def key(self) -> bytes:
        return f"ho|{self.target}|{self.candidates.bits:x}".encode()

    def clone(self) -> "HonestAdversary":
        fork = HonestAdversary.__new__(HonestAdversary)
        fork.shape = self.shape
        fork.target = self.target
        fork.candidates = self.candidates
        return fork

    def metadata(self) -> dict | None:
        return None


class GreedyAdversary:
    """Commits to nothing; always keeps the largest candidate set alive."""

    name = "greedy"

    def __init__(self, shape: GridShape):
        self.shape = shape
        self.candidates = CandidateSet.full(shape)

    def reply(self, query: Point) -> Reply:
        rank = self.shape.index(query)
        if self.candidates.bits == 1 << rank:
            return FOUND
        best: Corner | None = None
        best_kept = -1
        for corner in valid_corner_replies(self.candidates, query):
            kept = len(apply_reply(self.candidates, query, corner))
            if kept > best_kept:
                best, best_kept = corner, kept
        if best is None:
            raise GameStateError(f"no legal corner at {query}")  # unreachable
        self.candidates = apply_reply(self.candidates, query, best)
        return Reply(best)

    def key(self) -> bytes:
        return f"gr|{self.candidates.bits:x}".encode()

    def clone(self) -> "GreedyAdversary":
        fork = GreedyAdversary.__new__(GreedyAdversary)
        fork.shape = self.shape
        fork.candidates = self.candidates
        return fork

    def metadata(self) -> dict | None:
        return None


def _surface_reply(
    adversary, query: Point, prefer: Corner | None
) -> Reply:
    """Shared surface-policy endgame: apply a corner, never go empty.

    ``prefer`` is the corner the construction mandates, or None for
    keep-more between the two extremes.  When the mandated corner would
    wipe out every candidate, the opposite extreme keeps at least one: a
    candidate u != query survives the all-ones corner unless u >= query
    everywhere and survives all-zeros unless u <= query everywhere, and it
    cannot be on both sides at once.
    """
    shape = adversary.shape
    candidates = adversary.candidates
    rank = shape.index(query)
    if candidates.bits == 1 << rank:
        adversary.candidates = CandidateSet.of(shape, [query])
        return FOUND
    zeros: Corner = (0,) * shape.ndim
    ones: Corner = (1,) * shape.ndim
    after_zeros = apply_reply(candidates, query, zeros)
    after_ones = apply_reply(candidates, query, ones)
    if prefer == zeros:
        corner, after = (zeros, after_zeros) if after_zeros.bits else (ones, after_ones)
    elif prefer == ones:
        corner, after = (ones, after_ones) if after_ones.bits else (zeros, after_zeros)
    else:
        # keep-more, ties to all-zeros
        if len(after_zeros) >= len(after_ones):
            corner, after = zeros, after_zeros
        else:
            corner, after = ones, after_ones
    if not after.bits:
        raise GameStateError(f"surface emptied by {corner} at {query}")  # unreachable
    adversary.candidates = after
    return Reply(corner)


class DiagonalAdversary:
    """Hides the target on the 2D staircase diagonal.

    Queries strictly below the diagonal get the all-zeros corner and
    queries strictly above get all-ones, neither of which removes a single
    diagonal point.  On-diagonal queries get whichever extreme keeps more
    candidates (ties to all-zeros).
    """

    name = "diagonal"

    def __init__(self, shape: GridShape):
        if shape.ndim != 2:
            raise ValueError(f"the diagonal lives on two axes, got {shape.dims}")
        m, n = shape.dims
        self.shape = shape
        self.candidates = CandidateSet.of(shape, diagonal_points(m, n))

    def reply(self, query: Point) -> Reply:
        x, y = query
        on_surface = diagonal_y(*self.shape.dims, x)
        if y < on_surface:
            prefer: Corner | None = (0, 0)
        elif y > on_surface:
            prefer = (1, 1)
        else:
            prefer = None
        return _surface_reply(self, query, prefer)

    def key(self) -> bytes:
        return f"dg|{self.candidates.bits:x}".encode()

    def clone(self) -> "DiagonalAdversary":
        fork = DiagonalAdversary.__new__(DiagonalAdversary)
        fork.shape = self.shape
        fork.candidates = self.candidates
        return fork

    def metadata(self) -> dict | None:
        return {"kind": "diagonal", "surface": diagonal_points(*self.shape.dims)}


class Plane3DAdversary:
    """Hides the target on the sloped 3D plane; extents sorted, all >= 2."""

    name = "plane3d"

    def __init__(self, shape: GridShape):
        if shape.ndim != 3:
            raise ValueError(f"the plane lives on three axes, got {shape.dims}")
        n1, n2, n3 = shape.dims
        self.shape = shape
        self.candidates = CandidateSet.of(shape, plane3d_points(n1, n2, n3))

    def reply(self, query: Point) -> Reply:
        x1, x2, x3 = query
        n1, n2, n3 = self.shape.dims
        on_surface = plane3d_height(n1, n2, n3, x1, x3)
        if x2 < on_surface:
            prefer: Corner | None = (0, 0, 0)
        elif x2 > on_surface:
            prefer = (1, 1, 1)
        else:
            prefer = None
        return _surface_reply(self, query, prefer)

    def key(self) -> bytes:
        return f"pl|{self.candidates.bits:x}".encode()

    def clone(self) -> "Plane3DAdversary":
        fork = Plane3DAdversary.__new__(Plane3DAdversary)
        fork.shape = self.shape
        fork.candidates = self.candidates
        return fork

    def metadata(self) -> dict | None:
        return {"kind": "plane3d", "surface": plane3d_points(*self.shape.dims)}


class CubeAdversary:
    """Hides the target on the cube hyperplane; replies by coordinate-sum residue.

    Off-surface queries get the extreme corner pointing back at the
    surface.  An on-surface query with coordinate sum s is answered by the
    residue rule on l = s mod (d-1): all-ones when l = 0 or 2l > d-1,
    all-zeros when 0 < 2l <= d-1.  The rule is not self-preserving on
    every shape (a cornered state can arise where it would empty the
    candidate set), so the shared endgame falls back to the opposite
    extreme corner in exactly that case.
    """

    name = "cube"

    def __init__(self, shape: GridShape):
        if shape.ndim < 3 or len(set(shape.dims)) != 1:
            raise ValueError(f"need a cube with at least 3 axes, got {shape.dims}")
        self.shape = shape
        self.candidates = CandidateSet.of(
            shape, cube_points(shape.dims[0], shape.ndim)
        )

    def reply(self, query: Point) -> Reply:
        d = self.shape.ndim
        on_surface = cube_height(self.shape.dims[0], d, query[:-1])
        if query[-1] < on_surface:
            prefer: Corner = (0,) * d
        elif query[-1] > on_surface:
            prefer = (1,) * d
        else:
            residue = sum(query) % (d - 1)
            if residue == 0 or 2 * residue > d - 1:
                prefer = (1,) * d
            else:
                prefer = (0,) * d
        return _surface_reply(self, query, prefer)

    def key(self) -> bytes:
        return f"cb|{self.candidates.bits:x}".encode()

    def clone(self) -> "CubeAdversary":
        fork = CubeAdversary.__new__(CubeAdversary)
        fork.shape = self.shape
        fork.candidates = self.candidates
        return fork

    def metadata(self) -> dict | None:
        return {
            "kind": "cube",
            "surface": cube_points(self.shape.dims[0], self.shape.ndim),
        }


def make_adversary(name: str, shape: GridShape, target: Point | None = None) -> Adversary:
    """Build an adversary by name; 'honest' needs a target, 'optimal' a solve."""
    if name == "honest":
        if target is None:
            raise ValueError("the honest adversary needs a target")
        return HonestAdversary(shape, target)
    if target is not None:
        raise ValueError(f"only the honest adversary takes a target, not {name!r}")
    if name == "greedy":
        return GreedyAdversary(shape)
    if name == "diagonal":
        return DiagonalAdversary(shape)
    if name == "plane3d":
        return Plane3DAdversary(shape)
    if name == "cube":
        return CubeAdversary(shape)
    if name == "optimal":
        from .solver import extract_optimal_adversary  # deferred: heavy import

        return extract_optimal_adversary(shape)
    raise ValueError(f"unknown adversary {name!r}; choose from {ADVERSARY_NAMES}")
