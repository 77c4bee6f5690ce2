"""Closed-form query-count bounds for comparison search on grids.

Lower bounds say no strategy can always finish faster; the constructive
budget says the strategies shipped in this package never run longer.  All
formulas take grid extents sorted largest-first, matching how the rest of
the package canonicalizes shapes.  Integer-valued formulas use exact
integer arithmetic throughout; real-valued ones return floats and callers
compare them to query counts through `ceil_lower` / `within_upper` so a
rounding error can never flip a verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import GridShape

__all__ = [
    "BoundsReport",
    "FLOAT_TOLERANCE",
    "bounds_report",
    "budget_d",
    "ceil_lower",
    "lemma_upper_2d",
    "lower_2d",
    "lower_3d",
    "lower_cube",
    "padded_height",
    "per_segment_lower",
    "upper_2d",
    "within_upper",
]

FLOAT_TOLERANCE = 1e-9


def ceil_lower(value: float) -> int:
    """Smallest integer query count consistent with a real lower bound."""
    return math.ceil(value - FLOAT_TOLERANCE)


def within_upper(count: float, bound: float) -> bool:
    """True when a query count does not exceed a real upper bound."""
    return count <= bound + FLOAT_TOLERANCE


def lower_2d(m: int, n: int) -> float:
    """Information lower bound for an m x n grid, m >= n >= 1.

    Returns n * log2(m / n).  Real-valued; ceil when comparing to counts.
    """
    _check_2d(m, n)
    return n * math.log2(m / n)


def per_segment_lower(m: int, n: int) -> int:
    """Segment-count lower bound n * (1 + floor(log2(m // n))), m >= n >= 1.

    The additive form of `lower_2d`: n independent sub-searches of at least
    1 + floor(log2(floor(m/n))) queries each.  Exact integer arithmetic.
    """
    _check_2d(m, n)
    # 1 + floor(log2 x) == x.bit_length() for x >= 1
    return n * (m // n).bit_length()


def upper_2d(m: int, n: int) -> float:
    """General two-dimensional upper bound 2n(log2(m/(n+1)) + 4), m >= n >= 1."""
    _check_2d(m, n)
    return 2 * n * (math.log2(m / (n + 1)) + 4)


def lemma_upper_2d(m: int, n: int) -> float:
    """Sharper two-dimensional upper bound for heights one below a power of two.

    Requires n = 2^k - 1 for some k >= 1; m >= 1 may be smaller than n.
    Returns n(log2((m+n)/(n+1)) + 3) - log2(n+1).
    """
    if m < 1:
        raise ValueError(f"width must be at least 1, got {m}")
    if n < 1 or n & (n + 1) != 0:
        raise ValueError(f"height must be one below a power of two, got {n}")
    return n * (math.log2((m + n) / (n + 1)) + 3) - math.log2(n + 1)


def lower_3d(n1: int, n2: int, n3: int) -> float:
    """Three-dimensional lower bound, extents sorted n1 >= n2 >= n3 >= 2.

    Returns (n2-1) * n3 * (log2((n1-1)/(n2-1)) + 1) / 2.  On a cube this
    collapses to n(n-1)/2.
    """
    if not n1 >= n2 >= n3 >= 2:
        raise ValueError(f"extents must satisfy n1 >= n2 >= n3 >= 2, got {(n1, n2, n3)}")
    return 0.5 * (n2 - 1) * n3 * (math.log2((n1 - 1) / (n2 - 1)) + 1)


def lower_cube(n: int, d: int) -> int:
    """Hypercube lower bound 2 * floor(n^(d-1) / (d-1)) for d >= 3, n >= 2."""
    if d < 3:
        raise ValueError(f"cube bound needs at least 3 axes, got {d}")
    if n < 2:
        raise ValueError(f"cube side must be at least 2, got {n}")
    return 2 * (n ** (d - 1) // (d - 1))


def padded_height(n: int) -> int:
    """Least integer of the form 2^k - 1 that is >= n (n >= 1)."""
    if n < 1:
        raise ValueError(f"height must be positive, got {n}")
    return n if n & (n + 1) == 0 else (1 << n.bit_length()) - 1


def budget_d(dims: tuple[int, ...]) -> float:
    """Query budget guaranteed by the shipped strategies, any dimension.

    dims must be sorted non-increasing.  One axis costs floor(log2 n) + 1.
    Two axes cost 2n'(log2((n1+n')/(n'+1)) + 3) with the height padded up
    to n', the least 2^k - 1 >= n2.  Each further axis multiplies the
    prefix budget by its extent: the strategy replays the prefix game once
    per slice.
    """
    if not dims:
        raise ValueError("need at least one axis")
    if any(n < 1 for n in dims):
        raise ValueError(f"axis sizes must be positive, got {dims}")
    if any(a < b for a, b in zip(dims, dims[1:])):
        raise ValueError(f"extents must be sorted non-increasing, got {dims}")
    if len(dims) == 1:
        return dims[0].bit_length()
    if len(dims) == 2:
        n1, n2 = dims
        padded = padded_height(n2)
        return 2 * padded * (math.log2((n1 + padded) / (padded + 1)) + 3)
    return dims[-1] * budget_d(dims[:-1])


@dataclass(frozen=True, slots=True)
class BoundsReport:
    """Every bound applicable to one shape; None marks an inapplicable one.

    Construction checks that no present lower bound exceeds a present
    upper bound.
    """

    shape: GridShape
    lower_2d: float | None
    upper_2d: float | None
    lemma_upper_2d: float | None
    lower_3d: float | None
    lower_cube: int | None
    budget_d: float | None

    def __post_init__(self) -> None:
        lowers = [v for v in (self.lower_2d, self.lower_3d, self.lower_cube) if v is not None]
        uppers = [v for v in (self.upper_2d, self.lemma_upper_2d, self.budget_d) if v is not None]
        for low in lowers:
            for high in uppers:
                if low > high + FLOAT_TOLERANCE:
                    raise ValueError(
                        f"inconsistent bounds on {self.shape.dims}: "
                        f"lower {low} exceeds upper {high}"
                    )

    def lower(self) -> float:
        """Strongest applicable lower bound, or 0.0 when none applies."""
        lowers = [v for v in (self.lower_2d, self.lower_3d, self.lower_cube) if v is not None]
        return max(lowers, default=0.0)


def bounds_report(shape: GridShape) -> BoundsReport:
    """Evaluate every bound whose preconditions hold on ``shape``."""
    dims = shape.dims
    d = len(dims)
    is_sorted = all(a >= b for a, b in zip(dims, dims[1:]))

    low2 = up2 = lem2 = low3 = None
    cube = None
    budget = None
    if d == 2 and dims[0] >= dims[1]:
        low2 = lower_2d(*dims)
        up2 = upper_2d(*dims)
    if d == 2 and dims[1] & (dims[1] + 1) == 0:
        lem2 = lemma_upper_2d(*dims)
    if d == 3 and dims[0] >= dims[1] >= dims[2] >= 2:
        low3 = lower_3d(*dims)
    if d >= 3 and len(set(dims)) == 1 and dims[0] >= 2:
        cube = lower_cube(dims[0], d)
    if is_sorted:
        budget = budget_d(dims)
    return BoundsReport(
        shape=shape,
        lower_2d=low2,
        upper_2d=up2,
        lemma_upper_2d=lem2,
        lower_3d=low3,
        lower_cube=cube,
        budget_d=budget,
    )


def _check_2d(m: int, n: int) -> None:
    if n < 1:
        raise ValueError(f"height must be at least 1, got {n}")
    if m < n:
        raise ValueError(f"width must be at least the height, got ({m}, {n})")
