"""Adaptive search on integer grids with one-sided, possibly lying replies.

The package models a query game on a finite d-dimensional grid: each probe
of a point is answered either with "found" or with a corner direction that
excludes an axis-aligned box, at least one coordinate claim of which is
true.  Modules split along the natural seams: game state (`core`),
closed-form query bounds (`bounds`), searcher strategies (`strategies`),
answerer policies (`adversaries`), exact game solving (`solver`), and
match/worst-case evaluation (`evaluator`).  `cli` exposes the lot as a
command-line tool.
"""

from gridseek.bounds import (
    BoundsReport,
    bounds_report,
    budget_d,
    ceil_lower,
    lemma_upper_2d,
    lower_2d,
    lower_3d,
    lower_cube,
    padded_height,
    per_segment_lower,
    upper_2d,
    within_upper,
)
from gridseek.core import (
    FOUND,
    Box,
    CandidateSet,
    DimensionMismatchError,
    GameStateError,
    GridShape,
    Reply,
    apply_reply,
    excluded_box,
    grid_shape,
    honest_replies,
    is_compatible,
    valid_corner_replies,
)

__all__ = [
    "FOUND",
    "Box",
    "BoundsReport",
    "CandidateSet",
    "DimensionMismatchError",
    "GameStateError",
    "GridShape",
    "Reply",
    "apply_reply",
    "bounds_report",
    "budget_d",
    "ceil_lower",
    "excluded_box",
    "grid_shape",
    "honest_replies",
    "is_compatible",
    "lemma_upper_2d",
    "lower_2d",
    "lower_3d",
    "lower_cube",
    "padded_height",
    "per_segment_lower",
    "upper_2d",
    "valid_corner_replies",
    "within_upper",
]

__version__ = "0.1.0"
