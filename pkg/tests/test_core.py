"""Game-primitive tests: shapes, replies, exclusion boxes, candidate sets."""

import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridseek.core import (
    FOUND,
    Box,
    CandidateSet,
    DimensionMismatchError,
    GameStateError,
    Reply,
    apply_reply,
    excluded_box,
    grid_shape,
    honest_replies,
    is_compatible,
    valid_corner_replies,
)

SHAPE_POOL = [(5,), (8,), (3, 3), (4, 2), (2, 5), (2, 2, 2), (3, 2, 2), (2, 3, 2)]


@st.composite
def shape_query_corner(draw):
    dims = draw(st.sampled_from(SHAPE_POOL))
    shape = grid_shape(*dims)
    query = tuple(draw(st.integers(0, n - 1)) for n in dims)
    corner = tuple(draw(st.integers(0, 1)) for _ in dims)
    bits = draw(st.integers(1, (1 << shape.ncells) - 1))
    return shape, query, corner, bits


def test_grid_shape_basics():
    shape = grid_shape(3, 4, 2)
    assert shape.dims == (3, 4, 2)
    assert shape.ndim == 3
    assert shape.ncells == 24
    seen = set()
    for rank in range(shape.ncells):
        point = shape.point_at(rank)
        assert shape.index(point) == rank
        seen.add(point)
    assert seen == set(shape.points())
    assert len(seen) == 24


def test_grid_shape_rejects_bad_extents():
    with pytest.raises(ValueError):
        grid_shape()
    with pytest.raises(ValueError):
        grid_shape(0)
    with pytest.raises(ValueError):
        grid_shape(3, -1)


def test_index_validates_points():
    shape = grid_shape(3, 2)
    with pytest.raises(DimensionMismatchError):
        shape.index((1,))
    with pytest.raises(ValueError):
        shape.index((3, 0))
    with pytest.raises(ValueError):
        shape.index((0, -1))


def test_corners_are_lexicographic():
    assert list(grid_shape(2, 2).corners()) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert list(grid_shape(5).corners()) == [(0,), (1,)]


def test_reply_found_flag():
    assert FOUND.is_found and FOUND.corner is None
    reply = Reply((0, 1))
    assert not reply.is_found and reply.corner == (0, 1)


def test_excluded_box_always_contains_query():
    for dims in ((4,), (3, 3), (2, 2, 2)):
        shape = grid_shape(*dims)
        for q in shape.points():
            for corner in shape.corners():
                assert q in excluded_box(shape, q, corner)


def test_duality_small_exhaustive():
    # membership in the excluded box is exactly incompatibility
    for dims in ((5,), (3, 3), (2, 2, 2)):
        shape = grid_shape(*dims)
        for q in shape.points():
            for corner in shape.corners():
                box = excluded_box(shape, q, corner)
                for u in shape.points():
                    assert (u in box) == (not is_compatible(u, q, corner))


def test_is_compatible_claim_semantics():
    # corner bit 1 claims target strictly below the query on that axis
    q = (2, 1)
    assert is_compatible((0, 1), q, (1, 0))
    assert not is_compatible((2, 1), q, (1, 0))
    assert is_compatible((2, 2), q, (0, 0))
    assert not is_compatible((1, 0), q, (0, 0))


def test_honest_replies_found_and_corners():
    shape = grid_shape(3, 3)
    assert honest_replies((1, 1), (1, 1)) == [FOUND]
    replies = honest_replies((0, 2), (1, 1))
    assert all(not r.is_found for r in replies)
    corners = [r.corner for r in replies]
    assert corners == sorted(corners)
    for corner in shape.corners():
        assert (corner in corners) == is_compatible((0, 2), (1, 1), corner)
    # a wrong guess always leaves the target an honest corner
    for target in shape.points():
        for q in shape.points():
            if q != target:
                assert honest_replies(target, q)


@settings(max_examples=300, deadline=None)
@given(shape_query_corner())
def test_apply_reply_matches_pointwise_filter(case):
    shape, query, corner, bits = case
    before = CandidateSet(shape, bits)
    after = apply_reply(before, query, corner)
    survivors = {u for u in before if is_compatible(u, query, corner)}
    assert set(after) == survivors


def test_apply_reply_can_empty_the_set():
    shape = grid_shape(2, 1)
    lone = CandidateSet.of(shape, [(1, 0)])
    emptied = apply_reply(lone, (1, 0), (1, 0))
    assert emptied.bits == 0
    assert len(emptied) == 0


def test_candidate_set_roundtrip():
    shape = grid_shape(4, 3)
    chosen = [(0, 0), (2, 1), (3, 2)]
    cs = CandidateSet.of(shape, chosen)
    assert len(cs) == 3
    assert sorted(cs) == sorted(chosen)
    assert (2, 1) in cs and (1, 1) not in cs
    assert CandidateSet.full(shape).bits == (1 << 12) - 1
    assert CandidateSet.of(shape, [(2, 1)]).sole_point() == (2, 1)


def test_escape_property_exhaustive():
    # no legal corner exists exactly when the set is the queried singleton
    shape = grid_shape(3, 3)
    for bits in range(1, 1 << 6):  # subsets of the first six cells
        cs = CandidateSet(shape, bits)
        for q in shape.points():
            valid = valid_corner_replies(cs, q)
            forced = cs.bits == 1 << shape.index(q)
            assert (len(valid) == 0) == forced
            for corner in valid:
                assert apply_reply(cs, q, corner).bits != 0


def test_valid_corner_replies_rejects_empty_set():
    shape = grid_shape(2, 2)
    with pytest.raises(GameStateError):
        valid_corner_replies(CandidateSet(shape, 0), (0, 0))


def test_box_membership_and_emptiness():
    box = Box(((1, 2), (0, 0)))
    assert (1, 0) in box and (2, 0) in box
    assert (0, 0) not in box and (1, 1) not in box
    assert not box.is_empty
    assert Box(((2, 1), (0, 0))).is_empty
