from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from mdsforge.errors import CenterOnHyperplane, DimensionMismatch, SpaceTooLarge, WrongRank
from mdsforge.finite_field import build_field, field_for_q
from mdsforge.geometry import (Flat, ProjectiveSpace, enumerate_points, incidence, meet_line_hyperplane,
                               normalize, null_space, pencil_through, point_count, project_through,
                               rref, span_points, span_rank)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_point_counts(field, k):
    if field.q ** k > 800:
        pytest.skip("large")
    pts = enumerate_points(k, field)
    assert len(pts) == point_count(k, field.q) == (field.q ** (k + 1) - 1) // (field.q - 1)
    assert pts == sorted(pts)
    assert all(p[next(i for i, x in enumerate(p) if x)] == 1 for p in pts)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_plane_incidence_counts(q):
    f = field_for_q(q)
    space = ProjectiveSpace(2, f)
    for h in space.hyperplanes[:5]:
        assert len(space.points_on(h)) == q + 1
    for p in space.points[:5]:
        assert len(space.hyperplanes_through(p)) == q + 1


def test_incidence_and_dimension_check():
    f = build_field(3)
    assert incidence((1, 1, 1), (1, 1, 1), f)
    with pytest.raises(DimensionMismatch):
        incidence((1, 0), (1, 0, 0), f)


def test_space_limits():
    with pytest.raises(SpaceTooLarge):
        enumerate_points(6, build_field(2))


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([2, 3, 4, 5, 7]), st.data())
def test_null_space_annihilates(q, data):
    f = field_for_q(q)
    rows = data.draw(st.lists(st.lists(st.integers(0, q - 1), min_size=4, max_size=4), min_size=1, max_size=3))
    ns = null_space(rows, f, 4)
    assert len(ns) + span_rank(rows, f) == 4 if any(any(r) for r in rows) else len(ns) == 4
    for v in ns:
        for r in rows:
            assert f.dot(r, v) == 0


def test_rref_and_span_points():
    f = build_field(3)
    assert rref([(1, 1, 0), (2, 2, 0)], f) == [(1, 1, 0)]
    line = span_points([(1, 0, 0), (0, 1, 0)], f)
    assert len(line) == 4 and all(p[2] == 0 for p in line)


def test_flats_and_pencils():
    f = build_field(3)
    line = Flat.from_equations([(0, 0, 1, 0), (0, 0, 0, 1)], f, 3)
    assert line.rank == 2 and len(line.points()) == 4
    planes = pencil_through(line, 3)
    assert len(planes) == 4
    assert all(all(f.dot(h, p) == 0 for p in line.points()) for h in planes)
    with pytest.raises(WrongRank):
        pencil_through(Flat.spanned_by([(1, 0, 0, 0)], f), 3)


def test_meet_lies_on_both():
    f = build_field(5)
    for p, r in itertools.combinations(enumerate_points(2, f)[:8], 2):
        h = (1, 2, 3)
        m = meet_line_hyperplane(p, r, h, f)
        assert f.dot(m, h) == 0
        assert span_rank([p, r, m], f) <= 2 or m in (normalize(p, f), normalize(r, f))


@pytest.mark.parametrize("q", [2, 3, 4])
def test_projection_is_bijection(q):
    f = field_for_q(q)
    source, target = (0, 0, 0, 1), (0, 0, 1, 0)
    center = (1, 0, 1, 1)
    m = project_through(center, source, target, f)
    assert len(set(m.values())) == len(m) == point_count(2, q)
    for X, Y in m.items():
        assert f.dot(Y, target) == 0 and span_rank([center, X, Y], f) <= 2
    with pytest.raises(CenterOnHyperplane):
        project_through((1, 0, 0, 0), source, target, f)


def test_affine_points():
    f = build_field(3)
    aff = ProjectiveSpace(2, f).affine_points()
    assert len(aff) == 9 and all(p[-1] == 1 for p in aff)
