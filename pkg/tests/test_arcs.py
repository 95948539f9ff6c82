from __future__ import annotations

import pytest

from mdsforge.arcs import (Arc, DualArc, ambient_traces, cut_out, extending_elements, is_arc,
                           is_complete, max_arc_search, normal_rational_curve, point_profile)
from mdsforge.errors import DimensionOutOfRange, DuplicatePoints, NotAMember
from mdsforge.finite_field import build_field, field_for_q

# largest plane arcs, computed once by the exhaustive search and frozen
M2 = {2: 4, 3: 4, 4: 6, 5: 6}


def test_is_arc_basic():
    f = build_field(3)
    assert is_arc([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)], 2, f)
    assert not is_arc([(1, 0, 0), (0, 1, 0), (1, 1, 0)], 2, f)
    with pytest.raises(DuplicatePoints):
        is_arc([(1, 0, 0), (2, 0, 0)], 2, f)


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8, 9])
def test_conic_is_q_plus_one_arc(q):
    arc = normal_rational_curve(2, field_for_q(q))
    assert arc.n == q + 1


@pytest.mark.parametrize("q,k", [(5, 3), (7, 3), (7, 4), (8, 3)])
def test_nrc_higher(q, k):
    arc = normal_rational_curve(k, field_for_q(q))
    assert arc.n == q + 1 and is_arc(arc.points, k, arc.field)


def test_nrc_range():
    with pytest.raises(DimensionOutOfRange):
        normal_rational_curve(3, build_field(3))


def test_conic_extension_even_vs_odd():
    # even q: the nucleus is the single extending point; odd q: conic is complete
    c4 = normal_rational_curve(2, build_field(2, 2))
    assert extending_elements(c4) == [(0, 1, 0)]
    assert is_complete(normal_rational_curve(2, build_field(5)))


@pytest.mark.parametrize("q", [3, 5, 7])
def test_dual_conic_profile(q):
    f = field_for_q(q)
    dual = normal_rational_curve(2, f).dualize()
    prof = point_profile(dual)
    n = q + 1
    # each line carries q - n + 2 = 1 tangent point and n - 1 = q two-fold points
    for h in dual.hyperplanes:
        assert len(prof.tangent_points(h)) == 1
        assert len(prof.secant_points(h)) == q
    assert len(prof.kfold_points()) == n * (n - 1) // 2


def test_cut_out():
    f = build_field(5)
    dual = normal_rational_curve(3, f).dualize()
    member = dual.hyperplanes[0]
    sub = cut_out(dual, member)
    assert sub.k == 2 and sub.n == dual.n - 1
    assert is_arc(sub.hyperplanes, 2, f)
    with pytest.raises(NotAMember):
        cut_out(dual, (1, 1, 1, 1) if (1, 1, 1, 1) not in dual.hyperplanes else (1, 2, 3, 4))
    assert ambient_traces(sub)


@pytest.mark.parametrize("q", sorted(M2))
def test_max_arc_table(q):
    f = field_for_q(q)
    r = max_arc_search(2, f)
    assert r.m == M2[q]
    assert is_arc(r.witness.points, 2, f) and r.witness.n == r.m
    assert r.hyperoval == (q % 2 == 0)


def test_max_arc_jobs_deterministic():
    f = field_for_q(4)
    a, b = max_arc_search(2, f), max_arc_search(2, f, jobs=2)
    assert a.m == b.m and a.witness == b.witness


def test_arc_json_and_dual():
    f = build_field(3)
    arc = Arc.make([(1, 0, 0), (0, 1, 0), (0, 0, 1)], 2, f)
    assert arc.to_json()["points"] == [[0, 0, 1], [0, 1, 0], [1, 0, 0]]
    assert isinstance(arc.dualize(), DualArc)
