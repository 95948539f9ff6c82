from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mdsforge.arcs import DualArc, normal_rational_curve
from mdsforge.brs import (BrsScaffold, agreement_geometry_check, brs_encode, build_scaffold,
                          enumerate_transversal_sets, hyperplane_trace, is_affine_hyperplane,
                          is_transversal, kfold_points, trace_extends, verify_identity_theorem)
from mdsforge.codes import grs_generator, random_mds_generator
from mdsforge.errors import NoFreePoint, NotAffine, RankDeficient
from mdsforge.finite_field import build_field, field_for_q

G3 = ((1, 1, 1), (0, 1, 2))


def test_small_scaffold():
    f = build_field(3)
    sc = build_scaffold(G3, f)
    assert sc.k == 2 and sc.n == 3
    # the normalised generator has a row of ones in the free-point row
    assert all(x == 1 for x in sc.normalized[1])
    assert verify_identity_theorem(G3, f)
    alpha = (1, 1)
    assert brs_encode(sc, alpha + (1,)) == sc.linear_code().encode(alpha)


def test_no_free_point():
    # the four columns cover every point of PG(1, 3)
    with pytest.raises(NoFreePoint):
        build_scaffold(((1, 1, 1, 0), (0, 1, 2, 1)), build_field(3))


def test_rank_deficient():
    with pytest.raises(RankDeficient):
        build_scaffold(((1, 1, 1), (2, 2, 2)), build_field(3))


def test_not_affine():
    sc = build_scaffold(G3, build_field(3))
    with pytest.raises(NotAffine):
        brs_encode(sc, (1, 1, 0))


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8, 9])
@pytest.mark.parametrize("k", [2, 3])
def test_identity_on_grs(q, k):
    f = field_for_q(q)
    top = q if k == 2 else q + 1
    for n in range(k, top + 1):
        assert verify_identity_theorem(grs_generator(f, k, n), f)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([3, 4, 5, 7, 8, 9]), st.integers(2, 3), st.integers(0, 2 ** 32 - 1))
def test_identity_on_random(q, k, seed):
    f = field_for_q(q)
    rng = np.random.default_rng(seed)
    n = int(rng.integers(k, q + k - 1))
    assert verify_identity_theorem(random_mds_generator(f, k, n, rng), f)


def test_tampered_scaffold_is_caught():
    f = build_field(5)
    G = grs_generator(f, 3, 5)
    sc = build_scaffold(G, f)
    first = sc.pencils[0]
    shifted = tuple((h, first[(i + 1) % len(first)][1]) for i, (h, _) in enumerate(first))
    bad = BrsScaffold(**{**sc.__dict__, "pencils": (shifted,) + sc.pencils[1:]})
    assert not verify_identity_theorem(G, f, scaffold=bad)


def test_agreement_geometry():
    f = build_field(5)
    sc = build_scaffold(grs_generator(f, 3, 5), f)
    pts = [tuple(a) + (1,) for a in itertools.product(range(f.q), repeat=3)][:40]
    for P, Q in itertools.combinations(pts, 2):
        assert 0 <= agreement_geometry_check(sc, P, Q) <= 2


def test_transversal_dual_triangle():
    f = build_field(3)
    dual = DualArc.make([(1, 0, 0), (0, 1, 0), (0, 0, 1)], 2, f)
    B = kfold_points(dual)
    assert B == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}
    res = enumerate_transversal_sets(dual, 9)
    assert len(res.sets) == 12
    for S in res.sets:
        assert is_transversal(S, dual, B)
        H, trace = hyperplane_trace(S, f)
        assert is_affine_hyperplane(S, f) and trace_extends(dual, trace)


def test_transversal_dual_conic_is_empty():
    f = build_field(3)
    dual = normal_rational_curve(2, f).dualize()
    assert enumerate_transversal_sets(dual, 9).sets == []


def test_non_plane_has_no_trace():
    f = build_field(3)
    S = [(0, 0, 0, 1), (1, 0, 0, 1), (0, 1, 0, 1), (0, 0, 1, 1)]
    assert hyperplane_trace(S, f) is None
