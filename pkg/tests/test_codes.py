from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import grs
from mdsforge.codes import (Code, EquivalenceMove, LinearCode, agreement_histogram, apply_equivalence,
                            code_from_json, code_to_json, combinatorial_bound, count_fixed_positions,
                            grs_generator, is_linear, is_mds, is_mds_generator, max_agreement,
                            min_distance, puncture, random_mds_generator)
from mdsforge.errors import CardinalityMismatch, DimensionUnderflow, MalformedMove, TooManyPositions
from mdsforge.finite_field import build_field, field_for_q

PARITY = Code.from_words(2, 2, [[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]])


def brute_min_distance(words):
    return min(sum(a != b for a, b in zip(u, v)) for u, v in itertools.combinations(words.tolist(), 2))


def test_parity_code():
    assert is_mds(PARITY) and max_agreement(PARITY) == 1
    assert agreement_histogram(PARITY) == {1: 6}
    assert min_distance(PARITY) == 2


def test_cardinality():
    with pytest.raises(CardinalityMismatch):
        is_mds(Code.from_words(2, 2, [[0, 0], [1, 1]]))


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_grs_is_mds_at_every_length(q, k):
    f = field_for_q(q)
    for n in range(k, q + 2):
        G = grs_generator(f, k, n)
        assert is_mds_generator(G, f)
        code = LinearCode(f, G).code()
        assert is_mds(code)
        if code.size <= 125:
            assert brute_min_distance(code.words) == n - k + 1 == min_distance(code)


def test_grs_columns():
    f = build_field(5)
    G = grs_generator(f, 3)
    cols = LinearCode(f, G).columns()
    assert cols[2] == (1, 2, 4) and cols[-1] == (0, 0, 1) and len(cols) == 6


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([3, 4, 5, 7, 8, 9]), st.integers(2, 3), st.integers(0, 2 ** 32 - 1))
def test_random_generators_are_mds(q, k, seed):
    f = field_for_q(q)
    rng = np.random.default_rng(seed)
    n = int(rng.integers(k, q + 2))
    G = random_mds_generator(f, k, n, rng)
    assert len(G) == k and len(G[0]) == n
    assert is_mds_generator(G, f)


@pytest.mark.parametrize("q,k,n", [(2, 2, 3), (3, 2, 4), (3, 3, 4), (4, 2, 5), (4, 3, 5), (5, 3, 6)])
def test_fixed_position_counts(q, k, n):
    code = grs(q, k, n).code()
    for t in range(k + 1):
        for pos in itertools.combinations(range(n), t):
            for sym in itertools.product(range(q), repeat=t):
                assert count_fixed_positions(code, pos, sym) == q ** (k - t)
    with pytest.raises(TooManyPositions):
        count_fixed_positions(code, range(k + 1), [0] * (k + 1))


def test_puncture():
    code = grs(3, 3, 4).code()
    p = puncture(code, 0, 1)
    assert p.k == 2 and p.n == 3 and is_mds(p)
    with pytest.raises(DimensionUnderflow):
        puncture(grs(3, 1, 2).code(), 0, 0)


def test_combinatorial_bound():
    assert combinatorial_bound(5, 1) is None
    assert combinatorial_bound(5, 2) == 6
    assert combinatorial_bound(4, 3) == 6
    assert combinatorial_bound(5, 3) == 6


def test_equivalence_moves_preserve_mds():
    code = grs(4, 2, 4).code()
    moves = [EquivalenceMove("column", (2, 0, 3, 1)),
             EquivalenceMove("symbol", (1, (1, 0, 3, 2))),
             EquivalenceMove("row", tuple(reversed(range(16))))]
    out = apply_equivalence(code, moves)
    assert is_mds(out)
    assert agreement_histogram(out) == agreement_histogram(code)
    with pytest.raises(MalformedMove):
        apply_equivalence(code, [EquivalenceMove("symbol", (0, (0, 0, 1, 2)))])


def test_is_linear():
    f = build_field(3)
    code = grs(3, 2, 3).code()
    assert is_linear(code, f)
    moved = apply_equivalence(code, [EquivalenceMove("symbol", (0, (1, 2, 0)))])
    assert not is_linear(moved, f)


def test_json_round_trip(tmp_path):
    lin = grs(4, 3, 5)
    code = lin.code()
    doc = code_to_json(code, lin)
    back, back_lin = code_from_json(doc)
    assert back == code and back_lin.generator == lin.generator
    doc = code_to_json(PARITY)
    back, none = code_from_json(doc)
    assert none is None and back.word_set() == PARITY.word_set()
