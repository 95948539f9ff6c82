from __future__ import annotations

import pickle

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mdsforge.errors import DivisionByZero, FieldTooLarge, NonPrimeCharacteristic
from mdsforge.finite_field import build_field, field_for_q, prime_power, smallest_irreducible

Q_VALUES = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27]


@st.composite
def field_and_elements(draw, count=3):
    f = field_for_q(draw(st.sampled_from(Q_VALUES)))
    return f, [draw(st.integers(0, f.q - 1)) for _ in range(count)]


@settings(max_examples=300, deadline=None)
@given(field_and_elements())
def test_ring_axioms(case):
    f, (a, b, c) = case
    assert f.add(a, b) == f.add(b, a)
    assert f.mul(a, b) == f.mul(b, a)
    assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
    assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    assert f.add(a, f.neg(a)) == 0
    assert f.sub(f.add(a, b), b) == a


@settings(max_examples=200, deadline=None)
@given(field_and_elements(count=1))
def test_inverses_and_fermat(case):
    f, (a,) = case
    if a:
        assert f.mul(a, f.inv(a)) == 1
        assert f.pow(a, f.q - 1) == 1
    assert f.pow(a, f.q) == a


def test_tables_are_latin(field):
    add, mul = field.add_table, field.mul_table
    for row in add:
        assert sorted(row.tolist()) == list(range(field.q))
    for row in mul[1:, 1:]:
        assert sorted(row.tolist()) == list(range(1, field.q))
    assert not add.flags.writeable


def test_multiplicative_group_is_cyclic(field):
    orders = set()
    for a in range(1, field.q):
        e, x = 1, a
        while x != 1:
            x = field.mul(x, a)
            e += 1
        orders.add(e)
    assert field.q - 1 in orders


def test_known_products():
    f4 = build_field(2, 2)
    assert f4.mul(2, 2) == 3 and f4.inv(2) == 3
    assert build_field(5).inv(2) == 3
    assert build_field(3).div(1, 2) == 2


def test_moduli_are_smallest_irreducibles():
    assert smallest_irreducible(2, 2) == [1, 1, 1]
    assert smallest_irreducible(3, 2) == [1, 0, 1]
    assert smallest_irreducible(2, 3) == [1, 1, 0, 1]
    assert field_for_q(9).to_json() == {"p": 3, "h": 2, "modulus": [1, 0, 1]}


def test_prime_power():
    assert prime_power(8) == (2, 3)
    assert prime_power(25) == (5, 2)
    with pytest.raises(ValueError):
        prime_power(6)


def test_errors():
    with pytest.raises(NonPrimeCharacteristic):
        build_field(6)
    with pytest.raises(FieldTooLarge):
        build_field(2, 10)
    f = build_field(7)
    with pytest.raises(DivisionByZero):
        f.inv(0)
    with pytest.raises(ZeroDivisionError):
        f.div(3, 0)


def test_cached_and_picklable():
    assert build_field(3, 2) is field_for_q(9)
    f = pickle.loads(pickle.dumps(field_for_q(8)))
    assert np.array_equal(f.mul_table, field_for_q(8).mul_table)


def test_dot():
    f = build_field(3)
    assert f.dot((1, 2, 0), (1, 1, 1)) == 0
