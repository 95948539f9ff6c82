"""Exact arithmetic in GF(p^h) by full lookup tables.

Elements are plain ints in ``range(q)``. The int ``i`` stands for the
polynomial ``sum(c_j x^j)`` whose base-p digits are ``c_j``, so 0 and 1
are the additive and multiplicative identities.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .errors import DivisionByZero, FieldTooLarge, NonPrimeCharacteristic

MAX_ORDER = 128


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


def prime_power(q: int) -> tuple[int, int]:
    """Split ``q`` into ``(p, h)`` with ``q == p**h``; ValueError otherwise."""
    for p in range(2, q + 1):
        if q % p == 0:
            h = 0
            m = q
            while m % p == 0:
                m //= p
                h += 1
            if m != 1 or not is_prime(p):
                break
            return p, h
    raise ValueError(f"{q} is not a prime power")


# Polynomials over GF(p) are coefficient lists, lowest degree first.

def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = list(a)
    inv_lead = pow(m[-1], p - 2, p)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] * inv_lead % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    a = a[:dm] if dm > 0 else [0]
    return a


def _is_irreducible(m: list[int], p: int) -> bool:
    h = len(m) - 1
    if h == 1:
        return True
    for d in range(1, h):
        for low in itertools.product(range(p), repeat=d):
            divisor = list(low) + [1]
            if not any(_poly_mod(m, divisor, p)):
                return False
    return True


def smallest_irreducible(p: int, h: int) -> list[int]:
    """Monic irreducible of degree ``h`` minimising ``sum(c_i p^i)``."""
    for value in range(p**h):
        low = [(value // p**i) % p for i in range(h)]
        m = low + [1]
        if _is_irreducible(m, p):
            return m
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class Field:
    """The field GF(p^h); immutable once built.

    Scalar ops go through Python list tables; the ``*_table`` numpy arrays
    serve vectorised work on codes.
    """

    def __init__(self, p: int, h: int, modulus: list[int]):
        self.p = p
        self.h = h
        self.q = p**h
        self.modulus = tuple(modulus)
        q = self.q
        digits = [[(x // p**i) % p for i in range(h)] for x in range(q)]

        def encode(c):
            return sum(ci * p**i for i, ci in enumerate(c))

        add = [[encode([(a + b) % p for a, b in zip(digits[x], digits[y])])
                for y in range(q)] for x in range(q)]
        mul = [[0] * q for _ in range(q)]
        for x in range(q):
            for y in range(x, q):
                prod = [0] * (2 * h - 1)
                for i, a in enumerate(digits[x]):
                    if a:
                        for j, b in enumerate(digits[y]):
                            prod[i + j] = (prod[i + j] + a * b) % p
                r = encode(_poly_mod(prod, list(modulus), p)) if h > 1 else prod[0] % p
                mul[x][y] = mul[y][x] = r
        self._add = add
        self._mul = mul
        self._neg = [next(y for y in range(q) if add[x][y] == 0) for x in range(q)]
        self._inv = [0] + [next(y for y in range(1, q) if mul[x][y] == 1) for x in range(1, q)]
        self._sub = [[add[x][self._neg[y]] for y in range(q)] for x in range(q)]
        self.add_table = np.array(add, dtype=np.int64)
        self.mul_table = np.array(mul, dtype=np.int64)
        self.neg_table = np.array(self._neg, dtype=np.int64)
        self.inv_table = np.array(self._inv, dtype=np.int64)
        self.sub_table = np.array(self._sub, dtype=np.int64)
        for t in (self.add_table, self.mul_table, self.neg_table, self.inv_table, self.sub_table):
            t.flags.writeable = False

    def __repr__(self):
        return f"Field(GF({self.q}), modulus={list(self.modulus)})"

    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.h, self.modulus) == (
            other.p, other.h, other.modulus)

    def __hash__(self):
        return hash((self.p, self.h, self.modulus))

    def __reduce__(self):
        return (build_field, (self.p, self.h))

    @property
    def elements(self) -> range:
        return range(self.q)

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        return self._sub[a][b]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return self._inv[a]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise DivisionByZero(f"division of {a} by zero")
        return self._mul[a][self._inv[b]]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        result = 1
        base = a
        while e:
            if e & 1:
                result = self._mul[result][base]
            base = self._mul[base][base]
            e >>= 1
        return result

    def dot(self, u, v) -> int:
        acc = 0
        mul, add = self._mul, self._add
        for a, b in zip(u, v):
            if a and b:
                acc = add[acc][mul[a][b]]
        return acc

    def to_json(self) -> dict:
        return {"p": self.p, "h": self.h, "modulus": list(self.modulus)}


@lru_cache(maxsize=None)
def build_field(p: int, h: int = 1) -> Field:
    if not is_prime(p):
        raise NonPrimeCharacteristic(f"characteristic {p} is not prime")
    if h < 1:
        raise ValueError("extension degree must be positive")
    if p**h > MAX_ORDER:
        raise FieldTooLarge(f"GF({p}^{h}) exceeds the order cap {MAX_ORDER}")
    return Field(p, h, smallest_irreducible(p, h))


def field_for_q(q: int) -> Field:
    p, h = prime_power(q)
    return build_field(p, h)
