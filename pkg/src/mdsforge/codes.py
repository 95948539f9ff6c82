"""MDS codes in matrix form and linear codes given by generator matrices."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import (CardinalityMismatch, DimensionUnderflow, MalformedMove,
                     TooManyPositions)
from .finite_field import Field, field_for_q
from .geometry import enumerate_points, rref, span_points, span_rank

SCHEMA_VERSION = "1"


@dataclass(frozen=True, eq=False)
class Code:
    """``q**k`` words of length ``n`` over the symbols ``0..q-1``.

    ``order`` names the row order in force: ``"lex"`` (sorted symbol
    sequences), ``"alpha"`` (message vectors of a linear code in
    lexicographic order) or ``"given"`` (whatever the caller supplied).
    """

    q: int
    k: int
    words: np.ndarray
    order: str = "lex"

    @classmethod
    def from_words(cls, q: int, k: int, words, order: str = "lex") -> "Code":
        arr = np.array(words, dtype=np.int64)
        if arr.ndim != 2:
            arr = arr.reshape(len(words), -1)
        if order == "lex" and len(arr):
            arr = arr[np.lexsort(arr.T[::-1])]
        arr.flags.writeable = False
        return cls(q, k, arr, order)

    @property
    def n(self) -> int:
        return self.words.shape[1]

    @property
    def size(self) -> int:
        return self.words.shape[0]

    def keys(self) -> np.ndarray:
        """Each word as a base-q integer."""
        weights = self.q ** np.arange(self.n - 1, -1, -1, dtype=np.int64)
        return self.words @ weights

    def word_set(self) -> set:
        return set(map(tuple, self.words.tolist()))

    def sorted(self) -> "Code":
        return Code.from_words(self.q, self.k, self.words, order="lex")

    def append_column(self, column) -> "Code":
        col = np.asarray(column, dtype=np.int64).reshape(-1, 1)
        return Code.from_words(self.q, self.k, np.hstack([self.words, col]), order=self.order)

    def __eq__(self, other):
        return (isinstance(other, Code) and (self.q, self.k, self.order) == (other.q, other.k, other.order)
                and self.words.shape == other.words.shape and bool((self.words == other.words).all()))

    def __hash__(self):
        return hash((self.q, self.k, self.words.tobytes()))


@dataclass(frozen=True)
class LinearCode:
    field: Field
    generator: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if span_rank(self.generator, self.field) != len(self.generator):
            raise ValueError("generator matrix does not have full row rank")

    @property
    def k(self) -> int:
        return len(self.generator)

    @property
    def n(self) -> int:
        return len(self.generator[0])

    def messages(self) -> np.ndarray:
        return np.array(list(itertools.product(range(self.field.q), repeat=self.k)), dtype=np.int64)

    def encode(self, alpha) -> tuple[int, ...]:
        f = self.field
        out = [0] * self.n
        for a, row in zip(alpha, self.generator):
            if a:
                out = [f.add(x, f.mul(a, g)) for x, g in zip(out, row)]
        return tuple(out)

    def code(self) -> Code:
        """Words ``alpha . G`` in lexicographic order of ``alpha``."""
        f = self.field
        msgs = self.messages()
        words = np.zeros((len(msgs), self.n), dtype=np.int64)
        g = np.array(self.generator, dtype=np.int64)
        for i in range(self.k):
            words = f.add_table[words, f.mul_table[msgs[:, i:i + 1], g[i]]]
        return Code.from_words(f.q, self.k, words, order="alpha")

    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(row[j] for row in self.generator) for j in range(self.n)]


def _validate(code: Code):
    if code.size != code.q ** code.k:
        raise CardinalityMismatch(f"{code.size} words, expected q^k = {code.q ** code.k}")


def max_agreement(code: Code) -> int:
    """Largest number of positions on which two distinct words agree."""
    if code.size < 2:
        return 0
    w = code.words
    best = 0
    for i in range(code.size - 1):
        agree = (w[i + 1:] == w[i]).sum(axis=1).max()
        if agree > best:
            best = int(agree)
            if best == code.n:
                break
    return best


def agreement_histogram(code: Code) -> dict[int, int]:
    """How many unordered word pairs agree in exactly ``t`` positions."""
    w = code.words
    hist = np.zeros(code.n + 1, dtype=np.int64)
    for i in range(code.size - 1):
        agree = (w[i + 1:] == w[i]).sum(axis=1)
        hist += np.bincount(agree, minlength=code.n + 1)
    return {t: int(c) for t, c in enumerate(hist) if c}


def is_mds(code: Code) -> bool:
    _validate(code)
    if len(set(code.keys().tolist())) != code.size:
        return False
    return max_agreement(code) <= code.k - 1


def count_fixed_positions(code: Code, positions, symbols) -> int:
    positions = list(positions)
    if len(positions) > code.k:
        raise TooManyPositions(f"{len(positions)} positions fixed but k = {code.k}")
    if not positions:
        return code.size
    sel = code.words[:, positions] == np.asarray(symbols, dtype=np.int64)
    return int(sel.all(axis=1).sum())


def puncture(code: Code, position: int, symbol: int) -> Code:
    """Words carrying ``symbol`` at ``position``, with that coordinate deleted."""
    if code.k < 2:
        raise DimensionUnderflow("cannot puncture a code with k = 1")
    rows = code.words[code.words[:, position] == symbol]
    rest = np.delete(rows, position, axis=1)
    return Code.from_words(code.q, code.k - 1, rest, order="lex" if code.order == "lex" else "given")


def min_distance(code: Code) -> int:
    if code.size < 2:
        raise ValueError("minimum distance needs at least two words")
    return code.n - max_agreement(code)


def combinatorial_bound(q: int, k: int) -> int | None:
    """Upper bound on the length of an (n, k, q)-MDS code.

    ``None`` for k = 1, where repetition codes of every length are MDS.
    """
    if q < 2 or k < 1:
        raise ValueError("need q >= 2 and k >= 1")
    if k == 1:
        return None
    if k == 2:
        return q + 1
    return q + k - 1 if q % 2 == 0 else q + k - 2


@dataclass(frozen=True)
class EquivalenceMove:
    """``kind`` is ``"row"``, ``"column"`` or ``"symbol"``.

    ``data`` is a permutation list for the first two kinds and a pair
    ``(column, symbol_permutation)`` for the third.
    """

    kind: str
    data: object


def _is_perm(seq, size):
    return sorted(seq) == list(range(size))


def apply_equivalence(code: Code, moves) -> Code:
    w = code.words.copy()
    for mv in moves:
        if mv.kind == "row":
            perm = list(mv.data)
            if not _is_perm(perm, w.shape[0]):
                raise MalformedMove("row move is not a permutation of the words")
            w = w[perm]
        elif mv.kind == "column":
            perm = list(mv.data)
            if not _is_perm(perm, w.shape[1]):
                raise MalformedMove("column move is not a permutation of the positions")
            w = w[:, perm]
        elif mv.kind == "symbol":
            try:
                col, sigma = mv.data
            except (TypeError, ValueError):
                raise MalformedMove("symbol move needs (column, permutation)") from None
            if not 0 <= col < w.shape[1] or not _is_perm(list(sigma), code.q):
                raise MalformedMove("bad symbol move")
            w[:, col] = np.asarray(sigma, dtype=np.int64)[w[:, col]]
        else:
            raise MalformedMove(f"unknown move kind {mv.kind!r}")
    return Code.from_words(code.q, code.k, w, order="given")


def is_linear(code: Code, field: Field) -> bool:
    """Closure of the word set under addition and scalar multiplication.

    Symbols are field elements by index. A greedy basis B of the words is
    collected; the set is a subspace iff it holds zero, is closed under
    scaling, is closed under adding each basis word, and has q^|B| words.
    """
    if field.q != code.q:
        raise ValueError("field size does not match the code alphabet")
    w = code.words
    keys = set(code.keys().tolist())
    if len(keys) != code.size:
        return False
    weights = code.q ** np.arange(code.n - 1, -1, -1, dtype=np.int64)
    if 0 not in keys:
        return False

    def closed(arr):
        return all(x in keys for x in (arr @ weights).tolist())

    for c in range(2, field.q):
        if not closed(field.mul_table[c, w]):
            return False
    basis = []
    red = []
    for row in w.tolist():
        if not any(row):
            continue
        if len(rref(red + [tuple(row)], field)) > len(red):
            basis.append(row)
            red = rref(red + [tuple(row)], field)
            if code.q ** len(basis) > code.size:
                return False
    if code.q ** len(basis) != code.size:
        return False
    for b in basis:
        if not closed(field.add_table[w, np.asarray(b, dtype=np.int64)]):
            return False
    return True


# generators -----------------------------------------------------------------

def is_mds_generator(generator, field: Field) -> bool:
    """Every k columns of the generator are linearly independent."""
    k = len(generator)
    cols = [tuple(row[j] for row in generator) for j in range(len(generator[0]))]
    return all(span_rank(sub, field) == k for sub in itertools.combinations(cols, k))


def grs_generator(field: Field, k: int, n: int | None = None, multipliers=None):
    """Generator whose columns are points of the normal rational curve of PG(k-1, q).

    Columns are ``v_j (1, t, ..., t^{k-1})`` for the first ``n`` field
    elements ``t`` in index order; the column ``(0, ..., 0, 1)`` is the
    (q+1)-th. ``multipliers`` default to 1.
    """
    q = field.q
    if n is None:
        n = q + 1
    if not 1 <= n <= q + 1:
        raise ValueError(f"GRS length must lie in 1..{q + 1}")
    cols = [tuple(field.pow(t, e) if e else 1 for e in range(k)) for t in range(min(n, q))]
    if n == q + 1:
        cols.append((0,) * (k - 1) + (1,))
    if multipliers is not None:
        cols = [tuple(field.mul(v, x) for x in c) for v, c in zip(multipliers, cols)]
    return tuple(tuple(c[i] for c in cols) for i in range(k))


def random_mds_generator(field: Field, k: int, n: int, rng, max_restarts: int = 1000):
    """A random k x n MDS generator: a greedily grown random arc of PG(k-1, q).

    Each column is a uniformly chosen point off every flat spanned by k-1
    earlier columns, times a random nonzero scalar.
    """
    q = field.q
    points = enumerate_points(k - 1, field) if k > 1 else [(1,)]
    for _ in range(max_restarts):
        cols: list[tuple[int, ...]] = []
        blocked: set = set()
        while len(cols) < n:
            free = [p for p in points if p not in blocked]
            if not free:
                break
            p = free[int(rng.integers(len(free)))]
            for sub in itertools.combinations(cols, min(k - 2, len(cols))) if k > 1 else ():
                blocked.update(span_points(list(sub) + [p], field))
            if k > 1 and k - 2 > len(cols):
                blocked.add(p)
            cols.append(p)
        if len(cols) == n:
            scaled = []
            for c in cols:
                s = int(rng.integers(1, q))
                scaled.append(tuple(field.mul(s, x) for x in c))
            return tuple(tuple(c[i] for c in scaled) for i in range(k))
    raise RuntimeError(f"no random ({n},{k},{q}) MDS generator found")


# serialisation --------------------------------------------------------------

def code_to_json(code: Code, linear_code: LinearCode | None = None, linear: bool | None = None) -> dict:
    out = {"schema_version": SCHEMA_VERSION, "q": code.q, "k": code.k, "n": code.n}
    if linear_code is not None:
        out["linear"] = True
        out["generator"] = [list(r) for r in linear_code.generator]
    else:
        out["linear"] = bool(linear) if linear is not None else False
        out["words"] = code.words.tolist()
    return out


def code_from_json(obj: dict) -> tuple[Code, LinearCode | None]:
    q, k = obj["q"], obj["k"]
    if "generator" in obj and obj["generator"] is not None:
        lin = LinearCode(field_for_q(q), tuple(tuple(r) for r in obj["generator"]))
        if lin.k != k or lin.n != obj["n"]:
            raise ValueError("generator shape does not match k and n")
        return lin.code(), lin
    code = Code.from_words(q, k, obj["words"], order="given")
    if code.n != obj["n"]:
        raise ValueError("word length does not match n")
    return code, None
