"""Nets of order q and degree n, and their (n, 2, q)-MDS codes.

Points are the ids ``0 .. q^2 - 1``. A net is stored as ``n`` parallel
classes, each a tuple of ``q`` lines, each line a sorted tuple of point ids.
Lines inside a class are ordered by their least point, which doubles as
the symbol a code word carries in that position.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .codes import Code, LinearCode, grs_generator, is_mds
from .errors import AxiomViolation, DegreeTooSmall, NotMDS, SchemaError
from .extension import find_extensions


@dataclass(frozen=True)
class Net:
    q: int
    classes: tuple

    @property
    def n(self) -> int:
        return len(self.classes)

    @property
    def points(self) -> range:
        return range(self.q * self.q)

    def lines(self) -> list[tuple]:
        return [line for cls in self.classes for line in cls]

    def with_class(self, cls) -> "Net":
        return Net(self.q, self.classes + (_normalize_class(cls),))

    def to_json(self) -> dict:
        return {"q": self.q, "n": self.n,
                "classes": [[list(line) for line in cls] for cls in self.classes]}

    @classmethod
    def from_json(cls, obj: dict) -> "Net":
        try:
            q, classes = int(obj["q"]), obj["classes"]
            net = cls(q, tuple(_normalize_class(c) for c in classes))
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"malformed net: {exc}") from exc
        if "n" in obj and obj["n"] != net.n:
            raise SchemaError("declared degree does not match the class list")
        return net


def _normalize_class(cls) -> tuple:
    return tuple(sorted(tuple(sorted(int(p) for p in line)) for line in cls))


def axiom_violations(net: Net) -> list[str]:
    """Return a list of readable reasons the structure is not a net (empty if it is)."""
    q, n = net.q, net.n
    errs = []
    if n > q + 1:
        errs.append(f"degree {n} exceeds q + 1 = {q + 1}")
    if n < 3:
        errs.append("fewer than three parallel classes, so no triangle")
    pts = set(net.points)
    for i, cls in enumerate(net.classes):
        if len(cls) != q or any(len(line) != q for line in cls):
            errs.append(f"class {i} is not q lines of q points")
        cover = [p for line in cls for p in line]
        if sorted(cover) != sorted(pts):
            errs.append(f"class {i} does not partition the points")
    if errs:
        return errs
    for (i, a), (j, b) in itertools.combinations(enumerate(net.classes), 2):
        for la in a:
            sa = set(la)
            for lb in b:
                if len(sa.intersection(lb)) != 1:
                    errs.append(f"lines of classes {i} and {j} meet in {len(sa.intersection(lb))} points")
                    return errs
    joins = {}
    for idx, line in enumerate(net.lines()):
        for pair in itertools.combinations(line, 2):
            if pair in joins:
                errs.append(f"points {pair} lie on two lines")
                return errs
            joins[pair] = idx
    if not _has_triangle(net, joins):
        errs.append("no triangle")
    return errs


def _has_triangle(net: Net, joins: dict) -> bool:
    n_pts = net.q * net.q
    for a, b, c in itertools.combinations(range(n_pts), 3):
        ab, ac, bc = joins.get((a, b)), joins.get((a, c)), joins.get((b, c))
        if None not in (ab, ac, bc) and len({ab, ac, bc}) == 3:
            return True
    return False


def is_net(net: Net) -> bool:
    return not axiom_violations(net)


def verify_net(net: Net) -> Net:
    errs = axiom_violations(net)
    if errs:
        raise AxiomViolation("; ".join(errs))
    return net


def net_from_code(code: Code) -> Net:
    """Points are the rows of ``code`` (by index); line (i, s) holds the words with s at i."""
    if code.k != 2 or not is_mds(code):
        raise NotMDS("a net needs an (n, 2, q)-MDS code")
    if code.n < 3:
        raise DegreeTooSmall("degree below 3 leaves no triangle")
    words = code.words
    classes = []
    for i in range(code.n):
        col = words[:, i]
        classes.append(_normalize_class(np.flatnonzero(col == s).tolist() for s in range(code.q)))
    return verify_net(Net(code.q, tuple(classes)))


def code_from_net(net: Net) -> Code:
    """Word of point P: in each class, the index of the line through P."""
    verify_net(net)
    q = net.q
    words = np.zeros((q * q, net.n), dtype=np.int64)
    for i, cls in enumerate(net.classes):
        for label, line in enumerate(cls):
            words[list(line), i] = label
    return Code.from_words(q, 2, words, order="given")


def affine_plane_net(field) -> Net:
    """The degree q + 1 net of AG(2, q): all q + 1 parallel classes of lines."""
    gen = grs_generator(field, 2, field.q + 1)
    return net_from_code(LinearCode(field, gen).code())


def class_from_column(column, q: int) -> tuple:
    column = list(column)
    return _normalize_class([p for p, s in enumerate(column) if s == sym] for sym in range(q))


def extend_net(net: Net, jobs: int = 1, budget: int | None = None) -> list[tuple]:
    """Every parallel class that can be appended to ``net``, sorted."""
    verify_net(net)
    if net.n >= net.q + 1:
        return []
    res = find_extensions(code_from_net(net), jobs=jobs, budget=budget)
    return sorted(class_from_column(c, net.q) for c in res.columns)


def mols_text(net: Net) -> str:
    """The n - 2 Latin squares of the net as text.

    Row r, column c of square j is the label in class j + 2 of the point on
    line r of class 0 and line c of class 1.
    """
    code = code_from_net(net).words
    q = net.q
    where = {(int(w[0]), int(w[1])): w for w in code}
    blocks = []
    for j in range(2, net.n):
        rows = [" ".join(str(int(where[(r, c)][j])) for c in range(q)) for r in range(q)]
        blocks.append(f"square {j - 1}\n" + "\n".join(rows))
    return "\n\n".join(blocks) + ("\n" if blocks else "")
