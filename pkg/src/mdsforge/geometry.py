"""Points, hyperplanes and flats of PG(k, q) over a :class:`Field`.

A point or hyperplane is a tuple of field ints of length k+1, normalised so
its first nonzero entry is 1. Tuple comparison then gives the global
lexicographic order used for every canonical sort in the package.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import CenterOnHyperplane, DimensionMismatch, SpaceTooLarge, WrongRank
from .finite_field import Field

MAX_POINTS = 10**7


def normalize(vec, field: Field) -> tuple[int, ...]:
    """Scale ``vec`` so its leading nonzero entry is 1."""
    for x in vec:
        if x:
            inv = field.inv(x)
            return tuple(field.mul(inv, v) for v in vec)
    raise ValueError("the zero vector is not a projective point")


def point_count(k: int, q: int) -> int:
    return (q ** (k + 1) - 1) // (q - 1)


def enumerate_points(k: int, field: Field) -> list[tuple[int, ...]]:
    """All points of PG(k, q) in lexicographic order of coordinates."""
    if not 1 <= k <= 5:
        raise SpaceTooLarge(f"dimension {k} outside 1..5")
    q = field.q
    if point_count(k, q) > MAX_POINTS:
        raise SpaceTooLarge(f"PG({k},{q}) has more than {MAX_POINTS} points")
    pts = []
    # leading 1 in position i, zeros before, anything after
    for i in range(k + 1):
        for tail in itertools.product(range(q), repeat=k - i):
            pts.append((0,) * i + (1,) + tail)
    pts.sort()
    return pts


enumerate_hyperplanes = enumerate_points


def incidence(point, hyperplane, field: Field) -> bool:
    if len(point) != len(hyperplane):
        raise DimensionMismatch(f"point of length {len(point)} vs hyperplane of length {len(hyperplane)}")
    return field.dot(point, hyperplane) == 0


def rref(rows, field: Field) -> list[tuple[int, ...]]:
    """Reduced row echelon form with zero rows dropped."""
    m = [list(r) for r in rows]
    if not m:
        return []
    ncols = len(m[0])
    pivot_row = 0
    for col in range(ncols):
        pr = next((r for r in range(pivot_row, len(m)) if m[r][col]), None)
        if pr is None:
            continue
        m[pivot_row], m[pr] = m[pr], m[pivot_row]
        inv = field.inv(m[pivot_row][col])
        m[pivot_row] = [field.mul(inv, x) for x in m[pivot_row]]
        for r in range(len(m)):
            if r != pivot_row and m[r][col]:
                c = m[r][col]
                m[r] = [field.sub(x, field.mul(c, y)) for x, y in zip(m[r], m[pivot_row])]
        pivot_row += 1
        if pivot_row == len(m):
            break
    return [tuple(r) for r in m[:pivot_row]]


def span_rank(points, field: Field) -> int:
    return len(rref(points, field))


def null_space(rows, field: Field, ncols: int | None = None) -> list[tuple[int, ...]]:
    """Basis of ``{x : r . x = 0 for every row r}``."""
    if ncols is None:
        ncols = len(rows[0])
    red = rref(rows, field) if rows else []
    pivots = []
    for r in red:
        pivots.append(next(i for i, x in enumerate(r) if x))
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for r, pc in zip(red, pivots):
            v[pc] = field.neg(r[f])
        basis.append(tuple(v))
    return basis


def span_points(generators, field: Field) -> list[tuple[int, ...]]:
    """All projective points in the span of ``generators``, sorted."""
    gens = rref(generators, field)
    if not gens:
        return []
    n = len(gens[0])
    out = set()
    for coeffs in itertools.product(range(field.q), repeat=len(gens)):
        if not any(coeffs):
            continue
        v = [0] * n
        for c, g in zip(coeffs, gens):
            if c:
                v = [field.add(a, field.mul(c, b)) for a, b in zip(v, g)]
        out.add(normalize(v, field))
    return sorted(out)


@dataclass(frozen=True)
class Flat:
    """A projective subspace stored by its canonical RREF spanning set."""

    generators: tuple[tuple[int, ...], ...]
    field: Field

    @classmethod
    def spanned_by(cls, points, field: Field) -> "Flat":
        return cls(tuple(rref(points, field)), field)

    @classmethod
    def from_equations(cls, hyperplanes, field: Field, dim: int | None = None) -> "Flat":
        """The flat cut out by the given hyperplanes."""
        ncols = dim + 1 if dim is not None else len(hyperplanes[0])
        return cls.spanned_by(null_space(list(hyperplanes), field, ncols), field)

    @property
    def rank(self) -> int:
        return len(self.generators)

    def contains(self, point) -> bool:
        return span_rank(list(self.generators) + [tuple(point)], self.field) == self.rank

    def points(self) -> list[tuple[int, ...]]:
        return span_points(self.generators, self.field)

    def equations(self) -> list[tuple[int, ...]]:
        """A basis of hyperplanes whose intersection is this flat."""
        n = len(self.generators[0])
        return [normalize(v, self.field) for v in null_space(list(self.generators), self.field, n)]


def pencil_through(flat: Flat, k: int) -> list[tuple[int, ...]]:
    """The q+1 hyperplanes of PG(k, q) containing a flat of rank k-1."""
    if flat.rank != k - 1:
        raise WrongRank(f"flat of rank {flat.rank} is not of codimension 2 in PG({k},q)")
    duals = flat.equations()
    return span_points(duals, flat.field)


def line_points(p, r, field: Field) -> list[tuple[int, ...]]:
    return span_points([p, r], field)


def meet_line_hyperplane(p, r, hyperplane, field: Field) -> tuple[int, ...]:
    """Intersection of the line pr with a hyperplane not containing it."""
    hp = field.dot(hyperplane, p)
    hr = field.dot(hyperplane, r)
    if hp == 0:
        return tuple(p)
    # (H.r) p - (H.p) r lies on H
    v = [field.sub(field.mul(hr, a), field.mul(hp, b)) for a, b in zip(p, r)]
    return normalize(v, field)


def project_through(center, source, target, field: Field) -> dict:
    """Perspectivity from hyperplane ``source`` onto ``target`` with the given center.

    Returns a dict mapping every point of ``source`` to its image
    ``line(center, X) & target``.
    """
    center = tuple(center)
    if field.dot(center, source) == 0 or field.dot(center, target) == 0:
        raise CenterOnHyperplane("projection center lies on the source or target hyperplane")
    k = len(center) - 1
    src_points = Flat.from_equations([tuple(source)], field, k).points()
    return {x: meet_line_hyperplane(center, x, target, field) for x in src_points}


class ProjectiveSpace:
    """PG(k, q) with its point list and index lookup cached."""

    def __init__(self, k: int, field: Field):
        self.k = k
        self.field = field
        self.points = enumerate_points(k, field)
        self.index = {p: i for i, p in enumerate(self.points)}

    @property
    def hyperplanes(self):
        return self.points

    def __len__(self):
        return len(self.points)

    def points_on(self, hyperplane) -> list[tuple[int, ...]]:
        dot = self.field.dot
        return [p for p in self.points if dot(p, hyperplane) == 0]

    def hyperplanes_through(self, point) -> list[tuple[int, ...]]:
        return self.points_on(point)

    def affine_points(self) -> list[tuple[int, ...]]:
        """Points off the hyperplane at infinity x_{k+1} = 0, scaled so x_{k+1} = 1."""
        return [tuple(a) + (1,) for a in itertools.product(range(self.field.q), repeat=self.k)]
