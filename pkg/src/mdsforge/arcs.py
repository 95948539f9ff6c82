"""Arcs and dual arcs in PG(k, q).

Point tuples and hyperplane tuples share one representation, so the same
rank test decides both the arc and the dual-arc property.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field

from .errors import (DimensionOutOfRange, DuplicatePoints, NotAMember,
                     SearchBudgetExceeded)
from .finite_field import Field
from .geometry import ProjectiveSpace, normalize, null_space, rref, span_points, span_rank


def _check_distinct(elems, field: Field):
    if len({normalize(e, field) for e in elems}) != len(elems):
        raise DuplicatePoints("repeated element in arc")


def is_arc(points, k: int, field: Field) -> bool:
    """True iff every k+1 of ``points`` span PG(k, q).

    Fewer than k+1 points form an arc when they are independent.
    """
    pts = [tuple(p) for p in points]
    _check_distinct(pts, field)
    if len(pts) <= k + 1:
        return span_rank(pts, field) == len(pts)
    return all(span_rank(sub, field) == k + 1 for sub in itertools.combinations(pts, k + 1))


is_dual_arc = is_arc


@dataclass(frozen=True)
class Arc:
    points: tuple[tuple[int, ...], ...]
    k: int
    field: Field

    @classmethod
    def make(cls, points, k, field, check=True) -> "Arc":
        pts = tuple(sorted(normalize(p, field) for p in points))
        if check and not is_arc(pts, k, field):
            raise ValueError("point set is not an arc")
        return cls(pts, k, field)

    @property
    def n(self) -> int:
        return len(self.points)

    def dualize(self) -> "DualArc":
        return DualArc(self.points, self.k, self.field)

    def to_json(self) -> dict:
        return {"k": self.k, "q": self.field.q, "points": [list(p) for p in self.points]}


@dataclass(frozen=True)
class DualArc:
    """A set of hyperplanes of PG(k, q), no k+1 through a point.

    ``embedding`` is set on dual arcs produced by :func:`cut_out`: its rows
    are ambient coordinates of a basis of the subspace the arc lives in.
    """

    hyperplanes: tuple[tuple[int, ...], ...]
    k: int
    field: Field
    embedding: tuple[tuple[int, ...], ...] | None = dc_field(default=None, compare=False)

    @classmethod
    def make(cls, hyperplanes, k, field, check=True, embedding=None) -> "DualArc":
        hs = tuple(sorted(normalize(h, field) for h in hyperplanes))
        if check and not is_arc(hs, k, field):
            raise ValueError("hyperplane set is not a dual arc")
        return cls(hs, k, field, embedding)

    @property
    def n(self) -> int:
        return len(self.hyperplanes)

    def dualize(self) -> Arc:
        return Arc(self.hyperplanes, self.k, self.field)

    def to_json(self) -> dict:
        return {"k": self.k, "q": self.field.q, "hyperplanes": [list(h) for h in self.hyperplanes]}


def normal_rational_curve(k: int, field: Field) -> Arc:
    """{(1, t, ..., t^k)} together with (0, ..., 0, 1).

    Accepted for 2 <= k <= q-2, and for the conic k = 2 at every q.
    """
    q = field.q
    if k < 2 or k > max(2, q - 2):
        raise DimensionOutOfRange(f"normal rational curve needs 2 <= k <= q-2, got k={k}, q={q}")
    pts = [tuple(field.pow(t, e) if e else 1 for e in range(k + 1)) for t in range(q)]
    pts.append((0,) * k + (1,))
    arc = Arc.make(pts, k, field, check=False)
    if not is_arc(arc.points, k, field):  # pragma: no cover - Vandermonde guarantees it
        raise AssertionError("normal rational curve failed the arc test")
    return arc


@dataclass
class PointProfile:
    """Multiplicity of every ambient point with respect to a dual arc."""

    dual_arc: DualArc
    multiplicity: dict

    def on(self, member) -> dict:
        dot = self.dual_arc.field.dot
        return {p: m for p, m in self.multiplicity.items() if dot(p, member) == 0}

    def tangent_points(self, member) -> list:
        return sorted(p for p, m in self.on(member).items() if m == 1)

    def secant_points(self, member) -> list:
        return sorted(p for p, m in self.on(member).items() if m == 2)

    def points_with(self, mult: int) -> list:
        return sorted(p for p, m in self.multiplicity.items() if m == mult)

    def kfold_points(self) -> list:
        return self.points_with(self.dual_arc.k)


def point_profile(dual_arc: DualArc) -> PointProfile:
    space = ProjectiveSpace(dual_arc.k, dual_arc.field)
    dot = dual_arc.field.dot
    mult = {p: sum(1 for h in dual_arc.hyperplanes if dot(p, h) == 0) for p in space.points}
    return PointProfile(dual_arc, mult)


def extending_elements(arc) -> list[tuple[int, ...]]:
    """Points (hyperplanes) whose addition keeps ``arc`` an arc (dual arc)."""
    elems = arc.points if isinstance(arc, Arc) else arc.hyperplanes
    k, field = arc.k, arc.field
    space = ProjectiveSpace(k, field)
    members = set(elems)
    blocked = set()
    for sub in itertools.combinations(elems, k):
        if span_rank(sub, field) < k:  # pragma: no cover - excluded by the arc property
            continue
        blocked.update(span_points(sub, field))
    return [p for p in space.points if p not in members and p not in blocked]


def is_complete(arc) -> bool:
    return not extending_elements(arc)


def cut_out(dual_arc: DualArc, member) -> DualArc:
    """Traces of the other members inside ``member``, as a dual arc of PG(k-1, q).

    The coordinates of the result refer to the RREF basis of ``member``'s
    point space; that basis is recorded in ``embedding``.
    """
    field = dual_arc.field
    member = normalize(member, field)
    if member not in dual_arc.hyperplanes:
        raise NotAMember(f"{member} is not a member of the dual arc")
    if dual_arc.n < dual_arc.k + 2:
        raise ValueError("cutting needs a dual arc of at least k+2 members")
    basis = [tuple(v) for v in rref(null_space([member], field), field)]
    traces = []
    for h in dual_arc.hyperplanes:
        if h == member:
            continue
        traces.append(normalize([field.dot(b, h) for b in basis], field))
    if dual_arc.embedding is not None:
        # compose with the parent's chart
        parent = dual_arc.embedding
        basis = [tuple(_combine(b, parent, field)) for b in basis]
    return DualArc.make(traces, dual_arc.k - 1, field, check=True, embedding=tuple(basis))


def _combine(coeffs, rows, field):
    out = [0] * len(rows[0])
    for c, r in zip(coeffs, rows):
        if c:
            out = [field.add(a, field.mul(c, b)) for a, b in zip(out, r)]
    return out


def ambient_traces(dual_arc: DualArc) -> set:
    """Each member of a cut dual arc as a canonical ambient flat (RREF generators)."""
    field = dual_arc.field
    emb = dual_arc.embedding
    out = set()
    for h in dual_arc.hyperplanes:
        local = null_space([h], field)
        pts = [tuple(_combine(v, emb, field)) for v in local] if emb else local
        out.add(tuple(rref(pts, field)))
    return out


# maximum arc search ---------------------------------------------------------

@dataclass
class ArcSearchResult:
    m: int
    witness: Arc
    nodes: int
    hyperoval: bool


def _budget_from_env(budget):
    if budget is not None:
        return budget
    env = os.environ.get("MDSFORGE_BUDGET")
    return int(env) if env else None


class _ArcSearcher:
    def __init__(self, k: int, field: Field, budget=None):
        self.k = k
        self.field = field
        self.space = ProjectiveSpace(k, field)
        self.points = self.space.points
        self.full = (1 << len(self.points)) - 1
        self._flat_cache = {}
        self.nodes = 0
        self.budget = budget

    def _flat_mask(self, idxs) -> int:
        key = tuple(rref([self.points[i] for i in idxs], self.field))
        mask = self._flat_cache.get(key)
        if mask is None:
            mask = 0
            for p in span_points(key, self.field):
                mask |= 1 << self.space.index[p]
            self._flat_cache[key] = mask
        return mask

    def _add(self, chosen, blocked, i):
        """Blocked mask after appending point ``i`` to ``chosen``."""
        blocked |= 1 << i
        if len(chosen) >= self.k - 1:
            for sub in itertools.combinations(chosen, self.k - 1):
                blocked |= self._flat_mask(sub + (i,))
        return blocked

    def run(self, prefix=(), best=0):
        self.best = best
        self.best_arc = None
        blocked = 0
        chosen = ()
        for i in prefix:
            blocked = self._add(chosen, blocked, i)
            chosen += (i,)
        last = prefix[-1] if prefix else -1
        self._dfs(chosen, blocked, last)
        return self.best, self.best_arc

    def _dfs(self, chosen, blocked, last):
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise SearchBudgetExceeded(self.budget)
        if len(chosen) > self.best:
            self.best = len(chosen)
            self.best_arc = chosen
        cand = self.full & ~blocked & ~((1 << (last + 1)) - 1)
        if len(chosen) + cand.bit_count() <= self.best:
            return
        while cand:
            low = cand & -cand
            i = low.bit_length() - 1
            cand ^= low
            if len(chosen) + 1 + cand.bit_count() <= self.best:
                return
            self._dfs(chosen + (i,), self._add(chosen, blocked, i), i)


def _arc_branch(args):
    k, p, h, first, budget = args
    from .finite_field import build_field
    s = _ArcSearcher(k, build_field(p, h), budget)
    m, arc = s.run(prefix=(first,))
    return m, arc, s.nodes


def max_arc_search(k: int, field: Field, jobs: int = 1, budget=None) -> ArcSearchResult:
    """Exact m(k, q) with the lexicographically least maximum arc as witness.

    Points are added in increasing global order only; a branch is cut when
    it cannot beat the best size found so far.
    """
    budget = _budget_from_env(budget)
    if jobs <= 1:
        s = _ArcSearcher(k, field, budget)
        m, arc = s.run()
        nodes = s.nodes
    else:
        npts = len(ProjectiveSpace(k, field).points)
        tasks = [(k, field.p, field.h, i, budget) for i in range(npts)]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_arc_branch, tasks))
        m, arc, nodes = 0, None, 0
        for bm, barc, bn in results:
            nodes += bn
            if bm > m:
                m, arc = bm, barc
    space = ProjectiveSpace(k, field)
    witness = Arc.make([space.points[i] for i in arc], k, field)
    hyperoval = k == 2 and field.q % 2 == 0 and m == field.q + 2
    return ArcSearchResult(m, witness, nodes, hyperoval)

