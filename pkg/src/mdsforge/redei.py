"""Rédei sets, directions of functions and primitive point sets.

Throughout, a *chart* is a flat F of PG(K, q) together with a hyperplane W
of F; its affine points are F minus W. A subset A of W is primitive when
every set of q^(r-1) affine points (r = dim F) whose joining lines all meet
W inside A lies in a hyperplane of F.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import ceil

from .arcs import DualArc, point_profile
from .errors import PointOnFlat, SearchBudgetExceeded
from .finite_field import Field, field_for_q, prime_power
from .geometry import (Flat, enumerate_points, meet_line_hyperplane, normalize,
                       pencil_through, project_through, span_rank)
from .extension import largest_proper_divisor

INFINITY = "inf"
# exhaustive search limits: q for planes, q for solids
EXHAUSTIVE_MAX_Q = {2: 5, 3: 3}


@dataclass
class RedeiSet:
    source: tuple
    reference: tuple
    points: tuple


def redei_set(S, flat, field: Field) -> RedeiSet:
    """All points PQ & flat for distinct P, Q in S."""
    pts = [tuple(p) for p in S]
    flat = normalize(flat, field)
    if len(pts) < 2:
        raise ValueError("need at least two points")
    if any(field.dot(p, flat) == 0 for p in pts):
        raise PointOnFlat("a point of S lies on the reference hyperplane")
    hits = {meet_line_hyperplane(P, Q, flat, field) for P, Q in itertools.combinations(pts, 2)}
    return RedeiSet(tuple(pts), flat, tuple(sorted(hits)))


def slope_point(m) -> tuple:
    """Point of the line z = 0 of PG(2, q) with slope m; ``INFINITY`` gives (0, 1, 0)."""
    return (0, 1, 0) if m == INFINITY else (1, m, 0)


def point_slope(P):
    return INFINITY if P[0] == 0 else P[1]


def graph_of_function(values) -> list[tuple]:
    return [(x, int(y), 1) for x, y in enumerate(values)]


def directions_of_function(values, field: Field) -> list[int]:
    """Sorted slope set {(f(a) - f(b)) / (a - b) : a != b}."""
    vals = [int(v) for v in values]
    if len(vals) != field.q:
        raise ValueError("function table must list f(0), ..., f(q-1)")
    out = set()
    for a, b in itertools.combinations(range(field.q), 2):
        out.add(field.div(field.sub(vals[a], vals[b]), field.sub(a, b)))
    return sorted(out)


def is_linear_function(values, field: Field) -> bool:
    """f(x) = m x + c for some m, c (affine over GF(q))."""
    return len(directions_of_function(values, field)) == 1


# bounds -----------------------------------------------------------------------

def epsilon(q: int) -> Fraction:
    """Collinear sets smaller than this are primitive in PG(2, q).

    (q + 3)/2 for prime q, else p^(h-t) + 1 with t the largest proper
    divisor of h.
    """
    p, h = prime_power(q)
    if h == 1:
        return Fraction(q + 3, 2)
    return Fraction(p ** (h - largest_proper_divisor(h)) + 1)


def nonprimitive_lower_bound(q: int) -> int:
    return ceil(epsilon(q))


# exhaustive engine --------------------------------------------------------------

@dataclass
class Chart:
    field: Field
    flat_points: list          # points of F
    phi: tuple                 # functional with F & ker(phi) = W
    rank: int                  # rank of F (= projective dimension + 1)

    @property
    def dim(self) -> int:
        return self.rank - 1

    def affine(self) -> list:
        f = self.field
        out = []
        for x in self.flat_points:
            v = f.dot(self.phi, x)
            if v:
                inv = f.inv(v)
                out.append(tuple(f.mul(inv, c) for c in x))
        return sorted(out)

    def at_infinity(self) -> list:
        return [x for x in self.flat_points if self.field.dot(self.phi, x) == 0]


def standard_chart(k: int, field: Field, reference=None) -> Chart:
    """PG(k, q) with W the given hyperplane, default x_{k+1} = 0."""
    ref = normalize(reference, field) if reference is not None else (0,) * k + (1,)
    return Chart(field, enumerate_points(k, field), ref, k + 1)


def plane_chart(plane, line_phi, field: Field) -> Chart:
    """A plane of PG(3, q) with W = plane & ker(line_phi)."""
    pts = Flat.from_equations([tuple(plane)], field, len(plane) - 1).points()
    return Chart(field, pts, tuple(line_phi), 3)


@dataclass
class PrimitivityResult:
    is_primitive: bool | None
    method: str
    witness: tuple | None = None
    nodes: int = 0
    notes: list = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "primitive": self.is_primitive,
            "method": self.method,
            "witness": [list(p) for p in self.witness] if self.witness else None,
        }


def _direction(P, Q, f):
    return normalize([f.sub(a, b) for a, b in zip(P, Q)], f)


def search_nonprimitive(chart: Chart, A, budget: int | None = None):
    """Return (witness or None, nodes): an affine set of q^(r-1) points with
    all directions in A that does not lie in a hyperplane of F."""
    f, q = chart.field, chart.field.q
    W = chart.at_infinity()
    Aset = {normalize(a, f) for a in A}
    if not Aset <= set(W):
        raise ValueError("A is not contained in the reference hyperplane")
    pts = chart.affine()
    index = {p: i for i, p in enumerate(pts)}
    size = q ** (chart.dim - 1)
    full_rank = chart.rank
    nodes = 0

    def tick():
        nonlocal nodes
        nodes += 1
        if budget is not None and nodes > budget:
            raise SearchBudgetExceeded(budget)

    missing = [w for w in W if w not in Aset]
    if missing:
        ok = [0] * len(pts)
        for i, j in itertools.combinations(range(len(pts)), 2):
            if _direction(pts[i], pts[j], f) in Aset:
                ok[i] |= 1 << j
                ok[j] |= 1 << i
        Q = missing[0]
        classes, seen = [], set()
        for P in pts:
            if P in seen:
                continue
            members = [tuple(f.add(a, f.mul(t, b)) for a, b in zip(P, Q)) for t in range(q)]
            seen.update(members)
            classes.append(sorted(index[m] for m in members))
        classes.sort()

        def dfs(ci, chosen, cand):
            tick()
            if ci == len(classes):
                S = [pts[i] for i in chosen]
                return tuple(S) if span_rank(S, f) == full_rank else None
            for i in classes[ci]:
                if (cand >> i) & 1:
                    hit = dfs(ci + 1, chosen + [i], cand & ok[i])
                    if hit:
                        return hit
            return None

        return dfs(0, [], (1 << len(pts)) - 1), nodes

    for combo in itertools.combinations(range(len(pts)), size):
        tick()
        S = [pts[i] for i in combo]
        if span_rank(S, f) == full_rank:
            return tuple(S), nodes
    return None, nodes


def _exhaustive_ok(dim, q):
    limit = EXHAUSTIVE_MAX_Q.get(dim)
    return limit is not None and q <= limit


def is_primitive_in(chart: Chart, A, budget: int | None = None) -> PrimitivityResult:
    witness, nodes = search_nonprimitive(chart, A, budget)
    return PrimitivityResult(witness is None, "exhaustive", witness, nodes)


def is_primitive(A, field: Field, k: int = 2, reference=None, mode: str = "auto",
                 budget: int | None = None) -> PrimitivityResult:
    """Primitivity of a point set A of a line (k = 2) or hyperplane of PG(k, q).

    ``mode`` is ``"bound"`` (may return ``None``), ``"exhaustive"`` or
    ``"auto"`` (bound, then exhaustive when the bound is silent).
    """
    q = field.q
    A = sorted({normalize(a, field) for a in A})
    notes = ["direction-count threshold uses the p^(h-t)+1 form"] if prime_power(q)[1] > 1 else []
    if mode in ("bound", "auto"):
        if k == 2 and len(A) < epsilon(q):
            return PrimitivityResult(True, "bound", notes=notes)
        if mode == "bound":
            return PrimitivityResult(None, "bound", notes=notes)
    if not _exhaustive_ok(k, q):
        raise SearchBudgetExceeded(budget, f"exhaustive primitivity infeasible for k={k}, q={q}")
    res = is_primitive_in(standard_chart(k, field, reference), A, budget)
    res.notes = notes
    return res


@dataclass
class NonPrimitiveSize:
    q: int
    value: int | None          # None means no non-primitive set exists
    exact: bool
    lower_bound: int
    witness_set: tuple | None = None
    witness_points: tuple | None = None

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "value": INFINITY if self.exact and self.value is None else self.value,
            "exact": self.exact,
            "lower_bound": self.lower_bound,
            "witness_set": [list(p) for p in self.witness_set] if self.witness_set else None,
            "witness_points": [list(p) for p in self.witness_points] if self.witness_points else None,
        }


def smallest_nonprimitive(q: int, budget: int | None = None) -> NonPrimitiveSize:
    """Smallest non-primitive collinear set of PG(2, q), exact for q <= 5."""
    lb = nonprimitive_lower_bound(q)
    if q > EXHAUSTIVE_MAX_Q[2]:
        return NonPrimitiveSize(q, lb, False, lb)
    field = field_for_q(q)
    chart = standard_chart(2, field)
    line = chart.at_infinity()
    for size in range(1, len(line) + 1):
        for A in itertools.combinations(line, size):
            witness, _ = search_nonprimitive(chart, A, budget)
            if witness:
                return NonPrimitiveSize(q, size, True, lb, tuple(A), witness)
    return NonPrimitiveSize(q, None, True, lb)


def best_nonprimitive_value(q: int) -> float:
    """Exact value when searchable, else the lower bound; inf when none exists."""
    r = smallest_nonprimitive(q)
    return float("inf") if r.value is None else r.value


@dataclass
class MemberVerdict:
    member: tuple
    A: tuple
    is_primitive: bool
    method: str

    def to_json(self) -> dict:
        return {"member": list(self.member), "A": [list(a) for a in self.A],
                "primitive": self.is_primitive, "method": self.method}


def primitive_members(dual_arc: DualArc, budget: int | None = None,
                      method: str = "auto") -> list[MemberVerdict]:
    """Primitivity of every member, A = member minus its k-fold points.

    ``method="exhaustive"`` skips both size bounds.
    """
    f, k, q, n = dual_arc.field, dual_arc.k, dual_arc.field.q, dual_arc.n
    profile = point_profile(dual_arc)
    use_bounds = method != "exhaustive"
    fast = use_bounds and n > q - best_nonprimitive_value(q) + k
    out = []
    for member in dual_arc.hyperplanes:
        A = tuple(sorted(p for p, m in profile.on(member).items() if m != k))
        if fast:
            out.append(MemberVerdict(member, A, True, "bound"))
            continue
        if use_bounds and k == 2 and len(A) < epsilon(q):
            out.append(MemberVerdict(member, A, True, "bound"))
            continue
        if not _exhaustive_ok(k, q):
            raise SearchBudgetExceeded(budget, f"exhaustive primitivity infeasible for k={k}, q={q}")
        res = is_primitive_in(standard_chart(k, f, member), A, budget)
        out.append(MemberVerdict(member, A, res.is_primitive, "exhaustive"))
    return out


# pencil of planes through a line of PG(3, q) -----------------------------------------

BASE_PLANE = (0, 0, 0, 1)          # x4 = 0, containing the line x3 = x4 = 0


def embed_line_points(A) -> list:
    """Points (x1, x2, 0) of the line z = 0 of PG(2, q) as points of PG(3, q)."""
    return [tuple(a[:2]) + (0, 0) for a in A]


def pencil_planes(field: Field) -> list:
    line = Flat.from_equations([(0, 0, 1, 0), (0, 0, 0, 1)], field, 3)
    return pencil_through(line, 3)


def line_functional(plane):
    # a functional cutting the plane exactly in the line x3 = x4 = 0
    return (0, 0, 1, 0) if tuple(plane) == BASE_PLANE else (0, 0, 0, 1)


@dataclass
class PencilVerdict:
    plane: tuple
    result: PrimitivityResult


def pencil_verdicts(A, field: Field, budget: int | None = None) -> list[PencilVerdict]:
    """Exhaustive primitivity of A (on the line z = 0 of PG(2, q)) in every plane
    of PG(3, q) through that line; the first plane is x4 = 0."""
    A3 = embed_line_points(A)
    planes = sorted(pencil_planes(field), key=lambda p: p != BASE_PLANE)
    out = []
    for plane in planes:
        chart = plane_chart(plane, line_functional(plane), field)
        out.append(PencilVerdict(plane, is_primitive_in(chart, A3, budget)))
    return out


def projection_invariance_check(A, field: Field, budget: int | None = None) -> bool:
    """True iff A tests primitive in every plane of the pencil through its line."""
    if not _exhaustive_ok(2, field.q) or field.q > 4:
        raise SearchBudgetExceeded(budget, "pencil check limited to q <= 4")
    return all(v.result.is_primitive for v in pencil_verdicts(A, field, budget))


def transport(S, source_plane, target_plane, field: Field, center=None) -> list:
    """Image of S under projection from a point off both planes."""
    if center is None:
        center = next(p for p in enumerate_points(3, field)
                      if field.dot(p, source_plane) and field.dot(p, target_plane))
    mapping = project_through(center, source_plane, target_plane, field)
    return [mapping[normalize(P, field)] for P in S]


def redei_in_chart(S, chart: Chart) -> set:
    f = chart.field
    return {_direction(P, Q, f) for P, Q in itertools.combinations([tuple(p) for p in S], 2)}


def check_witness(S, A, chart: Chart) -> bool:
    """S has q^(r-1) affine points, directions inside A, and spans F."""
    f, q = chart.field, chart.field.q
    S = [tuple(p) for p in S]
    if len(set(S)) != q ** (chart.dim - 1):
        return False
    if any(f.dot(chart.phi, P) == 0 for P in S):
        return False
    scaled = [normalize(P, f) for P in S]
    in_flat = {normalize(p, f) for p in chart.flat_points}
    if not all(P in in_flat for P in scaled):
        return False
    # scale to phi = 1 before taking differences
    aff = []
    for P in S:
        inv = f.inv(f.dot(chart.phi, P))
        aff.append(tuple(f.mul(inv, c) for c in P))
    Aset = {normalize(a, f) for a in A}
    return redei_in_chart(aff, chart) <= Aset and span_rank(aff, f) == chart.rank
