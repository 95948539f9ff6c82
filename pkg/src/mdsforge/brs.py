"""Rebuild a linear code from its hyperplane-labelling picture in PG(k, q).

Column i of the generator G gives the codimension-2 flat Pi_i of PG(k, q)
cut by ``x_{k+1} = 0`` and ``sum_j a_ji x_j = 0``. An affine point
P = (alpha, 1) lies on one hyperplane of the pencil through Pi_i besides the
hyperplane at infinity; that hyperplane meets the line UV, with
U = (0, 1, 0, ..., 0) and V = (0, ..., 0, 1), in (0, gamma, 0, ..., 0, 1),
and gamma is the i-th symbol of P's word.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .arcs import DualArc, is_arc, point_profile
from .errors import NoFreePoint, NotAffine, RankDeficient, SearchBudgetExceeded, VerificationFailure
from .finite_field import Field
from .geometry import Flat, enumerate_points, normalize, null_space, pencil_through, span_rank
from .codes import LinearCode


@dataclass(frozen=True)
class BrsScaffold:
    field: Field
    k: int
    generator: tuple          # original G
    transform: tuple          # invertible k x k M applied to the rows of G
    scales: tuple             # column multipliers bringing a_2i to 1
    normalized: tuple         # M G D, with second row all ones
    flats: tuple              # Pi_i as Flat objects
    pencils: tuple            # per column: ((hyperplane, gamma), ...) without infinity

    @property
    def n(self) -> int:
        return len(self.generator[0])

    @property
    def pi_infinity(self) -> tuple:
        return (0,) * self.k + (1,)

    @property
    def U(self) -> tuple:
        return (0, 1) + (0,) * (self.k - 1)

    @property
    def V(self) -> tuple:
        return (0,) * self.k + (1,)

    def linear_code(self) -> LinearCode:
        return LinearCode(self.field, self.normalized)

    def summary(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "transform": [list(r) for r in self.transform],
            "scales": list(self.scales),
            "normalized_generator": [list(r) for r in self.normalized],
        }


def _columns(G):
    return [tuple(row[j] for row in G) for j in range(len(G[0]))]


def _matmul(A, B, f: Field):
    return tuple(tuple(f.dot(a, [B[r][c] for r in range(len(B))]) for c in range(len(B[0]))) for a in A)


def _label_on_ell(h, f: Field, k: int) -> int:
    """Second coordinate of h & UV in the affine chart x_{k+1} = 1."""
    hu, hv = h[1], h[k]
    # the meet is (H.V) U - (H.U) V = (0, H.V, 0, ..., -H.U)
    return f.div(hv, f.neg(hu))


def build_scaffold(G, field: Field) -> BrsScaffold:
    G = tuple(tuple(int(x) for x in row) for row in G)
    k = len(G)
    if k < 2:
        raise ValueError("the labelling line UV needs k >= 2")
    cols = _columns(G)
    if any(not any(c) for c in cols):
        raise RankDeficient("a zero column defines no hyperplane")
    if span_rank(G, field) < k:
        raise RankDeficient("generator matrix is rank deficient")
    u = next((p for p in enumerate_points(k - 1, field) if all(field.dot(p, c) for c in cols)), None)
    if u is None:
        raise NoFreePoint("the column hyperplanes cover PG(k-1, q)")
    rows = [None] * k
    rows[1] = u
    chosen = [u]
    slots = [0] + list(range(2, k))
    for j in range(k):
        if not slots:
            break
        e = tuple(1 if i == j else 0 for i in range(k))
        if span_rank(chosen + [e], field) > len(chosen):
            rows[slots.pop(0)] = e
            chosen.append(e)
    M = tuple(rows)
    MG = _matmul(M, G, field)
    scales = tuple(field.inv(MG[1][i]) for i in range(len(cols)))
    norm = tuple(tuple(field.mul(x, s) for x, s in zip(row, scales)) for row in MG)
    flats, pencils = [], []
    inf = (0,) * k + (1,)
    for col in _columns(norm):
        flat = Flat.from_equations([tuple(col) + (0,), inf], field, k)
        hyps = [h for h in pencil_through(flat, k) if h != inf]
        flats.append(flat)
        pencils.append(tuple((h, _label_on_ell(h, field, k)) for h in hyps))
    return BrsScaffold(field, k, G, M, scales, norm, tuple(flats), tuple(pencils))


def affine_points(k: int, q: int) -> np.ndarray:
    """(alpha, 1) for every alpha in lexicographic order."""
    alphas = np.array(list(itertools.product(range(q), repeat=k)), dtype=np.int64)
    return np.hstack([alphas, np.ones((len(alphas), 1), dtype=np.int64)])


def _dots(points: np.ndarray, hyps: np.ndarray, f: Field) -> np.ndarray:
    """Incidence values of every point against every hyperplane."""
    acc = np.zeros((points.shape[0], hyps.shape[0]), dtype=np.int64)
    for t in range(points.shape[1]):
        acc = f.add_table[acc, f.mul_table[points[:, t:t + 1], hyps[:, t][None, :]]]
    return acc


def encode_all(scaffold: BrsScaffold) -> np.ndarray:
    """BRS words of every affine point, rows in lexicographic order of alpha."""
    f, k = scaffold.field, scaffold.k
    pts = affine_points(k, f.q)
    out = np.empty((len(pts), scaffold.n), dtype=np.int64)
    for i, pencil in enumerate(scaffold.pencils):
        hyps = np.array([h for h, _ in pencil], dtype=np.int64)
        labels = np.array([g for _, g in pencil], dtype=np.int64)
        inc = _dots(pts, hyps, f) == 0
        if not (inc.sum(axis=1) == 1).all():  # pragma: no cover - pencil partitions E
            raise VerificationFailure("an affine point is not on exactly one pencil hyperplane")
        out[:, i] = labels[inc.argmax(axis=1)]
    return out


def brs_encode(scaffold: BrsScaffold, P) -> tuple[int, ...]:
    P = tuple(P)
    if len(P) != scaffold.k + 1 or P[-1] != 1:
        raise NotAffine(f"{P} is not an affine point (alpha, 1)")
    f = scaffold.field
    word = []
    for pencil in scaffold.pencils:
        gamma = next(g for h, g in pencil if f.dot(h, P) == 0)
        word.append(gamma)
    return tuple(word)


def verify_identity_theorem(G, field: Field, scaffold: BrsScaffold | None = None) -> bool:
    """BRS words equal ``alpha . G`` word for word, G taken in normalised form."""
    if scaffold is None:
        scaffold = build_scaffold(G, field)
    brs = encode_all(scaffold)
    direct = scaffold.linear_code().code().words
    return brs.shape == direct.shape and bool((brs == direct).all())


def agreement_geometry_check(scaffold: BrsScaffold, P, Q) -> int:
    """Number of flats Pi_i through the point where PQ meets infinity.

    Raises :class:`VerificationFailure` unless it equals the number of
    coordinates on which the two BRS words agree.
    """
    f = scaffold.field
    P, Q = tuple(P), tuple(Q)
    if P == Q:
        raise ValueError("need two distinct affine points")
    direction = normalize([f.sub(a, b) for a, b in zip(P, Q)], f)
    t = sum(1 for flat in scaffold.flats if flat.contains(direction))
    wp, wq = brs_encode(scaffold, P), brs_encode(scaffold, Q)
    agree = sum(a == b for a, b in zip(wp, wq))
    if agree != t:
        raise VerificationFailure(f"geometry says {t} common entries, words share {agree}")
    return t


# transversal sets -------------------------------------------------------------

def _direction(P, Q, f: Field):
    return normalize([f.sub(a, b) for a, b in zip(P[:-1], Q[:-1])], f)


def kfold_points(dual_arc: DualArc) -> set:
    return set(point_profile(dual_arc).kfold_points())


def is_transversal(S, dual_arc: DualArc, kfold=None) -> bool:
    """No two points of S are collinear with a k-fold point of the dual arc.

    S lives in the affine part of PG(k+1, q) (coordinates ending in 1) and
    the dual arc in the hyperplane at infinity PG(k, q).
    """
    f = dual_arc.field
    B = kfold_points(dual_arc) if kfold is None else kfold
    pts = [tuple(p) for p in S]
    for P, Q in itertools.combinations(pts, 2):
        if _direction(P, Q, f) in B:
            return False
    return True


@dataclass
class TransversalSearch:
    sets: list
    nodes: int


def enumerate_transversal_sets(dual_arc: DualArc, size: int, budget: int | None = None,
                               limit: int | None = None) -> TransversalSearch:
    """All transversal sets of the given size, as sorted tuples of affine points.

    The lines through the first k-fold point partition the affine space
    into q^k classes of q points and a transversal set meets each class at
    most once; the search walks the classes in order.
    """
    f, k, q = dual_arc.field, dual_arc.k, dual_arc.field.q
    B = sorted(kfold_points(dual_arc))
    if not B:
        raise ValueError("dual arc has no k-fold points")
    pts = [tuple(int(x) for x in row) for row in affine_points(k + 1, q)]
    index = {p: i for i, p in enumerate(pts)}
    Bset = set(B)
    conflict = [0] * len(pts)
    for i, j in itertools.combinations(range(len(pts)), 2):
        if _direction(pts[i], pts[j], f) in Bset:
            conflict[i] |= 1 << j
            conflict[j] |= 1 << i
    b0 = B[0] + (0,)
    classes, seen = [], set()
    for P in pts:
        if P in seen:
            continue
        members = [tuple(f.add(a, f.mul(t, b)) for a, b in zip(P, b0)) for t in range(q)]
        seen.update(members)
        classes.append([index[m] for m in members])
    classes.sort()
    class_masks = [sum(1 << i for i in c) for c in classes]
    if size > len(classes):
        return TransversalSearch([], 0)
    found: list = []
    nodes = 0

    def dfs(ci, chosen, cand, skips):
        nonlocal nodes
        nodes += 1
        if budget is not None and nodes > budget:
            raise SearchBudgetExceeded(budget)
        if len(chosen) == size:
            found.append(tuple(sorted(pts[i] for i in chosen)))
            return
        need = size - len(chosen)
        if sum(1 for m in class_masks[ci:] if m & cand) < need:
            return
        local = cand & class_masks[ci]
        for i in classes[ci]:
            if (local >> i) & 1:
                dfs(ci + 1, chosen + [i], cand & ~conflict[i] & ~(1 << i), skips)
                if limit is not None and len(found) >= limit:
                    return
        if skips > 0:
            dfs(ci + 1, chosen, cand, skips - 1)

    dfs(0, [], (1 << len(pts)) - 1, len(classes) - size)
    return TransversalSearch(sorted(found), nodes)


def hyperplane_trace(S, field: Field):
    """If S spans a hyperplane H of PG(k+1, q), return (H, H & infinity); else None."""
    pts = [tuple(p) for p in S]
    dim = len(pts[0])
    if span_rank(pts, field) != dim - 1:
        return None
    H = normalize(null_space(pts, field, dim)[0], field)
    trace = H[:-1]
    if not any(trace):
        return None
    return H, normalize(trace, field)


def is_affine_hyperplane(S, field: Field) -> bool:
    """S is exactly the affine part of a hyperplane of PG(k+1, q)."""
    pts = [tuple(p) for p in S]
    q = field.q
    return hyperplane_trace(pts, field) is not None and len(set(pts)) == q ** (len(pts[0]) - 2)


def trace_extends(dual_arc: DualArc, trace) -> bool:
    trace = normalize(trace, dual_arc.field)
    if trace in dual_arc.hyperplanes:
        return False
    return is_arc(list(dual_arc.hyperplanes) + [trace], dual_arc.k, dual_arc.field)
