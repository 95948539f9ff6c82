"""General one-step extensions of MDS codes.

An extra column for an (n, k, q)-MDS code is the same thing as a colouring
of its words with q colours in which every colour class is an
(n, k-1, q)-MDS code. Two words agreeing in exactly k-1 places must get
different colours, so the search is an exact q-colouring of the
*agreement graph* with every class capped at q^(k-1) words.

Vertex sets are Python ints used as bitsets.
"""

from __future__ import annotations

import itertools
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import floor

import numpy as np

from .codes import Code, LinearCode, is_linear, is_mds
from .errors import ConventionMismatch, NotAnExtension, NotMDS, SearchBudgetExceeded
from .finite_field import prime_power
from .geometry import normalize, null_space, rref


def _mask_from_bool(arr: np.ndarray) -> int:
    return int.from_bytes(np.packbits(arr.astype(np.uint8), bitorder="little").tobytes(), "little")


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass
class AgreementGraph:
    """Words as vertices; an edge joins two words agreeing in exactly k-1 places."""

    size: int
    adjacency: list[int]

    def neighbors(self, v: int) -> list[int]:
        return list(_bits(self.adjacency[v]))

    def edges(self):
        for u in range(self.size):
            for v in _bits(self.adjacency[u] >> (u + 1)):
                yield u, u + 1 + v

    def edge_count(self) -> int:
        return sum(a.bit_count() for a in self.adjacency) // 2

    def is_complete(self) -> bool:
        return self.edge_count() == self.size * (self.size - 1) // 2


def _adjacency(words: np.ndarray, k: int) -> list[int]:
    adj = []
    for i in range(words.shape[0]):
        agree = (words == words[i]).sum(axis=1)
        agree[i] = -1
        adj.append(_mask_from_bool(agree == k - 1))
    return adj


def build_agreement_graph(code: Code) -> AgreementGraph:
    if not is_mds(code):
        raise NotMDS("agreement graph requires an MDS code")
    return AgreementGraph(code.size, _adjacency(code.words, code.k))


@dataclass
class ExtensionResult:
    columns: list[tuple[int, ...]]
    nodes: int
    tasks: int
    wall_time: float
    complete: bool = True

    @property
    def maximal(self) -> bool:
        return not self.columns


def canonical_column(column) -> tuple[int, ...]:
    """Relabel symbols by first appearance, so the first word gets 0."""
    relabel = {}
    out = []
    for s in column:
        if s not in relabel:
            relabel[s] = len(relabel)
        out.append(relabel[s])
    return tuple(out)


def relabelings(column, q: int) -> list[tuple[int, ...]]:
    return sorted({tuple(sigma[s] for s in column) for sigma in itertools.permutations(range(q))})


class _Colorer:
    """Exact backtracking colouring with DSATUR vertex choice.

    Colours are opened in increasing order, so each partition of the words
    is met exactly once. Invariants pruned on after every assignment:

    * each open class can still reach q^(k-1) words;
    * for each open class, position j and symbol s, the class can still hold
      exactly q^(k-2) words with s at j (each class is itself MDS);
    * every uncoloured word keeps at least one admissible colour.
    """

    def __init__(self, words, q: int, k: int, budget=None, limit=None):
        self.words = [tuple(w) for w in words]
        arr = np.asarray(words, dtype=np.int64)
        self.q, self.k = q, k
        self.N = len(self.words)
        self.n = arr.shape[1]
        self.cap = q ** (k - 1)
        self.sub = q ** (k - 2) if k >= 2 else None
        self.adj = _adjacency(arr, k)
        self.pos = [[_mask_from_bool(arr[:, j] == s) for s in range(q)] for j in range(self.n)]
        self.budget = budget
        self.limit = limit
        self.nodes = 0
        self.solutions: list[tuple[int, ...]] = []
        self.color = [-1] * self.N
        self.avail: list[int] = []
        self.size = [0] * q
        self.cnt = [[[0] * q for _ in range(self.n)] for _ in range(q)]
        self.uncolored = (1 << self.N) - 1

    # state changes ------------------------------------------------------
    def _snapshot(self):
        return (list(self.avail), self.uncolored)

    def _restore(self, snap, v, c):
        self.avail, self.uncolored = snap
        self.color[v] = -1
        self.size[c] -= 1
        if self.sub is not None:
            w = self.words[v]
            for j in range(self.n):
                self.cnt[c][j][w[j]] -= 1

    def _assign(self, v: int, c: int) -> bool:
        bit = 1 << v
        self.uncolored &= ~bit
        touched = []
        for i in range(len(self.avail)):
            if self.avail[i] & bit:
                self.avail[i] &= ~bit
                if i != c:
                    touched.append(i)
        if c == len(self.avail):
            self.avail.append(self.uncolored & ~self.adj[v])
        else:
            self.avail[c] &= ~self.adj[v]
        self.color[v] = c
        self.size[c] += 1
        w = self.words[v]
        if self.sub is not None:
            cnt_c = self.cnt[c]
            for j in range(self.n):
                s = w[j]
                cnt_c[j][s] += 1
                if cnt_c[j][s] == self.sub:
                    self.avail[c] &= ~self.pos[j][s]
        if self.size[c] == self.cap:
            self.avail[c] = 0
        return self._feasible(c, touched, w)

    def _feasible(self, c, touched, w) -> bool:
        cap, avail = self.cap, self.avail
        for i in range(len(avail)):
            if self.size[i] < cap and self.size[i] + avail[i].bit_count() < cap:
                return False
        if len(avail) == self.q:
            cover = 0
            for a in avail:
                cover |= a
            if self.uncolored & ~cover:
                return False
        if self.sub is not None:
            sub, pos = self.sub, self.pos
            if self.size[c] < cap:
                a, cnt_c = avail[c], self.cnt[c]
                for j in range(self.n):
                    pj, cj = pos[j], cnt_c[j]
                    for s in range(self.q):
                        if cj[s] < sub and cj[s] + (a & pj[s]).bit_count() < sub:
                            return False
            for i in touched:
                if self.size[i] == cap:
                    continue
                a, cnt_i = avail[i], self.cnt[i]
                for j in range(self.n):
                    s = w[j]
                    if cnt_i[j][s] < sub and cnt_i[j][s] + (a & pos[j][s]).bit_count() < sub:
                        return False
        return True

    # search ---------------------------------------------------------------
    def _option_masks(self):
        masks = list(self.avail)
        if len(masks) < self.q:
            masks.append(self.uncolored)
        return masks

    def _choose(self) -> int:
        """Uncoloured vertex with fewest admissible colours, smallest index on ties."""
        masks = self._option_masks()
        planes = [0, 0, 0, 0, 0]
        for m in masks:
            carry = m
            for b in range(len(planes)):
                nxt = planes[b] & carry
                planes[b] ^= carry
                carry = nxt
                if not carry:
                    break
        unc = self.uncolored
        for count in range(1, len(masks) + 1):
            sel = unc
            for b in range(len(planes)):
                sel &= planes[b] if (count >> b) & 1 else ~planes[b]
            if sel:
                return (sel & -sel).bit_length() - 1
        raise AssertionError("uncoloured vertex without options")  # pragma: no cover

    def _options(self, v: int) -> list[int]:
        opts = [i for i, a in enumerate(self.avail) if (a >> v) & 1]
        if len(self.avail) < self.q:
            opts.append(len(self.avail))
        return opts

    def _tick(self):
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise SearchBudgetExceeded(self.budget)

    def _done(self) -> bool:
        return self.limit is not None and len(self.solutions) >= self.limit

    def dfs(self):
        self._tick()
        if not self.uncolored:
            self.solutions.append(tuple(self.color))
            return
        v = self._choose()
        for c in self._options(v):
            snap = self._snapshot()
            if self._assign(v, c):
                self.dfs()
            self._restore(snap, v, c)
            if self._done():
                return

    def replay(self, prefix) -> bool:
        for v, c in prefix:
            if not self._assign(v, c):
                return False
        return True

    def frontier(self, levels: int) -> list[tuple]:
        """Assignment prefixes after ``levels`` genuine branchings, in DFS order."""
        out = []

        def walk(prefix, left):
            self._tick()
            if not self.uncolored:
                out.append(tuple(prefix))
                return
            v = self._choose()
            opts = self._options(v)
            if left == 0 and len(opts) > 1:
                out.append(tuple(prefix))
                return
            for c in opts:
                snap = self._snapshot()
                if self._assign(v, c):
                    walk(prefix + [(v, c)], left - (len(opts) > 1))
                self._restore(snap, v, c)

        walk([], levels)
        return out


def _budget(budget):
    if budget is not None:
        return budget
    env = os.environ.get("MDSFORGE_BUDGET")
    return int(env) if env else None


def _run_task(args):
    words, q, k, prefix, limit, budget = args
    col = _Colorer(words, q, k, budget=budget, limit=limit)
    if col.replay(prefix):
        col.dfs()
    return col.solutions, col.nodes


def find_extensions(code: Code, limit: int | None = None, raw_columns: bool = False,
                    jobs: int = 1, budget: int | None = None) -> ExtensionResult:
    """Every column whose addition keeps ``code`` MDS.

    By default one representative per partition of the words is returned,
    with symbols numbered by first appearance; ``raw_columns`` expands each
    to all q! relabelings. Entries follow the code's word order and the
    list is sorted. ``limit`` stops the search after that many partitions.
    """
    if not is_mds(code):
        raise NotMDS("only MDS codes can be extended")
    budget = _budget(budget)
    start = time.perf_counter()
    words = code.words.tolist()
    q, k = code.q, code.k
    if jobs <= 1:
        col = _Colorer(words, q, k, budget=budget, limit=limit)
        col.dfs()
        sols, nodes, tasks = col.solutions, col.nodes, 1
    else:
        splitter = _Colorer(words, q, k, budget=budget)
        prefixes = splitter.frontier(levels=1 if jobs <= 2 else 2)
        args = [(words, q, k, p, limit, budget) for p in prefixes]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_run_task, args))
        sols, nodes = [], splitter.nodes
        for s, nd in parts:
            sols.extend(s)
            nodes += nd
        tasks = len(prefixes)
    if limit is not None:
        sols = sols[:limit]
    canon = sorted({canonical_column(s) for s in sols})
    if raw_columns:
        canon = sorted({r for c in canon for r in relabelings(c, q)})
    elapsed = time.perf_counter() - start
    return ExtensionResult(canon, nodes, tasks, elapsed, complete=limit is None or len(sols) < limit)


def is_maximal(code: Code, jobs: int = 1, budget: int | None = None) -> bool:
    return find_extensions(code, limit=1, jobs=jobs, budget=budget).maximal


def brute_force_extensions(code: Code) -> list[tuple[int, ...]]:
    """All q^(q^k) candidate columns filtered by the MDS test; tiny codes only."""
    out = []
    for col in itertools.product(range(code.q), repeat=code.size):
        if is_mds(code.append_column(col)):
            out.append(col)
    return out


# LE classification ----------------------------------------------------------

@dataclass
class LEVerdict:
    """``certificate`` holds ``functional`` and ``constants`` when ``is_le``,
    otherwise ``violation = (u, v, w)`` and ``scalar`` c: words u and v share
    a symbol, yet w and w + c(v - u) do not."""

    is_le: bool
    certificate: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        return {"le": self.is_le, "certificate": self.certificate}


def _index_weights(q, k):
    return q ** np.arange(k - 1, -1, -1, dtype=np.int64)


def classify_le(base: LinearCode, column, check: bool = True) -> LEVerdict:
    """Decide whether the fibres of ``column`` are the parallel hyperplanes of one pencil.

    ``column`` is indexed by message vectors in lexicographic order. The
    field span of differences inside fibres is computed; it is a hyperplane
    exactly when the extension is LE, and its annihilator is the functional.
    """
    field = base.field
    q, k = field.q, base.k
    col = np.asarray(column, dtype=np.int64)
    code = base.code()
    if col.shape != (code.size,):
        raise NotAnExtension("column length does not match the code")
    if check and not is_mds(code.append_column(col)):
        raise NotAnExtension("column does not extend the code to an MDS code")
    msgs = base.messages()
    span: list[tuple[int, ...]] = []
    gens: list[tuple[int, int]] = []
    for s in range(q):
        idx = np.flatnonzero(col == s)
        if not len(idx):
            continue
        r = int(idx[0])
        for x in idx[1:]:
            d = tuple(field.sub_table[msgs[x], msgs[r]].tolist())
            grown = rref(span + [d], field)
            if len(grown) > len(span):
                span = grown
                gens.append((r, int(x)))
                if len(span) == k:
                    break
        if len(span) == k:
            break
    if len(span) == k - 1:
        phi = normalize(null_space(span, field, k)[0], field)
        constants = {}
        for s in range(q):
            idx = np.flatnonzero(col == s)
            constants[str(s)] = field.dot(phi, msgs[idx[0]].tolist())
        if len(set(constants.values())) == q:
            return LEVerdict(True, {"functional": list(phi), "constants": constants})
    weights = _index_weights(q, k)
    for u, v in gens:
        diff = field.sub_table[msgs[v], msgs[u]]
        for c in range(1, q):
            shift = field.mul_table[c, diff]
            moved = field.add_table[msgs, shift] @ weights
            bad = np.flatnonzero(col[moved] != col)
            if len(bad):
                return LEVerdict(False, {"violation": [u, v, int(bad[0])], "scalar": c})
    raise AssertionError("fibres not in a single coset structure yet no violation found")  # pragma: no cover


def check_le_certificate(base: LinearCode, column, verdict: LEVerdict) -> bool:
    field = base.field
    q, k = field.q, base.k
    col = np.asarray(column, dtype=np.int64)
    msgs = base.messages()
    cert = verdict.certificate
    if verdict.is_le:
        phi = cert["functional"]
        consts = {int(s): c for s, c in cert["constants"].items()}
        if len(set(consts.values())) != q or not any(phi):
            return False
        return all(field.dot(phi, m) == consts[int(s)] for m, s in zip(msgs.tolist(), col.tolist()))
    u, v, w = cert["violation"]
    c = cert["scalar"]
    if col[u] != col[v] or c == 0:
        return False
    shift = field.mul_table[c, field.sub_table[msgs[v], msgs[u]]]
    target = int(field.add_table[msgs[w], shift] @ _index_weights(q, k))
    return col[w] != col[target]


def le_by_relabeling(base: LinearCode, column) -> bool:
    """Oracle: some relabeling of the new column makes the augmented code linear."""
    code = base.code()
    field = base.field
    for sigma in itertools.permutations(range(field.q)):
        relabeled = np.asarray(sigma, dtype=np.int64)[np.asarray(column, dtype=np.int64)]
        if is_linear(code.append_column(relabeled), field):
            return True
    return False


# thresholds -----------------------------------------------------------------

def largest_proper_divisor(h: int) -> int:
    if h == 1:
        return 0
    return max(t for t in range(1, h) if h % t == 0)


def beta_threshold(q: int, k_code: int, convention: str = "general") -> int:
    """Length above which every extension of a linear code is LE.

    ``plane`` is the plane-only form (k_code = 3); ``general`` is the
    general form. Half-integer values (q = 2) are floored, which leaves the
    strict test ``n > beta`` unchanged for integer n.
    """
    p, h = prime_power(q)
    if k_code < 3:
        raise ValueError("thresholds are defined for k >= 3")
    t = largest_proper_divisor(h)
    prime = h == 1
    if convention == "plane":
        if k_code != 3:
            raise ConventionMismatch("the plane convention only applies to k = 3")
        value = Fraction(q + 1, 2) if prime else Fraction(q - p ** (h - t) + 1)
    elif convention == "general":
        value = Fraction(q - 3, 2) + k_code if prime else Fraction(q - p ** (h - t) + k_code - 1)
    else:
        raise ConventionMismatch(f"unknown convention {convention!r}")
    return floor(value)
