"""Battery of mechanical checks of the structural results the package implements.

Each check is a function of a :class:`CheckContext` returning a
:class:`CheckResult`. ``details`` holds only deterministic data; node counts
and timings go to ``stats`` so results compare byte for byte across runs
and worker counts. Passing ``fault=True`` corrupts the check's own fixture,
which must make that check, and only that check, fail.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import arcs, brs, codes, extension, nets, redei
from .finite_field import build_field, field_for_q, is_prime, prime_power

DEFAULT_MAX_Q = 5
SLOW_MAX_Q = 9
SEED = 20240917


@dataclass
class CheckContext:
    max_q: int = DEFAULT_MAX_Q
    jobs: int = 1
    fault: bool = False
    random_per_case: int = 100


@dataclass
class CheckResult:
    id: str
    claim: str
    params: dict
    passed: bool
    details: dict = dc_field(default_factory=dict)
    stats: dict = dc_field(default_factory=dict)

    def result_json(self) -> dict:
        return {"id": self.id, "claim": self.claim, "params": self.params,
                "passed": self.passed, "details": self.details}


@dataclass(frozen=True)
class Check:
    id: str
    claim: str
    run: object


REGISTRY: dict[str, Check] = {}


def register(check_id: str, claim: str):
    def deco(fn):
        REGISTRY[check_id] = Check(check_id, claim, fn)
        return fn
    return deco


def prime_powers(lo: int, hi: int) -> list[int]:
    out = []
    for q in range(lo, hi + 1):
        try:
            prime_power(q)
        except ValueError:
            continue
        out.append(q)
    return out


def fixture_linear_codes(max_q: int, max_q_k3: int | None = None) -> list[codes.LinearCode]:
    """GRS codes with k in {2, 3} and every length from k to q + 1, plus the
    hyperoval code at q = 4 when in range."""
    out = []
    for q in prime_powers(2, max_q):
        f = field_for_q(q)
        for k in (2, 3):
            if k == 3 and max_q_k3 is not None and q > max_q_k3:
                continue
            for n in range(k, q + 2):
                out.append(codes.LinearCode(f, codes.grs_generator(f, k, n)))
    if max_q >= 4:
        f = build_field(2, 2)
        g = codes.grs_generator(f, 3, 5)
        out.append(codes.LinearCode(f, tuple(row + (x,) for row, x in zip(g, (0, 1, 0)))))
    return out


def _label(lin: codes.LinearCode) -> str:
    return f"({lin.n},{lin.k},{lin.field.q})"


def _corrupt_word(code: codes.Code) -> codes.Code:
    w = code.words.copy()
    w[-1, 0] = (w[-1, 0] + 1) % code.q
    return codes.Code.from_words(code.q, code.k, w, order="given")


# BRS identity ------------------------------------------------------------------

@register("brs-identity", "the geometric labelling code equals alpha . G for MDS generators")
def check_brs_identity(ctx: CheckContext) -> CheckResult:
    rng = np.random.default_rng(SEED)
    qs = [q for q in (3, 4, 5, 7, 8, 9) if q <= ctx.max_q]
    cases, failures = 0, []
    for q in qs:
        f = field_for_q(q)
        for k in (2, 3):
            gens = []
            # k = 2, n = q + 1 covers the whole line at infinity; no free point exists
            top = q if k == 2 else q + 1
            for n in range(k, top + 1):
                gens.append(codes.grs_generator(f, k, n))
            for _ in range(ctx.random_per_case):
                n = int(rng.integers(k, top + 1))
                gens.append(codes.random_mds_generator(f, k, n, rng))
            for i, G in enumerate(gens):
                scaffold = brs.build_scaffold(G, f)
                if ctx.fault and cases == 0:
                    pencils = list(scaffold.pencils)
                    first = pencils[0]
                    pencils[0] = tuple((h, first[(j + 1) % len(first)][1]) for j, (h, _) in enumerate(first))
                    scaffold = brs.BrsScaffold(**{**scaffold.__dict__, "pencils": tuple(pencils)})
                cases += 1
                if not brs.verify_identity_theorem(G, f, scaffold=scaffold):
                    failures.append({"q": q, "k": k, "generator": [list(r) for r in G]})
    return CheckResult("brs-identity", REGISTRY["brs-identity"].claim,
                       {"q": qs, "k": [2, 3], "random_per_case": ctx.random_per_case, "seed": SEED},
                       not failures, {"cases": cases, "failures": failures[:5]})


# fixed positions ---------------------------------------------------------------------

@register("fixed-position-counts", "fixing t <= k coordinates of an MDS code leaves exactly q^(k-t) words")
def check_fixed_positions(ctx: CheckContext) -> CheckResult:
    top = min(ctx.max_q, 4)
    corpus = [lin.code() for lin in fixture_linear_codes(top)]
    if ctx.fault:
        corpus[0] = _corrupt_word(corpus[0])
    bad, total = [], 0
    for code in corpus:
        q, k = code.q, code.k
        for t in range(0, k + 1):
            weights = q ** np.arange(t, dtype=np.int64)
            for pos in itertools.combinations(range(code.n), t):
                keys = code.words[:, list(pos)] @ weights
                _, cnt = np.unique(keys, return_counts=True)
                total += q ** t
                if len(cnt) != q ** t or (cnt != q ** (k - t)).any():
                    bad.append({"code": f"({code.n},{k},{q})", "positions": list(pos)})
    return CheckResult("fixed-position-counts", REGISTRY["fixed-position-counts"].claim,
                       {"max_q": top, "codes": len(corpus)}, not bad,
                       {"patterns_checked": total, "violations": bad[:5]})


# Singleton equality ----------------------------------------------------------------

def _pairwise_min_distance(words: np.ndarray) -> int:
    best = words.shape[1]
    for i in range(len(words) - 1):
        d = (words[i + 1:] != words[i]).sum(axis=1).min()
        best = min(best, int(d))
    return best


@register("singleton-distance", "every MDS code in the corpus has minimum distance n - k + 1")
def check_singleton(ctx: CheckContext) -> CheckResult:
    corpus = [lin.code() for lin in fixture_linear_codes(ctx.max_q, max_q_k3=min(ctx.max_q, 5))]
    if ctx.max_q >= 3:
        corpus.append(nets.code_from_net(nets.affine_plane_net(build_field(3))))
    if ctx.fault:
        corpus[-1] = _corrupt_word(corpus[-1])
    bad = []
    for code in corpus:
        label = f"({code.n},{code.k},{code.q})"
        if not codes.is_mds(code):
            bad.append({"code": label, "reason": "not MDS"})
            continue
        d = _pairwise_min_distance(code.words)
        if not d == code.n - code.k + 1 == codes.min_distance(code):
            bad.append({"code": label, "d": d})
    return CheckResult("singleton-distance", REGISTRY["singleton-distance"].claim,
                       {"max_q": ctx.max_q}, not bad, {"codes": len(corpus), "violations": bad[:5]})


# arc table ----------------------------------------------------------------------

ARC_TABLE = {2: 4, 3: 4, 4: 6, 5: 6}


@register("plane-arc-sizes", "largest arcs of PG(2, q): q + 2 for even q, q + 1 for odd q")
def check_arc_table(ctx: CheckContext) -> CheckResult:
    qs = [q for q in ARC_TABLE if q <= ctx.max_q]
    found, witnesses, nodes, valid = {}, {}, 0, True
    for q in qs:
        r = arcs.max_arc_search(2, field_for_q(q), jobs=ctx.jobs)
        nodes += r.nodes
        found[q] = r.m
        witnesses[q] = [list(p) for p in r.witness.points]
        valid &= arcs.is_arc(r.witness.points, 2, field_for_q(q)) and r.witness.n == r.m
    expected = dict(ARC_TABLE)
    if ctx.fault and qs:
        expected[qs[0]] += 1
    ok = valid and all(found[q] == expected[q] for q in qs)
    return CheckResult("plane-arc-sizes", REGISTRY["plane-arc-sizes"].claim, {"q": qs}, ok,
                       {"m": {str(q): found[q] for q in qs}, "witness": {str(q): witnesses[q] for q in qs}},
                       {"nodes": nodes})


# hyperoval extension ----------------------------------------------------------------

@register("conic-extends-to-hyperoval", "the (5,3,4) conic code has extensions, all LE, ending maximal")
def check_hyperoval(ctx: CheckContext) -> CheckResult:
    if ctx.max_q < 4:
        return CheckResult("conic-extends-to-hyperoval", REGISTRY["conic-extends-to-hyperoval"].claim,
                           {"q": 4}, True, {"skipped": "max_q < 4"})
    f = build_field(2, 2)
    lin = codes.LinearCode(f, codes.grs_generator(f, 3, 5))
    code = lin.code()
    res = extension.find_extensions(code, jobs=ctx.jobs)
    verdicts, maximal = [], []
    for col in res.columns:
        v = extension.classify_le(lin, col)
        verdicts.append(v.is_le and extension.check_le_certificate(lin, col, v))
        ext = code.append_column(col)
        if ctx.fault:
            # a constant column destroys the MDS property
            ext = ext.append_column([0] * code.size)
        try:
            maximal.append(extension.is_maximal(ext, jobs=ctx.jobs))
        except extension.NotMDS:
            maximal.append(False)
    ok = bool(res.columns) and all(verdicts) and all(maximal)
    return CheckResult("conic-extends-to-hyperoval", REGISTRY["conic-extends-to-hyperoval"].claim,
                       {"code": "(5,3,4) GRS"}, ok,
                       {"extensions": len(res.columns), "all_le": all(verdicts), "extended_maximal": maximal},
                       {"nodes": res.nodes})


@register("odd-conic-maximal", "the (6,3,5) conic code admits no extension")
def check_odd_conic(ctx: CheckContext) -> CheckResult:
    if ctx.max_q < 5:
        return CheckResult("odd-conic-maximal", REGISTRY["odd-conic-maximal"].claim,
                           {"q": 5}, True, {"skipped": "max_q < 5"})
    f = build_field(5)
    n = 5 if ctx.fault else 6
    code = codes.LinearCode(f, codes.grs_generator(f, 3, n)).code()
    res = extension.find_extensions(code, jobs=ctx.jobs)
    return CheckResult("odd-conic-maximal", REGISTRY["odd-conic-maximal"].claim,
                       {"code": f"({n},3,5) GRS"}, res.maximal and res.complete,
                       {"extensions": len(res.columns)}, {"nodes": res.nodes})


# LE classification ----------------------------------------------------------------

@register("long-extensions-are-le",
          "extensions of linear codes longer than the threshold are LE; fibre test matches relabeling oracle")
def check_le(ctx: CheckContext) -> CheckResult:
    top = min(ctx.max_q, 5)
    # (3, 3, q) is the whole space; its extensions are all Latin cubes
    corpus = [lin for lin in fixture_linear_codes(top) if lin.n > 3 or lin.k < 3]
    above, disagreements, nodes, compared = [], [], 0, 0
    for lin in corpus:
        q, k, n = lin.field.q, lin.k, lin.n
        res = extension.find_extensions(lin.code(), jobs=ctx.jobs)
        nodes += res.nodes
        cols = list(res.columns)
        if ctx.fault and lin.k == 2 and lin.n == 2 and q == 3 and cols:
            cols[0] = tuple((s + 1) % q if i == 0 else s for i, s in enumerate(cols[0]))
        verdicts = []
        for col in cols:
            try:
                v = extension.classify_le(lin, col)
            except extension.NotAnExtension:
                disagreements.append({"code": _label(lin), "column": list(col), "reason": "not an extension"})
                continue
            oracle = extension.le_by_relabeling(lin, col)
            compared += 1
            if v.is_le != oracle or not extension.check_le_certificate(lin, col, v):
                disagreements.append({"code": _label(lin), "column": list(col)})
            verdicts.append(v.is_le)
        if k >= 3 and cols:
            betas = [extension.beta_threshold(q, k, c) for c in ("plane", "general")
                     if not (c == "plane" and k != 3)]
            if all(n > b for b in betas):
                above.append({"code": _label(lin), "betas": betas, "extensions": len(cols),
                              "all_le": all(verdicts)})
    ok = not disagreements and all(a["all_le"] for a in above)
    return CheckResult("long-extensions-are-le", REGISTRY["long-extensions-are-le"].claim,
                       {"max_q": top, "codes": len(corpus)}, ok,
                       {"above_threshold": above, "oracle_comparisons": compared,
                        "disagreements": disagreements[:5]}, {"nodes": nodes})


# brute-force extension oracle ----------------------------------------------------------

@register("extension-search-exact", "backtracking extension search equals the filter of all columns")
def check_bruteforce(ctx: CheckContext) -> CheckResult:
    top = min(ctx.max_q, 3)
    corpus = []
    for q in prime_powers(2, top):
        f = field_for_q(q)
        for k in (1, 2):
            for n in range(k, q + 2 if k == 2 else 3):
                corpus.append(codes.LinearCode(f, codes.grs_generator(f, k, n)).code())
    if top >= 3:
        f = build_field(3)
        base = codes.LinearCode(f, codes.grs_generator(f, 2, 3)).code()
        corpus.append(codes.apply_equivalence(base, [codes.EquivalenceMove("symbol", (0, (1, 2, 0)))]))
    bad, rows = [], []
    for code in corpus:
        fast = extension.find_extensions(code, raw_columns=True).columns
        slow = extension.brute_force_extensions(code)
        if ctx.fault and not rows:
            slow = slow[1:]
        rows.append(len(slow))
        if sorted(fast) != sorted(slow):
            bad.append(f"({code.n},{code.k},{code.q})")
    return CheckResult("extension-search-exact", REGISTRY["extension-search-exact"].claim,
                       {"max_q": top, "codes": len(corpus)}, not bad,
                       {"extension_counts": rows, "mismatches": bad})


# primitivity ----------------------------------------------------------------

@register("primitive-sets", "smallest non-primitive sizes, bound/exhaustive agreement, direction counts")
def check_primitive(ctx: CheckContext) -> CheckResult:
    details, ok = {}, True
    sizes = {}
    for q in prime_powers(2, min(ctx.max_q, 5)):
        r = redei.smallest_nonprimitive(q)
        sizes[str(q)] = r.to_json()["value"]
        if r.witness_points:
            chart = redei.standard_chart(2, field_for_q(q))
            ok &= redei.check_witness(r.witness_points, r.witness_set, chart)
        ok &= r.value is None or r.value >= r.lower_bound
    expected3 = 4 if ctx.fault else 3
    ok &= sizes.get("3", 3) == expected3
    details["smallest_nonprimitive"] = sizes
    inconsistent = 0
    for q in prime_powers(2, min(ctx.max_q, 4)):
        f = field_for_q(q)
        line = redei.standard_chart(2, f).at_infinity()
        for r in range(len(line) + 1):
            for A in itertools.combinations(line, r):
                b = redei.is_primitive(A, f, mode="bound")
                if b.is_primitive is None:
                    continue
                e = redei.is_primitive(A, f, mode="exhaustive")
                inconsistent += b.is_primitive != e.is_primitive
    details["bound_exhaustive_conflicts"] = inconsistent
    ok &= inconsistent == 0
    few = {}
    for q in [p for p in prime_powers(3, min(ctx.max_q, 5)) if is_prime(p)]:
        f = field_for_q(q)
        worst = None
        for vals in itertools.product(range(q), repeat=q):
            d = redei.directions_of_function(vals, f)
            if len(d) > 1 and (worst is None or len(d) < worst):
                worst = len(d)
        few[str(q)] = worst
        ok &= worst >= (q + 3) // 2
    details["fewest_directions_nonlinear"] = few
    return CheckResult("primitive-sets", REGISTRY["primitive-sets"].claim,
                       {"max_q": min(ctx.max_q, 5)}, bool(ok), details)


@register("pencil-invariance", "a collinear set is primitive in one plane through its line iff in all")
def check_pencil(ctx: CheckContext) -> CheckResult:
    f = build_field(3)
    line = redei.standard_chart(2, f).at_infinity()
    violations, rows = [], []
    for r in range(1, 4):
        for A in itertools.combinations(line, r):
            verdicts = redei.pencil_verdicts(A, f)
            flags = [v.result.is_primitive for v in verdicts]
            if ctx.fault and r == 3:
                flags[1] = not flags[1]
            base = verdicts[0]
            transported_ok = True
            if not base.result.is_primitive:
                for v in verdicts[1:]:
                    img = redei.transport(base.result.witness, base.plane, v.plane, f)
                    chart = redei.plane_chart(v.plane, redei.line_functional(v.plane), f)
                    transported_ok &= redei.check_witness(img, redei.embed_line_points(A), chart)
            rows.append([len(A), flags[0]])
            if len(set(flags)) != 1 or not transported_ok:
                violations.append([list(a) for a in A])
    return CheckResult("pencil-invariance", REGISTRY["pencil-invariance"].claim,
                       {"q": 3, "max_size": 3}, not violations,
                       {"sets": len(rows), "nonprimitive": sum(1 for _, p in rows if not p),
                        "violations": violations[:5]})


# transversal sets --------------------------------------------------------------------

@register("transversal-sets-are-planes",
          "q^k-point transversal sets are affine hyperplanes whose trace extends the dual arc")
def check_transversal(ctx: CheckContext) -> CheckResult:
    f = build_field(3)
    cases = {
        "dual conic": [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)],
        "dual triangle": [(1, 0, 0), (0, 1, 0), (0, 0, 1)],
    }
    details, ok, nodes = {}, True, 0
    for name, lines in cases.items():
        dual = arcs.DualArc.make(lines, 2, f)
        prims = redei.primitive_members(dual, method="exhaustive")
        res = brs.enumerate_transversal_sets(dual, f.q ** 2)
        nodes += res.nodes
        sets = list(res.sets)
        if ctx.fault and name == "dual triangle":
            sets.append(tuple(sorted(brs.affine_points(3, 3)[:9].tolist())))
        good = 0
        for S in sets:
            tr = brs.hyperplane_trace(S, f)
            if tr and brs.is_affine_hyperplane(S, f) and brs.trace_extends(dual, tr[1]):
                good += 1
        ok &= good == len(sets)
        details[name] = {"primitive_members": sum(v.is_primitive for v in prims),
                         "sets": len(sets), "planes_with_extending_trace": good}
    return CheckResult("transversal-sets-are-planes", REGISTRY["transversal-sets-are-planes"].claim,
                       {"q": 3, "k": 2}, bool(ok), details, {"nodes": nodes})


# nets --------------------------------------------------------------------------

@register("net-code-correspondence", "nets of degree n and (n,2,q)-MDS codes determine each other")
def check_nets(ctx: CheckContext) -> CheckResult:
    qs = [q for q in (2, 3, 4) if q <= ctx.max_q]
    bad, cases = [], 0
    for q in qs:
        f = field_for_q(q)
        for n in range(3, q + 2):
            code = codes.LinearCode(f, codes.grs_generator(f, 2, n)).code()
            net = nets.net_from_code(code)
            back = nets.code_from_net(net)
            if ctx.fault and q == qs[-1] and n == 3:
                back = _corrupt_word(back)
            same_code = all(extension.canonical_column(a) == extension.canonical_column(b)
                            for a, b in zip(code.words.T.tolist(), back.words.T.tolist()))
            try:
                again = nets.net_from_code(back)
                same_net = again == net
            except Exception:
                same_net = False
            ext_net = nets.extend_net(net)
            ext_code = [nets.class_from_column(c, q) for c in extension.find_extensions(code).columns]
            matches = sorted(ext_code) == ext_net if n < q + 1 else ext_net == []
            cases += 1
            if not (same_code and same_net and matches):
                bad.append({"q": q, "n": n})
        too_many = nets.Net(q, nets.affine_plane_net(f).classes + (nets.affine_plane_net(f).classes[0],))
        if nets.is_net(too_many):
            bad.append({"q": q, "reason": "degree q+2 accepted"})
    return CheckResult("net-code-correspondence", REGISTRY["net-code-correspondence"].claim,
                       {"q": qs}, not bad, {"cases": cases, "failures": bad})


def run_suite(max_q: int = DEFAULT_MAX_Q, jobs: int = 1, inject_fault: str | None = None,
              only=None, random_per_case: int = 100) -> list[CheckResult]:
    """Run every registered check (or those in ``only``) in registration order."""
    if inject_fault is not None and inject_fault not in REGISTRY:
        raise KeyError(f"unknown check {inject_fault!r}")
    out = []
    for cid, check in REGISTRY.items():
        if only and cid not in only:
            continue
        ctx = CheckContext(max_q=max_q, jobs=jobs, fault=cid == inject_fault,
                           random_per_case=random_per_case)
        start = time.perf_counter()
        res = check.run(ctx)
        res.stats["wall_time"] = time.perf_counter() - start
        out.append(res)
    return out
