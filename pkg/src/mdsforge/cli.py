"""Command line front end: every subcommand prints one JSON run report.

Exit status is 0 on success, 2 when a verified property fails and 1 on
usage, input or schema errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

import numpy as np

from . import __version__, arcs, brs, checks, codes, extension, nets, redei, schemas
from .errors import MdsForgeError, SchemaError, SearchBudgetExceeded
from .finite_field import field_for_q
from .geometry import enumerate_points, point_count

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2

# arguments that never influence results
_VOLATILE = {"jobs", "out", "func", "report"}


def _budget():
    env = os.environ.get("MDSFORGE_BUDGET")
    return int(env) if env else None


def _digest(args, files: dict) -> str:
    payload = {
        "args": {k: v for k, v in sorted(vars(args).items()) if k not in _VOLATILE},
        "files": files,
    }
    blob = json.dumps(payload, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()


class Run:
    """Collects inputs, results and statistics for one invocation."""

    def __init__(self, args):
        self.args = args
        self.files: dict = {}
        self.field = None
        self.stats: dict = {}
        self.failed = False

    def load(self, name: str, path: str, schema: dict):
        obj = schemas.load(path, schema)
        self.files[name] = obj
        return obj

    def use_field(self, q: int):
        self.field = field_for_q(q)
        return self.field

    def report(self, results) -> dict:
        return {
            "schema_version": schemas.SCHEMA_VERSION,
            "command": self.args.command_path,
            "inputs_digest": _digest(self.args, self.files),
            "tool_version": __version__,
            "field": self.field.to_json() if self.field else None,
            "results": results,
            "search_stats": self.stats,
        }


def _timed(run: Run, fn, *a, **kw):
    start = time.perf_counter()
    out = fn(*a, **kw)
    run.stats["wall_time"] = time.perf_counter() - start
    return out


def _write(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load_code(run: Run, path: str):
    obj = run.load("code", path, schemas.CODE)
    try:
        code, lin = codes.code_from_json(obj)
    except (ValueError, KeyError) as exc:
        raise SchemaError(f"{path}: {exc}") from exc
    run.use_field(code.q)
    return code, lin


def _points(obj) -> tuple[list, str]:
    if "hyperplanes" in obj:
        return [tuple(p) for p in obj["hyperplanes"]], "hyperplanes"
    return [tuple(p) for p in obj["points"]], "points"


# handlers ------------------------------------------------------------------------

def cmd_field(run: Run, args):
    f = run.use_field(args.q)
    out = {"q": f.q, "p": f.p, "h": f.h, "modulus": list(f.modulus)}
    if args.tables:
        out["add"] = f.add_table.tolist()
        out["mul"] = f.mul_table.tolist()
    return out


def cmd_geometry(run: Run, args):
    f = run.use_field(args.q)
    out = {"k": args.k, "points": point_count(args.k, args.q)}
    if args.list:
        out["point_list"] = [list(p) for p in enumerate_points(args.k, f)]
    return out


def cmd_arc_max(run: Run, args):
    f = run.use_field(args.q)
    r = _timed(run, arcs.max_arc_search, args.k, f, jobs=args.jobs)
    run.stats["nodes"] = r.nodes
    return {"k": args.k, "m": r.m, "hyperoval": r.hyperoval, "witness": r.witness.to_json()["points"]}


def cmd_arc_nrc(run: Run, args):
    f = run.use_field(args.q)
    return arcs.normal_rational_curve(args.k, f).to_json()


def cmd_arc_check(run: Run, args):
    obj = run.load("arc", args.file, schemas.POINT_SET)
    f = run.use_field(obj["q"])
    pts, kind = _points(obj)
    ok = arcs.is_arc(pts, obj["k"], f)
    out = {"kind": kind, "n": len(pts), "is_arc": ok}
    if ok:
        arc = arcs.Arc.make(pts, obj["k"], f)
        ext = arcs.extending_elements(arc)
        out["extending"] = [list(p) for p in ext]
        out["complete"] = not ext
        if kind == "hyperplanes":
            prof = arcs.point_profile(arc.dualize())
            out["kfold_points"] = [list(p) for p in prof.kfold_points()]
    else:
        run.failed = True
    return out


def cmd_code_gen(run: Run, args):
    f = run.use_field(args.q)
    n = args.n
    if args.random:
        if n is None:
            raise SchemaError("--random needs --n")
        G = codes.random_mds_generator(f, args.k, n, np.random.default_rng(args.seed))
    else:
        G = codes.grs_generator(f, args.k, n)
    lin = codes.LinearCode(f, G)
    code = lin.code()
    doc = codes.code_to_json(code, lin)
    if args.out:
        _write(args.out, doc)
    ok = codes.is_mds(code)
    run.failed = not ok
    return {"code": doc, "is_mds": ok}


def cmd_code_verify(run: Run, args):
    code, lin = _load_code(run, args.code)
    try:
        ok = codes.is_mds(code)
    except MdsForgeError as exc:
        run.failed = True
        return {"is_mds": False, "reason": str(exc)}
    out = {"q": code.q, "k": code.k, "n": code.n, "is_mds": ok,
           "max_agreement": codes.max_agreement(code),
           "agreement_histogram": {str(t): c for t, c in codes.agreement_histogram(code).items()}}
    if code.size > 1:
        out["min_distance"] = codes.min_distance(code)
    out["linear"] = lin is not None or codes.is_linear(code, run.field)
    run.failed = not ok
    return out


def cmd_code_puncture(run: Run, args):
    code, _ = _load_code(run, args.code)
    pc = codes.puncture(code, args.position, args.symbol)
    doc = codes.code_to_json(pc)
    if args.out:
        _write(args.out, doc)
    return {"code": doc, "is_mds": codes.is_mds(pc)}


def cmd_extend(run: Run, args):
    code, lin = _load_code(run, args.code)
    res = _timed(run, extension.find_extensions, code, limit=args.limit, raw_columns=args.raw,
                 jobs=args.jobs, budget=_budget())
    run.stats.update(nodes=res.nodes, tasks=res.tasks)
    out = {"extensions": [list(c) for c in res.columns], "count": len(res.columns),
           "complete": res.complete, "maximal": res.maximal}
    if args.classify_le:
        if lin is None:
            raise SchemaError("--classify-le needs a code given by a generator")
        verdicts = [extension.classify_le(lin, c) for c in res.columns]
        out["le"] = [v.to_json() for v in verdicts]
        out["all_le"] = all(v.is_le for v in verdicts)
        if code.k >= 3:
            out["beta"] = {c: extension.beta_threshold(code.q, code.k, c)
                           for c in ("plane", "general") if c == "general" or code.k == 3}
    return out


def cmd_brs_verify(run: Run, args):
    if args.code:
        code, lin = _load_code(run, args.code)
        if lin is None:
            raise SchemaError("BRS verification needs a generator matrix")
        G, f = lin.generator, lin.field
    else:
        f = run.use_field(args.q)
        G = codes.grs_generator(f, args.k, args.n)
    scaffold = _timed(run, brs.build_scaffold, G, f)
    ok = brs.verify_identity_theorem(G, f, scaffold)
    run.failed = not ok
    return {"identical": ok, "scaffold": scaffold.summary()}


def cmd_brs_transversal(run: Run, args):
    obj = run.load("dual_arc", args.dual_arc, schemas.POINT_SET)
    f = run.use_field(obj["q"])
    lines, _ = _points(obj)
    dual = arcs.DualArc.make(lines, obj["k"], f)
    size = args.size or f.q ** dual.k
    res = _timed(run, brs.enumerate_transversal_sets, dual, size, budget=_budget(), limit=args.limit)
    run.stats["nodes"] = res.nodes
    rows = []
    for S in res.sets:
        tr = brs.hyperplane_trace(S, f)
        rows.append({"points": [list(p) for p in S],
                     "hyperplane": list(tr[0]) if tr else None,
                     "trace_extends": bool(tr) and brs.trace_extends(dual, tr[1])})
    return {"size": size, "count": len(rows), "sets": rows}


def cmd_redei_directions(run: Run, args):
    obj = run.load("function", args.function, schemas.FUNCTION)
    f = run.use_field(obj["q"])
    d = redei.directions_of_function(obj["values"], f)
    return {"directions": d, "count": len(d), "linear": len(d) == 1,
            "threshold": str(redei.epsilon(f.q))}


def cmd_redei_primitive(run: Run, args):
    obj = run.load("set", args.set, schemas.POINT_SET)
    f = run.use_field(obj["q"])
    pts, _ = _points(obj)
    mode = "exhaustive" if args.exhaustive else "auto"
    res = _timed(run, redei.is_primitive, pts, f, k=obj["k"], reference=obj.get("reference"),
                 mode=mode, budget=_budget())
    run.stats["nodes"] = res.nodes
    out = res.to_json()
    out["notes"] = res.notes
    return out


def cmd_redei_pq(run: Run, args):
    run.use_field(args.q)
    r = _timed(run, redei.smallest_nonprimitive, args.q, budget=_budget())
    return r.to_json()


def cmd_net_from_code(run: Run, args):
    code, _ = _load_code(run, args.code)
    net = nets.net_from_code(code)
    doc = net.to_json()
    if args.out:
        _write(args.out, doc)
    out = {"net": doc}
    if args.mols:
        out["mols"] = nets.mols_text(net)
    return out


def _load_net(run: Run, path):
    obj = run.load("net", path, schemas.NET)
    net = nets.Net.from_json(obj)
    run.use_field(net.q)
    return net


def cmd_net_verify(run: Run, args):
    net = _load_net(run, args.net)
    errs = nets.axiom_violations(net)
    run.failed = bool(errs)
    out = {"q": net.q, "n": net.n, "is_net": not errs, "violations": errs}
    if not errs and args.mols:
        out["mols"] = nets.mols_text(net)
    return out


def cmd_net_extend(run: Run, args):
    net = _load_net(run, args.net)
    classes = _timed(run, nets.extend_net, net, jobs=args.jobs, budget=_budget())
    return {"q": net.q, "n": net.n, "count": len(classes),
            "classes": [[list(line) for line in c] for c in classes]}


def cmd_theorem_check(run: Run, args):
    limit = checks.SLOW_MAX_Q if args.slow else checks.DEFAULT_MAX_Q
    if args.max_q > limit:
        raise SchemaError(f"--max-q {args.max_q} needs --slow (limit {limit})")
    only = None if args.suite == "all" else args.suite.split(",")
    if only:
        unknown = [c for c in only if c not in checks.REGISTRY]
        if unknown:
            raise SchemaError(f"unknown checks: {', '.join(unknown)}")
    if args.inject_fault and args.inject_fault not in checks.REGISTRY:
        raise SchemaError(f"unknown check {args.inject_fault!r}")
    results = checks.run_suite(max_q=args.max_q, jobs=args.jobs, inject_fault=args.inject_fault,
                               only=only, random_per_case=args.random_per_case)
    run.stats = {r.id: r.stats for r in results}
    run.failed = not all(r.passed for r in results)
    return {"passed": not run.failed, "checks": [r.result_json() for r in results]}


# parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mdsforge", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--report", help="also write the report to this file")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(parent, name, func, help_text):
        p = parent.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        return p

    p = add(sub, "field", cmd_field, "field parameters and tables")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--tables", action="store_true")

    p = add(sub, "geometry", cmd_geometry, "points of PG(k, q)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--list", action="store_true")

    arc = sub.add_parser("arc", help="arcs and dual arcs").add_subparsers(dest="action", required=True)
    p = add(arc, "max", cmd_arc_max, "exact largest arc size")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--jobs", type=int, default=1)
    p = add(arc, "nrc", cmd_arc_nrc, "normal rational curve")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k", type=int, default=2)
    p = add(arc, "check", cmd_arc_check, "arc test, extending elements, k-fold points")
    p.add_argument("--file", required=True)

    code = sub.add_parser("code", help="MDS codes").add_subparsers(dest="action", required=True)
    p = add(code, "gen", cmd_code_gen, "generate a GRS or random MDS code")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--grs", action="store_true", default=True)
    g.add_argument("--random", action="store_true")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p = add(code, "verify", cmd_code_verify, "MDS test and agreement statistics")
    p.add_argument("--code", required=True)
    p = add(code, "puncture", cmd_code_puncture, "fix a coordinate and delete it")
    p.add_argument("--code", required=True)
    p.add_argument("--position", type=int, required=True)
    p.add_argument("--symbol", type=int, required=True)
    p.add_argument("--out")

    p = add(sub, "extend", cmd_extend, "all one-column extensions of an MDS code")
    p.add_argument("--code", required=True)
    p.add_argument("--limit", type=int)
    p.add_argument("--raw", action="store_true", help="list every symbol relabeling")
    p.add_argument("--classify-le", action="store_true")
    p.add_argument("--jobs", type=int, default=1)

    b = sub.add_parser("brs", help="geometric construction of linear MDS codes").add_subparsers(
        dest="action", required=True)
    p = add(b, "verify", cmd_brs_verify, "rebuild a linear code from its scaffold")
    p.add_argument("--code")
    p.add_argument("--q", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int)
    p = add(b, "transversal", cmd_brs_transversal, "enumerate transversal sets of a dual arc")
    p.add_argument("--dual-arc", required=True)
    p.add_argument("--size", type=int)
    p.add_argument("--limit", type=int)

    r = sub.add_parser("redei", help="directions and primitive sets").add_subparsers(
        dest="action", required=True)
    p = add(r, "directions", cmd_redei_directions, "slopes determined by a function")
    p.add_argument("--function", required=True)
    p = add(r, "primitive", cmd_redei_primitive, "primitivity of a point set")
    p.add_argument("--set", required=True)
    p.add_argument("--exhaustive", action="store_true")
    p = add(r, "pq", cmd_redei_pq, "smallest non-primitive collinear set")
    p.add_argument("--q", type=int, required=True)

    nt = sub.add_parser("net", help="nets and their codes").add_subparsers(dest="action", required=True)
    p = add(nt, "from-code", cmd_net_from_code, "net of an (n, 2, q)-MDS code")
    p.add_argument("--code", required=True)
    p.add_argument("--mols", action="store_true")
    p.add_argument("--out")
    p = add(nt, "verify", cmd_net_verify, "check the net axioms")
    p.add_argument("--net", required=True)
    p.add_argument("--mols", action="store_true")
    p = add(nt, "extend", cmd_net_extend, "all parallel classes that can be appended")
    p.add_argument("--net", required=True)
    p.add_argument("--jobs", type=int, default=1)

    p = add(sub, "theorem-check", cmd_theorem_check, "run the check battery")
    p.add_argument("--suite", default="all", help="'all' or a comma separated list of check ids")
    p.add_argument("--max-q", type=int, default=checks.DEFAULT_MAX_Q)
    p.add_argument("--slow", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--random-per-case", type=int, default=100)
    p.add_argument("--inject-fault", metavar="CHECK_ID")
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    args.command_path = args.command + (f" {args.action}" if getattr(args, "action", None) else "")
    run = Run(args)
    try:
        results = args.func(run, args)
    except (SchemaError, SearchBudgetExceeded, MdsForgeError, ValueError, OSError) as exc:
        print(f"mdsforge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = run.report(results)
    text = json.dumps(report, indent=2, sort_keys=True)
    print(text)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text + "\n")
    return EXIT_FAILED if run.failed else EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
