"""Command line front end: ``apathep <verb> [options]``.

Verbs: epc, classify, gen-obstruction, verify-obstruction, solve, encode,
export-dot, pipeline.  Every verb prints a JSON object with ``--format json``
and an aligned table otherwise.  Exit status is 0 on success, 1 on invalid
input and 2 when a search explodes or a solver gives up.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import encode as enc
from . import linkage, milp
from .epcond import LambdaSet, check_ep1, check_ep2, check_epc, find_irreducible_params, find_obstruction_params, theorem14_family
from .group import GroupSpec, enumerate_abelian_groups
from .lgraph import GraphError, LabelledGraph, parse, serialize, to_dot
from .obstruct import (
    FLAG_NAMES,
    RIBBON_TAG,
    check_conditions,
    dump_ribboned,
    gen_fig1a,
    gen_fig1b,
    gen_from_params,
    load_ribboned,
)
from .paths import DEFAULT_CAP, PathExplosion, duality_report, max_packing, min_cover
from .walls import wall_to_dot

EXIT_OK, EXIT_INVALID, EXIT_EXPLOSION = 0, 1, 2
CLASSIFY_GUARD = 12
ENCODE_KINDS = ("ab", "weak-ab", "edges", "vertices", "modular", "h-feasible")
ENCODE_ALIASES = {"mod": "modular", "hfeasible": "h-feasible"}
COVER_ROUNDS = 1000
PIPELINE_TIME_LIMIT = 60.0  # seconds per half-integral feasibility solve


class Explosion(RuntimeError):
    """Work that exceeds a configured budget; maps to exit status 2."""


# -- output helpers ------------------------------------------------------------


def _table(rows: Sequence[Sequence], header: Sequence[str]) -> str:
    cells = [[str(c) for c in header]] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _pairs(d: dict) -> str:
    return _table([(k, _plain(v)) for k, v in d.items()], ("key", "value"))


def _plain(v) -> str:
    if isinstance(v, dict):
        return " ".join(f"{k}={_plain(x)}" for k, x in v.items())
    if isinstance(v, (list, tuple)):
        return " ".join(_plain(x) for x in v) if v else "-"
    if v is None:
        return "-"
    return str(v)


def _emit(args, report: dict, text: Optional[str] = None):
    if args.format == "json":
        out = json.dumps(report, indent=2, sort_keys=True) + "\n"
    else:
        out = text if text is not None else _pairs(report)
    sys.stdout.write(out)


def _write(path: str, text: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _lambda(spec: GroupSpec, text: Optional[str]) -> LambdaSet:
    if text is None:
        raise ValueError("--lambda is required")
    return LambdaSet.parse(spec, text) if text.strip() else LambdaSet(spec)


def _load(path: str):
    """Graph plus, for ribbon files, the RibbonedWall and any stored Lambda."""
    text = _read(path)
    if any(line.startswith(RIBBON_TAG) for line in text.splitlines()):
        r, lam = load_ribboned(text)
        return r.graph, r, lam
    return parse(text), None, None


def _graph_lambda(args):
    g, r, stored = _load(args.graph)
    lam = _lambda(g.spec, args.lambda_) if args.lambda_ is not None else stored
    if lam is None:
        raise ValueError("no --lambda given and the file stores none")
    return g, r, lam


def _vertex_list(g: LabelledGraph, text: str) -> list:
    out = [t.strip() for t in text.split(",") if t.strip()]
    bad = [v for v in out if v not in g]
    if bad:
        raise ValueError(f"unknown vertices {bad}")
    return out


# -- verbs -------------------------------------------------------------------------


def cmd_epc(args) -> int:
    spec = GroupSpec.parse(args.group)
    lam = _lambda(spec, args.lambda_)
    ep1, ep2 = check_ep1(lam), check_ep2(lam)
    verdict = check_epc(lam)
    report = {
        "group": str(spec),
        "lambda": str(lam),
        "satisfies": verdict.satisfies,
        "EP1": ep1.to_dict(),
        "EP2": ep2.to_dict(),
    }
    rows = [
        (name, v.satisfies, v.failed_axiom or "-", _plain([str(x) for x in v.witness] if v.witness else None))
        for name, v in (("EP1", ep1), ("EP2", ep2), ("EPC", verdict))
    ]
    text = f"{spec}  lambda={lam}\n" + _table(rows, ("check", "holds", "failed", "witness (a b c)"))
    _emit(args, report, text)
    return EXIT_OK


def classify_rows(max_order: int, singletons: bool = False) -> list[dict]:
    """EPC verdict for every Lambda (or every singleton) over every group up to ``max_order``."""
    rows = []
    for spec in enumerate_abelian_groups(max_order):
        elems = spec.elements()
        n = len(elems)
        if singletons:
            subsets = [(1 << i) for i in range(n)]
        else:
            subsets = range(1 << n)
        for bits in subsets:
            chosen = [elems[i] for i in range(n) if bits >> i & 1]
            lam = LambdaSet.of(spec, chosen)
            v = check_epc(lam)
            row = {
                "group": str(spec),
                "lambda": str(lam),
                "satisfies": v.satisfies,
                "failed_axiom": v.failed_axiom or "",
                "witness": " ".join(str(x) for x in v.witness) if v.witness else "",
                "theorem14": "",
            }
            if len(chosen) == 1:
                fam = theorem14_family(spec, chosen[0])
                row["theorem14"] = "agree" if fam == v.satisfies else "DISAGREE"
            rows.append(row)
    return rows


def cmd_classify(args) -> int:
    if args.max_order > CLASSIFY_GUARD and not args.force:
        raise ValueError(f"max order above {CLASSIFY_GUARD} needs --force")
    rows = classify_rows(args.max_order, args.singletons)
    buf = io.StringIO()
    fields = ["group", "lambda", "satisfies", "failed_axiom", "witness", "theorem14"]
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    if args.out:
        _write(args.out, buf.getvalue())
    counts = {
        "rows": len(rows),
        "satisfy": sum(r["satisfies"] for r in rows),
        "fail_EP1": sum(r["failed_axiom"] == "EP1" for r in rows),
        "fail_EP2": sum(r["failed_axiom"] == "EP2" for r in rows),
        "theorem14_checked": sum(bool(r["theorem14"]) for r in rows),
        "theorem14_disagree": sum(r["theorem14"] == "DISAGREE" for r in rows),
    }
    if args.format == "json":
        _emit(args, {"summary": counts, "rows": rows if not args.out else None, "out": args.out})
    elif args.out:
        _emit(args, counts)
    else:
        sys.stdout.write(buf.getvalue())
        sys.stdout.write(_pairs(counts))
    return EXIT_OK if counts["theorem14_disagree"] == 0 else EXIT_INVALID


def _instance(spec: GroupSpec, lam: LambdaSet, k: int, irreducible: bool, p_size, slack):
    verdict = check_epc(lam)
    if irreducible:
        params = find_irreducible_params(lam, obstruction=None if not verdict.satisfies else False)
    else:
        params = find_obstruction_params(lam)
    if params is None:
        return verdict, None, None
    return verdict, params, gen_from_params(params, k, lam, slack=slack, p_size=p_size)


def _figure(spec: GroupSpec, lam: LambdaSet, fig: str, n: int):
    # the two small obstructions built straight from an EP1 / EP2 witness
    verdict = check_ep1(lam) if fig == "1a" else check_ep2(lam)
    if verdict.satisfies:
        return verdict, None, None
    a, b, c = verdict.witness
    r = gen_fig1a(spec, a, b, c, n, lam) if fig == "1a" else gen_fig1b(spec, a, b, c, n, lam)
    return verdict, r.params(), r


def _params_dict(p) -> dict:
    return {"g": [str(x) for x in p.g], "kinds": list(p.kinds), "h1": str(p.h1), "h2": str(p.h2), "q_mode": p.q_mode}


def cmd_gen(args) -> int:
    spec = GroupSpec.parse(args.group)
    lam = _lambda(spec, args.lambda_)
    if args.fig != "params":
        verdict, params, r = _figure(spec, lam, args.fig, args.k)
    else:
        verdict, params, r = _instance(spec, lam, args.k, args.irreducible, args.p_size, args.slack)
    if r is None:
        if args.fig != "params":
            what = f"EP{'1' if args.fig == '1a' else '2'} witness"
        else:
            what = "irreducible parameters" if args.irreducible else "obstruction (the EP condition holds)"
        _emit(args, {"group": str(spec), "lambda": str(lam), "found": False}, f"no {what} for {spec}, lambda={lam}\n")
        return EXIT_INVALID
    text = dump_ribboned(r, lam)
    if args.out:
        _write(args.out, text)
    report = {
        "group": str(spec),
        "lambda": str(lam),
        "found": True,
        "params": _params_dict(params),
        "k": args.k,
        "vertices": r.graph.n,
        "edges": len(r.graph.edges),
        "terminals": len(r.graph.terminals),
        "out": args.out,
    }
    if args.out or args.format == "json":
        _emit(args, report)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    g, r, lam = _graph_lambda(args)
    if r is None:
        raise ValueError("verify-obstruction needs a ribbon file written by gen-obstruction")
    flags = check_conditions(r, lam)
    report = {"lambda": str(lam), "flags": flags}
    text = _table([(f, flags[f]) for f in FLAG_NAMES], ("condition", "holds"))
    _emit(args, report, text)
    return EXIT_OK


def _solve(g, r, lam, mode: str, method: str, cap: int, cover_rounds: int = COVER_ROUNDS) -> dict:
    disk = r is not None and method in ("auto", "disk")
    if method == "disk" and r is None:
        raise ValueError("method 'disk' needs a ribbon file")
    if mode == "cover":
        if disk:
            res = linkage.min_cover(linkage.from_ribboned(r), lam, max_rounds=cover_rounds)
        else:
            res = min_cover(g, lam, cap, _method(method))
        return res.to_dict()
    if mode == "integral" and disk:
        return linkage.max_packing(linkage.from_ribboned(r), lam).to_dict()
    full = "integral" if mode == "integral" else "half_integral"
    if r is not None and method == "auto":
        return milp.max_packing(g, lam, full).to_dict()
    return max_packing(g, lam, full, cap, _method(method)).to_dict()


def _method(method: str) -> str:
    return "auto" if method == "disk" else method


def cmd_solve(args) -> int:
    g, r, lam = _graph_lambda(args)
    if args.mode == "duality":
        nu, tau, half, exact = _duality(g, r, lam, args.method, args.cap, args.cover_rounds, args.time_limit)
        report = {"lambda": str(lam), "nu": nu, "nu_half": str(half), "nu_half_exact": exact, "tau": tau}
    else:
        report = {"lambda": str(lam), "mode": args.mode, **_solve(g, r, lam, args.mode, args.method, args.cap, args.cover_rounds)}
    if args.format == "json":
        _emit(args, report)
        return EXIT_OK
    if "paths" in report:
        text = f"{report['mode']} packing of size {report['size']}\n"
        text += _table([(i, " ".join(p)) for i, p in enumerate(report["paths"], 1)], ("#", "vertices"))
    elif "vertices" in report:
        text = f"cover of size {report['size']} (verified: {report['verified']})\n{_plain(report['vertices'])}\n"
    else:
        text = _pairs(report)
    sys.stdout.write(text)
    return EXIT_OK


def _duality(g, r, lam, method: str, cap: int, cover_rounds: int = COVER_ROUNDS, time_limit=None):
    """(nu, tau, nu_half, exact); ``exact`` is False when some half-integral size timed out."""
    if r is None or method not in ("auto", "disk"):
        return (*duality_report(g, lam, cap, _method(method)), True)
    dg = linkage.from_ribboned(r)
    nu = linkage.max_packing(dg, lam).size
    tau = linkage.min_cover(dg, lam, max_rounds=cover_rounds).size
    half, exact = 2 * nu, True
    # 2 tau bounds the half-integral size; walk down until a size is realised
    for size in range(2 * tau, 2 * nu, -1):
        try:
            found = milp.packing_of_size(g, lam, size, "half_integral", time_limit)
        except milp.SolverFailure:
            exact = False
            continue
        if found is not None:
            half = size
            break
    return nu, tau, Fraction(half, 2), exact


def _sets(text: str) -> list[list[str]]:
    return [[x.strip() for x in part.split(",") if x.strip()] for part in text.split(";")]


def _lambda_fn(g: LabelledGraph, text: str) -> dict:
    # "0-1:2,3;1-1:0" -> {(0, 1): [2, 3], (1, 1): [0]}
    out = {}
    for item in filter(None, (s.strip() for s in text.split(";"))):
        key, _, vals = item.partition(":")
        i, _, j = key.partition("-")
        out[(int(i), int(j))] = g.spec.parse_elements(vals) if vals.strip() else []
    return out


def cmd_encode(args) -> int:
    g = _load(args.graph)[0]
    lam = _lambda(g.spec, args.lambda_) if args.lambda_ is not None else None
    kind = ENCODE_ALIASES.get(args.kind, args.kind)
    if kind in ("ab", "weak-ab"):
        if lam is None or args.a is None or args.b is None:
            raise ValueError(f"{kind} needs --a, --b and --lambda")
        fn = enc.encode_ab_paths if kind == "ab" else enc.encode_weak_ab
        e = fn(g, _vertex_list(g, args.a), _vertex_list(g, args.b), lam)
    elif kind == "edges":
        if args.sets is None:
            raise ValueError("edges needs --sets, e.g. '0,1;2'")
        e = enc.encode_edge_sets(g, [[int(x) for x in s] for s in _sets(args.sets)], lam)
    elif kind == "vertices":
        if args.sets is None:
            raise ValueError("vertices needs --sets, e.g. 'a,b;c'")
        e = enc.encode_vertex_sets(g, [_vertex_list(g, ",".join(s)) for s in _sets(args.sets)], lam)
    elif kind == "modular":
        if args.modulus is None or args.residues is None:
            raise ValueError("modular needs --modulus and --residues")
        e = enc.encode_modular(g, args.modulus, [int(x) for x in args.residues.split(",") if x.strip()])
    else:
        if args.partition is None or args.h is None:
            raise ValueError("h-feasible needs --partition, --h and --h-lambda")
        parts = [_vertex_list(g, ",".join(s)) for s in _sets(args.partition)]
        h = [tuple(int(x) for x in f.split("-")) for f in args.h.split(";") if f.strip()]
        e = enc.encode_h_feasible(g, parts, h, _lambda_fn(g, args.h_lambda or ""))
    text = serialize(e.target)
    if args.out:
        _write(args.out, text)
    if args.map:
        tables = {
            "edge_map": {str(k): v for k, v in sorted(e.edge_map.items())},
            "vertex_map": {str(k): v for k, v in e.vertex_map.items()},
            "lambda_target": [str(x) for x in e.lambda_target],
        }
        _write(args.map, json.dumps(tables, indent=2) + "\n")
    report = {
        "kind": e.kind,
        "constraint": e.constraint,
        "target_group": str(e.target.spec),
        "target_lambda": [str(x) for x in e.lambda_target],
        "vertices": e.target.n,
        "edges": len(e.target.edges),
        "out": args.out,
    }
    if args.out or args.format == "json":
        _emit(args, report)
    else:
        sys.stdout.write(f"# lambda {','.join(str(x) for x in e.lambda_target)}\n" + text)
    return EXIT_OK


def cmd_dot(args) -> int:
    g, r, _ = _load(args.graph)
    text = to_dot(g, show_zero=args.show_zero) if r is None or args.plain else _ribbon_dot(r)
    if args.out:
        _write(args.out, text)
        _emit(args, {"out": args.out, "bytes": len(text.encode())})
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _ribbon_dot(r) -> str:
    # wall on its grid with handle ends numbered; exterior vertices left to the layout engine
    bars = list(r.handlebars) + ([r.q1] if r.q_mode == "equal" else [r.q1, r.q2])
    lines = wall_to_dot(r.wall, bars, name="ribboned").splitlines()
    body = [ln for ln in lines[:-1] if "[color=blue]" not in ln]
    wall = set(r.wall.vertices)
    for v in r.graph.vertices:
        if v not in wall:
            style = ', style="filled", fillcolor="black"' if v in r.graph.terminals else ""
            body.append(f'  "{v}" [shape=circle, width=0.15, label="", xlabel="{v}"{style}];')
    for e in r.graph.edges.values():
        if e.u not in wall or e.v not in wall:
            lab = f', label="{e.label}"' if e.label else ""
            body.append(f'  "{e.u}" -- "{e.v}" [color=blue{lab}];')
    return "\n".join(body) + "\n}\n"


def run_pipeline(
    group: str,
    lam_text: str,
    k: int,
    p_size=None,
    out_dir: Optional[str] = None,
    cover_rounds: int = COVER_ROUNDS,
    time_limit: Optional[float] = PIPELINE_TIME_LIMIT,
) -> dict:
    """EPC verdict, then an obstruction or irreducible instance, then nu / nu_half / tau."""
    spec = GroupSpec.parse(group)
    lam = _lambda(spec, lam_text)
    verdict = check_epc(lam)
    report: dict = {"group": str(spec), "lambda": str(lam), "k": k, "epc": verdict.to_dict()}
    if not len(lam):
        report.update(note="no allowable paths possible", nu=0, tau=0, nu_half="0")
        return report
    verdict, params, r = _instance(spec, lam, k, verdict.satisfies, p_size, 0)
    report["instance"] = "irreducible" if verdict.satisfies else "obstruction"
    if r is None:
        report.update(note="no irreducible parameters", params=None)
        return report
    report["params"] = _params_dict(params)
    report["flags"] = check_conditions(r, lam)
    report["size"] = {"vertices": r.graph.n, "edges": len(r.graph.edges), "terminals": len(r.graph.terminals)}
    nu, tau, half, exact = _duality(r.graph, r, lam, "auto", DEFAULT_CAP, cover_rounds, time_limit)
    report.update(nu=nu, tau=tau, nu_half=str(half), nu_half_exact=exact)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        stem = os.path.join(out_dir, f"{spec}_k{k}".replace("*", "x"))
        _write(stem + ".lg", dump_ribboned(r, lam))
        _write(stem + ".dot", _ribbon_dot(r))
        report["files"] = [stem + ".lg", stem + ".dot"]
    return report


def cmd_pipeline(args) -> int:
    report = run_pipeline(args.group, args.lambda_, args.k, args.p_size, args.out, args.cover_rounds, args.time_limit)
    if args.format == "json":
        _emit(args, report)
        return EXIT_OK
    head = f"{report['group']}  lambda={report['lambda']}  k={report['k']}\n"
    epc = report["epc"]
    head += f"EP condition: {'holds' if epc['satisfies'] else 'fails ' + epc['failed_axiom'] + ' at ' + _plain(epc['witness'])}\n"
    if "note" in report:
        head += report["note"] + "\n"
    if "params" in report and report["params"]:
        p = report["params"]
        head += f"{report['instance']} instance: g={_plain(p['g'])} kinds={_plain(p['kinds'])} h=({p['h1']},{p['h2']}) {p['q_mode']}\n"
    if "nu" in report:
        half = report["nu_half"] if report.get("nu_half_exact", True) else f">= {report['nu_half']}"
        head += _table([(report["nu"], half, report["tau"])], ("nu", "nu_half", "tau"))
    sys.stdout.write(head)
    return EXIT_OK


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="apathep", description="Allowable A-paths in group-labelled graphs.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0, help="accepted for reproducible scripting; all verbs are deterministic")
    sub = ap.add_subparsers(dest="verb", required=True)

    def graph_arg(p):
        p.add_argument("graph", nargs="?", help="graph file ('-' for stdin)")
        p.add_argument("--graph", dest="graph_opt", help="same as the positional argument")

    def group_args(p, need_k=False):
        p.add_argument("--group", required=True, help="e.g. Z6 or Z2*Z4")
        p.add_argument("--lambda", dest="lambda_", required=True, help="comma separated elements, e.g. 1,(0,1)")
        if need_k:
            p.add_argument("--k", type=int, default=2)

    p = sub.add_parser("epc", parents=[common], help="check the EP condition")
    group_args(p)
    p.set_defaults(func=cmd_epc)

    p = sub.add_parser("classify", parents=[common], help="EPC table over all small groups")
    p.add_argument("--max-order", type=int, default=8)
    p.add_argument("--singletons", action="store_true", help="only one-element Lambda")
    p.add_argument("--force", action="store_true", help=f"allow max order above {CLASSIFY_GUARD}")
    p.add_argument("--out", help="CSV path")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("gen-obstruction", parents=[common], help="build a ribboned wall")
    group_args(p, need_k=True)
    p.add_argument("--fig", choices=("1a", "1b", "params"), default="params", help="1a/1b build from an EP1/EP2 witness with n = k")
    p.add_argument("--irreducible", action="store_true", help="accept irreducible instances that are not obstructions")
    p.add_argument("--p-size", type=int, help="handles per W-handlebar (default k)")
    p.add_argument("--slack", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify-obstruction", parents=[common], help="conditions A1-A7 of a ribbon file")
    graph_arg(p)
    p.add_argument("--lambda", dest="lambda_")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", parents=[common], help="packing, cover or the full duality triple")
    graph_arg(p)
    p.add_argument("--lambda", dest="lambda_")
    p.add_argument("--mode", choices=("integral", "half", "cover", "duality"), default="integral")
    p.add_argument("--method", choices=("auto", "enumerate", "ilp", "disk"), default="auto")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--cover-rounds", type=int, default=COVER_ROUNDS, help="cutting-plane budget on ribbon files")
    p.add_argument("--time-limit", type=float, help="seconds per half-integral solve in duality mode")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("encode", parents=[common], help="rewrite a constrained path problem")
    p.add_argument("--kind", required=True, choices=ENCODE_KINDS + tuple(ENCODE_ALIASES))
    p.add_argument("--in", dest="graph", required=True, help="source graph file")
    p.add_argument("--map", help="JSON file for the back-map tables")
    p.add_argument("--lambda", dest="lambda_")
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--sets", help="';' separated sets of ',' separated items")
    p.add_argument("--modulus", type=int)
    p.add_argument("--residues")
    p.add_argument("--partition", help="';' separated parts")
    p.add_argument("--h", help="H edges, e.g. '0-1;1-1'")
    p.add_argument("--h-lambda", help="allowed lengths per H edge, e.g. '0-1:2,3;1-1:0'")
    p.add_argument("--out")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("export-dot", parents=[common], help="Graphviz output")
    graph_arg(p)
    p.add_argument("--plain", action="store_true", help="ignore ribbon metadata")
    p.add_argument("--show-zero", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_dot)

    p = sub.add_parser("pipeline", parents=[common], help="EPC verdict through solver duality table")
    group_args(p, need_k=True)
    p.add_argument("--p-size", type=int, help="handles per W-handlebar (default k)")
    p.add_argument("--out", help="directory for the instance and DOT files")
    p.add_argument("--cover-rounds", type=int, default=COVER_ROUNDS, help="cutting-plane budget for the cover")
    p.add_argument("--time-limit", type=float, default=PIPELINE_TIME_LIMIT, help="seconds per half-integral solve")
    p.set_defaults(func=cmd_pipeline)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "graph_opt"):
        if args.graph_opt and args.graph and args.graph_opt != args.graph:
            parser.error("graph given twice")
        args.graph = args.graph or args.graph_opt
        if not args.graph:
            parser.error("a graph file is required")
    try:
        return args.func(args)
    except (PathExplosion, milp.SolverFailure, Explosion) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EXPLOSION
    except (ValueError, GraphError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
