"""Batch command-line frontend.

Subcommands: height, witt-identities, box-check, product-demo, curve-scan,
cache.  Reports are JSON objects with per-record results; records fail in
isolation and the exit code reflects the worst severity seen (0 clean,
1 verdict failures, 2 input errors).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .algebra import tensor_algebra
from .cartier import compare_box_with_witt
from .cech import DEFAULT_BOUND, cubic_height
from .corpus import (algebra_from_payload, curve_from_payload,
                     demo_corpus_lines, load_corpus)
from .curves import (am_height_cy, count_points, frobenius_trace, hasse_invariant,
                     p_rank_elliptic, product_height_report, scan_smooth_cubics)
from .errors import ParseError, WittsplitError
from .identities import identity_suite
from .product import build_product_splitting, nonsplit_tensor_certificate, \
    verify_quasi_splitting
from .splitting import SplittingWitness, height_artinian, is_f_split, is_quasi_f_split
from .witt import check_exact_sequences
from . import wittpoly

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_INPUT = 2


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _report_skeleton(command: str, flags: dict) -> dict:
    return {
        "tool": {"name": "wittsplit", "version": __version__},
        "command": command,
        "flags": flags,
        "results": [],
        "summary": {},
        "cache": {},
    }


def _finish_report(report: dict, out_path: str | None, t0: float) -> None:
    statuses = [r.get("status") for r in report["results"]]
    report["summary"] = {
        "records": len(statuses),
        "pass": statuses.count("pass"),
        "fail": statuses.count("fail"),
        "error": statuses.count("error"),
    }
    report["cache"] = wittpoly.cache_stats()
    report["results"].sort(key=lambda r: str(r.get("id", "")))
    stable = json.dumps(report, sort_keys=True, indent=2)
    report["timing"] = {"seconds": round(time.time() - t0, 3)}
    full = json.dumps(report, sort_keys=True, indent=2)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(full + "\n")
    else:
        print(full)


def _exit_code(report: dict) -> int:
    if report["summary"].get("error"):
        return EXIT_INPUT
    if report["summary"].get("fail"):
        return EXIT_VERDICT
    return EXIT_OK


def _check_expected(result: dict, expected: dict) -> None:
    """Regression hook: recomputed verdicts must match stored ones."""
    for key, want in expected.items():
        got = result.get(key)
        if got != want:
            result["status"] = "fail"
            result.setdefault("mismatches", []).append(
                {"field": key, "expected": want, "got": got})


def _height_one_record(args_tuple):
    rec, nmax, bound, method = args_tuple
    result = {"id": rec.id, "kind": rec.kind, "status": "pass"}
    try:
        if rec.kind == "algebra":
            algebra = algebra_from_payload(rec.payload)
            rep = height_artinian(algebra, n_max=nmax, subject=rec.id)
            result.update(rep.to_jsonable())
            result["height"] = rep.height
        elif rec.kind == "curve":
            curve = curve_from_payload(rec.payload, name=rec.id)
            if method == "oracle":
                rep = {"subject": rec.id, "method": "am-oracle",
                       "height": am_height_cy(curve.polynomial(), curve.p)}
                result.update(rep)
            else:
                rep = cubic_height(curve, n_max=min(nmax, 2), bound=bound,
                                   subject=rec.id)
                result.update(rep.to_jsonable())
                oracle = 2 - p_rank_elliptic(curve)
                result["oracle_height"] = oracle
                result["oracle_agrees"] = oracle == rep.height
                if not result["oracle_agrees"]:
                    result["status"] = "fail"
        elif rec.kind == "abelian-product":
            factors = [curve_from_payload(pl) for pl in rec.payload["factors"]]
            rep = product_height_report(factors, subject=rec.id)
            result.update(rep.to_jsonable())
        else:
            raise ParseError(f"kind {rec.kind!r} has no height procedure")
        _check_expected(result, rec.expected)
    except ParseError as exc:
        result["status"] = "error"
        result["error"] = str(exc)
    except WittsplitError as exc:
        result["status"] = "fail"
        result["error"] = f"{type(exc).__name__}: {exc}"
    return result


def cmd_height(args) -> int:
    t0 = time.time()
    flags = {"nmax": args.nmax, "pole_bound": args.pole_bound,
             "method": args.method, "jobs": args.jobs}
    report = _report_skeleton("height", flags)
    try:
        records = load_corpus(args.corpus)
        report["input"] = {"path": args.corpus,
                           "sha256_16": _digest(open(args.corpus).read())}
    except (OSError, ParseError) as exc:
        report["results"].append({"id": "<corpus>", "status": "error",
                                  "error": str(exc)})
        _finish_report(report, args.out, t0)
        return EXIT_INPUT
    tasks = [(rec, args.nmax, args.pole_bound, args.method) for rec in records]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            report["results"] = list(pool.map(_height_one_record, tasks))
    else:
        report["results"] = [_height_one_record(t) for t in tasks]
    _finish_report(report, args.out, t0)
    return _exit_code(report)


def cmd_witt_identities(args) -> int:
    t0 = time.time()
    flags = {"p": args.p, "nmax": args.nmax, "algebra": args.algebra}
    report = _report_skeleton("witt-identities", flags)
    from .corpus import WITT_SUITE_ALGEBRAS, builtin_algebra
    names = [args.algebra] if args.algebra else list(WITT_SUITE_ALGEBRAS)
    for name in names:
        try:
            algebra = builtin_algebra(name)
        except ParseError as exc:
            report["results"].append({"id": name, "status": "error",
                                      "error": str(exc)})
            continue
        if args.p and algebra.p != args.p:
            continue
        for n in range(1, args.nmax + 1):
            rec = {"id": f"{name}|n={n}", "status": "pass"}
            suite = identity_suite(algebra, n)
            rec.update(suite.to_jsonable())
            if not suite.passed:
                rec["status"] = "fail"
            if n >= 2:
                seq = check_exact_sequences(algebra, n)
                rec["exact_sequences"] = {
                    "first_exact": seq.first_exact,
                    "second_exact": seq.second_exact,
                    "f_injective": seq.f_injective,
                    "reduced": seq.reduced,
                    "dim_bookkeeping": seq.dim_bookkeeping,
                }
                if not seq.second_exact or (seq.reduced and not seq.first_exact):
                    rec["status"] = "fail"
            report["results"].append(rec)
    _finish_report(report, args.out, t0)
    return _exit_code(report)


def cmd_box_check(args) -> int:
    t0 = time.time()
    flags = {"nmax": args.nmax}
    report = _report_skeleton("box-check", flags)
    try:
        records = load_corpus(args.corpus) if args.corpus else None
    except (OSError, ParseError) as exc:
        report["results"].append({"id": "<corpus>", "status": "error",
                                  "error": str(exc)})
        _finish_report(report, args.out, t0)
        return EXIT_INPUT
    pairs = []
    if records:
        for rec in records:
            if rec.kind != "cartier-pair":
                continue
            try:
                a = algebra_from_payload(rec.payload["A"])
                b = algebra_from_payload(rec.payload["B"])
                n = int(rec.payload.get("n", args.nmax))
                pairs.append((rec.id, a, b, n, rec.expected))
            except ParseError as exc:
                report["results"].append({"id": rec.id, "status": "error",
                                          "error": str(exc)})
    else:
        from .corpus import BOX_CORPUS_ALGEBRAS, builtin_algebra
        for name_a in BOX_CORPUS_ALGEBRAS:
            for name_b in BOX_CORPUS_ALGEBRAS:
                a = builtin_algebra(name_a)
                b = builtin_algebra(name_b)
                if a.p != b.p:
                    continue
                pairs.append((f"{name_a}(x){name_b}|n={args.nmax}",
                              a, b, args.nmax, {}))
    for rid, a, b, n, expected in pairs:
        rec = {"id": rid, "status": "pass"}
        try:
            verdict = compare_box_with_witt(a, b, n, strict=False)
            rec.update(verdict.to_jsonable())
            if not verdict.isomorphism or not verdict.equivariance:
                rec["status"] = "fail"
            _check_expected(rec, expected)
        except WittsplitError as exc:
            rec["status"] = "fail"
            rec["error"] = f"{type(exc).__name__}: {exc}"
        report["results"].append(rec)
    _finish_report(report, args.out, t0)
    return _exit_code(report)


def cmd_product_demo(args) -> int:
    t0 = time.time()
    flags = {"A": args.A, "B": args.B, "n": args.n, "direction": args.direction}
    report = _report_skeleton("product-demo", flags)
    from .corpus import builtin_algebra
    rec = {"id": f"{args.A}(x){args.B}|{args.direction}|n={args.n}",
           "status": "pass"}
    try:
        a = builtin_algebra(args.A)
        b = builtin_algebra(args.B)
        if args.direction == "build":
            sa = is_f_split(a)
            sb = is_quasi_f_split(b, args.n)
            if not isinstance(sa, SplittingWitness):
                raise WittsplitError(f"{args.A} is not F-split; cannot build")
            if not isinstance(sb, SplittingWitness):
                raise WittsplitError(f"{args.B} is not {args.n}-quasi-F-split")
            construction = build_product_splitting(a, sa, b, sb, args.n)
            ver = verify_quasi_splitting(construction.witness.phi,
                                         tensor_algebra(a, b), args.n)
            rec["construction"] = construction.to_jsonable()
            rec["verified"] = ver.passed
            if not (ver.passed and construction.relation_checks_passed):
                rec["status"] = "fail"
        else:
            cert = nonsplit_tensor_certificate(a, b, args.n)
            rec["certificate"] = cert.to_jsonable()
            if not cert.cross_terms_zero or not cert.tensor_nonzero:
                rec["status"] = "fail"
    except ParseError as exc:
        rec["status"] = "error"
        rec["error"] = str(exc)
    except WittsplitError as exc:
        rec["status"] = "fail"
        rec["error"] = f"{type(exc).__name__}: {exc}"
    report["results"].append(rec)
    _finish_report(report, args.out, t0)
    return _exit_code(report)


def cmd_curve_scan(args) -> int:
    t0 = time.time()
    flags = {"p": args.p, "count": args.count, "nmax": args.nmax,
             "pole_bound": args.pole_bound}
    report = _report_skeleton("curve-scan", flags)
    try:
        curves = scan_smooth_cubics(args.p, args.count)
    except WittsplitError as exc:
        report["results"].append({"id": "<scan>", "status": "error",
                                  "error": str(exc)})
        _finish_report(report, args.out, t0)
        return EXIT_INPUT
    for i, curve in enumerate(curves):
        rec = {"id": f"p{args.p}-{i:03d}", "curve": str(curve.polynomial()),
               "p": args.p, "status": "pass"}
        try:
            trace = frobenius_trace(curve)
            rec["n_q"] = count_points(curve, 1)
            rec["n_q2"] = count_points(curve, 2)
            rec["trace"] = trace
            rec["p_rank"] = p_rank_elliptic(curve)
            rec["hasse_invariant"] = hasse_invariant(curve.polynomial())
            rec["am_height"] = am_height_cy(curve.polynomial(), args.p)
            h = cubic_height(curve, n_max=args.nmax, bound=args.pole_bound)
            rec["cech_height"] = h.height
            rec["bound"] = h.bound
            agree = rec["cech_height"] == rec["am_height"] == 2 - rec["p_rank"]
            rec["triple_agreement"] = agree
            if not agree:
                rec["status"] = "fail"
        except WittsplitError as exc:
            rec["status"] = "fail"
            rec["error"] = f"{type(exc).__name__}: {exc}"
        report["results"].append(rec)
    _finish_report(report, args.out, t0)
    return _exit_code(report)


def cmd_cache(args) -> int:
    if args.action == "show":
        entries = wittpoly.cache_entries()
        print(json.dumps({"dir": str(wittpoly.cache_dir()),
                          "entries": [{"p": p, "n": n} for p, n in entries]},
                         sort_keys=True, indent=2))
        return EXIT_OK
    if args.action == "clear":
        removed = wittpoly.clear_cache()
        print(json.dumps({"cleared": removed}))
        return EXIT_OK
    if args.action == "warm":
        count = wittpoly.warm_cache(args.pmax, args.nmax)
        print(json.dumps({"warmed": count,
                          "dir": str(wittpoly.cache_dir())}))
        return EXIT_OK
    return EXIT_INPUT


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wittsplit",
        description="Exact Witt-vector arithmetic and Frobenius-splitting "
                    "decision procedures")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="write the JSON report here")
        p.add_argument("--jobs", type=int, default=1)

    h = sub.add_parser("height", help="heights for a corpus of subjects")
    common(h)
    h.add_argument("--corpus", required=True)
    h.add_argument("--nmax", type=int, default=3)
    h.add_argument("--pole-bound", type=int, default=DEFAULT_BOUND,
                   dest="pole_bound")
    h.add_argument("--method", choices=["cech", "oracle"], default="cech")
    h.set_defaults(func=cmd_height)

    w = sub.add_parser("witt-identities", help="ring/operator identity suite")
    common(w)
    w.add_argument("--p", type=int)
    w.add_argument("--nmax", type=int, default=3)
    w.add_argument("--algebra", help="builtin algebra name; default: suite list")
    w.set_defaults(func=cmd_witt_identities)

    b = sub.add_parser("box-check", help="box product vs Witt ring of tensor")
    common(b)
    b.add_argument("--corpus", help="cartier-pair records; default: builtin pairs")
    b.add_argument("--nmax", type=int, default=2)
    b.set_defaults(func=cmd_box_check)

    d = sub.add_parser("product-demo", help="build or refute a product splitting")
    common(d)
    d.add_argument("--A", required=True, help="builtin algebra name")
    d.add_argument("--B", required=True)
    d.add_argument("--n", type=int, default=2)
    d.add_argument("--direction", choices=["build", "refute"], default="build")
    d.set_defaults(func=cmd_product_demo)

    s = sub.add_parser("curve-scan", help="scan smooth cubics, all methods")
    common(s)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--count", type=int, default=10)
    s.add_argument("--nmax", type=int, default=2)
    s.add_argument("--pole-bound", type=int, default=DEFAULT_BOUND,
                   dest="pole_bound")
    s.set_defaults(func=cmd_curve_scan)

    c = sub.add_parser("cache", help="structure-polynomial cache admin")
    c.add_argument("action", choices=["show", "clear", "warm"])
    c.add_argument("--pmax", type=int, default=5)
    c.add_argument("--nmax", type=int, default=3)
    c.set_defaults(func=cmd_cache)

    demo = sub.add_parser("demo-corpus", help="print a sample height corpus")
    demo.set_defaults(func=lambda args: (print("\n".join(demo_corpus_lines())), 0)[1])

    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
