"""Command-line front end.

Usage errors exit with status 2 (argparse), domain errors with status 1 and
a JSON record ``{"error": ..., "message": ...}`` on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bounds import bounds_table, reports_to_csv, reports_to_json
from .digits import prime_power
from .errors import BadCongruence, NotAClique, PaleyError
from .ffield import build_field, field_for_q
from .paley import Clique, build_paley, greedy_clique, max_clique, verify_clique
from .stepanov import build_certificate, conjecture_scan, verify_certificate
from .store import ResultsStore

DEFAULT_OMEGA_LIMIT = 1000


def _vertices(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad vertex list {text!r}")


def cmd_field(args, out) -> int:
    print(json.dumps(build_field(args.p, args.r).to_dict()), file=out)
    return 0


def cmd_qr(args, out) -> int:
    F = field_for_q(args.q)
    print(json.dumps(sorted(F.qr_labels)), file=out)
    return 0


def _omega(q: int, budget: int, heuristic: bool, seed: int, workers: int) -> Clique:
    graph = build_paley(field_for_q(q))
    if heuristic:
        return greedy_clique(graph, seed)
    return max_clique(graph, budget=budget, workers=workers)


def cmd_omega(args, out) -> int:
    p, r = prime_power(args.q)
    clique = _omega(args.q, args.budget, args.heuristic, args.seed, args.workers)
    method = f"greedy(seed={args.seed})" if args.heuristic else "branch-and-bound"
    if not args.no_store:
        ResultsStore(args.store).record(args.q, p, r, clique.size, clique.exact, method,
                                        clique.vertices)
    if args.format == "json":
        print(json.dumps({**clique.to_dict(), "omega": clique.size, "method": method}), file=out)
    else:
        status = "exact" if clique.exact else "lower bound"
        print(f"omega(P_{args.q}) = {clique.size} ({status})", file=out)
        print(f"witness: {list(clique.vertices)}", file=out)
    return 0


def _known_omega(q: int, args):
    if q % 4 != 1:
        raise BadCongruence(f"q = {q} is not 1 mod 4")
    store = ResultsStore(args.store)
    row = store.lookup(q)
    if row is not None and row.exact:
        return row.omega, "results store"
    if q <= args.omega_limit:
        clique = max_clique(build_paley(field_for_q(q)))
        if clique.exact:
            if not args.no_store:
                p, r = prime_power(q)
                store.record(q, p, r, clique.size, True, "branch-and-bound", clique.vertices)
            return clique.size, "exact search"
    return None, None


def cmd_bounds(args, out) -> int:
    if args.sweep:
        lo, hi = args.sweep
        qs = []
        for q in range(lo, hi + 1):
            if q % 4 != 1:
                continue
            try:
                prime_power(q)
            except PaleyError:
                continue
            qs.append(q)
    elif args.q is not None:
        qs = [args.q]
    else:
        raise argparse.ArgumentTypeError("give q or --sweep QMIN QMAX")
    reports = []
    for q in qs:
        omega, source = _known_omega(q, args)
        reports.append(bounds_table(q, omega, source or "exact search"))
    if args.format == "json":
        print(reports_to_json(reports), file=out)
    elif args.format == "csv":
        out.write(reports_to_csv(reports))
    else:
        for rep in reports:
            print(f"q = {rep.q} (p = {rep.p}, r = {rep.r})", file=out)
            for e in rep.entries:
                print(f"  {e.name:<8} {e.value:>10}   {e.inequality}", file=out)
            if rep.omega_exact is not None:
                print(f"  {'omega':<8} {rep.omega_exact:>10}   ({rep.omega_source})", file=out)
    return 0


def cmd_certify(args, out) -> int:
    F = field_for_q(args.q)
    graph_free_clique = Clique(args.q, tuple(args.clique))
    cert = build_certificate(graph_free_clique, args.n, F)
    report = verify_certificate(cert)
    if args.out:
        Path(args.out).write_text(json.dumps(cert.to_dict(), indent=1) + "\n")
    print(f"coefficients: {list(cert.coefficients)}", file=out)
    print(f"degree: {report.degree}", file=out)
    print(f"multiplicities: {cert.multiplicities}", file=out)
    for name, ok in report.checks.items():
        print(f"  {'PASS' if ok else 'FAIL'} {name}", file=out)
    print(f"conclusion: {cert.conclusion[0]} ≤ {cert.conclusion[1]}   [{cert.conclusion_text()}]",
          file=out)
    return 0 if report.ok else 1


def cmd_verify_cert(args, out) -> int:
    data = json.loads(Path(args.file).read_text())
    report = verify_certificate(data)
    if args.format == "json":
        print(json.dumps(report.to_dict()), file=out)
    else:
        for name, ok in report.checks.items():
            print(f"  {'PASS' if ok else 'FAIL'} {name}", file=out)
        for note in report.notes:
            print(f"  note: {note}", file=out)
        print(f"total multiplicity {report.total_multiplicity} "
              f"(required {report.total_required}) vs degree {report.degree}", file=out)
        print("OK" if report.ok else "FAILED", file=out)
    return 0 if report.ok else 1


def cmd_scan(args, out) -> int:
    F = field_for_q(args.q)
    if args.clique:
        clique = Clique(args.q, tuple(args.clique))
        if not verify_clique(build_paley(F), clique.vertices):
            raise NotAClique(f"{list(clique.vertices)} is not a clique of P_{args.q}")
    else:
        clique = greedy_clique(build_paley(F), args.greedy)
    report = conjecture_scan(clique, args.n, F, strict=args.strict)
    if args.format == "json":
        print(json.dumps({"clique": clique.to_dict(), **report.to_dict()}), file=out)
    else:
        print(f"q = {report.q}, n = {report.n}, clique size N = {report.N}", file=out)
        print(f"|L(n)| = {len(report.L)}, rank of L rows = {report.first_rows_rank}, "
              f"|M| = {report.M_size}", file=out)
        ind = report.independent_ms
        print(f"independent m: {len(ind)} of {len(report.verdicts)}"
              + (f" (first {ind[:10]})" if ind else ""), file=out)
        if report.digit_lemma_ok is not None:
            print(f"digit lemma on L(n): {'holds' if report.digit_lemma_ok else 'FAILS'}", file=out)
        if report.implied_bound:
            print(f"variant bound: n(N-2) = {report.implied_bound[0]} ≤ {report.implied_bound[1]}",
                  file=out)
        for note in report.notes:
            print(f"note: {note}", file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="paleyclique",
                                     description="Exact experiments on Paley graph clique numbers")
    parser.add_argument("--store", default=None, help="results store path (default: $PALEY_STORE)")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("field", help="print the canonical F_{p^r} description")
    sp.add_argument("p", type=int)
    sp.add_argument("r", type=int)
    sp.set_defaults(func=cmd_field)

    sp = sub.add_parser("qr", help="print the quadratic residues of F_q")
    sp.add_argument("q", type=int)
    sp.set_defaults(func=cmd_qr)

    sp = sub.add_parser("omega", help="clique number of P_q")
    sp.add_argument("q", type=int)
    sp.add_argument("--budget", type=int, default=10**9, help="search node limit")
    sp.add_argument("--heuristic", action="store_true", help="greedy clique only")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--no-store", action="store_true")
    sp.add_argument("--format", choices=["text", "json"], default="text")
    sp.set_defaults(func=cmd_omega)

    sp = sub.add_parser("bounds", help="table of upper bounds")
    sp.add_argument("q", type=int, nargs="?")
    sp.add_argument("--sweep", type=int, nargs=2, metavar=("QMIN", "QMAX"))
    sp.add_argument("--format", choices=["table", "json", "csv"], default="table")
    sp.add_argument("--omega-limit", type=int, default=DEFAULT_OMEGA_LIMIT,
                    help="run the exact search for q up to this size when no stored value exists")
    sp.add_argument("--no-store", action="store_true")
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("certify", help="build and verify a polynomial certificate")
    sp.add_argument("q", type=int)
    sp.add_argument("--clique", type=_vertices, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("verify-cert", help="re-verify a certificate file")
    sp.add_argument("file")
    sp.add_argument("--format", choices=["text", "json"], default="text")
    sp.set_defaults(func=cmd_verify_cert)

    sp = sub.add_parser("scan-conjecture", help="rank scan over the admissible m")
    sp.add_argument("q", type=int)
    sp.add_argument("--n", type=int, required=True)
    group = sp.add_mutually_exclusive_group()
    group.add_argument("--clique", type=_vertices)
    group.add_argument("--greedy", type=int, default=0, metavar="SEED")
    sp.add_argument("--strict", action="store_true", help="require n of the special digit shape")
    sp.add_argument("--format", choices=["text", "json"], default="text")
    sp.set_defaults(func=cmd_scan)
    return parser


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except argparse.ArgumentTypeError as exc:
        print(f"usage error: {exc}", file=err)
        return 2
    except PaleyError as exc:
        print(json.dumps(exc.to_dict()), file=err)
        return 1


if __name__ == "__main__":
    sys.exit(main())
