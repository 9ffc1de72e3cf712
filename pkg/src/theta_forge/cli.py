"""``theta-forge`` command line.

Exit codes: 0 on success, 1 on a verification mismatch, 2 on bad usage or input.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from fractions import Fraction
from pathlib import Path

from . import bernoulli, dims, identities, lattice, qform, qseries, tables
from .dirichlet import QuadCharacter, parse_character
from .exactnum import IntPolynomial, primes_up_to, rat_str

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# -- input helpers -----------------------------------------------------------

def load_gram(spec: str) -> qform.GramMatrix:
    """A Gram matrix from a file, an inline literal, or ``table:K,N``."""
    if spec.startswith("table:"):
        try:
            k, N = (int(v) for v in spec[len("table:"):].split(","))
            return tables.table_form(k, N)
        except (ValueError, KeyError) as exc:
            raise UsageError(str(exc)) from None
    p = Path(spec)
    text = p.read_text() if p.is_file() else spec
    try:
        return qform.parse_gram(text)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"bad Gram matrix: {exc}") from None


def _series_for(A: qform.GramMatrix, B: int, workers: int) -> qseries.QSeries:
    prof = qform.profile(A)
    t = lattice.theta_series(A, B, workers=workers)
    return qseries.from_counts(t.counts, prof.weight, prof.level, QuadCharacter(prof.char_disc))


def _load_series(args) -> qseries.QSeries:
    if args.input:
        import json
        try:
            return qseries.qseries_from_json(json.loads(Path(args.input).read_text()))
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"bad series file: {exc}") from None
    if not args.gram:
        raise UsageError("give --gram or --input")
    return None


def _enc(v):
    if isinstance(v, Fraction):
        return rat_str(v)
    if isinstance(v, (list, tuple)):
        return [_enc(x) for x in v]
    if isinstance(v, dict):
        return {k: _enc(x) for k, x in v.items()}
    return v


# -- output ------------------------------------------------------------------

def emit(args, human: str, doc, rows: list[dict] | None = None) -> None:
    if getattr(args, "json", None):
        text = qseries.dumps(_enc(doc))
        if args.json == "-":
            print(text)
        else:
            Path(args.json).write_text(text + "\n")
            print(human)
    elif getattr(args, "csv", False):
        rows = rows if rows is not None else [doc] if isinstance(doc, dict) else [{"value": doc}]
        buf = io.StringIO()
        keys = list(rows[0].keys()) if rows else []
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _csv_cell(_enc(v)) for k, v in r.items()})
        sys.stdout.write(buf.getvalue())
    else:
        print(human)


def _csv_cell(v):
    return " ".join(str(x) for x in v) if isinstance(v, list) else v


# -- commands ----------------------------------------------------------------

def cmd_theta(args) -> int:
    A = load_gram(args.gram)
    if args.oracle:
        t = lattice.theta_series_oracle(A, args.bound)
    else:
        t = lattice.theta_series(A, args.bound, workers=args.workers, method=args.method)
    doc = lattice.reptable_to_json(t)
    rows = [{"n": n, "r": c} for n, c in enumerate(t.counts)]
    emit(args, " ".join(str(c) for c in t.counts), doc, rows)
    return EXIT_OK


def cmd_eisenstein(args) -> int:
    if args.kind in ("G", "H"):
        if args.k is None or args.N is None:
            raise UsageError("G and H need --k and --N")
        make = qseries.eisenstein_G if args.kind == "G" else qseries.eisenstein_H
        f = make(args.k, args.N, args.bound)
    else:
        if args.k is None:
            raise UsageError("--k is required")
        f = qseries.eisenstein_general(parse_character(args.chi), parse_character(args.psi),
                                       args.k, args.bound)
    _emit_series(args, f)
    return EXIT_OK


def _emit_series(args, f: qseries.QSeries) -> None:
    rows = [{"n": n, "coeff": c} for n, c in enumerate(f.coeffs)]
    emit(args, str(f), qseries.qseries_to_json(f), rows)


def cmd_lvalue(args) -> int:
    v = bernoulli.l_value(QuadCharacter(args.disc), args.k)
    emit(args, rat_str(v), {"disc": args.disc, "k": args.k, "l_value": v})
    return EXIT_OK


def cmd_bernoulli(args) -> int:
    v = bernoulli.gen_bernoulli(QuadCharacter(args.disc), args.k)
    emit(args, rat_str(v), {"disc": args.disc, "k": args.k, "bernoulli": v})
    return EXIT_OK


def cmd_hecke(args) -> int:
    f = _load_series(args)
    if f is None:
        f = _series_for(load_gram(args.gram), args.m * args.bound, args.workers)
    _emit_series(args, qseries.hecke_apply(f, args.m, B_out=args.bound))
    return EXIT_OK


def cmd_decompose(args) -> int:
    f = _load_series(args)
    if f is None:
        f = _series_for(load_gram(args.gram), args.bound, args.workers)
    try:
        c1, c2 = qseries.decompose(f, args.k, args.N)
    except qseries.DecompositionError as exc:
        emit(args, f"not in span: {exc}", {"ok": False, "error": str(exc), "n": exc.n})
        return EXIT_MISMATCH
    emit(args, f"c1 = {rat_str(c1)}  c2 = {rat_str(c2)}", {"ok": True, "c1": c1, "c2": c2})
    return EXIT_OK


def cmd_dim(args) -> int:
    chi = QuadCharacter(args.disc) if args.disc is not None else dims.quadratic_character(args.k, args.N)
    d = dims.dim_mk(args.k, args.N, chi)
    emit(args, str(d), {"k": args.k, "N": args.N, "char": chi.label, "dim": d})
    return EXIT_OK


def cmd_classify(args) -> int:
    found = sorted(dims.classify_dim2(), key=lambda kn: (kn[1], kn[0]))
    cands = dims.dim2_candidates()
    doc = {"dim2": [list(x) for x in found], "candidates": [list(x) for x in cands]}
    if args.csv:
        rows = [{"k": k, "N": N, "dim2": (k, N) in found} for k, N in cands]
        emit(args, "", doc, rows)
    else:
        args.json = args.json or "-"
        emit(args, "", doc)
    return EXIT_OK


def cmd_verify(args) -> int:
    A = load_gram(args.gram)
    prof = qform.profile(A)
    chi = QuadCharacter(prof.char_disc)
    reports = []
    if args.mode == "formula":
        reports.append(identities.verify_formula(A, args.nmax, workers=args.workers))
    elif args.mode == "square":
        reports.append(identities.verify_square(A, args.nmax, workers=args.workers))
    elif args.mode == "conditional":
        reports.append(identities.conditional_report(A, args.pmax, args.workers))
    elif args.mode == "main":
        ps = [p for p in primes_up_to(args.pmax) if prof.level % p and chi(p ** args.m) == 1]
        if ps:
            table = lattice.theta_series(A, max(ps) ** args.m * args.nmax, workers=args.workers).counts
            for p in ps:
                reports.append(identities.verify_main_identity(A, p, args.m, args.nmax, table=table))
    else:
        reports.extend(identities.verify_conjecture(A, args.pmax, args.nmax, workers=args.workers))
    ok = all(r.ok for r in reports)
    lines = []
    for r in reports:
        lines.append(f"{r.name}: {len(r.checked)} checked, {len(r.failures)} failed ({r.seconds:.2f}s)")
        for f in r.failures[:10]:
            lines.append("  FAIL " + " ".join(f"{k}={rat_str(v) if isinstance(v, Fraction) else v}"
                                             for k, v in f.items() if k != "pass"))
    lines.append("OK" if ok else "MISMATCH")
    rows = [dict(report=r.name, **row) for r in reports for row in r.checked]
    emit(args, "\n".join(lines), {"ok": ok, "reports": [r.to_json() for r in reports]}, rows)
    return EXIT_OK if ok else EXIT_MISMATCH


def table_cells(row: tables.TableRow, workers: int, bound: int = 40) -> dict:
    A = row.form
    prof = qform.profile(A)
    chi = QuadCharacter(prof.char_disc)
    f = _series_for(A, bound, workers)
    c1, c2 = qseries.decompose(f)
    return {
        "det": prof.det,
        "level": prof.level,
        "dual_diag": tuple(prof.dual_diag),
        "char_poly": qform.char_poly(A).coeffs,
        "rq1": int(f.coeffs[1]),
        "l_value": bernoulli.l_value(chi, prof.weight),
        "c1": c1,
        "c2": c2,
        "leading": tuple(int(c) for c in f.coeffs[: len(row.leading)]),
    }


def expected_cells(row: tables.TableRow) -> dict:
    return {
        "det": row.N,
        "level": row.N,
        "dual_diag": row.dual_diag,
        "char_poly": row.char_poly,
        "rq1": row.rq1,
        "l_value": row.l_value,
        "c1": row.c1,
        "c2": row.c2,
        "leading": row.leading,
    }


def cmd_table(args) -> int:
    out, rows, lines, bad = [], [], [], 0
    for row in tables.TABLE:
        got = table_cells(row, args.workers)
        want = expected_cells(row)
        miss = [k for k in want if want[k] != got[k]]
        bad += len(miss)
        entry = {"k": row.k, "N": row.N, **got, "mismatches": miss}
        out.append(entry)
        rows.append({**entry, "mismatches": " ".join(miss)})
        lead = " + ".join(str(c) if i == 0 else f"{c}q" if i == 1 else f"{c}q^{i}"
                          for i, c in enumerate(got["leading"]))
        lines.append(
            f"(k,N)=({row.k},{row.N})  det={got['det']}  level={got['level']}  "
            f"dual_diag={list(got['dual_diag'])}  r(1)={got['rq1']}  "
            f"L={rat_str(got['l_value'])}  (c1,c2)=({rat_str(got['c1'])},{rat_str(got['c2'])})  "
            f"theta={lead}"
        )
        lines.append(f"    char_poly={IntPolynomial(got['char_poly'])}")
        for k in miss:
            lines.append(f"    MISMATCH {k}: got {_enc(got[k])}, expected {_enc(want[k])}")
    lines.append("OK" if not bad else f"{bad} mismatched cells")
    emit(args, "\n".join(lines), {"ok": not bad, "rows": out}, rows)
    return EXIT_OK if not bad else EXIT_MISMATCH


def cmd_rq(args) -> int:
    A = load_gram(args.gram)
    cf = identities.closed_form(A)
    if args.square:
        v = identities.rq_square(cf, args.n)
        target = args.n * args.n
    else:
        v = identities.closed_rq(cf, args.n)
        target = args.n
    doc = {"n": target, "closed": v}
    status = EXIT_OK
    human = rat_str(v)
    if args.check:
        e = lattice.rep_count_shell(A, target, workers=args.workers)
        doc["enumerated"] = e
        doc["ok"] = e == v
        human += f"  enumerated={e}  {'OK' if e == v else 'MISMATCH'}"
        status = EXIT_OK if e == v else EXIT_MISMATCH
    emit(args, human, doc)
    return status


# -- parser ------------------------------------------------------------------

def _positive(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def _nonneg(s: str) -> int:
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {s}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", nargs="?", const="-", metavar="PATH",
                     help="emit JSON (to PATH if given, else stdout)")
    fmt.add_argument("--csv", action="store_true", help="emit CSV")
    common.add_argument("--workers", type=_positive, default=None,
                        help="worker count (default: THETA_FORGE_WORKERS or available CPUs)")

    p = argparse.ArgumentParser(prog="theta-forge", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("theta", parents=[common], help="representation numbers r_Q(0..B)")
    s.add_argument("--gram", required=True)
    s.add_argument("--bound", type=_nonneg, required=True)
    s.add_argument("--oracle", action="store_true", help="use naive box enumeration")
    s.add_argument("--method", choices=["memo", "enumerate"], default="memo")
    s.set_defaults(func=cmd_theta)

    s = sub.add_parser("eisenstein", parents=[common], help="Eisenstein q-expansions")
    s.add_argument("--kind", choices=["G", "H", "general"], default="general")
    s.add_argument("--k", type=_positive)
    s.add_argument("--N", type=_positive)
    s.add_argument("--chi", default="trivial")
    s.add_argument("--psi", default="trivial")
    s.add_argument("--bound", type=_nonneg, default=qseries.DEFAULT_TRUNCATION)
    s.set_defaults(func=cmd_eisenstein)

    for name, func in (("lvalue", cmd_lvalue), ("bernoulli", cmd_bernoulli)):
        s = sub.add_parser(name, parents=[common],
                           help="L(1-k, chi_D)" if name == "lvalue" else "B_{k, chi_D}")
        s.add_argument("--disc", type=int, required=True)
        s.add_argument("--k", type=_nonneg if name == "bernoulli" else _positive, required=True)
        s.set_defaults(func=func)

    s = sub.add_parser("hecke", parents=[common], help="apply T_m to a theta series or JSON series")
    s.add_argument("--gram")
    s.add_argument("--input", help="QSeries JSON file")
    s.add_argument("--m", type=_positive, required=True)
    s.add_argument("--bound", type=_nonneg, default=qseries.DEFAULT_TRUNCATION)
    s.set_defaults(func=cmd_hecke)

    s = sub.add_parser("decompose", parents=[common], help="coordinates in span(G, H)")
    s.add_argument("--gram")
    s.add_argument("--input", help="QSeries JSON file")
    s.add_argument("--k", type=_positive)
    s.add_argument("--N", type=_positive)
    s.add_argument("--bound", type=_nonneg, default=qseries.DEFAULT_TRUNCATION)
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("dim", parents=[common], help="dim M_k(N, chi)")
    s.add_argument("--k", type=_positive, required=True)
    s.add_argument("--N", type=_positive, required=True)
    s.add_argument("--disc", type=int)
    s.set_defaults(func=cmd_dim)

    s = sub.add_parser("classify", parents=[common], help="prime levels with two-dimensional spaces")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("verify", parents=[common], help="check identities against enumeration")
    s.add_argument("--gram", default="table:2,13")
    s.add_argument("--mode", choices=["main", "conditional", "formula", "square", "conjecture"],
                   default="conjecture")
    s.add_argument("--pmax", type=_positive, default=47)
    s.add_argument("--nmax", type=_positive, default=50)
    s.add_argument("--m", type=_positive, default=2, help="exponent for --mode main")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("table", parents=[common], help="reproduce the six built-in rows")
    s.set_defaults(func=cmd_table)

    s = sub.add_parser("rq", parents=[common], help="closed-form r_Q(n)")
    s.add_argument("--gram", required=True)
    s.add_argument("--n", type=_positive, required=True)
    s.add_argument("--square", action="store_true", help="evaluate r_Q(n^2) by the product rule")
    s.add_argument("--check", action="store_true", help="compare with shell enumeration")
    s.set_defaults(func=cmd_rq)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.workers is None:
            args.workers = lattice.default_workers()
        return args.func(args)
    except (UsageError, ValueError, ZeroDivisionError, lattice.BoxTooLarge, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
