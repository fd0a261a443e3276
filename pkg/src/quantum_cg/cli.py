"""Command line interface: ``qcg eval | verify | table``.

Exit codes: 0 pass, 1 verification failure, 2 usage or domain error.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings

from .qdilog import DEFAULT_B, BContext, PoleError, gb, gb_small, sb
from .report import CSV_COLUMNS, SCHEMA, jsonable, render_reports
from . import suites
from .contour import QuadratureError

EPILOG = f"""\
output formats:
  json  one object with "schema": "{SCHEMA}" (several reports are wrapped in {{"reports": [...]}})
  csv   verify: columns {", ".join(CSV_COLUMNS)}
        (inputs is a JSON object; lhs/rhs columns are empty for exact checks)
        eval: columns function, arg_re, arg_im, value_re, value_im, error_bound
        table qbinomial: n, k, laurent; table cg: m, n, k, coeff; table sl3-basis: index, word, vector
  text  human-readable summary

exit codes: 0 pass, 1 verification failure, 2 usage or domain error.
negative numbers as option values need '=': --z=-0.3,0.1
"""


class _UsageError(Exception):
    pass


def _complex_arg(s: str) -> complex:
    try:
        parts = [float(p) for p in s.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected <re>,<im>, got {s!r}")
    if len(parts) == 1:
        return complex(parts[0])
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected <re>,<im>, got {s!r}")
    return complex(parts[0], parts[1])


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    g = p.add_argument_group("global options")
    g.add_argument("--b", type=float, help=f"quantum parameter b in (0,1) (default {DEFAULT_B:.15g})")
    g.add_argument("--precision", type=int, help="working precision in decimal digits, >= 15 (default 15)")
    g.add_argument("--tol", type=float, help="override the tolerance of every check")
    g.add_argument("--seed", type=int, help="seed for random sweeps (default 0)")
    g.add_argument("--format", choices=("json", "csv", "text"), help="output format (default json)")
    g.add_argument("--timing", action="store_true", help="include wall time in reports")
    return p


_DEFAULTS = {"b": DEFAULT_B, "precision": 15, "tol": None, "seed": 0, "format": "json", "timing": False}


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    fmt = argparse.RawDescriptionHelpFormatter
    parser = argparse.ArgumentParser(prog="qcg", description="Clebsch-Gordan theory for U_q(sl2), U_q(sl3) "
                                     "and the modular double: evaluation, verification, tables.",
                                     parents=[common], epilog=EPILOG, formatter_class=fmt)
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate a special function or the kernel", parents=[common],
                        epilog=EPILOG, formatter_class=fmt)
    evs = ev.add_subparsers(dest="what", required=True)
    for name in ("gb", "sb", "gbsmall"):
        p = evs.add_parser(name, parents=[common], epilog=EPILOG, formatter_class=fmt)
        p.add_argument("--z", type=_complex_arg, required=True, help="argument as <re>,<im>")
    p = evs.add_parser("kernel", parents=[common], epilog=EPILOG, formatter_class=fmt)
    for a in ("x", "y", "lambda1", "lambda2", "alpha"):
        p.add_argument(f"--{a}", type=float, required=True)
    p.add_argument("--phi", action="store_true", help="evaluate the unitary-chain form instead")

    ve = sub.add_parser("verify", help="run a verification suite", parents=[common], epilog=EPILOG,
                        formatter_class=fmt)
    vs = ve.add_subparsers(dest="what", required=True)
    p = vs.add_parser("qdilog", parents=[common], epilog=EPILOG, formatter_class=fmt)
    p.add_argument("--suite", default="all", choices=("all",) + suites.QDILOG_CHECKS)
    p.add_argument("--samples", type=int, default=50)
    p = vs.add_parser("integrals", parents=[common], epilog=EPILOG, formatter_class=fmt)
    p.add_argument("--suite", default="all", choices=("all",) + suites.INTEGRAL_SUITES)
    p.add_argument("--samples", type=int, default=None, help="samples per suite (default 20 / 10 / 5 r-values)")
    p = vs.add_parser("sl2-cg", parents=[common], epilog=EPILOG, formatter_class=fmt)
    p.add_argument("--M", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--max", type=int, default=6, help="range for M, N when they are not given")
    p = vs.add_parser("sl3", parents=[common], epilog=EPILOG, formatter_class=fmt)
    p.add_argument("--n1", "--N1", dest="n1", type=int)
    p.add_argument("--n2", "--N2", dest="n2", type=int)
    p.add_argument("--max-sum", type=int, default=5)
    p.add_argument("--box", choices=("extended", "narrow"), default="extended")
    p = vs.add_parser("positive-rep", parents=[common], epilog=EPILOG, formatter_class=fmt)
    p.add_argument("--lambda", dest="lam", type=float, action="append",
                   help="weight (repeatable; default 0, 0.4, 1.3)")
    p.add_argument("--lambda2", type=float, help="second weight for the coproduct checks")
    p = vs.add_parser("kernel", parents=[common], epilog=EPILOG, formatter_class=fmt)
    p.add_argument("--lambda1", type=float)
    p.add_argument("--lambda2", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--suite", default="all", choices=("all",) + suites.KERNEL_CHECKS)
    p.add_argument("--samples", type=int, default=5)
    vs.add_parser("all", parents=[common], epilog=EPILOG, formatter_class=fmt)

    ta = sub.add_parser("table", help="emit an exact table", parents=[common], epilog=EPILOG,
                        formatter_class=fmt)
    ts = ta.add_subparsers(dest="what", required=True)
    p = ts.add_parser("qbinomial", parents=[common], epilog=EPILOG, formatter_class=fmt)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, help="single entry (default: the whole row)")
    p = ts.add_parser("cg", parents=[common], epilog=EPILOG, formatter_class=fmt)
    for a in ("M", "N", "S"):
        p.add_argument(f"--{a}", type=int, required=True)
    p = ts.add_parser("sl3-basis", parents=[common], epilog=EPILOG, formatter_class=fmt)
    p.add_argument("--n1", "--N1", dest="n1", type=int, required=True)
    p.add_argument("--n2", "--N2", dest="n2", type=int, required=True)
    return parser


def _ctx(args) -> BContext:
    if not 0 < args.b < 1:
        raise _UsageError(f"--b must lie in (0, 1), got {args.b}")
    if args.precision < 15:
        raise _UsageError("--precision must be at least 15")
    if args.tol is not None and not args.tol > 0:
        raise _UsageError("--tol must be positive")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        ctx = BContext(b=args.b, dps=args.precision)
    for w in caught:
        sys.stderr.write(f"qcg: warning: {w.message}\n")
    return ctx


# ------------------------------------------------------------------- eval


def _cval(v: complex) -> dict:
    return {"re": float(v.real), "im": float(v.imag)}


def _eval(args, out) -> int:
    ctx = _ctx(args)
    if args.what == "kernel":
        from .positive.kernel import KernelParams, kernel_C, kernel_C_phi

        p = KernelParams(args.lambda1, args.lambda2, args.alpha)
        fn = kernel_C_phi if args.phi else kernel_C
        v = fn(args.x, args.y, p, BContext(b=ctx.b))
        body = {"schema": SCHEMA, "function": "kernel_C_phi" if args.phi else "kernel_C",
                "inputs": {"x": args.x, "y": args.y, "lambda1": args.lambda1, "lambda2": args.lambda2,
                           "alpha": args.alpha},
                "value": _cval(complex(v.value)), "error_bound": float(v.abs_error_bound),
                "contour": {"im_r": v.meta.get("im_r"), "T": v.meta.get("T")}}
        arg = complex(args.x, args.y)
    else:
        fn = {"gb": gb, "sb": sb, "gbsmall": gb_small}[args.what]
        v = fn(args.z, ctx)
        body = {"schema": SCHEMA, "function": args.what, "b": ctx.b, "precision": ctx.dps,
                "z": _cval(args.z), "value": _cval(complex(v.value)), "error_bound": float(v.abs_error_bound)}
        arg = args.z
    if args.format == "json":
        out.write(json.dumps(body, indent=2) + "\n")
    elif args.format == "csv":
        val = complex(v.value)
        out.write("function,arg_re,arg_im,value_re,value_im,error_bound\n")
        out.write(f"{body['function']},{arg.real!r},{arg.imag!r},{val.real!r},{val.imag!r},"
                  f"{float(v.abs_error_bound)!r}\n")
    else:
        out.write(f"{body['function']}({body.get('z', body.get('inputs'))}) = {complex(v.value)!r}  "
                  f"+- {float(v.abs_error_bound):.3e}\n")
    return 0


# ----------------------------------------------------------------- verify


def _pair(a, b, name):
    if (a is None) != (b is None):
        raise _UsageError(f"give both {name} or neither")
    return None if a is None else [(a, b)]


def _verify(args, out) -> int:
    ctx = _ctx(args)
    seed = args.seed
    w = args.what
    reports = []
    if w in ("qdilog", "all"):
        checks = suites.QDILOG_CHECKS if getattr(args, "suite", "all") == "all" else (args.suite,)
        reports.append(suites.qdilog_suite(ctx, getattr(args, "samples", 50), seed, checks))
    if w in ("integrals", "all"):
        names = suites.INTEGRAL_SUITES if getattr(args, "suite", "all") == "all" else (args.suite,)
        reports.append(suites.integrals_suite(ctx, names, getattr(args, "samples", None), seed))
    if w in ("sl2-cg", "all"):
        pairs = _pair(getattr(args, "M", None), getattr(args, "N", None), "--M and --N")
        if pairs and min(pairs[0]) < 0:
            raise _UsageError("--M and --N must be nonnegative")
        reports.append(suites.sl2_suite(pairs, getattr(args, "max", 6)))
        if pairs is None:
            reports.append(suites.pascal_suite())
    if w in ("sl3", "all"):
        pairs = _pair(getattr(args, "n1", None), getattr(args, "n2", None), "--n1 and --n2")
        if pairs and min(pairs[0]) < 0:
            raise _UsageError("--n1 and --n2 must be nonnegative")
        reports.append(suites.sl3_suite(pairs, getattr(args, "max_sum", 5), getattr(args, "box", "extended")))
    if w in ("positive-rep", "all"):
        lams = getattr(args, "lam", None) or (0.0, 0.4, 1.3)
        if min(lams) < 0 or (getattr(args, "lambda2", None) or 0) < 0:
            raise _UsageError("weights must be nonnegative")
        reports.append(suites.positive_rep_suite(lams, ctx, getattr(args, "lambda2", None)))
    if w in ("kernel", "all"):
        from .positive.kernel import KernelParams

        given = [getattr(args, k, None) for k in ("lambda1", "lambda2", "alpha")]
        if any(g is not None for g in given) and not all(g is not None for g in given):
            raise _UsageError("give all of --lambda1 --lambda2 --alpha or none")
        params = KernelParams(*given) if given[0] is not None else None
        checks = suites.KERNEL_CHECKS if getattr(args, "suite", "all") == "all" else (args.suite,)
        reports.append(suites.kernel_suite(ctx, checks, getattr(args, "samples", 5), seed, params))
    for r in reports:
        r.override_tol(args.tol)
    out.write(render_reports(reports, args.format, args.timing) + "\n")
    return 0 if all(r.passed for r in reports) else 1


# ------------------------------------------------------------------ table


def _table(args, out) -> int:
    from .qfield import qbinomial
    from .sl2 import cg_table
    from .sl3 import canonical_span

    if args.what == "qbinomial":
        if args.n < 0:
            raise _UsageError("--n must be nonnegative")
        ks = [args.k] if args.k is not None else list(range(args.n + 1))
        rows = [{"n": args.n, "k": k, "laurent": str(qbinomial(args.n, k)), **qbinomial(args.n, k).to_json()}
                for k in ks]
        cols = ("n", "k", "laurent")
        body = {"schema": SCHEMA, "table": "qbinomial", "entries": rows}
    elif args.what == "cg":
        t = cg_table(args.M, args.N, args.S)
        rows = [{"m": m, "n": n, "k": k, "coeff": str(c)} for (m, n, k), c in sorted(t.entries.items(),
                                                                                       key=lambda e: (e[0][2], e[0][0]))]
        cols = ("m", "n", "k", "coeff")
        body = {"schema": SCHEMA, "table": "cg", "M": args.M, "N": args.N, "S": args.S, "d": t.d, "entries": rows}
    else:
        if min(args.n1, args.n2) < 0:
            raise _UsageError("--n1 and --n2 must be nonnegative")
        span = canonical_span(args.n1, args.n2)
        rows = []
        for i, (word, v) in enumerate(zip(span.words, span.basis)):
            wtxt = " ".join(f"{g}^{p}" for g, p in word if p)
            vec = {f"v{k}{m}{n}": str(c) for (k, m, n), c in sorted(v.coeffs.items())}
            rows.append({"index": i, "word": wtxt or "1", "vector": vec})
        cols = ("index", "word", "vector")
        body = {"schema": SCHEMA, "table": "sl3-basis", "N1": args.n1, "N2": args.n2,
                "dimension": span.dimension, "weyl_dimension": span.expected, "reading": span.reading,
                "readings": span.readings, "entries": rows}
    if args.format == "json":
        out.write(json.dumps(jsonable(body), indent=2) + "\n")
    elif args.format == "csv":
        import csv

        w = csv.writer(out, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([json.dumps(r[c], sort_keys=True) if isinstance(r[c], dict) else r[c] for c in cols])
    else:
        for r in rows:
            out.write("  ".join(f"{c}={r[c]}" for c in cols) + "\n")
    return 0


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else 0
    for k, v in _DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    try:
        return {"eval": _eval, "verify": _verify, "table": _table}[args.command](args, out)
    except (_UsageError, PoleError, ValueError) as e:
        sys.stderr.write(f"qcg: error: {e}\n")
        return 2
    except QuadratureError as e:
        # the identity could not be established numerically
        sys.stderr.write(f"qcg: quadrature failed: {e}\n")
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
