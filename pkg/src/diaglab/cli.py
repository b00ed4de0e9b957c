"""Command-line front end.

Every subcommand reads exact-rational inputs (text DSLs or JSON
expression trees), runs one library operation, and prints either a
human-oriented line or, with --json, one machine-readable record per
result.  Exit status: 0 on success/pass, 1 when a verification-style
command finds a failure, 2 on usage or input errors.
"""

import argparse
import json
import sys

from .errors import DiaglabError
from .field import QQ, scalar_from_text, scalar_str
from .series import ps_equal, ps_first_mismatch, ps_zero
from .mrat import parse_mrat, diagonal
from .diffop import (annihilation_residual, frobenius_analytic, guess_ode,
                     op_apply, parse_diffop)
from .special import HeunParams, HypParams, heun_series, hyp_series
from .modular import (compute_nome, gbound_classify, parse_bivariate,
                      relation_residual, scan_modular_2f1, schwarz_map,
                      schwarzian_residual, param_identity_check)
from .expr import eval_expr, parse_ratfun1
from .fixtures import iter_corpus, run_corpus

USAGE_EXIT = 2
FAIL_EXIT = 1


def _series_record(s, order):
    lo = s.val() if not s.is_zero() else QQ(0)
    hi = s.prec if s.prec is not None else QQ(order)
    out = []
    e = lo
    while e < hi:
        out.append([str(e), scalar_str(s.coeff(e))])
        e += 1
    return {"offset": str(lo), "prec": str(s.prec) if s.prec is not None
            else None, "coeffs": out}


def _emit_series(s, args):
    if args.json:
        print(json.dumps(_series_record(s, args.order), sort_keys=True))
    else:
        print(s)


def _expr_arg(text):
    """Expression-tree JSON, or shorthand: a bare rational-function text."""
    t = text.strip()
    if t.startswith("{"):
        return json.loads(t)
    return {"rational": t}


def _maybe_file(text):
    if text.startswith("@"):
        with open(text[1:], "r", encoding="utf-8") as fh:
            return fh.read()
    return text


def _read_series_arg(args):
    if getattr(args, "expr", None):
        return eval_expr(_expr_arg(_maybe_file(args.expr)), args.order)
    data = sys.stdin.read().split()
    from .series import ps_from_coeffs
    cs = [scalar_from_text(t) for t in data]
    return ps_from_coeffs(cs, prec=len(cs))


def cmd_diag(args):
    names = tuple(s.strip() for s in args.vars.split(","))
    r = parse_mrat(_maybe_file(args.expr), names=names)
    _emit_series(diagonal(r, int(args.order)), args)
    return 0


def cmd_guess_ode(args):
    from .errors import NotFound
    s = _read_series_arg(args)
    try:
        l = guess_ode(s, args.rmax, args.dmax, guard=args.guard)
    except NotFound:
        print("no operator found within (order <= %d, degree <= %d)"
              % (args.rmax, args.dmax))
        return FAIL_EXIT
    print(str(l) if not args.json else json.dumps(
        {"op": str(l)}, sort_keys=True))
    return 0


def cmd_apply_op(args):
    l = parse_diffop(_maybe_file(args.op))
    s = eval_expr(_expr_arg(_maybe_file(args.expr)), args.order)
    _emit_series(op_apply(l, s), args)
    return 0


def cmd_solve_ode(args):
    l = parse_diffop(_maybe_file(args.op))
    _emit_series(frobenius_analytic(l, QQ(0), int(args.order)), args)
    return 0


def cmd_heun(args):
    p = HeunParams(*[scalar_from_text(getattr(args, k))
                     for k in ("a", "q", "alpha", "beta", "gamma", "delta")])
    _emit_series(heun_series(p, scalar_from_text(args.scale), args.order),
                 args)
    return 0


def cmd_hyp(args):
    up = [scalar_from_text(t) for t in args.upper.split(",")]
    lo = [scalar_from_text(t) for t in args.lower.split(",")] \
        if args.lower else []
    s = hyp_series(HypParams(up, lo), args.order)
    if args.pullback:
        from .series import ps_compose
        inner = parse_ratfun1(args.pullback).series(QQ(args.order))
        s = ps_compose(s, inner, prec=QQ(args.order))
    _emit_series(s, args)
    return 0


def cmd_nome(args):
    l = parse_diffop(_maybe_file(args.op))
    _emit_series(compute_nome(l, args.order), args)
    return 0


def cmd_gbound(args):
    s = _read_series_arg(args)
    v = gbound_classify(s, min_terms=args.min_terms)
    rec = {"verdict": v.tag}
    if v.tag == "Bounded":
        rec["rescale"] = str(v.rescale)
        rec["denom"] = str(v.denom)
    elif v.tag == "Unbounded":
        rec["witness_prime"] = v.witness_prime
        rec["witness_index"] = v.witness_index
    if args.json:
        print(json.dumps(rec, sort_keys=True))
    else:
        print(" ".join("%s=%s" % kv for kv in sorted(rec.items())))
    return 0


def cmd_scan_2f1(args):
    rows = scan_modular_2f1(args.denominator_bound, args.order)
    for a, b, n in sorted(rows):
        if args.json:
            print(json.dumps({"a": str(a), "b": str(b), "rescale": str(n)},
                             sort_keys=True))
        else:
            print("%s %s %s" % (a, b, n))
    return 0


def cmd_modcheck(args):
    poly = parse_bivariate(_maybe_file(args.poly))
    a = eval_expr(_expr_arg(_maybe_file(args.A)), args.order + 12)
    b = eval_expr(_expr_arg(_maybe_file(args.B)), args.order + 12)
    r = relation_residual(poly, a, b, args.order)
    ok = ps_equal(r, ps_zero(), through=QQ(args.order))
    print("pass" if ok else "fail: first nonzero %s"
          % (ps_first_mismatch(r, ps_zero()),))
    return 0 if ok else FAIL_EXIT


def cmd_param_check(args):
    poly = parse_bivariate(_maybe_file(args.poly))
    ok = param_identity_check(poly, parse_ratfun1(args.A),
                              parse_ratfun1(args.B))
    print("pass" if ok else "fail")
    return 0 if ok else FAIL_EXIT


def cmd_compose_check(args):
    a = eval_expr(_expr_arg(_maybe_file(args.lhs)), args.order)
    b = eval_expr(_expr_arg(_maybe_file(args.rhs)), args.order)
    if ps_equal(a, b, through=QQ(args.order)):
        print("pass")
        return 0
    print("fail: %s" % (ps_first_mismatch(a, b),))
    return FAIL_EXIT


def cmd_schwarzian(args):
    y = eval_expr(_expr_arg(_maybe_file(args.y)), args.order)
    wt = parse_ratfun1(args.w_target)
    ws = parse_ratfun1(args.w_source) if args.w_source else None
    r = schwarzian_residual(y, wt, ws)
    _emit_series(r, args)
    return 0 if r.is_zero() else FAIL_EXIT


def cmd_schwarz_map(args):
    l = parse_diffop(_maybe_file(args.op))
    _emit_series(schwarz_map(l, args.order), args)
    return 0


def cmd_verify(args):
    docs = iter_corpus(args.corpus)
    reps = run_corpus(docs, threads=args.threads)
    bad = 0
    for rep in reps:
        if args.json:
            print(rep.line(with_timing=args.timing))
        else:
            extra = ""
            if rep.mismatch is not None:
                extra = "  at %s: %s != %s" % rep.mismatch
            elif rep.detail:
                extra = "  " + rep.detail
            print("%-44s %s%s" % (rep.id, rep.status, extra))
        if rep.status != "pass":
            bad += 1
    if not args.json:
        print("%d fixtures, %d failing" % (len(reps), bad))
    return FAIL_EXIT if bad else 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=int, default=16,
                        help="absolute series precision (default 16)")
    common.add_argument("--field-d", type=str, default="0",
                        help="discriminant d of Q(sqrt(d)) inputs")
    common.add_argument("--json", action="store_true",
                        help="machine-readable output")
    common.add_argument("--threads", type=int, default=1)

    ap = argparse.ArgumentParser(
        prog="diaglab",
        description="exact diagonals, operators, special series, and the "
                    "verification corpus")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("diag", parents=[common],
                       help="diagonal of a multivariate rational function")
    p.add_argument("--vars", required=True, help="comma list, e.g. x,y,z")
    p.add_argument("--expr", required=True, help="rational function text")
    p.set_defaults(fn=cmd_diag)

    p = sub.add_parser("guess-ode", parents=[common],
                       help="minimal annihilating operator from a series")
    p.add_argument("--expr", help="expression tree (or stdin coefficients)")
    p.add_argument("--rmax", type=int, default=4)
    p.add_argument("--dmax", type=int, default=6)
    p.add_argument("--guard", type=int, default=10)
    p.set_defaults(fn=cmd_guess_ode)

    p = sub.add_parser("apply-op", parents=[common])
    p.add_argument("--op", required=True, help="operator text (or @file)")
    p.add_argument("--expr", required=True)
    p.set_defaults(fn=cmd_apply_op)

    p = sub.add_parser("solve-ode", parents=[common],
                       help="analytic solution at the origin")
    p.add_argument("--op", required=True)
    p.set_defaults(fn=cmd_solve_ode)

    p = sub.add_parser("heun", parents=[common])
    for k in ("a", "q", "alpha", "beta", "gamma", "delta"):
        p.add_argument("--" + k, required=True)
    p.add_argument("--scale", default="1")
    p.set_defaults(fn=cmd_heun)

    p = sub.add_parser("hyp", parents=[common])
    p.add_argument("--upper", required=True, help="e.g. 1/12,5/12")
    p.add_argument("--lower", default="", help="e.g. 1")
    p.add_argument("--pullback", help="rational function of x")
    p.set_defaults(fn=cmd_hyp)

    p = sub.add_parser("nome", parents=[common])
    p.add_argument("--op", required=True)
    p.set_defaults(fn=cmd_nome)

    p = sub.add_parser("gbound", parents=[common])
    p.add_argument("--expr")
    p.add_argument("--min-terms", type=int, default=40)
    p.set_defaults(fn=cmd_gbound)

    p = sub.add_parser("scan-2f1", parents=[common])
    p.add_argument("--denominator-bound", type=int, default=12)
    p.set_defaults(fn=cmd_scan_2f1)

    p = sub.add_parser("modcheck", parents=[common])
    p.add_argument("--poly", required=True, help="polynomial in A, B")
    p.add_argument("--A", required=True, help="branch expression tree")
    p.add_argument("--B", required=True)
    p.set_defaults(fn=cmd_modcheck)

    p = sub.add_parser("param-check", parents=[common])
    p.add_argument("--poly", required=True)
    p.add_argument("--A", required=True, help="rational function text")
    p.add_argument("--B", required=True)
    p.set_defaults(fn=cmd_param_check)

    p = sub.add_parser("compose-check", parents=[common],
                       help="two expression trees agree through --order")
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    p.set_defaults(fn=cmd_compose_check)

    p = sub.add_parser("schwarzian", parents=[common])
    p.add_argument("--y", required=True, help="expression tree")
    p.add_argument("--w-target", required=True, help="rational function")
    p.add_argument("--w-source")
    p.set_defaults(fn=cmd_schwarzian)

    p = sub.add_parser("schwarz-map", parents=[common])
    p.add_argument("--op", required=True)
    p.set_defaults(fn=cmd_schwarz_map)

    p = sub.add_parser("verify", parents=[common],
                       help="run a fixture file or corpus directory")
    p.add_argument("corpus")
    p.add_argument("--timing", action="store_true",
                   help="include micros in JSON records (non-deterministic)")
    p.set_defaults(fn=cmd_verify)

    return ap


def cli_dispatch(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return e.code if e.code is not None else USAGE_EXIT
    try:
        return args.fn(args)
    except DiaglabError as err:
        print("error: %s: %s" % (type(err).__name__, err), file=sys.stderr)
        return USAGE_EXIT
    except (OSError, json.JSONDecodeError) as err:
        print("error: %s" % err, file=sys.stderr)
        return USAGE_EXIT


def main():
    sys.exit(cli_dispatch())


if __name__ == "__main__":
    main()
