"""Expression trees over the series primitives.

A tree is plain JSON-style data: every node is a one-key dict mapping a
node name to its payload.  Leaves produce series from the other modules;
internal nodes combine child series.  This is the language the fixture
corpus is written in, so the encoding favours hand-editability: scalars,
parameters, operators, relations and rational functions are all strings
in the same little DSLs the library parsers accept.

Leaves
    {"constant": "3/2"}
    {"rational": "x/(1-2*x)"}                      series of a rational function
    {"hyp": {"upper": "1/12,5/12", "lower": "1"}}
    {"heun": {"a": "9", "q": "1", "alpha": "2", "beta": "1",
              "gamma": "1", "delta": "1", "scale": "27"}}
    {"diag": {"vars": "x,y,z", "text": "1/(1-x-y-z)"}}
        with optional "partial": "y"  — the homogeneous partial v d/dv
        is applied to the rational function before taking the diagonal
    {"nome": {"op": "x^2*(1-x)*Dx^2 + ..."}}
    {"frobenius": {"op": "...", "exponent": "3/8"}}
    {"schwarz_map": "x^2*(1-x)^2*Dx^2 + ..."}
    {"algebraic": {"relation": "(1+432*x)*Y^2 - ...", "seed": "1:-256"}}

Internal nodes
    {"add": [e, ...]}  {"mul": [e, ...]}  {"sub": [e, e]}  {"div": [e, e]}
    {"pow": [e, "-1/2"]}          {"compose": [outer, inner]}
    {"theta": e}  {"dx": e}       {"hadamard": [e, e]}
    {"scale_x": [e, "27"]}        {"subst_x": [e, "x/(1-x)"]}
    {"sqrt": e}                   {"nth_root": [e, 3]}
    {"shift": [e, "1/4"]}         {"reversion": e}

>>> from diaglab.expr import eval_expr
>>> print(eval_expr({"rational": "1/(1-x)"}, 4))
1 + x + x^2 + x^3 + O(x^4)
>>> print(eval_expr({"constant": "1"}, 4))
1
"""

from .errors import BadParameters, DiaglabError
from .field import QQ, scalar_from_text
from .series import (PSeries, ps_add, ps_compose, ps_diff, ps_div,
                     ps_hadamard, ps_mul, ps_pow, ps_reversion, ps_scale_x,
                     ps_shift, ps_sub, ps_theta, ps_truncate)
from .upoly import RatFun1
from .mrat import parse_mrat, mrat_to_rf1, diagonal, homog_partial
from .diffop import frobenius_analytic, parse_diffop
from .special import HeunParams, HypParams, heun_series, hyp_series
from .alg import newton_branch, parse_alg_relation, seed_from_text
from .modular import compute_nome, schwarz_map

__all__ = ["eval_expr", "parse_ratfun1"]


def parse_ratfun1(text, var=None):
    """A univariate rational function from expression text.

    The variable name is sniffed when not given: whichever of x, v, t, z
    appears.  Plain numbers parse as constants.

    >>> parse_ratfun1("(1-v)/(1+v)").num
    [mpq(1,1), mpq(-1,1)]
    """
    names = (var,) if var else ("x", "v", "t", "z")
    last = None
    for nm in names:
        try:
            return mrat_to_rf1(parse_mrat(text, names=(nm,)))
        except DiaglabError as err:
            last = err
    raise last


def _scalar(v):
    return v if not isinstance(v, str) else scalar_from_text(v)


def _params_heun(d):
    p = HeunParams(_scalar(d["a"]), _scalar(d["q"]), _scalar(d["alpha"]),
                   _scalar(d["beta"]), _scalar(d["gamma"]),
                   _scalar(d["delta"]))
    return p, _scalar(d.get("scale", 1))


def _params_hyp(d):
    up = [_scalar(s) for s in str(d["upper"]).split(",")]
    lo = [_scalar(s) for s in str(d["lower"]).split(",")] if str(
        d.get("lower", "")).strip() else []
    return HypParams(up, lo)


def _children(payload):
    if isinstance(payload, list):
        return payload
    return [payload]


def eval_expr(e, terms):
    """Evaluate a tree to a PSeries with absolute precision `terms`.

    Any error raised below is re-raised with the path of node names from
    the root prepended, so a deep fixture failure names its location.
    """
    return _eval(e, QQ(terms), "root")


def _eval(e, m, path):
    if not isinstance(e, dict) or len(e) != 1:
        raise BadParameters("%s: node must be a one-key mapping, got %r"
                            % (path, e))
    (name, payload), = e.items()
    here = path + "." + name
    try:
        return _dispatch(name, payload, m, here)
    except DiaglabError as err:
        if str(err).startswith(path + "."):
            raise
        raise type(err)("%s: %s" % (here, err)) from err


def _dispatch(name, payload, m, path):
    if name == "constant":
        return PSeries(0, [_scalar(payload)], None)
    if name == "rational":
        return parse_ratfun1(payload).series(m)
    if name == "hyp":
        return hyp_series(_params_hyp(payload), m)
    if name == "heun":
        p, scale = _params_heun(payload)
        return heun_series(p, scale, m)
    if name == "diag":
        names = tuple(s.strip() for s in payload["vars"].split(","))
        r = parse_mrat(payload["text"], names=names)
        if "partial" in payload:
            r = homog_partial(r, names.index(payload["partial"]))
        return diagonal(r, int(m))
    if name == "nome":
        return compute_nome(parse_diffop(payload["op"]), m)
    if name == "frobenius":
        return frobenius_analytic(parse_diffop(payload["op"]),
                                  QQ(_scalar(payload["exponent"])), int(m))
    if name == "schwarz_map":
        return schwarz_map(parse_diffop(payload), int(m))
    if name == "algebraic":
        rel = parse_alg_relation(payload["relation"])
        return newton_branch(rel, seed_from_text(payload["seed"]), m)

    if name in ("add", "sub", "mul", "div", "compose", "hadamard"):
        kids = _children(payload)
        if name in ("sub", "div", "compose", "hadamard") and len(kids) != 2:
            raise BadParameters("%s takes exactly two children" % name)
        vals = [_eval(k, m, "%s[%d]" % (path, i))
                for i, k in enumerate(kids)]
        if name == "compose":
            return ps_compose(vals[0], vals[1], prec=m)
        if name == "hadamard":
            return ps_hadamard(vals[0], vals[1])
        if name == "div":
            return ps_div(vals[0], vals[1], prec=m)
        acc = vals[0]
        for v in vals[1:]:
            acc = {"add": ps_add, "sub": ps_sub, "mul": ps_mul}[name](acc, v)
        return acc if name != "mul" else ps_truncate(acc, m)

    if name in ("pow", "scale_x", "subst_x", "nth_root", "shift"):
        kids = _children(payload)
        if len(kids) != 2:
            raise BadParameters("%s takes [child, argument]" % name)
        val = _eval(kids[0], m, path + "[0]")
        if name == "pow":
            return ps_pow(val, QQ(_scalar(kids[1])), prec=m)
        if name == "nth_root":
            return ps_pow(val, QQ(1, int(kids[1])), prec=m)
        if name == "scale_x":
            return ps_scale_x(val, _scalar(kids[1]))
        if name == "shift":
            return ps_shift(val, QQ(_scalar(kids[1])))
        inner = parse_ratfun1(kids[1]).series(m)
        return ps_compose(val, inner, prec=m)

    if name in ("theta", "dx", "sqrt", "reversion"):
        val = _eval(_children(payload)[0], m, path + "[0]")
        if name == "theta":
            return ps_theta(val)
        if name == "dx":
            return ps_diff(val)
        if name == "reversion":
            return ps_reversion(val, prec=m)
        return ps_pow(val, QQ(1, 2), prec=m)

    raise BadParameters("unknown expression node %r" % name)
