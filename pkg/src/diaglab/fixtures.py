"""Fixture documents, the verification corpus, and its runner.

A fixture is one JSON document (one file under corpus/) that states a
single checkable fact and its pass condition.  Schema, common keys:

    id          unique kebab-case name (report order is sorted by id)
    kind        one of the kinds below
    covers      coverage tag (see COVERAGE_KEYS); the corpus index test
                asserts every tag is represented
    provenance  one line saying what the data IS, so a transcription
                error is auditable against the stated source object
    field       optional discriminant d for Q(sqrt(d)) data (default 0)
    order       absolute series precision for the check; when omitted,
                kinds with an `expected` list use len(expected) + 4

Kinds and their payloads:

    expected    {expr, expected: [scalars...], offset?}   coefficients
                offset, offset+1, ... must equal the list, exactly
    equal       {expr_lhs, expr_rhs}      series agree through `order`
    residual    {op, expr}                op annihilates expr through `order`
    modular     {poly, A, B}              P(A(x),B(x)) = 0 through `order`
    param       {poly, A, B}              exact rational-function identity
    gbound      {expr, verdict, rescale?, min_terms?}     classifier verdict
    opform      {op, expected_op, pullback?}  operator equality up to scalar
    schwarzian  {y, w_target, w_source?}  {y,x} = W, or with a source the
                change-of-variable form {y,x} + W_t(y) y'^2 - W_s(x) = 0
    cleared     {lhs, rhs, power}         fractional-power identity checked
                after clearing: each side a list of [base, exponent] pairs
                (base: expr tree or scalar text), residual lhs^k - rhs^k
    guess       {expr, max_order, max_degree, expected_op}   the minimal
                operator recovered from `order` series terms matches
    scan        {bound, pairs: [[a, b, rescale]...]}   classifier sweep
                over the 2F1 parameter grid, exact set equality
    maier       {alpha, beta}             both sides of the degree-two
                pullback reduction over Q(sqrt(-3)) agree through `order`

`expr` payloads are expression trees for diaglab.expr.eval_expr; `poly`,
`A`/`B` (modular) are the text DSLs of parse_bivariate / expression
trees; `A`/`B` (param) are rational-function texts in one variable.

Operator payloads (`op`, `expected_op`) accept either a parse_diffop text
or a structured spec:  {"heun": {a,q,alpha,beta,gamma,delta}} for the
cleared Heun operator, {"hyp2f1": {a,b,c}}, {"sym_square": spec}, or
{"mul": [spec, spec, ...]} for (non-commutative) operator products.

Reports are deterministic: running the same corpus twice — at any thread
count — yields byte-identical report streams.  Timing is measured and
kept on the VerifyReport object but is excluded from records unless
explicitly requested, precisely so the default output stays stable.
"""

import json
import os
import time

from .errors import BadParameters, DiaglabError, NotFound
from .field import QQ, scalar_from_text, scalar_str
from .series import ps_equal, ps_first_mismatch, ps_zero
from .diffop import (annihilation_residual, guess_ode, op_equal, op_mul,
                     op_pullback, parse_diffop, sym_square)
from .special import HeunParams, heun_op, hyp_op_2f1, maier_sides
from .modular import (exponent_cleared_identity_check, gbound_classify,
                      param_identity_check, parse_bivariate,
                      scan_modular_2f1, schwarzian_residual)
from .expr import eval_expr, parse_ratfun1

__all__ = ["FixtureDoc", "VerifyReport", "run_fixture", "load_fixture",
           "iter_corpus", "run_corpus", "COVERAGE_KEYS"]

# one tag per distinct source-material cluster the corpus must touch
COVERAGE_KEYS = (
    "heun-operator-basics",
    "lattice-green",
    "family-a", "family-b", "family-c", "family-d", "family-e", "family-f",
    "substitution-invariance",
    "extremal-three-variable",
    "modular-form-derivatives",
    "shimura-telescoper",
    "heun-factorization",
    "alt-heun-identities",
    "degree-six-relation",
    "pullback-quartic-family",
    "pullback-quintic-family",
    "nome-integrality",
    "modular-scan",
    "shimura-modular-equations",
    "three-variable-derivative",
    "belyi-compositions",
    "heun-to-hyp-reduction",
    "reciprocal-duality",
)

_KINDS = ("expected", "equal", "residual", "modular", "param", "gbound",
          "opform", "schwarzian", "cleared", "guess", "scan", "maier")


def _scalar(text):
    return scalar_from_text(str(text))


def _op_of(spec):
    """An operator from a fixture payload: parse_diffop text, or a
    structured spec (see the module docstring)."""
    if isinstance(spec, str):
        return parse_diffop(spec)
    if not isinstance(spec, dict) or len(spec) != 1:
        raise BadParameters("operator spec must be text or a one-key "
                            "mapping, got %r" % (spec,))
    (name, payload), = spec.items()
    if name == "heun":
        return heun_op(HeunParams(*(_scalar(payload[k]) for k in
                                    ("a", "q", "alpha", "beta",
                                     "gamma", "delta"))))
    if name == "hyp2f1":
        return hyp_op_2f1(_scalar(payload["a"]), _scalar(payload["b"]),
                          _scalar(payload["c"]))
    if name == "sym_square":
        return sym_square(_op_of(payload))
    if name == "mul":
        ops = [_op_of(s) for s in payload]
        acc = ops[0]
        for o in ops[1:]:
            acc = op_mul(acc, o)
        return acc
    raise BadParameters("unknown operator spec %r" % name)


class FixtureDoc:
    """One parsed fixture document."""

    __slots__ = ("id", "kind", "covers", "provenance", "field", "order",
                 "payload", "path")

    def __init__(self, data, path=None):
        try:
            self.id = data["id"]
            self.kind = data["kind"]
        except KeyError as k:
            raise BadParameters("fixture missing required key %s" % k)
        if self.kind not in _KINDS:
            raise BadParameters("fixture %s: unknown kind %r"
                                % (self.id, self.kind))
        self.covers = data.get("covers")
        self.provenance = data.get("provenance", "")
        self.field = data.get("field", 0)
        self.order = data.get("order")
        self.payload = data
        self.path = path

    def effective_order(self):
        if self.order is not None:
            return QQ(self.order)
        if self.kind == "expected":
            off = QQ(scalar_from_text(str(self.payload.get("offset", 0))))
            return off + len(self.payload["expected"]) + 4
        if self.kind in ("param", "opform", "scan"):
            return QQ(0)          # exact checks; no series window involved
        raise BadParameters("fixture %s: kind %s requires an order"
                            % (self.id, self.kind))


class VerifyReport:
    """Outcome of one fixture run."""

    __slots__ = ("id", "status", "mismatch", "detail", "micros")

    def __init__(self, id, status, mismatch=None, detail=None, micros=0):
        self.id = id
        self.status = status
        self.mismatch = mismatch
        self.detail = detail
        self.micros = micros

    def to_record(self, with_timing=False):
        rec = {"id": self.id, "status": self.status}
        if self.mismatch is not None:
            idx, lhs, rhs = self.mismatch
            rec["mismatch"] = {"index": str(idx), "lhs": lhs, "rhs": rhs}
        if self.detail is not None:
            rec["detail"] = self.detail
        if with_timing:
            rec["micros"] = self.micros
        return rec

    def line(self, with_timing=False):
        return json.dumps(self.to_record(with_timing), sort_keys=True)


def _mismatch_report(doc, diff_at):
    if diff_at is None:
        return VerifyReport(doc.id, "fail",
                            detail="sides differ beyond the shared window")
    idx, ca, cb = diff_at
    return VerifyReport(doc.id, "fail",
                        mismatch=(idx, scalar_str(ca), scalar_str(cb)))


def _check_expected(doc, m):
    s = eval_expr(doc.payload["expr"], m)
    off = QQ(scalar_from_text(str(doc.payload.get("offset", 0))))
    for i, text in enumerate(doc.payload["expected"]):
        want = scalar_from_text(str(text))
        got = s.coeff(off + i)
        if got != want:
            return VerifyReport(doc.id, "fail",
                                mismatch=(off + i, scalar_str(got),
                                          scalar_str(want)))
    return VerifyReport(doc.id, "pass")


def _check_equal(doc, m):
    a = eval_expr(doc.payload["expr_lhs"], m)
    b = eval_expr(doc.payload["expr_rhs"], m)
    if ps_equal(a, b, through=m):
        return VerifyReport(doc.id, "pass")
    diff = ps_first_mismatch(a, b)
    if diff is None:
        return VerifyReport(doc.id, "fail",
                            detail="window never reaches order %s" % m)
    return _mismatch_report(doc, diff)


def _check_residual(doc, m):
    op = _op_of(doc.payload["op"])
    pad = op.order() + max((len(c) for c in op.coeffs), default=1)
    s = eval_expr(doc.payload["expr"], m + pad)
    r = annihilation_residual(op, s)
    if ps_equal(r, ps_zero(), through=m):
        return VerifyReport(doc.id, "pass")
    diff = ps_first_mismatch(r, ps_zero())
    if diff is None:
        return VerifyReport(doc.id, "fail",
                            detail="residual window short of order %s" % m)
    return _mismatch_report(doc, diff)


def _check_modular(doc, m):
    poly = parse_bivariate(doc.payload["poly"])
    da, db = poly.degrees()
    a = eval_expr(doc.payload["A"], m + da + db)
    b = eval_expr(doc.payload["B"], m + da + db)
    r = poly.eval_series(a, b, prec=m)
    if ps_equal(r, ps_zero(), through=m):
        return VerifyReport(doc.id, "pass")
    return _mismatch_report(doc, ps_first_mismatch(r, ps_zero()))


def _check_param(doc, m):
    poly = parse_bivariate(doc.payload["poly"])
    a = parse_ratfun1(doc.payload["A"])
    b = parse_ratfun1(doc.payload["B"])
    if param_identity_check(poly, a, b):
        return VerifyReport(doc.id, "pass")
    return VerifyReport(doc.id, "fail",
                        detail="parametrization does not satisfy the relation")


def _check_gbound(doc, m):
    s = eval_expr(doc.payload["expr"], m)
    v = gbound_classify(s, min_terms=int(doc.payload.get("min_terms", 40)))
    want = doc.payload["verdict"]
    if v.tag != want:
        return VerifyReport(doc.id, "fail",
                            detail="verdict %s, wanted %s" % (v.tag, want))
    if "rescale" in doc.payload:
        wantn = int(doc.payload["rescale"])
        if v.rescale != wantn:
            return VerifyReport(
                doc.id, "fail",
                mismatch=("rescale", str(v.rescale), str(wantn)))
    return VerifyReport(doc.id, "pass")


def _check_opform(doc, m):
    op = _op_of(doc.payload["op"])
    if "pullback" in doc.payload:
        op = op_pullback(op, parse_ratfun1(doc.payload["pullback"]))
    want = _op_of(doc.payload["expected_op"])
    if op_equal(op, want):
        return VerifyReport(doc.id, "pass")
    return VerifyReport(doc.id, "fail",
                        detail="operators differ beyond a scalar factor")


def _check_schwarzian(doc, m):
    wt = parse_ratfun1(doc.payload["w_target"])
    ws = (parse_ratfun1(doc.payload["w_source"])
          if "w_source" in doc.payload else None)
    # high-valuation maps y lose precision in W(y); widen and retry when
    # the residual window falls short of the requested order
    for pad in (6, 24, 60):
        y = eval_expr(doc.payload["y"], m + pad)
        r = schwarzian_residual(y, wt, ws, terms=m)
        if ps_equal(r, ps_zero(), through=m):
            return VerifyReport(doc.id, "pass")
        diff = ps_first_mismatch(r, ps_zero())
        if diff is not None:
            return _mismatch_report(doc, diff)
    return VerifyReport(doc.id, "fail",
                        detail="residual window short of order %s" % m)


def _side_factors(items, m):
    out = []
    for base, ex in items:
        val = eval_expr(base, m) if isinstance(base, dict) else _scalar(base)
        out.append((val, QQ(_scalar(ex))))
    return out


def _check_cleared(doc, m):
    k = int(doc.payload["power"])
    lhs = _side_factors(doc.payload["lhs"], m + 2)
    rhs = _side_factors(doc.payload["rhs"], m + 2)
    r = exponent_cleared_identity_check(lhs, rhs, k, m)
    if ps_equal(r, ps_zero(), through=m):
        return VerifyReport(doc.id, "pass")
    return _mismatch_report(doc, ps_first_mismatch(r, ps_zero()))


def _check_guess(doc, m):
    s = eval_expr(doc.payload["expr"], m)
    want = _op_of(doc.payload["expected_op"])
    try:
        got = guess_ode(s, int(doc.payload["max_order"]),
                        int(doc.payload["max_degree"]))
    except NotFound:
        return VerifyReport(doc.id, "fail",
                            detail="no operator found within the bounds")
    if op_equal(got, want):
        return VerifyReport(doc.id, "pass")
    return VerifyReport(doc.id, "fail",
                        detail="recovered operator differs: %s" % got)


def _check_scan(doc, m):
    terms = int(doc.order if doc.order is not None else 60)
    got = scan_modular_2f1(int(doc.payload["bound"]), terms)
    want = sorted((QQ(_scalar(a)), QQ(_scalar(b)), int(n))
                  for a, b, n in doc.payload["pairs"])
    if list(got) == want:
        return VerifyReport(doc.id, "pass")
    extra = [t for t in got if t not in want]
    missing = [t for t in want if t not in got]
    return VerifyReport(doc.id, "fail",
                        detail="scan differs; extra=%s missing=%s"
                        % (extra, missing))


def _check_maier(doc, m):
    lhs, rhs = maier_sides(_scalar(doc.payload["alpha"]),
                           _scalar(doc.payload["beta"]), m)
    if ps_equal(lhs, rhs, through=m):
        return VerifyReport(doc.id, "pass")
    return _mismatch_report(doc, ps_first_mismatch(lhs, rhs))


_CHECKS = {
    "expected": _check_expected,
    "equal": _check_equal,
    "residual": _check_residual,
    "modular": _check_modular,
    "param": _check_param,
    "gbound": _check_gbound,
    "opform": _check_opform,
    "schwarzian": _check_schwarzian,
    "cleared": _check_cleared,
    "guess": _check_guess,
    "scan": _check_scan,
    "maier": _check_maier,
}


def run_fixture(doc):
    """Evaluate one fixture.  Never raises: structural problems come back
    as status "error" with the diagnostic (and node path) in `detail`."""
    t0 = time.perf_counter()
    try:
        m = doc.effective_order() if doc.kind != "gbound" else QQ(
            doc.order if doc.order is not None else 48)
        rep = _CHECKS[doc.kind](doc, m)
    except DiaglabError as err:
        rep = VerifyReport(doc.id, "error",
                           detail="%s: %s" % (type(err).__name__, err))
    except (KeyError, ValueError, TypeError) as err:
        rep = VerifyReport(doc.id, "error",
                           detail="%s: %s" % (type(err).__name__, err))
    rep.micros = int((time.perf_counter() - t0) * 1e6)
    return rep


def load_fixture(path):
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return FixtureDoc(data, path=path)


def iter_corpus(root):
    """FixtureDocs under a directory (or a single file), sorted by id.
    The index file is skipped; duplicate ids are rejected."""
    if os.path.isfile(root):
        return [load_fixture(root)]
    docs = []
    for name in sorted(os.listdir(root)):
        if not name.endswith(".json") or name == "index.json":
            continue
        docs.append(load_fixture(os.path.join(root, name)))
    seen = {}
    for d in docs:
        if d.id in seen:
            raise BadParameters("duplicate fixture id %s (%s, %s)"
                                % (d.id, seen[d.id], d.path))
        seen[d.id] = d.path
    docs.sort(key=lambda d: d.id)
    return docs


def run_corpus(docs, threads=1):
    """Run fixtures, id-sorted output regardless of scheduling."""
    docs = sorted(docs, key=lambda d: d.id)
    if threads and threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reps = list(pool.map(run_fixture, docs))
    else:
        reps = [run_fixture(d) for d in docs]
    return reps
