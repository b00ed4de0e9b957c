"""Series solutions of polynomial equations sum c_k(x) Y^k = 0.

Branches are selected by an explicit seed (valuation, leading coefficient)
and grown by Newton iteration, which doubles the number of correct
coefficients per step.  Every produced branch is substituted back into its
relation before being returned; a nonzero residual is a hard failure, not
a warning.
"""

from .errors import (BadParameters, BadSeed, ParseError, RamifiedBranch,
                     RootNotInField)
from .field import QQ, is_rational, scalar_from_text, scalar_str
from .series import (PSeries, ps_add, ps_div, ps_equal, ps_mul, ps_nth_root,
                     ps_scalar_mul, ps_sub, ps_truncate)
from .mrat import parse_mrat


def _to_series(c):
    if isinstance(c, PSeries):
        return c
    if isinstance(c, (list, tuple)):
        return PSeries(0, list(c), None)
    return PSeries(0, [c], None)


class AlgRelation:
    """Polynomial relation sum c_k(x) Y^k = 0; cs[k] is the Y^k coefficient.

    Coefficients may be given as scalars, dense coefficient lists, or
    PSeries; exact polynomials carry no truncation and never limit the
    precision of a computed branch.
    """

    __slots__ = ("cs",)

    def __init__(self, cs):
        cs = [_to_series(c) for c in cs]
        while cs and cs[-1].is_zero():
            cs.pop()
        if len(cs) < 2:
            raise BadParameters("relation must have degree at least 1 in Y")
        self.cs = cs

    def degree(self):
        return len(self.cs) - 1

    def derivative_in_y(self):
        return AlgRelation([ps_scalar_mul(QQ(k), c)
                            for k, c in enumerate(self.cs)][1:])

    def apply(self, y, prec=None):
        """The series sum c_k(x) y(x)^k, by Horner in Y."""
        acc = self.cs[-1]
        for c in reversed(self.cs[:-1]):
            acc = ps_add(ps_mul(acc, y), c)
        return acc if prec is None else ps_truncate(acc, prec)

    def __repr__(self):
        return "AlgRelation(degree=%d)" % self.degree()


class BranchSeed:
    """Branch selector: the series starts as lead * x^val."""

    __slots__ = ("val", "lead")

    def __init__(self, val, lead):
        lead = lead if type(lead).__name__ == "QuadExt" else QQ(lead)
        if lead == 0:
            raise BadParameters("seed leading coefficient must be nonzero")
        self.val = QQ(val)
        self.lead = lead

    def __repr__(self):
        return "BranchSeed(%s, %s)" % (self.val, scalar_str(self.lead))


def seed_from_text(text):
    """Parse the `v:l` form, e.g. `1:-256` or `0:1/2+1/2*sqrt(-3)`."""
    parts = text.split(":", 1)
    if len(parts) != 2:
        raise ParseError("seed must look like v:l, got %r" % (text,))
    try:
        val = QQ(parts[0].strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError("bad seed valuation %r" % (parts[0],))
    return BranchSeed(val, scalar_from_text(parts[1].strip()))


def _leading_form(rel, seed):
    # exponents val(c_k) + k*v; collect the minimal slice
    v = seed.val
    mu = None
    terms = {}
    for k, c in enumerate(rel.cs):
        if c.is_zero():
            continue
        ex = c.val() + k * v
        if mu is None or ex < mu:
            mu = ex
            terms = {k: c.lead()}
        elif ex == mu:
            terms[k] = c.lead()
    return mu, terms


def newton_branch(rel, seed, terms):
    """The branch of rel with leading term seed.lead * x^seed.val, to
    absolute precision `terms`.

    The seed must be a simple root of the relation's leading form: the
    x-minimal homogeneous slice g(T) of sum c_k (T x^v)^k must satisfy
    g(lead) = 0 (else BadSeed) and g'(lead) != 0 (else RamifiedBranch).

    >>> rel = AlgRelation([[-1, -1], [], [1]])     # Y^2 - (1+x)
    >>> print(newton_branch(rel, BranchSeed(0, 1), 4))
    1 + 1/2*x - 1/8*x^2 + 1/16*x^3 + O(x^4)
    """
    mu, lead_terms = _leading_form(rel, seed)
    ell = seed.lead
    g = QQ(0)
    dg = QQ(0)
    for k, c in lead_terms.items():
        g = g + c * ell ** k
        if k >= 1:
            dg = dg + k * c * ell ** (k - 1)
    if g != 0:
        raise BadSeed("leading terms do not cancel at %s*x^%s"
                      % (scalar_str(ell), seed.val))
    if dg == 0:
        raise RamifiedBranch("multiple root at the seed; branch is ramified")
    # valuation of d(rel)/dY along the branch
    w = mu - seed.val
    target = QQ(terms)
    work = target + max(w, 0) + 2
    y = PSeries(seed.val, [ell], work)
    drel = rel.derivative_in_y()
    for _ in range(128):
        u = rel.apply(y, work)
        if u.is_zero() or u.val() >= work:
            break
        y = ps_truncate(ps_sub(y, ps_div(u, drel.apply(y, work))), work)
    resid = rel.apply(y, target)
    if not (resid.is_zero() or resid.val() >= target):
        raise AssertionError("branch failed its residual post-check")
    return ps_truncate(y, target)


def quadratic_branches(c2, c1, c0, terms, seeds=None):
    """Both branches of c2 Y^2 + c1 Y + c0 = 0, to absolute precision
    `terms`, via the quadratic formula with a series square root.

    Returns ((-c1 + r) / (2 c2), (-c1 - r) / (2 c2)) with r the principal
    square root of the discriminant.  When the discriminant has odd
    valuation or its leading coefficient has no square root in the field,
    the branches cannot be separated by the closed formula; in that case
    the caller must supply `seeds` (a pair of BranchSeed) and both
    branches are grown by newton_branch instead.

    Sum and product are checked against -c1/c2 and c0/c2 before returning.
    """
    c2 = _to_series(c2)
    c1 = _to_series(c1)
    c0 = _to_series(c0)
    if c2.is_zero():
        raise BadParameters("quadratic coefficient is zero")
    work = int(terms) + 2 * max(0, int(c2.val())) + 2
    disc = ps_truncate(
        ps_sub(ps_mul(c1, c1), ps_scalar_mul(QQ(4), ps_mul(c0, c2))),
        2 * work)
    yp = ym = None
    if not disc.is_zero() and disc.val().denominator == 1 \
            and disc.val() % 2 == 0:
        try:
            r = ps_nth_root(disc, 2)
        except RootNotInField:
            r = None
        if r is not None:
            den = ps_scalar_mul(QQ(2), c2)
            yp = ps_div(ps_sub(r, c1), den, prec=terms)
            ym = ps_div(-ps_add(r, c1), den, prec=terms)
    elif disc.is_zero():
        den = ps_scalar_mul(QQ(2), c2)
        yp = ym = ps_div(-c1, den, prec=terms)
    if yp is None:
        if seeds is None:
            raise RamifiedBranch(
                "discriminant square root is outside the field; "
                "supply explicit branch seeds")
        rel = AlgRelation([c0, c1, c2])
        yp = newton_branch(rel, seeds[0], terms)
        ym = newton_branch(rel, seeds[1], terms)
    if not ps_equal(ps_add(yp, ym), ps_div(-c1, c2, prec=terms)):
        raise AssertionError("branch sum check failed")
    if not ps_equal(ps_mul(yp, ym), ps_div(c0, c2, prec=terms)):
        raise AssertionError("branch product check failed")
    return yp, ym


def series_nth_root(s, n, prec=None):
    """Principal n-th root: valuation divided by n, leading coefficient
    replaced by its n-th root in the field (RootNotInField otherwise).

    >>> from .series import ps_from_coeffs
    >>> print(series_nth_root(ps_from_coeffs([1, 1], prec=4), 3))
    1 + 1/3*x - 1/9*x^2 + 5/81*x^3 + O(x^4)
    """
    n = int(n)
    if n <= 0:
        raise BadParameters("root index must be a positive integer")
    if n == 1:
        return s if prec is None else ps_truncate(s, prec)
    return ps_nth_root(s, n, prec=prec)


def algebraic_prefactor(rel, n, seed, terms):
    """The series A with A^n equal to the seeded branch of rel.

    Grows the branch by newton_branch at enough extra precision for the
    root, then takes the principal n-th root.
    """
    v = max(QQ(0), QQ(seed.val))
    y = newton_branch(rel, seed, QQ(terms) + v + 2)
    return series_nth_root(y, n, prec=terms)


def parse_alg_relation(text):
    """Relation DSL: a polynomial in x and Y, e.g.

        (1 + 432*x)*Y^2 - (1 - 864*x)*Y + 186624*x^2

    Any expanded or factored polynomial form accepted by the rational
    expression parser works; the denominator must be trivial.
    """
    r = parse_mrat(text, names=("x", "Y"))
    den = r.den
    if den.deg_vec() != (0, 0):
        raise ParseError("relation must be polynomial in x and Y")
    dc = den.constant_term()
    by_k = {}
    for mono, c in r.num.terms.items():
        by_k.setdefault(mono[1], {})[mono[0]] = c / dc
    deg = max(by_k) if by_k else 0
    cs = []
    for k in range(deg + 1):
        row = by_k.get(k, {})
        dense = [QQ(0)] * (max(row) + 1 if row else 0)
        for i, c in row.items():
            dense[i] = c
        cs.append(PSeries(0, dense, None))
    return AlgRelation(cs)
