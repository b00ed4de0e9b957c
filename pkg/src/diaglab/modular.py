"""Nome series, the globally-bounded classifier, and modular-equation checks.

The nome of an operator with a maximally-unipotent point at x = 0 is
q = x exp(t/y0), built from the Frobenius pair y0, y0 log x + t.  A series
is called globally bounded when a single rescale x -> N x and one overall
denominator c turn all its coefficients into integers; with finite data
the classifier reports evidence-based verdicts that carry the number of
coefficients inspected.  Modular equations are checked two ways: zero
series residual P(A(x), B(x)) and exact zero after substituting a rational
parametrization.
"""

from .errors import (BadParameters, DiaglabError, ExponentNotCleared,
                     InsufficientData, LogCase, NotApplicable, ParseError)
from .field import QQ, is_rational
from .series import (PSeries, ps_add, ps_diff, ps_div, ps_exp, ps_mul,
                     ps_pow, ps_schwarzian, ps_scalar_mul, ps_shift, ps_sub,
                     ps_truncate)
from .upoly import RatFun1, up_add, up_is_zero, up_mul, up_scale
from .mrat import parse_mrat
from .diffop import (frobenius_analytic, frobenius_log_pair,
                     indicial_exponents)
from .special import HypParams, heun_op, hyp_op_2f1, hyp_series


def compute_nome(l2, terms):
    """q(x) = x exp(t/y0) to absolute precision `terms`, where y0 and
    y0 log x + t are the Frobenius solutions at a double exponent 0.

    q = x + O(x^2); NoMirrorMap propagates when the indicial polynomial
    does not have a double root at 0.
    """
    terms = int(terms)
    y0, t = frobenius_log_pair(l2, terms + 1)
    q = ps_shift(ps_exp(ps_div(t, y0)), 1)
    return ps_truncate(q, terms)


class GBoundVerdict:
    """Outcome of the globally-bounded test on a finite stretch of series.

    tag is one of "Bounded", "Unbounded", "Inconclusive".  Bounded carries
    the rescale N and overall denominator c with c * N^n * c_n integral
    for every inspected n; Unbounded carries a witness denominator prime
    and the index where it appears.  terms_inspected records how much
    evidence the verdict rests on.
    """

    __slots__ = ("tag", "rescale", "denom", "witness_prime", "witness_index",
                 "terms_inspected")

    def __init__(self, tag, rescale=None, denom=None, witness_prime=None,
                 witness_index=None, terms_inspected=0):
        self.tag = tag
        self.rescale = rescale
        self.denom = denom
        self.witness_prime = witness_prime
        self.witness_index = witness_index
        self.terms_inspected = terms_inspected

    def is_bounded(self):
        return self.tag == "Bounded"

    def __repr__(self):
        if self.tag == "Bounded":
            body = "N=%d, c=%d" % (self.rescale, self.denom)
        elif self.tag == "Unbounded":
            body = "prime %d at x^%d" % (self.witness_prime,
                                         self.witness_index)
        else:
            body = "no verdict"
        return "GBoundVerdict(%s: %s; %d terms)" % (self.tag, body,
                                                    self.terms_inspected)

    def __eq__(self, other):
        if not isinstance(other, GBoundVerdict):
            return NotImplemented
        return (self.tag, self.rescale, self.denom) == \
            (other.tag, other.rescale, other.denom)


_WARMUP = 10          # indices below this never fire the Unbounded rule
_RESCALE_CAP = 10 ** 15
_DENOM_CAP = 2 ** 32


def _prime_factors(d):
    from sympy import primefactors
    return primefactors(d)


def _primes_upto(n):
    from sympy import primerange
    return list(primerange(2, n + 1))


def _denominator(c):
    c = QQ(c)
    return int(c.denominator)


def gbound_classify(s, min_terms=40, prime_cap=200):
    """Evidence-based globally-bounded verdict for a rational Taylor series.

    Bounded: the candidate rescale N = prod p^ceil(max_n v_p(den c_n)/n)
    over denominator primes p <= prime_cap makes c * N^n * c_n integral for
    every available n with a small overall denominator c.  Unbounded on
    either of two signatures of an infinite denominator prime set: (a) some
    index n >= 10 has a denominator prime p > n/2 (a prime far too large
    for the index it appears at), or (b) a prime >= 5 divides a denominator
    for the first time past the halfway point of the inspected range (the
    prime support keeps growing instead of stabilising — a rescale that is
    finite on the first half keeps being outgrown).  Otherwise
    Inconclusive.  Raises InsufficientData below min_terms coefficients,
    and BadParameters for non-Taylor input.
    """
    if s.offset != int(s.offset) or s.offset < 0:
        raise BadParameters("globally-bounded test needs a Taylor series")
    if s.prec is None:
        # exact polynomial: every further coefficient is known to be zero
        navail = max(int(min_terms), int(s.offset) + len(s.coeffs))
    else:
        navail = int(s.prec)
    if navail < min_terms:
        raise InsufficientData("%d coefficients available, %d required"
                               % (navail, min_terms))
    coeffs = [QQ(s.coeff(n)) for n in range(navail)]
    dens = [int(c.denominator) for c in coeffs]

    # --- new-large-prime rule
    small = _primes_upto(max(navail // 2, 2))
    for n in range(_WARMUP, navail):
        d = dens[n]
        if d == 1:
            continue
        for p in small:
            if 2 * p > n:
                break
            while d % p == 0:
                d //= p
        if d > 1:
            # d only has prime factors > n/2; find the smallest as witness
            w = None
            for p in small:
                if d % p == 0:
                    w = p
                    break
            if w is None:
                w = min(_prime_factors(d))
            return GBoundVerdict("Unbounded", witness_prime=int(w),
                                 witness_index=n, terms_inspected=navail)

    # --- growing-prime-support rule: a prime first dividing a denominator
    # past the halfway point means the support did not stabilise
    half = navail // 2
    seen = set()
    for n in range(1, navail):
        d = dens[n]
        if d == 1:
            continue
        for p in _prime_factors(d):
            if p not in seen:
                seen.add(p)
                if p >= 5 and n > max(half, _WARMUP):
                    return GBoundVerdict("Unbounded", witness_prime=int(p),
                                         witness_index=n,
                                         terms_inspected=navail)

    # --- rescale certification
    caps = _primes_upto(prime_cap)
    vmax = {}
    for n in range(1, navail):
        d = dens[n]
        if d == 1:
            continue
        for p in caps:
            v = 0
            while d % p == 0:
                d //= p
                v += 1
            if v:
                need = -(-v // n)       # ceil(v / n)
                if need > vmax.get(p, 0):
                    vmax[p] = need
        if d > 1:
            return GBoundVerdict("Inconclusive", terms_inspected=navail)
    rescale = 1
    for p, v in sorted(vmax.items()):
        rescale *= p ** v
        if rescale > _RESCALE_CAP:
            return GBoundVerdict("Inconclusive", terms_inspected=navail)
    denom = 1
    powern = 1
    for n in range(navail):
        c = coeffs[n] * powern
        d = int(QQ(c).denominator)
        denom = denom * d // _gcd(denom, d)
        if denom > _DENOM_CAP:
            return GBoundVerdict("Inconclusive", terms_inspected=navail)
        powern *= rescale
    return GBoundVerdict("Bounded", rescale=rescale, denom=denom,
                         terms_inspected=navail)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def scan_pair(a, b, terms, min_terms=40, prime_cap=200):
    """One grid point of the modular-2F1 scan: (a, b, N) when both the
    series of 2F1([a, b], [1], x) and its nome are Bounded, else None.

    Degenerate points are excluded rather than raised: parameters outside
    the open interval (0, 1) — such as a = b = 1, where the series is the
    rational function 1/(1 - x) and no modular-form candidate exists — and
    points whose nome construction hits a logarithm obstruction both
    return None, so callers may probe anything.
    """
    a = QQ(a)
    b = QQ(b)
    if not (0 < a < 1 and 0 < b < 1):
        return None
    try:
        ser = hyp_series(HypParams([a, b], [1]), terms)
        vs = gbound_classify(ser, min_terms, prime_cap)
        if not vs.is_bounded():
            return None
        nome = compute_nome(hyp_op_2f1(a, b, 1), terms)
        vn = gbound_classify(nome, min_terms, prime_cap)
        if not vn.is_bounded():
            return None
        return (a, b, vs.rescale)
    except InsufficientData:
        raise
    except DiaglabError:
        # degenerate grid point (logarithm obstruction, bad parameters):
        # handled by exclusion, not by failure
        return None


def scan_modular_2f1(denominator_bound, terms, min_terms=40, prime_cap=200):
    """All unordered pairs a <= b of reduced rationals in (0, 1) with
    denominator <= denominator_bound whose 2F1([a, b], [1]) series AND
    nome are both Bounded on `terms` coefficients of evidence.

    Returns a sorted list of (a, b, rescale) triples.
    """
    grid = []
    for q in range(2, int(denominator_bound) + 1):
        for p in range(1, q):
            if _gcd(p, q) == 1:
                grid.append(QQ(p, q))
    grid.sort()
    out = []
    for i, a in enumerate(grid):
        for b in grid[i:]:
            hit = scan_pair(a, b, terms, min_terms, prime_cap)
            if hit is not None:
                out.append(hit)
    return sorted(out)


class BivariatePoly:
    """Finite polynomial sum c_ij A^i B^j, held as {(i, j): scalar}."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        self.terms = {(int(i), int(j)): QQ(c) if is_rational(c) else c
                      for (i, j), c in dict(terms).items()
                      if c != 0}

    def degrees(self):
        da = max((i for i, _ in self.terms), default=0)
        db = max((j for _, j in self.terms), default=0)
        return da, db

    def is_symmetric(self):
        return all(self.terms.get((j, i)) == c
                   for (i, j), c in self.terms.items())

    def swapped(self):
        return BivariatePoly({(j, i): c for (i, j), c in self.terms.items()})

    def eval_series(self, A, B, prec=None):
        da, db = self.degrees()
        pa = _power_table(A, da)
        pb = _power_table(B, db)
        acc = None
        for (i, j), c in sorted(self.terms.items()):
            t = ps_scalar_mul(c, ps_mul(pa[i], pb[j]))
            acc = t if acc is None else ps_add(acc, t)
        if acc is None:
            acc = PSeries(0, [], None)
        return acc if prec is None else ps_truncate(acc, prec)

    def eval_ratfun(self, A, B):
        """Exact value at univariate rational functions A(v), B(v).

        Clears both denominators up front and accumulates the numerator
        with plain polynomial arithmetic; normalisation happens once at
        the end.  (Term-by-term rational-function sums would run a gcd
        per term, which is hopeless for the big modular polynomials.)
        """
        da, db = self.degrees()
        pna = _up_power_table(list(A.num), da)
        pda = _up_power_table(list(A.den), da)
        pnb = _up_power_table(list(B.num), db)
        pdb = _up_power_table(list(B.den), db)
        acc = []
        for (i, j), c in sorted(self.terms.items()):
            t = up_mul(up_mul(pna[i], pda[da - i]),
                       up_mul(pnb[j], pdb[db - j]))
            acc = up_add(acc, up_scale(c, t))
        if up_is_zero(acc):
            return RatFun1([0])
        return RatFun1(acc, up_mul(pda[da], pdb[db]))

    def __repr__(self):
        da, db = self.degrees()
        return "BivariatePoly(%d terms, degrees (%d, %d))" % (
            len(self.terms), da, db)


def _power_table(s, n):
    out = [PSeries(0, [QQ(1)], None)]
    for _ in range(n):
        out.append(ps_mul(out[-1], s))
    return out


def _up_power_table(c, n):
    out = [[QQ(1)]]
    for _ in range(n):
        out.append(up_mul(out[-1], c))
    return out


def parse_bivariate(text):
    """Polynomial in A and B, e.g. `A^2*B - 3*A*B^2 + 1728*A`."""
    r = parse_mrat(text, names=("A", "B"))
    if r.den.deg_vec() != (0, 0):
        raise ParseError("modular polynomial must not have denominators")
    dc = r.den.constant_term()
    return BivariatePoly({(i, j): c / dc
                          for (i, j), c in r.num.terms.items()})


def relation_residual(p, a, b, terms):
    """P(A(x), B(x)) truncated at absolute precision `terms`; the check
    passes when this residual is the zero series."""
    return p.eval_series(a, b, prec=QQ(terms))


def param_identity_check(p, a, b):
    """Exact check of P(A(v), B(v)) = 0 for rational functions A, B:
    substitutes, clears denominators, and tests the numerator."""
    val = p.eval_ratfun(a, b)
    return len(val.num) == 0


def _series_of_ratfun_at(rf, s, prec):
    # Evaluate at the argument's own precision and only truncate the
    # quotient: truncating num/den up front would charge the division's
    # valuation loss against `prec` twice.
    work = s.prec if s.prec is not None else prec
    num = _horner_poly(list(rf.num), s, work)
    den = _horner_poly(list(rf.den), s, work)
    return ps_truncate(ps_div(num, den), prec)


def _horner_poly(cs, s, prec):
    acc = PSeries(0, [], prec)
    for c in reversed(cs):
        acc = ps_truncate(ps_add(ps_mul(acc, s), PSeries(0, [c], None)),
                          prec)
    return acc


def schwarzian_residual(y, w_target, w_source=None, terms=None):
    """Residual of a Schwarzian equation at the series level.

    Without a source: {y, x} - W_target(x).  With one, the change-of-
    variable (correspondence) form:

        {y, x} + W_target(y(x)) * y'(x)^2 - W_source(x).

    W arguments are univariate rational functions; poles at 0 are fine
    (the expansions are Laurent).  Returns the residual series, truncated
    at `terms` when given; zero means y solves the equation.
    """
    s = ps_schwarzian(y)
    prec = s.prec if terms is None else QQ(terms)
    if w_source is None:
        resid = ps_sub(s, w_target.series(prec if prec is not None else 32))
    else:
        wy = _series_of_ratfun_at(w_target, y,
                                  prec if prec is not None else 32)
        y1 = ps_diff(y)
        resid = ps_sub(ps_add(s, ps_mul(wy, ps_mul(y1, y1))),
                       w_source.series(prec if prec is not None else 32))
    return resid if prec is None else ps_truncate(resid, prec)


def schwarz_map(l2, terms):
    """Ratio of the two Frobenius solutions at 0, tau = x^(e2-e1)(1 + ...),
    for an order-two operator with distinct exponents not differing by an
    integer.  The leading coefficient is normalized to 1.

    When the exponents coincide or differ by an integer the ratio needs a
    logarithm and LogCase is raised — the right object is then the nome.
    """
    if l2.order() != 2:
        raise BadParameters("Schwarz map needs an order-two operator")
    e1, e2 = indicial_exponents(l2)
    if (e2 - e1).denominator == 1:
        raise LogCase("exponents differ by an integer; "
                      "use the nome instead")
    terms = int(terms)
    u1 = frobenius_analytic(l2, e1, terms)
    u2 = frobenius_analytic(l2, e2, terms)
    return ps_div(u2, u1)


def heun_nome_quadratic_coeff(p):
    """Coefficient of x^2 in the nome of heun_op(p) when gamma = 1, in
    closed form:

        delta - 2*q/a + (alpha + beta - delta) / a.

    Derivation: with y0 = 1 + (q/a)x + ... the analytic solution and
    y0*log(x) + t the logarithmic companion, the nome x*exp(t/y0) has
    second coefficient t_1, and the x^0 coefficient of the inhomogeneous
    recurrence for t gives a*t_1 = delta*a + (alpha+beta-delta) - 2*q
    directly.  The closed form is asserted against compute_nome before
    returning.  Raises NotApplicable when gamma != 1 (no double exponent
    at 0, hence no logarithmic pair and no nome).
    """
    if p.gamma != 1:
        raise NotApplicable("nome needs gamma = 1")
    val = p.delta - 2 * p.q / p.a + (p.alpha + p.beta - p.delta) / p.a
    q = compute_nome(heun_op(p), 3)
    if q.coeff(2) != val:
        raise AssertionError("closed form disagrees with the computed nome")
    return val


def exponent_cleared_identity_check(lhs_factors, rhs_factors,
                                    clearing_power, terms):
    """Residual lhs^k - rhs^k for sides given in factored form.

    Each side is a list of (base, exponent) pairs with rational exponents;
    base is a PSeries or a scalar.  The sides themselves may involve
    fractional powers with no meaning in the field — raising to the
    clearing power k must make every single exponent an integer, or
    ExponentNotCleared is raised.  Returns the residual series truncated
    at absolute precision `terms`.
    """
    k = QQ(clearing_power)
    if k.denominator != 1 or k <= 0:
        raise BadParameters("clearing power must be a positive integer")

    def side(factors):
        acc = PSeries(0, [QQ(1)], None)
        for base, ex in factors:
            ke = QQ(ex) * k
            if ke.denominator != 1:
                raise ExponentNotCleared(
                    "exponent %s * %s is not an integer" % (ex, k))
            ke = int(ke)
            if isinstance(base, PSeries):
                acc = ps_mul(acc, ps_pow(base, ke, prec=QQ(terms)))
            else:
                b = base if type(base).__name__ == "QuadExt" else QQ(base)
                acc = ps_scalar_mul(b ** ke, acc)
        return ps_truncate(acc, QQ(terms))

    return ps_truncate(ps_sub(side(lhs_factors), side(rhs_factors)),
                       QQ(terms))
