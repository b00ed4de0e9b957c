"""Heun and generalized hypergeometric series generators.

The two classical families everything else in the package consumes: pFq
series built from the Pochhammer one-step ratio, and local Heun solutions
built through the generic Frobenius solver on the cleared order-two
operator with regular singular points 0, 1, a and infinity.  On top of
those, three structural recognitions: the order-one factorization of the
Heun operator on the factorization locus of the accessory parameter, the
collapse to a 3F2 when the singularity at x = a is apparent, and the
degree-two hypergeometric pullback reduction over Q(sqrt(-3)).
"""

from .errors import (BadParameters, DegenerateSingularities, NotApplicable,
                     NotFactorable)
from .field import QQ, is_rational, qe, scalar_str
from .series import ps_compose, ps_from_coeffs, ps_scale_x
from .upoly import up_add, up_mul, up_scale
from .diffop import DiffOp, frobenius_analytic, op_from_theta, op_mul


def _sc(x):
    return x if type(x).__name__ == "QuadExt" else QQ(x)


def _is_nonpositive_integer(x):
    return is_rational(x) and x.denominator == 1 and x <= 0


class HeunParams:
    """Parameter pack (a, q, alpha, beta, gamma, delta).

    The exponent at the fourth finite singular point is pinned by the
    exponent-sum constraint and stored as .epsilon; it is never set
    independently.
    """

    __slots__ = ("a", "q", "alpha", "beta", "gamma", "delta", "epsilon")

    def __init__(self, a, q, alpha, beta, gamma, delta):
        self.a = _sc(a)
        self.q = _sc(q)
        self.alpha = _sc(alpha)
        self.beta = _sc(beta)
        self.gamma = _sc(gamma)
        self.delta = _sc(delta)
        self.epsilon = self.alpha + self.beta - self.gamma - self.delta + 1

    def __repr__(self):
        return "HeunParams(%s)" % ", ".join(
            scalar_str(v) for v in (self.a, self.q, self.alpha, self.beta,
                                    self.gamma, self.delta))

    def __eq__(self, other):
        if not isinstance(other, HeunParams):
            return NotImplemented
        return (self.a, self.q, self.alpha, self.beta, self.gamma,
                self.delta) == (other.a, other.q, other.alpha, other.beta,
                                other.gamma, other.delta)

    def __hash__(self):
        return hash((self.a, self.q, self.alpha, self.beta, self.gamma,
                     self.delta))


class HypParams:
    """Upper and lower parameter lists of a pFq series."""

    __slots__ = ("upper", "lower")

    def __init__(self, upper, lower):
        self.upper = tuple(_sc(u) for u in upper)
        self.lower = tuple(_sc(v) for v in lower)
        for v in self.lower:
            if _is_nonpositive_integer(v):
                raise BadParameters(
                    "lower parameter %s is a non-positive integer"
                    % scalar_str(v))

    def __repr__(self):
        ups = ", ".join(scalar_str(u) for u in self.upper)
        los = ", ".join(scalar_str(v) for v in self.lower)
        return "HypParams([%s], [%s])" % (ups, los)

    def __eq__(self, other):
        if not isinstance(other, HypParams):
            return NotImplemented
        return (self.upper, self.lower) == (other.upper, other.lower)

    def __hash__(self):
        return hash((self.upper, self.lower))


def hyp_series(p, terms):
    """Taylor series sum c_n x^n with c_0 = 1 and the one-step ratio

        c_{n+1} / c_n = prod(upper_i + n) / prod(lower_j + n) / (n + 1),

    truncated to absolute precision `terms`.

    >>> print(hyp_series(HypParams([QQ(1, 2), QQ(1, 2)], [1]), 4))
    1 + 1/4*x + 9/64*x^2 + 25/256*x^3 + O(x^4)
    """
    terms = max(int(terms), 0)
    cs = []
    c = QQ(1)
    for n in range(terms):
        cs.append(c)
        num = QQ(1)
        den = QQ(n + 1)
        for u in p.upper:
            num = num * (u + n)
        for v in p.lower:
            den = den * (v + n)
        c = c * num / den
    return ps_from_coeffs(cs, 0, prec=terms)


def _heun_cleared(p):
    # x(x-1)(x-a) Dx^2 + [g(x-1)(x-a) + d x(x-a) + e x(x-1)] Dx + (ab x - q)
    a = p.a
    x_1 = [QQ(-1), QQ(1)]
    x_a = [-a, QQ(1)]
    xx = [QQ(0), QQ(1)]
    lead = up_mul(xx, up_mul(x_1, x_a))
    mid = up_add(
        up_add(up_scale(p.gamma, up_mul(x_1, x_a)),
               up_scale(p.delta, up_mul(xx, x_a))),
        up_scale(p.epsilon, up_mul(xx, x_1)))
    last = [-p.q, p.alpha * p.beta]
    return DiffOp([last, mid, lead])


def heun_op(p):
    """The order-two operator with singular points 0, 1, a, infinity and
    local data given by `p`, with denominators cleared to polynomials:

        x(x-1)(x-a) Dx^2
        + [gamma (x-1)(x-a) + delta x(x-a) + epsilon x(x-1)] Dx
        + (alpha beta x - q).

    >>> heun_op(HeunParams(2, 0, 1, 1, 1, 1)).order()
    2
    """
    if p.a == 0 or p.a == 1:
        raise DegenerateSingularities(
            "singular point a = %s collides with 0 or 1" % scalar_str(p.a))
    return _heun_cleared(p)


def heun_series(p, scale, terms):
    """Analytic solution at 0 (value 1) of heun_op(p), in the variable
    scale*x, to absolute precision `terms`.

    >>> print(heun_series(HeunParams(9, 1, 2, 1, 1, 1), 27, 4))
    1 + 3*x + 9*x^2 + 27*x^3 + O(x^4)
    """
    y = frobenius_analytic(heun_op(p), QQ(0), int(terms))
    scale = _sc(scale)
    return y if scale == 1 else ps_scale_x(y, scale)


def ronveaux_factorization(p):
    """Order-one factors (l1, m1) of heun_op(p), available exactly on the
    factorization locus of the accessory parameter:

        q = a delta (gamma - 1) + alpha + beta - delta - 1   and
        (alpha + beta - delta - 1)(delta + 1) = alpha beta.

    The factors are

        l1 = (x - 1) Dx + delta,
        m1 = x(x - a) Dx + (alpha + beta - delta - 1) x + a(1 - gamma),

    and op_mul(l1, m1) reproduces heun_op(p) coefficient by coefficient.
    Raises NotFactorable away from the locus.
    """
    c = p.alpha + p.beta - p.delta - 1
    if (p.q != p.a * p.delta * (p.gamma - 1) + c
            or c * (p.delta + 1) != p.alpha * p.beta):
        raise NotFactorable("accessory parameter off the factorization locus")
    l1 = DiffOp([[p.delta], [QQ(-1), QQ(1)]])
    m1 = DiffOp([[p.a * (1 - p.gamma), c], [QQ(0), -p.a, QQ(1)]])
    prod = op_mul(l1, m1)
    if prod.coeffs != _heun_cleared(p).coeffs:
        raise AssertionError("factor product does not match the operator")
    return l1, m1


def apparent_desing(p):
    """Exponent parameter e and 3F2 data when the singular point x = a of
    heun_op(p) is apparent (no logarithm, solutions stay meromorphic).

    Requires the exponent-sum constraint delta = alpha + beta - gamma + 2
    and the accessory-parameter condition

        q^2 + ((gamma - 1) - (2 alpha beta + alpha + beta) a) q
            + alpha beta a ((alpha + 1)(beta + 1) a - gamma) = 0.

    On that locus (a, q) is rationally parametrized by e through

        a = e(e - gamma + 1) / ((e - alpha)(e - beta)),
        q = alpha beta (e + 1)(e - gamma + 1) / ((e - alpha)(e - beta)),

    and the analytic Heun solution equals the 3F2 with upper list
    [alpha, beta, e + 1] and lower list [gamma, e], which is also
    (1/e)(theta + e) applied to 2F1([alpha, beta], [gamma]).  Returns
    (e, HypParams); raises NotApplicable off the locus.
    """
    al, be, ga, a, q = p.alpha, p.beta, p.gamma, p.a, p.q
    if p.delta != al + be - ga + 2:
        raise NotApplicable("exponent-sum constraint fails")
    ab = al * be
    cond = (q * q + ((ga - 1) - (2 * ab + al + be) * a) * q
            + ab * a * ((al + 1) * (be + 1) * a - ga))
    if cond != 0:
        raise NotApplicable("accessory parameter off the apparent-point locus")
    den = q - ab * a
    if den != 0:
        e = ab * a / den
    elif a == 0 and q == 0:
        e = ga - 1
    else:
        raise NotApplicable("exponent parameter degenerates")
    if (e - al) * (e - be) == 0:
        raise NotApplicable("exponent parameter degenerates")
    if (a * (e - al) * (e - be) != e * (e - ga + 1)
            or q * (e - al) * (e - be) != ab * (e + 1) * (e - ga + 1)):
        raise NotApplicable("no exponent parameter reproduces (a, q)")
    if _is_nonpositive_integer(e):
        raise NotApplicable("exponent parameter %s is a non-positive integer"
                            % scalar_str(e))
    return e, HypParams([al, be, e + 1], [ga, e])


def hyp_op_2f1(a, b, c):
    """The order-two operator annihilating 2F1([a, b], [c], x), in the
    cleared form theta(theta + c - 1) - x(theta + a)(theta + b).

    >>> from .diffop import annihilation_residual
    >>> h = hyp_series(HypParams([QQ(1, 3), QQ(2, 3)], [1]), 10)
    >>> annihilation_residual(hyp_op_2f1(QQ(1, 3), QQ(2, 3), QQ(1)), h).is_zero()
    True
    """
    a = _sc(a)
    b = _sc(b)
    c = _sc(c)
    return op_from_theta({0: [QQ(0), c - 1, QQ(1)],
                          1: [-a * b, -(a + b), QQ(-1)]})


# the sixth root of unity and the normalised accessory constant of the
# degree-two pullback reduction, as elements of Q(sqrt(-3))
MAIER_OMEGA = qe(QQ(1, 2), QQ(1, 2), -3)
MAIER_ETA = qe(QQ(1, 2), QQ(1, 6), -3)


def maier_sides(alpha, beta, terms):
    """Both sides of the degree-two hypergeometric pullback reduction over
    Q(sqrt(-3)), to absolute precision `terms`.

    lhs: analytic solution of the Heun operator with a = 1/2 + sqrt(-3)/2,
         q = alpha beta (1/2 + sqrt(-3)/6), gamma = delta = (alpha+beta+1)/3,
         taken in the variable (1/2 + sqrt(-3)/6) x;
    rhs: 2F1([alpha/3, beta/3], [gamma]) composed with x(3 - 3x + x^2).

    The two agree identically; both are returned so callers can assert the
    equality at their own precision.
    """
    al = _sc(alpha)
    be = _sc(beta)
    ga = (al + be + 1) / 3
    if _is_nonpositive_integer(ga):
        raise BadParameters("gamma = %s is a non-positive integer"
                            % scalar_str(ga))
    p = HeunParams(MAIER_OMEGA, al * be * MAIER_ETA, al, be, ga, ga)
    lhs = heun_series(p, MAIER_ETA, terms)
    h = hyp_series(HypParams([al / 3, be / 3], [ga]), terms)
    pull = ps_from_coeffs([QQ(0), QQ(3), QQ(-3), QQ(1)])
    rhs = ps_compose(h, pull, prec=terms)
    return lhs, rhs
