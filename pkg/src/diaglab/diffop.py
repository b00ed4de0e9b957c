"""Linear differential operators with polynomial coefficients.

An operator is  sum_i p_i(x) * Dx^i  with the p_i over Q or Q(sqrt(d)).
Composition is the (non-commutative) Weyl-algebra product.  The same
object can be viewed through the Euler operator theta = x*Dx, which is
the natural coordinate system for indicial data and series recurrences:
x^k * L  =  sum_j x^j * Q_j(theta)  with the x-powers written on the left.

The text format accepted by :func:`parse_diffop` uses ``x``, ``Dx`` and
``theta`` as atoms with ``+ - * ^`` and parentheses, products being
operator composition:

>>> L = parse_diffop("theta^2 - x*(theta + 1)^2")
>>> print(L)
-x + (x - 3*x^2)*Dx + (x^2 - x^3)*Dx^2
"""

from .errors import (DivisionByZero, FrobeniusObstruction, NoMirrorMap,
                     NotFound, NotFuchsianAtZero, OrderMismatch, ParseError,
                     UnsupportedExponent)
from .field import QQ, is_rational, qe, rat_sqrt, scalar_disc, scalar_str
from .series import PSeries, ps_add, ps_diff, ps_mul, ps_shift, ps_truncate
from .upoly import (up_add, up_derivative, up_eval, up_mul, up_neg,
                    up_rational_roots, up_scale, up_str, up_trim)

_Z = QQ(0)
_ONE = QQ(1)


class DiffOp:
    """sum p_i(x) Dx^i; coeffs[i] is the dense list for p_i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [up_trim([QQ(a) if isinstance(a, int) else a for a in p])
              for p in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = cs

    @classmethod
    def zero(cls):
        return cls([])

    @classmethod
    def const(cls, c):
        return cls([[c]])

    @classmethod
    def x(cls):
        return cls([[0, 1]])

    @classmethod
    def d(cls):
        return cls([[], [1]])

    @classmethod
    def theta(cls):
        return cls([[], [0, 1]])

    def order(self):
        return len(self.coeffs) - 1

    def degree(self):
        return max((len(p) - 1 for p in self.coeffs if p), default=-1)

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(tuple(p) for p in self.coeffs))

    def _lift(self, other):
        if isinstance(other, DiffOp):
            return other
        if is_rational(other) or type(other).__name__ == "QuadExt":
            return DiffOp.const(other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        out = []
        for i in range(n):
            a = self.coeffs[i] if i < len(self.coeffs) else []
            b = o.coeffs[i] if i < len(o.coeffs) else []
            out.append(up_add(a, b))
        return DiffOp(out)

    __radd__ = __add__

    def __neg__(self):
        return DiffOp([up_neg(p) for p in self.coeffs])

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return op_mul(self, o)

    def __rmul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return op_mul(o, self)

    def __truediv__(self, other):
        if is_rational(other) or type(other).__name__ == "QuadExt":
            if other == 0:
                raise DivisionByZero("operator divided by zero")
            inv = _ONE / QQ(other) if is_rational(other) else 1 / other
            return DiffOp([up_scale(inv, p) for p in self.coeffs])
        return NotImplemented

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            raise ValueError("negative operator power")
        out = DiffOp.const(1)
        for _ in range(k):
            out = op_mul(out, self)
        return out

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, p in enumerate(self.coeffs):
            if not p:
                continue
            ps = up_str(p)
            if i == 0:
                parts.append("(%s)" % ps if (" " in ps) else ps)
                continue
            ds = "Dx" if i == 1 else "Dx^%d" % i
            if ps == "1":
                parts.append(ds)
            elif ps == "-1":
                parts.append("-" + ds)
            elif " " in ps or "/" in ps:
                parts.append("(%s)*%s" % (ps, ds))
            else:
                parts.append("%s*%s" % (ps, ds))
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return "<DiffOp %s>" % self.__str__()


def op_mul(a, b):
    """Composition a(b(.)) by the Leibniz rule."""
    if a.is_zero() or b.is_zero():
        return DiffOp.zero()
    out = [[] for _ in range(len(a.coeffs) + len(b.coeffs) - 1)]
    for i, pi in enumerate(a.coeffs):
        if not pi:
            continue
        # Dx^i (q(x) u) = sum_k C(i,k) q^(k) u^(i-k)
        for j, qj in enumerate(b.coeffs):
            if not qj:
                continue
            der = list(qj)
            binom = 1
            for k in range(i + 1):
                if der:
                    out[i - k + j] = up_add(out[i - k + j],
                                            up_scale(QQ(binom),
                                                     up_mul(pi, der)))
                else:
                    break
                binom = binom * (i - k) // (k + 1)
                der = up_derivative(der)
    return DiffOp(out)


def op_apply(l, s, prec=None):
    """Apply the operator to a series; result window follows the inputs."""
    acc = None
    ds = s
    for i, p in enumerate(l.coeffs):
        if i > 0:
            ds = ps_diff(ds)
        if not p:
            continue
        term = ps_mul(PSeries(0, p, None), ds)
        acc = term if acc is None else ps_add(acc, term)
    if acc is None:
        acc = PSeries(0, [], s.prec)
    if prec is not None:
        acc = ps_truncate(acc, prec)
    return acc


def annihilation_residual(l, s):
    return op_apply(l, s)


# ----------------------------------------------------------------------
# theta form

def _falling_theta(i):
    """theta(theta-1)...(theta-i+1) as a dense polynomial in theta."""
    out = [_ONE]
    for t in range(i):
        out = up_mul(out, [QQ(-t), _ONE])
    return out


def _stirling2_table(n):
    tab = [[0] * (n + 1) for _ in range(n + 1)]
    tab[0][0] = 1
    for j in range(1, n + 1):
        for i in range(1, j + 1):
            tab[j][i] = tab[j - 1][i - 1] + i * tab[j - 1][i]
    return tab


def op_to_theta(l):
    """(k, {j: Q_j}) with x^k * L = sum_j x^j Q_j(theta).

    k is the least shift making every term land on a nonnegative x-power;
    Q_j are dense polynomials in theta.
    """
    if l.is_zero():
        return 0, {}
    k = 0
    for i, p in enumerate(l.coeffs):
        if not p:
            continue
        val = next(m for m, c in enumerate(p) if c != 0)
        if i - val > k:
            k = i - val
    out = {}
    for i, p in enumerate(l.coeffs):
        if not p:
            continue
        ff = _falling_theta(i)
        for m, c in enumerate(p):
            if c == 0:
                continue
            j = k + m - i
            out[j] = up_add(out.get(j, []), up_scale(c, ff))
    return k, {j: q for j, q in out.items() if q}


def op_from_theta(pairs):
    """Operator sum_j x^j Q_j(theta) from {j: theta-poly} (or pair list)."""
    if isinstance(pairs, dict):
        pairs = pairs.items()
    pairs = list(pairs)
    maxt = max((len(q) - 1 for _, q in pairs), default=0)
    s2 = _stirling2_table(maxt)
    coeffs = []
    for j, q in pairs:
        j = int(j)
        for t, c in enumerate(q):
            if c == 0:
                continue
            for i in range(t + 1):
                if s2[t][i] == 0:
                    continue
                while len(coeffs) <= i:
                    coeffs.append([])
                coeffs[i] = up_add(coeffs[i],
                                   up_scale(c * s2[t][i],
                                            [_Z] * (j + i) + [_ONE]))
    return DiffOp(coeffs)


def indicial_polynomial(l):
    """Q_0 from the theta form: the recurrence's characteristic polynomial."""
    if l.is_zero():
        raise ValueError("zero operator")
    _, q = op_to_theta(l)
    return q.get(0, [])


def indicial_exponents(l):
    """Sorted rational exponents at x = 0, with multiplicity.

    Raises NotFuchsianAtZero when x = 0 is an irregular singularity
    (indicial degree below the order) and UnsupportedExponent when some
    exponents are irrational.
    """
    q0 = indicial_polynomial(l)
    if len(q0) - 1 < l.order():
        raise NotFuchsianAtZero("indicial degree %d < order %d"
                                % (len(q0) - 1, l.order()))
    roots = up_rational_roots(q0)
    if len(roots) < len(q0) - 1:
        raise UnsupportedExponent("only %d of %d indicial roots are "
                                  "rational" % (len(roots), len(q0) - 1))
    return roots


# ----------------------------------------------------------------------
# series solutions at the origin

def _theta_recurrence(l):
    k, q = op_to_theta(l)
    if 0 not in q:
        raise NotFuchsianAtZero("empty indicial polynomial")
    return k, q


def frobenius_analytic(l, exponent, terms):
    """The solution x^e * (1 + c_1 x + ...) to `terms` coefficients.

    At a resonance (indicial polynomial vanishing again at e + m, m >= 1)
    the convention c_m = 0 is used when consistent; if the recurrence is
    inconsistent there, FrobeniusObstruction is raised and a genuine
    logarithm is needed.
    """
    e = QQ(exponent)
    _, q = _theta_recurrence(l)
    q0 = q[0]
    if up_eval(q0, e) != 0:
        raise UnsupportedExponent("%s is not an indicial exponent" % e)
    terms = int(terms)
    c = [_ONE]
    for m in range(1, terms):
        rhs = _Z
        for j, qj in q.items():
            if j == 0 or j > m:
                continue
            if c[m - j] != 0:
                rhs = rhs - up_eval(qj, e + m - j) * c[m - j]
        den = up_eval(q0, e + m)
        if den == 0:
            if rhs != 0:
                raise FrobeniusObstruction(
                    "resonance at exponent %s needs a logarithm" % (e + m))
            c.append(_Z)
        else:
            c.append(rhs / den)
    return PSeries(e, c, e + terms)


def frobenius_log_pair(l, terms):
    """(y0, t) with solutions y0 and y0*log(x) + t at a double exponent 0.

    Requires the indicial polynomial to vanish to order exactly >= 2 at 0
    (the maximally-unipotent case); otherwise NoMirrorMap is raised.
    t has valuation >= 1 and is normalised by having no multiple of y0
    (its coefficient at the second vanishing index is 0).
    """
    k, q = _theta_recurrence(l)
    q0 = q[0]
    if up_eval(q0, _Z) != 0 or up_eval(up_derivative(q0), _Z) != 0:
        raise NoMirrorMap("indicial polynomial lacks a double root at 0")
    terms = int(terms)
    y0 = frobenius_analytic(l, 0, terms)
    # L(y0 log x + t) = 0 with L(y0) = 0 gives L(t) = -G where G collects
    # the cross terms of Dx^i acting on log x:
    # Dx^i(y log x) = log(x) y^(i) + sum_{s=1..i} C(i,s)(-1)^(s-1)(s-1)!
    #                 x^(-s) y^(i-s)
    g = None
    ds = y0
    derivs = [y0]
    for _ in range(l.order()):
        ds = ps_diff(ds)
        derivs.append(ds)
    for i, p in enumerate(l.coeffs):
        if not p or i == 0:
            continue
        binom = i
        fact = 1
        for s in range(1, i + 1):
            coef = QQ(binom * fact * (1 if s % 2 == 1 else -1))
            term = ps_mul(PSeries(-s, [coef], None), derivs[i - s])
            term = ps_mul(PSeries(0, p, None), term)
            g = term if g is None else ps_add(g, term)
            binom = binom * (i - s) // (s + 1)
            fact = fact * s
    # the recurrence solves (x^k l)(t) = x^k * (-g); exponents <= 0 of the
    # right-hand side must vanish or no log companion exists
    rhs = ps_shift(-g, k)
    if not rhs.is_zero() and rhs.val() <= 0:
        raise FrobeniusObstruction("logarithmic ansatz is inconsistent")
    t = [_Z]
    maxj = max(q)
    for m in range(1, terms):
        acc = rhs.coeff(m)
        if acc is None:
            break
        for j in range(1, min(m, maxj) + 1):
            qj = q.get(j)
            if qj is not None and t[m - j] != 0:
                acc = acc - up_eval(qj, QQ(m - j)) * t[m - j]
        den = up_eval(q0, QQ(m))
        if den == 0:
            if acc != 0:
                raise FrobeniusObstruction(
                    "second logarithmic solution obstructed at x^%d" % m)
            t.append(_Z)
        else:
            t.append(acc / den)
    return y0, PSeries(0, t, len(t))


# ----------------------------------------------------------------------
# recovering an operator from a series

def guess_ode(s, max_order, max_degree, guard=10):
    """Smallest operator (by order, then degree) annihilating the series.

    Looks for sum a_{i,k} x^k Dx^i with i <= max_order, k <= max_degree,
    requiring (order+1)(degree+1) + guard usable coefficients of s; every
    known coefficient of s is used as a constraint.  Raises NotFound when
    no candidate survives.
    """
    if s.prec is None:
        raise ValueError("guessing needs a finite-window series")
    if s.coeffs and (s.offset.denominator != 1 or s.offset < 0):
        raise UnsupportedExponent("guessing needs a Taylor series")
    navail = int(s.prec)
    for r in range(1, int(max_order) + 1):
        derivs = [s]
        for _ in range(r):
            derivs.append(ps_diff(derivs[-1]))
        # the r-th derivative is only known below exponent navail - r
        nrows = navail - r
        for d in range(0, int(max_degree) + 1):
            ncols = (r + 1) * (d + 1)
            if nrows < ncols + guard:
                continue
            rows = []
            for m in range(nrows):
                row = []
                for i in range(r + 1):
                    for k in range(d + 1):
                        row.append(derivs[i].coeff(m - k))
                rows.append(row)
            vec = _nullspace_vector(rows, ncols)
            if vec is None:
                continue
            coeffs = []
            for i in range(r + 1):
                coeffs.append(vec[i * (d + 1):(i + 1) * (d + 1)])
            cand = op_canonical(DiffOp(coeffs))
            if cand.order() != r:
                continue
            res = op_apply(cand, s)
            if res.is_zero():
                return cand
    raise NotFound("no operator within order %s, degree %s annihilates "
                   "the series" % (max_order, max_degree))


def _nullspace_vector(rows, ncols):
    """First reduced nullspace vector of the matrix, or None."""
    mat = [list(r) for r in rows]
    nrows = len(mat)
    pivots = []
    col_of_row = []
    row = 0
    for col in range(ncols):
        sel = None
        for i in range(row, nrows):
            if mat[i][col] != 0:
                sel = i
                break
        if sel is None:
            continue
        mat[row], mat[sel] = mat[sel], mat[row]
        inv = _ONE / mat[row][col] if is_rational(mat[row][col]) \
            else 1 / mat[row][col]
        mat[row] = [v * inv for v in mat[row]]
        for i in range(nrows):
            if i != row and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[row])]
        pivots.append(col)
        col_of_row.append(col)
        row += 1
        if row == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return None
    f0 = free[0]
    vec = [_Z] * ncols
    vec[f0] = _ONE
    for rr, pc in enumerate(col_of_row):
        vec[pc] = -mat[rr][f0]
    return vec


# ----------------------------------------------------------------------
# normal forms and equality

def op_canonical(l):
    """Scalar-normalised copy: integer primitive coefficients (rational
    case) or leading coefficient 1 (quadratic-extension case)."""
    if l.is_zero():
        return l
    allc = [c for p in l.coeffs for c in p]
    if scalar_disc(*allc) == 0:
        from math import gcd
        L = 1
        for c in allc:
            q = QQ(c)
            L = L * int(q.denominator) // gcd(L, int(q.denominator))
        g = 0
        for c in allc:
            g = gcd(g, abs(int(QQ(c) * L)))
        lead = l.coeffs[-1]
        if int(QQ(lead[-1]) * L) < 0:
            g = -g
        return DiffOp([[int(QQ(c) * L) // g for c in p] for p in l.coeffs])
    lead = l.coeffs[-1][-1]
    inv = 1 / lead
    return DiffOp([up_scale(inv, p) for p in l.coeffs])


def op_equal(a, b):
    """Equality up to a nonzero scalar factor."""
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    if a.order() != b.order():
        return False
    return op_canonical(a) == op_canonical(b)


def op_equal_monic(a, b):
    """Equality of the monic forms p_i / p_r (same solution space test
    for operators of the same order)."""
    if a.order() != b.order() or a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    from .upoly import RatFun1
    ra = [RatFun1(list(p), list(a.coeffs[-1])) for p in a.coeffs]
    rb = [RatFun1(list(p), list(b.coeffs[-1])) for p in b.coeffs]
    return ra == rb


# ----------------------------------------------------------------------
# symmetric square and pullbacks

def sym_square(l):
    """Order-3 operator annihilating products of pairs of solutions of an
    order-2 operator."""
    if l.order() != 2:
        raise OrderMismatch("symmetric square needs an order-2 operator")
    from .upoly import RatFun1
    p2 = list(l.coeffs[2])
    a = RatFun1(list(l.coeffs[1]), p2)
    b = RatFun1(list(l.coeffs[0]), p2)
    da = a.derivative()
    db = b.derivative()
    q2 = a * 3
    q1 = da + b * 4 + a * a * 2
    q0 = db * 2 + a * b * 4
    return _clear_rf_op([q0, q1, q2, RatFun1([1])])


def _clear_rf_op(rfs):
    """DiffOp from rational-function coefficients, denominators cleared."""
    from .upoly import up_divmod, up_gcd
    den = [QQ(1)]
    for f in rfs:
        gg = up_gcd(den, list(f.den))
        q, _ = up_divmod(list(f.den), gg)
        den = up_mul(den, q)
    out = []
    for f in rfs:
        q, r = up_divmod(den, list(f.den))
        assert not r
        out.append(up_mul(list(f.num), q))
    return op_canonical(DiffOp(out))


def op_pullback(l, rho):
    """Operator whose solutions are y(rho(x)) for the solutions y of l.

    rho is a non-constant RatFun1 (poles allowed, so x -> 1/x works).
    The result has cleared denominators and is scalar-normalised.
    """
    from .upoly import RatFun1
    r = l.order()
    if r < 1:
        raise OrderMismatch("pullback needs order >= 1")
    lead = RatFun1(list(l.coeffs[-1]))
    drho = rho.derivative()
    if drho.is_zero():
        raise DivisionByZero("constant substitution")
    # A[k][j]: (y o rho)^(k) = sum_j A[k][j] * y^(j)(rho)
    A = [[RatFun1([1])]]
    for k in range(1, r + 1):
        prev = A[-1]
        cur = [RatFun1([0])] * (k + 1)
        for j, f in enumerate(prev):
            cur[j] = cur[j] + f.derivative()
            cur[j + 1] = cur[j + 1] + f * drho
        A.append(cur)
    pr = [RatFun1(list(p)).compose(rho) for p in l.coeffs]
    lam = (drho ** r) / pr[r]
    q = [RatFun1([0])] * (r + 1)
    q[r] = RatFun1([1])
    for j in range(r - 1, -1, -1):
        acc = lam * pr[j]
        for i in range(j + 1, r + 1):
            acc = acc - q[i] * A[i][j]
        q[j] = acc / (drho ** j)
    return _clear_rf_op(q)


# ----------------------------------------------------------------------
# text format

def parse_diffop(text):
    """Operator expressions over x, Dx, theta with + - * ^ and parens."""
    return _OpParser(text).parse()


class _OpParser:
    def __init__(self, text):
        from .mrat import _tokenize
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def take(self):
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, v):
        kind, val, p = self.take()
        if kind != "op" or val != v:
            raise ParseError("expected %r" % v, p)

    def parse(self):
        out = self.expr()
        kind, _, p = self.peek()
        if kind != "end":
            raise ParseError("trailing input", p)
        return out

    def expr(self):
        acc = self.term()
        while True:
            kind, v, _ = self.peek()
            if kind == "op" and v in "+-":
                self.take()
                rhs = self.term()
                acc = acc + rhs if v == "+" else acc - rhs
            else:
                return acc

    def term(self):
        acc = self.factor()
        while True:
            kind, v, p = self.peek()
            if kind == "op" and v in "*/":
                self.take()
                rhs = self.factor()
                if v == "*":
                    acc = acc * rhs
                else:
                    if rhs.is_zero():
                        raise ParseError("division by zero", p)
                    if rhs.order() != 0 or rhs.degree() > 0:
                        raise ParseError("division only by constants", p)
                    acc = acc / rhs.coeffs[0][0]
            else:
                return acc

    def factor(self):
        kind, v, _ = self.peek()
        if kind == "op" and v in "+-":
            self.take()
            f = self.factor()
            return f if v == "+" else -f
        return self.power()

    def power(self):
        base = self.atom()
        kind, v, _ = self.peek()
        if kind == "op" and v == "^":
            self.take()
            kind, e, p = self.take()
            neg = False
            if kind == "op" and e in "+-":
                neg = e == "-"
                kind, e, p = self.take()
            if kind != "num":
                raise ParseError("integer exponent expected", p)
            if neg:
                raise ParseError("negative operator power", p)
            return base ** e
        return base

    def atom(self):
        kind, v, p = self.take()
        if kind == "num":
            return DiffOp.const(QQ(v))
        if kind == "name":
            if v == "x":
                return DiffOp.x()
            if v == "Dx":
                return DiffOp.d()
            if v == "theta":
                return DiffOp.theta()
            if v == "sqrt":
                self.expect("(")
                kindn, vn, pn = self.take()
                neg = False
                if kindn == "op" and vn == "-":
                    neg = True
                    kindn, vn, pn = self.take()
                if kindn != "num":
                    raise ParseError("sqrt of a non-constant", pn)
                self.expect(")")
                val = QQ(-vn if neg else vn)
                ex = rat_sqrt(val)
                return DiffOp.const(ex if ex is not None else qe(0, 1, val))
            raise ParseError("unknown name %r" % v, p)
        if kind == "op" and v == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError("unexpected token", p)
