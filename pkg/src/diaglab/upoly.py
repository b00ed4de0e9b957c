"""Dense univariate polynomials and reduced rational functions.

Polynomials are plain Python lists of scalars, lowest degree first; the
zero polynomial is the empty list.  Scalars are rationals or quadratic
irrationals as in :mod:`diaglab.field`.  No class wrapper for polynomials
(operators build on raw lists); rational functions get a small class with
canonical form num/den reduced and den monic, so == is structural.
"""

from .errors import DivisionByZero, UnsupportedExponent
from .field import QQ, is_rational, scalar_disc, scalar_str
from .series import PSeries, ps_div

_Z = QQ(0)


def up_trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def up_deg(c):
    return len(c) - 1


def up_is_zero(c):
    return not c


def up_neg(c):
    return [-a for a in c]


def up_add(a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else _Z
        y = b[i] if i < len(b) else _Z
        out.append(x + y)
    return up_trim(out)


def up_sub(a, b):
    return up_add(a, up_neg(b))


def up_scale(k, c):
    if k == 0:
        return []
    return [k * a for a in c]


def up_mul(a, b):
    if not a or not b:
        return []
    out = [_Z] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y != 0:
                out[i + j] = out[i + j] + x * y
    return up_trim(out)


def up_pow(c, k):
    out = [QQ(1)]
    for _ in range(int(k)):
        out = up_mul(out, c)
    return out


def up_shift(c, k):
    """Multiply by x^k (k >= 0)."""
    if not c:
        return []
    return [_Z] * int(k) + list(c)


def up_eval(c, x):
    acc = _Z
    for a in reversed(c):
        acc = acc * x + a
    return acc


def up_derivative(c):
    return up_trim([i * a for i, a in enumerate(c)][1:])


def up_compose(outer, inner):
    acc = []
    for a in reversed(outer):
        acc = up_mul(acc, inner)
        if a != 0:
            acc = up_add(acc, [a])
    return acc


def up_divmod(a, b):
    """Quotient and remainder over the coefficient field."""
    if not b:
        raise DivisionByZero("polynomial division by zero")
    a = list(a)
    q = [_Z] * max(0, len(a) - len(b) + 1)
    inv_lead = 1 / QQ(b[-1]) if is_rational(b[-1]) else 1 / b[-1]
    while len(a) >= len(b) and up_trim(a):
        a = up_trim(a)
        if len(a) < len(b):
            break
        k = len(a) - len(b)
        f = a[-1] * inv_lead
        q[k] = f
        for i, bb in enumerate(b):
            a[k + i] = a[k + i] - f * bb
        a.pop()
    return up_trim(q), up_trim(a)


def up_monic(c):
    if not c:
        return []
    inv = 1 / QQ(c[-1]) if is_rational(c[-1]) else 1 / c[-1]
    return [a * inv for a in c]


def up_gcd(a, b):
    a, b = up_trim(a), up_trim(b)
    while b:
        _, r = up_divmod(a, b)
        a, b = b, r
    return up_monic(a)


def up_content_primitive(c):
    """Split a rational-coefficient polynomial into content * primitive.

    Returns (content, primitive) where primitive has coprime integer
    coefficients with positive leading coefficient.  Zero -> (0, []).
    """
    c = up_trim(c)
    if not c:
        return _Z, []
    from math import gcd
    den_lcm = 1
    for a in c:
        q = QQ(a)
        den_lcm = den_lcm * q.denominator // gcd(den_lcm,
                                                 int(q.denominator))
    g = 0
    ints = []
    for a in c:
        q = QQ(a) * den_lcm
        ints.append(int(q))
        g = gcd(g, abs(int(q)))
    if ints[-1] < 0:
        g = -g
    content = QQ(g, den_lcm)
    return content, [v // g for v in ints]


def up_rational_roots(c):
    """All rational roots (with multiplicity), sorted.

    Works for rational coefficients directly and for Q(sqrt(d))
    coefficients by intersecting the rational and radical parts.
    Raises UnsupportedExponent when the polynomial has no coefficients
    to work with (zero polynomial: every value is a root).
    """
    c = up_trim(c)
    if not c:
        raise UnsupportedExponent("zero polynomial has no root list")
    if scalar_disc(*c) != 0:
        from .field import rational_part, radical_part
        ra = up_trim([rational_part(a) for a in c])
        rb = up_trim([radical_part(a) for a in c])
        if not rb:
            return up_rational_roots(ra)
        if not ra:
            return up_rational_roots(rb)
        g = up_gcd(ra, rb)
        if not g or len(g) == 1:
            return []
        return up_rational_roots(g)
    roots = []
    # split off roots at zero
    v = 0
    while c[v] == 0:
        v += 1
    roots.extend([_Z] * v)
    c = c[v:]
    if len(c) == 1:
        return sorted(roots)
    _, prim = up_content_primitive(c)
    from sympy import divisors
    cands = set()
    for p in divisors(abs(prim[0])):
        for q in divisors(abs(prim[-1])):
            cands.add(QQ(p, q))
            cands.add(QQ(-p, q))
    work = list(prim)
    for r in sorted(cands):
        while len(work) > 1 and up_eval(work, r) == 0:
            roots.append(r)
            work, rem = up_divmod(work, [-r, QQ(1)])
            assert not rem
    return sorted(roots)


def up_str(c, var="x"):
    if not c:
        return "0"
    parts = []
    for i, a in enumerate(c):
        if a == 0:
            continue
        s = scalar_str(a)
        if ("+" in s[1:]) or ("-" in s[1:]) or "sqrt" in s:
            s = "(%s)" % s
        if i == 0:
            parts.append(s)
        else:
            xs = var if i == 1 else "%s^%d" % (var, i)
            if s == "1":
                parts.append(xs)
            elif s == "-1":
                parts.append("-" + xs)
            else:
                parts.append("%s*%s" % (s, xs))
    return " + ".join(parts).replace("+ -", "- ")


class RatFun1:
    """Reduced univariate rational function num/den, den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if den is None:
            den = [QQ(1)]
        num = up_trim([QQ(a) if isinstance(a, int) else a for a in num])
        den = up_trim([QQ(a) if isinstance(a, int) else a for a in den])
        if not den:
            raise DivisionByZero("rational function with zero denominator")
        if num:
            g = up_gcd(num, den)
            if len(g) > 1:
                num, _ = up_divmod(num, g)
                den, _ = up_divmod(den, g)
        else:
            den = [QQ(1)]
        lead = den[-1]
        if lead != 1:
            inv = 1 / QQ(lead) if is_rational(lead) else 1 / lead
            num = up_scale(inv, num)
            den = up_scale(inv, den)
            den[-1] = QQ(1)
        self.num = tuple(num)
        self.den = tuple(den)

    @classmethod
    def const(cls, c):
        return cls([c])

    @classmethod
    def x(cls):
        return cls([0, 1])

    def is_zero(self):
        return not self.num

    def is_poly(self):
        return len(self.den) == 1

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if not isinstance(other, RatFun1):
            if is_rational(other) or type(other).__name__ == "QuadExt":
                other = RatFun1([other])
            else:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def _lift(self, other):
        if isinstance(other, RatFun1):
            return other
        if is_rational(other) or type(other).__name__ == "QuadExt":
            return RatFun1([other])
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        num = up_add(up_mul(list(self.num), list(o.den)),
                     up_mul(list(o.num), list(self.den)))
        return RatFun1(num, up_mul(list(self.den), list(o.den)))

    __radd__ = __add__

    def __neg__(self):
        return RatFun1(up_neg(list(self.num)), list(self.den))

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
        return RatFun1(up_mul(list(self.num), list(o.num)),
                       up_mul(list(self.den), list(o.den)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise DivisionByZero("rational function divided by zero")
        return RatFun1(up_mul(list(self.num), list(o.den)),
                       up_mul(list(self.den), list(o.num)))

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            if self.is_zero():
                raise DivisionByZero("zero to a negative power")
            return RatFun1(list(self.den), list(self.num)) ** (-k)
        out = RatFun1([1])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def derivative(self):
        n, d = list(self.num), list(self.den)
        num = up_sub(up_mul(up_derivative(n), d),
                     up_mul(n, up_derivative(d)))
        return RatFun1(num, up_mul(d, d))

    def eval(self, x):
        dv = up_eval(list(self.den), x)
        if dv == 0:
            raise DivisionByZero("pole of the rational function")
        return up_eval(list(self.num), x) / dv

    def compose(self, inner):
        """self(inner(x)) for a RatFun1 (or scalar) inner."""
        inner = self._lift(inner)
        accn = RatFun1([0])
        for a in reversed(self.num):
            accn = accn * inner + a
        accd = RatFun1([0])
        for a in reversed(self.den):
            accd = accd * inner + a
        if accd.is_zero():
            raise DivisionByZero("composition lands on a pole")
        return accn / accd

    def series(self, prec):
        """Expansion at x = 0 as a PSeries with absolute precision prec."""
        num = PSeries(0, list(self.num), None)
        den = PSeries(0, list(self.den), None)
        return ps_div(num, den, prec=QQ(prec))

    def __str__(self):
        ns = up_str(list(self.num))
        if self.is_poly():
            return ns
        ds = up_str(list(self.den))
        if len(self.num) > 1:
            ns = "(%s)" % ns
        return "%s/(%s)" % (ns, ds)

    def __repr__(self):
        return "<RatFun1 %s>" % self.__str__()


def rf1_compose(f, g):
    return f.compose(g)


def rf1_equal(f, g):
    return f == g
