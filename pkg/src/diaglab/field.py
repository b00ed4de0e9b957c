"""Exact coefficient arithmetic: rationals and quadratic extensions Q(sqrt(d)).

All series coefficients, operator coefficients and special-function parameters
in this package live either in Q or in a fixed quadratic extension Q(sqrt(d)).
Rationals are ``gmpy2.mpq`` when gmpy2 is importable (it is exact and fast),
otherwise ``fractions.Fraction``; the choice is made once, here, at import
time.  Code elsewhere only uses the :func:`QQ` constructor and never assumes a
concrete rational type.

Quadratic-extension elements are kept *normalized*: whenever the radical part
vanishes (or the discriminant is a perfect square, so the "radical" is secretly
rational) the value collapses to a plain rational.  A :class:`QuadExt` instance
therefore always has a nonzero radical part and a non-square discriminant,
which makes division safe: the norm a^2 - d*b^2 of a nonzero element can then
never vanish.  Mixing two different non-square discriminants raises
:class:`~diaglab.errors.FieldMismatch` eagerly.

Examples::

    >>> from diaglab.field import QQ, qe, conj, norm
    >>> QQ(2, 4)
    mpq(1,2)
    >>> w = qe(-527, 336, -1) / 625     # a point on the unit circle in Q(i)
    >>> w * conj(w)
    mpq(1,1)
    >>> qe(1, 1, 2) * qe(1, -1, 2)      # (1+sqrt(2))*(1-sqrt(2))
    mpq(-1,1)
"""

import math
from fractions import Fraction as _Fraction

from .errors import DivisionByZero, FieldMismatch, ParseError

try:
    from gmpy2 import mpq as _RatImpl
    _HAVE_GMPY = True
except ImportError:                                       # pragma: no cover
    from fractions import Fraction as _RatImpl
    _HAVE_GMPY = False

Rat = _RatImpl


def QQ(num=0, den=None):
    """Coerce to the package rational type.

    Accepts ints, rationals, or a decimal-free string like ``"3/4"``.
    """
    if den is None:
        return _RatImpl(num)
    return rat_normalize(num, den)


_ZERO = QQ(0)
_ONE = QQ(1)


def rat_normalize(num, den):
    """Reduced rational with positive denominator; den = 0 is an error."""
    if den == 0:
        raise DivisionByZero("rational with zero denominator")
    return _RatImpl(num) / _RatImpl(den)


def is_rational(x):
    return isinstance(x, (int, _RatImpl, _Fraction))


def _isqrt_exact(n):
    """Integer square root of n if n is a perfect square, else None."""
    if n < 0:
        return None
    r = math.isqrt(int(n))
    return r if r * r == n else None


def rat_sqrt(q):
    """Exact square root of a rational, or None."""
    q = QQ(q)
    if q < 0:
        return None
    rn = _isqrt_exact(q.numerator)
    rd = _isqrt_exact(q.denominator)
    if rn is None or rd is None:
        return None
    return QQ(rn, rd)


def _ikrt_exact(n, k):
    """Integer k-th root of n >= 0 if exact, else None."""
    n = int(n)
    if n == 0:
        return 0
    if n == 1:
        return 1
    # float seed, then fix up by neighbourhood search
    r = round(n ** (1.0 / k))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c ** k == n:
            return c
    return None


def rat_kth_root(q, k):
    """Exact k-th root of a rational, or None.  Negative q needs odd k."""
    q = QQ(q)
    k = int(k)
    if k <= 0:
        raise ValueError("k must be positive")
    sign = 1
    if q < 0:
        if k % 2 == 0:
            return None
        sign, q = -1, -q
    rn = _ikrt_exact(q.numerator, k)
    rd = _ikrt_exact(q.denominator, k)
    if rn is None or rd is None:
        return None
    return sign * QQ(rn, rd)


class QuadExt:
    """Element a + b*sqrt(d) of Q(sqrt(d)), with b != 0 and d not a square.

    Use the :func:`qe` factory, which normalizes degenerate cases to plain
    rationals; do not call the constructor directly unless the invariant is
    already known to hold.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d):
        self.a = a
        self.b = b
        self.d = d

    # -- helpers ---------------------------------------------------------

    def _coerce(self, other):
        """Return other as an (a, b) pair over self.d, or None."""
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise FieldMismatch(
                    "cannot combine sqrt(%s) with sqrt(%s)" % (self.d, other.d))
            return other.a, other.b
        if is_rational(other):
            return QQ(other), _ZERO
        return None

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        ab = self._coerce(other)
        if ab is None:
            return NotImplemented
        return qe(self.a + ab[0], self.b + ab[1], self.d)

    __radd__ = __add__

    def __sub__(self, other):
        ab = self._coerce(other)
        if ab is None:
            return NotImplemented
        return qe(self.a - ab[0], self.b - ab[1], self.d)

    def __rsub__(self, other):
        ab = self._coerce(other)
        if ab is None:
            return NotImplemented
        return qe(ab[0] - self.a, ab[1] - self.b, self.d)

    def __mul__(self, other):
        ab = self._coerce(other)
        if ab is None:
            return NotImplemented
        c, e = ab
        return qe(self.a * c + self.d * self.b * e,
                  self.a * e + self.b * c, self.d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        ab = self._coerce(other)
        if ab is None:
            return NotImplemented
        c, e = ab
        n = c * c - self.d * e * e
        if n == 0:
            raise DivisionByZero("division by zero in Q(sqrt(%s))" % self.d)
        # multiply by the conjugate of the denominator
        na = self.a * c - self.d * self.b * e
        nb = self.b * c - self.a * e
        return qe(na / n, nb / n, self.d)

    def __rtruediv__(self, other):
        ab = self._coerce(other)
        if ab is None:
            return NotImplemented
        n = self.a * self.a - self.d * self.b * self.b
        if n == 0:
            raise DivisionByZero("division by zero in Q(sqrt(%s))" % self.d)
        c, e = ab
        # other * conj(self) / norm(self)
        na = c * self.a - self.d * e * self.b
        nb = e * self.a - c * self.b
        return qe(na / n, nb / n, self.d)

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.d)

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return 1 / (self ** (-k))
        out = _ONE
        base = self
        while k:
            if k & 1:
                out = base * out
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            return (self.a == other.a and self.b == other.b
                    and self.d == other.d)
        if is_rational(other):
            return False          # b != 0 by invariant
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return True               # zero collapses to plain 0 in qe()

    def __repr__(self):
        return scalar_str(self)


def qe(a, b=0, d=0):
    """Build a + b*sqrt(d), collapsing to a plain rational when possible."""
    a = QQ(a)
    b = QQ(b)
    d = QQ(d)
    if b == 0 or d == 0:
        return a
    r = rat_sqrt(d)
    if r is not None:             # sqrt(d) is rational after all
        return a + b * r
    return QuadExt(a, b, d)


def rational_part(x):
    return x.a if isinstance(x, QuadExt) else QQ(x)


def radical_part(x):
    return x.b if isinstance(x, QuadExt) else _ZERO


def disc(x):
    """The discriminant tag of a scalar: 0 for plain rationals."""
    return x.d if isinstance(x, QuadExt) else _ZERO


def conj(x):
    """Galois conjugate: negate the radical part.  Identity on rationals."""
    if isinstance(x, QuadExt):
        return QuadExt(x.a, -x.b, x.d)
    return QQ(x)


def norm(x):
    """Field norm a^2 - d*b^2; multiplicative, rational-valued."""
    if isinstance(x, QuadExt):
        return x.a * x.a - x.d * x.b * x.b
    x = QQ(x)
    return x * x


def qext_arith(x, y, op):
    """Named entry point: apply add/sub/mul/div over Q(sqrt(d))."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        if is_rational(x) and is_rational(y):
            if y == 0:
                raise DivisionByZero("division by zero")
            return QQ(x) / QQ(y)
        return x / y
    raise ValueError("unknown op %r" % (op,))


qext_conj = conj


def join_disc(d1, d2):
    """Common discriminant of two field tags; 0 joins with anything."""
    d1 = QQ(d1)
    d2 = QQ(d2)
    if d1 == 0:
        return d2
    if d2 == 0 or d1 == d2:
        return d1
    raise FieldMismatch("incompatible fields sqrt(%s) vs sqrt(%s)" % (d1, d2))


def scalar_disc(*xs):
    """Common discriminant of several scalars (FieldMismatch if mixed)."""
    d = _ZERO
    for x in xs:
        d = join_disc(d, disc(x))
    return d


def scalar_sqrt(x):
    """Exact square root staying inside the element's own field, or None.

    For a rational this is :func:`rat_sqrt` (possibly landing in Q only);
    for a + b*sqrt(d) it looks for p + q*sqrt(d) with (p + q*sqrt(d))^2 = x.
    """
    if is_rational(x):
        return rat_sqrt(x)
    nrm = norm(x)
    s = rat_sqrt(nrm)
    if s is None:
        return None
    # p^2 = (a + s)/2 or (a - s)/2 with q = b/(2p)
    for t in (x.a + s, x.a - s):
        p2 = t / 2
        p = rat_sqrt(p2)
        if p is not None and p != 0:
            q = x.b / (2 * p)
            cand = qe(p, q, x.d)
            if cand * cand == x:
                return cand
    return None


def scalar_kth_root(x, k):
    """Exact k-th root within the same field, or None."""
    k = int(k)
    if is_rational(x):
        return rat_kth_root(x, k)
    if k == 1:
        return x
    if k % 2 == 0:
        half = scalar_sqrt(x)
        if half is None:
            return None
        return scalar_kth_root(half, k // 2)
    # odd k > 1 on a genuine radical: no general method needed in practice;
    # try the obvious candidate with rational parts only
    return None


def scalar_str(x):
    """Textual form `p/q` or `p/q + r/s*sqrt(d)` (DSL-compatible)."""
    if is_rational(x):
        return str(QQ(x))
    a, b, d = x.a, x.b, x.d
    rad = "sqrt(%s)" % (d,)
    if b == 1:
        tail = rad
    elif b == -1:
        tail = "-" + rad
    else:
        tail = "%s*%s" % (b, rad)
    if a == 0:
        return tail
    if tail.startswith("-"):
        return "%s - %s" % (a, tail[1:])
    return "%s + %s" % (a, tail)


def scalar_from_text(text):
    """Parse `p/q`, `p/q + r/s*sqrt(d)`, `sqrt(d)`, and signed variants."""
    s = text.replace(" ", "")
    if not s:
        raise ParseError("empty scalar")
    # split into up to two signed terms at top level
    terms = []
    start = 0
    depth = 0
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and i > start:
            if s[i - 1] not in "+-*/(":
                terms.append(s[start:i])
                start = i
    terms.append(s[start:])
    total = QQ(0)
    dtag = QQ(0)
    for term in terms:
        sign = 1
        while term and term[0] in "+-":
            if term[0] == "-":
                sign = -sign
            term = term[1:]
        if "sqrt(" in term:
            head, _, rest = term.partition("sqrt(")
            if not rest.endswith(")"):
                raise ParseError("unbalanced sqrt(...) in %r" % text)
            d = _parse_plain_rat(rest[:-1], text)
            coeff = QQ(1)
            if head:
                if head.endswith("*"):
                    head = head[:-1]
                elif head.endswith("/"):
                    raise ParseError("division by sqrt not supported: %r"
                                     % text)
                coeff = _parse_plain_rat(head, text)
            val = qe(0, sign * coeff, d)
            dtag = join_disc(dtag, disc(val))
            total = total + val
        else:
            total = total + sign * _parse_plain_rat(term, text)
    return total


def _parse_plain_rat(term, context):
    try:
        if "/" in term:
            n, _, d = term.partition("/")
            return rat_normalize(int(n), int(d))
        return QQ(int(term))
    except (ValueError, ZeroDivisionError):
        raise ParseError("bad rational %r in %r" % (term, context))
