"""Truncated power series with a single rational exponent offset.

A :class:`PSeries` represents  x^r * (c0 + c1*x + ...),  where the offset
``r`` is an arbitrary rational ("Puiseux-lite": one global fractional shift,
never several incompatible branches in one object).  Coefficients live in Q
or in one quadratic extension Q(sqrt(d)); see :mod:`diaglab.field`.

Precision model
---------------
Every series knows exactly which coefficients it can vouch for:

* exponents below ``offset`` are exactly zero (by construction),
* stored coefficients cover exponents ``offset + i`` for ``i < len(coeffs)``,
* exponents past the stored list but below ``prec`` are exactly zero,
* ``prec`` is the *absolute* exponent bound: coefficients at exponents
  ``>= prec`` are unknown.  ``prec = None`` means the series is exact
  (x^offset times a polynomial), with no unknown tail at all.

All operations compute the largest output window that is provably correct,
so truncation never has to be guessed at call sites.  Operations whose
result is genuinely infinite from exact inputs (1/(1-x), exp, fractional
powers, ...) take an explicit ``prec`` argument (an absolute bound, like the
field it fills in).

Examples::

    >>> from diaglab.series import ps_from_coeffs, ps_div, ps_one, ps_pow
    >>> from diaglab.field import QQ
    >>> print(ps_div(ps_one(), ps_from_coeffs([1, -1]), prec=5))
    1 + x + x^2 + x^3 + x^4 + O(x^5)
    >>> print(ps_pow(ps_from_coeffs([1, -4]), QQ(-1, 2), prec=4))
    1 + 2*x + 6*x^2 + 20*x^3 + O(x^4)
"""

import math

from .field import (QQ, is_rational, join_disc, scalar_disc, scalar_kth_root,
                    scalar_str)
from .errors import (CompositionDomain, DivisionByZero, ExpLogDomain,
                     OffsetMismatch, ReversionDomain, RootNotInField,
                     SchwarzianDomain)

_Z = QQ(0)
_ONE = QQ(1)


def _pmin(*ps):
    """min over absolute precisions, None acting as +infinity."""
    best = None
    for p in ps:
        if p is None:
            continue
        if best is None or p < best:
            best = p
    return best


def _padd(p, k):
    return None if p is None else QQ(p) + k


def _ceilq(q):
    """Ceiling of a rational as a Python int."""
    return int(math.ceil(q))


def _count(prec, off):
    """How many coefficient slots fit at offsets off, off+1, ... below prec."""
    if prec is None:
        return None
    return max(0, _ceilq(QQ(prec) - QQ(off)))


class PSeries:
    __slots__ = ("offset", "coeffs", "prec", "d")

    def __init__(self, offset, coeffs, prec, d=None):
        offset = QQ(offset)
        coeffs = list(coeffs)
        if prec is not None:
            prec = QQ(prec)
            n = _count(prec, offset)
            if len(coeffs) > n:
                del coeffs[n:]
        k = 0
        while k < len(coeffs) and coeffs[k] == 0:
            k += 1
        if k:
            offset += k
            coeffs = coeffs[k:]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            offset = _Z
        self.offset = offset
        self.coeffs = coeffs
        self.prec = prec
        if d is None:
            d = scalar_disc(*coeffs) if coeffs else _Z
        self.d = QQ(d)

    # ------------------------------------------------------------------
    # inspection

    def is_zero(self):
        """True when every known coefficient vanishes (zero to order prec)."""
        return not self.coeffs

    def is_exact(self):
        return self.prec is None

    def val(self):
        """Valuation (lowest exponent with a nonzero coefficient), or None."""
        return self.offset if self.coeffs else None

    def lead(self):
        if not self.coeffs:
            raise DivisionByZero("zero series has no leading coefficient")
        return self.coeffs[0]

    def coeff(self, e):
        """Exact coefficient of x^e, or None when e is beyond the window."""
        e = QQ(e)
        if self.prec is not None and e >= self.prec:
            return None
        i = e - self.offset
        if i < 0 or i.denominator != 1:
            return _Z
        i = int(i)
        return self.coeffs[i] if i < len(self.coeffs) else _Z

    def taylor_list(self, n, start=0, step=1):
        """Coefficients of x^start, x^(start+step), ... (n of them)."""
        return [self.coeff(start + k * step) for k in range(n)]

    # ------------------------------------------------------------------
    # display:  x^(r) * (c0 + c1*x + ... + O(x^M))

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            cs = scalar_str(c)
            if ("+" in cs[1:]) or ("-" in cs[1:]) or "sqrt" in cs:
                cs = "(%s)" % cs
            if i == 0:
                parts.append(cs)
                continue
            xs = "x" if i == 1 else "x^%d" % i
            if cs == "1":
                parts.append(xs)
            elif cs == "-1":
                parts.append("-" + xs)
            else:
                parts.append("%s*%s" % (cs, xs))
        if self.prec is not None:
            parts.append("O(x^%s)" % (self.prec - self.offset,))
        if not parts:
            return "0"
        body = " + ".join(parts).replace("+ -", "- ")
        if self.offset != 0:
            return "x^(%s) * (%s)" % (self.offset, body)
        return body

    def __repr__(self):
        return "<PSeries %s>" % self.__str__()

    # ------------------------------------------------------------------
    # operator sugar (the full behaviour lives in module functions)

    def __add__(self, other):
        return ps_add(self, _coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return ps_sub(self, _coerce(other))

    def __rsub__(self, other):
        return ps_sub(_coerce(other), self)

    def __mul__(self, other):
        if is_scalar(other):
            return ps_scalar_mul(other, self)
        return ps_mul(self, _coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if is_scalar(other):
            if other == 0:
                raise DivisionByZero("series divided by scalar zero")
            return ps_scalar_mul(_inv_scalar(other), self)
        return ps_div(self, _coerce(other))

    def __rtruediv__(self, other):
        return ps_div(_coerce(other), self)

    def __neg__(self):
        return PSeries(self.offset, [-c for c in self.coeffs], self.prec,
                       self.d)

    def __pow__(self, e):
        return ps_pow(self, e)


def is_scalar(x):
    return is_rational(x) or type(x).__name__ == "QuadExt"


def _inv_scalar(c):
    if is_rational(c):
        if c == 0:
            raise DivisionByZero("scalar division by zero")
        return QQ(1) / QQ(c)
    return 1 / c


def _coerce(x):
    if isinstance(x, PSeries):
        return x
    if is_scalar(x):
        return PSeries(0, [QQ(x) if isinstance(x, int) else x], None)
    raise TypeError("cannot treat %r as a series" % (x,))


# ----------------------------------------------------------------------
# constructors

def ps_from_coeffs(coeffs, offset=0, prec=None):
    """Series from an explicit coefficient list.

    ``prec=None`` marks the list as exact (a polynomial); otherwise ``prec``
    counts known terms from ``offset`` (so it is relative here, as that is
    how fixture data is written down).
    """
    coeffs = [QQ(c) if isinstance(c, int) else c for c in coeffs]
    absprec = None if prec is None else QQ(offset) + prec
    return PSeries(offset, coeffs, absprec)


def ps_zero(prec=None):
    return PSeries(0, [], None if prec is None else QQ(prec))


def ps_one():
    return PSeries(0, [_ONE], None)


def ps_const(c, prec=None):
    return PSeries(0, [QQ(c) if isinstance(c, int) else c],
                   None if prec is None else QQ(prec))


def ps_x(prec=None):
    return PSeries(0, [_Z, _ONE], None if prec is None else QQ(prec))


# ----------------------------------------------------------------------
# ring operations

def ps_add(a, b):
    prec = _pmin(a.prec, b.prec)
    if not a.coeffs and not b.coeffs:
        return PSeries(0, [], prec)
    if not a.coeffs:
        return PSeries(b.offset, b.coeffs, prec, b.d)
    if not b.coeffs:
        return PSeries(a.offset, a.coeffs, prec, a.d)
    if (b.offset - a.offset).denominator != 1:
        raise OffsetMismatch("offsets %s and %s differ by a non-integer"
                             % (a.offset, b.offset))
    off = min(a.offset, b.offset)
    ia, ib = int(a.offset - off), int(b.offset - off)
    hi = max(ia + len(a.coeffs), ib + len(b.coeffs))
    cap = _count(prec, off)
    if cap is not None:
        hi = min(hi, cap)
    out = [_Z] * hi
    for i, c in enumerate(a.coeffs):
        if ia + i < hi:
            out[ia + i] = out[ia + i] + c
    for i, c in enumerate(b.coeffs):
        if ib + i < hi:
            out[ib + i] = out[ib + i] + c
    return PSeries(off, out, prec, join_disc(a.d, b.d))


def ps_sub(a, b):
    return ps_add(a, -b)


def ps_scalar_mul(c, s):
    if c == 0:
        return PSeries(0, [], s.prec)
    return PSeries(s.offset, [c * x for x in s.coeffs], s.prec,
                   join_disc(s.d, scalar_disc(c)))


def ps_mul(a, b):
    if not a.coeffs or not b.coeffs:
        # anything times a window of zeros: zero, window pushed out by the
        # other factor's valuation
        if not a.coeffs and a.prec is None:
            return PSeries(0, [], None)
        if not b.coeffs and b.prec is None:
            return PSeries(0, [], None)
        if not a.coeffs and not b.coeffs:
            return PSeries(0, [], _padd(a.prec, b.prec))
        z, s = (a, b) if not a.coeffs else (b, a)
        return PSeries(0, [], _padd(z.prec, s.offset))
    prec = _pmin(_padd(a.prec, b.offset), _padd(b.prec, a.offset))
    off = a.offset + b.offset
    n, m = len(a.coeffs), len(b.coeffs)
    length = n + m - 1
    cap = _count(prec, off)
    if cap is not None:
        length = min(length, cap)
    out = [_Z] * length
    bc = b.coeffs
    for i, ai in enumerate(a.coeffs):
        if i >= length:
            break
        if ai == 0:
            continue
        top = min(m, length - i)
        for j in range(top):
            out[i + j] = out[i + j] + ai * bc[j]
    return PSeries(off, out, prec, join_disc(a.d, b.d))


def _unit_inverse(c, length):
    """Inverse of a unit Taylor list (c[0] != 0) to `length` terms."""
    inv0 = _inv_scalar(c[0])
    out = [inv0] + [_Z] * (length - 1)
    for k in range(1, length):
        acc = _Z
        top = min(k, len(c) - 1)
        for j in range(1, top + 1):
            if c[j] != 0:
                acc = acc + c[j] * out[k - j]
        out[k] = -inv0 * acc
    return out


def ps_inv(b, prec=None):
    """Multiplicative inverse; `prec` (absolute) is required if b is exact
    and not a monomial."""
    if not b.coeffs:
        raise DivisionByZero("inverse of a series that is zero to its order")
    beta = b.offset
    # result = x^(-beta) * unit^(-1); known relative length of the unit:
    rel = _count(b.prec, beta)
    want = _count(None if prec is None else QQ(prec), -beta)
    length = _pmin(rel, want)
    if length is None:
        if len(b.coeffs) == 1:
            return PSeries(-beta, [_inv_scalar(b.coeffs[0])], None, b.d)
        raise ValueError("inverting an exact non-monomial series "
                         "requires an explicit prec")
    if length <= 0:
        return PSeries(0, [], QQ(prec))
    unit = list(b.coeffs[:length])
    out = _unit_inverse(unit, length)
    return PSeries(-beta, out, -beta + length, b.d)


def ps_div(a, b, prec=None):
    if not b.coeffs:
        raise DivisionByZero("division by a series that is zero to its order")
    if not a.coeffs:
        if a.prec is None:
            return PSeries(0, [], None)
        return PSeries(0, [], a.prec - b.offset)
    off = a.offset - b.offset
    rel_a = _count(a.prec, a.offset)
    rel_b = _count(b.prec, b.offset)
    want = _count(None if prec is None else QQ(prec), off)
    length = _pmin(rel_a, rel_b, want)
    if length is None:
        if len(b.coeffs) == 1:
            return ps_mul(a, ps_inv(b))
        raise ValueError("dividing exact series requires an explicit prec")
    if length <= 0:
        return PSeries(0, [], QQ(prec) if prec is not None else off)
    unit = list(b.coeffs[:length]) + [_Z] * max(0, length - len(b.coeffs))
    inv = _unit_inverse(unit, length)
    num = a.coeffs[:length]
    out = [_Z] * length
    for i, ai in enumerate(num):
        if ai == 0:
            continue
        for j in range(length - i):
            out[i + j] = out[i + j] + ai * inv[j]
    return PSeries(off, out, off + length, join_disc(a.d, b.d))


def ps_arith(a, b, op):
    """Named dispatcher for the four ring operations."""
    table = {"add": ps_add, "sub": ps_sub, "mul": ps_mul, "div": ps_div}
    if op not in table:
        raise ValueError("unknown op %r" % (op,))
    return table[op](a, b)


def ps_truncate(s, prec):
    """Forget everything at exponents >= prec (absolute)."""
    return PSeries(s.offset, s.coeffs, _pmin(s.prec, QQ(prec)), s.d)


def ps_shift(s, k):
    """Multiply by x^k (k rational)."""
    k = QQ(k)
    return PSeries(s.offset + k, s.coeffs, _padd(s.prec, k), s.d)


def ps_scale_x(s, lam):
    """Substitute x -> lam*x.  Needs integer exponents."""
    if s.coeffs and s.offset.denominator != 1:
        raise OffsetMismatch("x-rescaling needs integer exponents")
    if is_rational(lam):
        lam = QQ(lam)
    if s.coeffs and s.offset < 0 and lam == 0:
        raise DivisionByZero("rescaling x by 0 with a pole at the origin")
    base = lam ** int(s.offset) if s.coeffs else _ONE
    out = []
    acc = base
    for c in s.coeffs:
        out.append(c * acc)
        acc = acc * lam
    return PSeries(s.offset, out, s.prec,
                   join_disc(s.d, scalar_disc(lam)))


# ----------------------------------------------------------------------
# calculus

def ps_diff(s):
    """Derivative; d/dx (x^r u) = x^(r-1) (r u + x u')."""
    out = [(s.offset + i) * c for i, c in enumerate(s.coeffs)]
    return PSeries(s.offset - 1, out, _padd(s.prec, -1), s.d)


def ps_theta(s):
    """Homogeneous derivative x d/dx; exact on every stored coefficient."""
    out = [(s.offset + i) * c for i, c in enumerate(s.coeffs)]
    return PSeries(s.offset, out, s.prec, s.d)


def ps_integrate(s):
    """Antiderivative with zero constant term; x^(-1) must be absent."""
    out = []
    for i, c in enumerate(s.coeffs):
        e = s.offset + i
        if e == -1:
            if c != 0:
                raise ExpLogDomain("cannot integrate an x^(-1) term")
            out.append(_Z)
        else:
            out.append(c / (e + 1))
    return PSeries(s.offset + 1, out, _padd(s.prec, 1), s.d)


# ----------------------------------------------------------------------
# composition and reversion

def _check_taylor(s, who):
    if s.coeffs and (s.offset.denominator != 1 or s.offset < 0):
        raise CompositionDomain("%s needs a Taylor series (integer "
                                "exponents >= 0), got offset %s"
                                % (who, s.offset))


def ps_compose(outer, inner, prec=None):
    """outer(inner(x)) for inner with valuation >= 1."""
    _check_taylor(outer, "composition outer")
    _check_taylor(inner, "composition inner")
    if inner.coeffs and inner.offset < 1:
        raise CompositionDomain("inner constant term must vanish")
    want = None if prec is None else QQ(prec)
    if inner.is_zero():
        c0 = outer.coeff(0)
        p = _pmin(inner.prec, want) if not inner.is_exact() else want
        return PSeries(0, [c0] if c0 else [], p)
    v = int(inner.offset)
    bound_outer = None if outer.prec is None else QQ(outer.prec) * v
    res_prec = _pmin(bound_outer, inner.prec, want)
    if res_prec is None and not (outer.is_exact() and inner.is_exact()):
        raise ValueError("composition needs an explicit prec here")
    dense = [_Z] * int(outer.offset) + list(outer.coeffs)
    acc = PSeries(0, [], res_prec)
    for c in reversed(dense):
        acc = ps_mul(acc, inner)
        if res_prec is not None:
            acc = ps_truncate(acc, res_prec)
        if c != 0:
            acc = ps_add(acc, PSeries(0, [c], None))
    return PSeries(acc.offset, acc.coeffs, res_prec, acc.d)


def ps_reversion(s, prec=None):
    """Compositional inverse: s(result) = x to the working order."""
    if s.coeffs and s.offset.denominator != 1:
        raise ReversionDomain("reversion needs integer exponents")
    if s.is_zero() or s.offset != 1:
        raise ReversionDomain("reversion needs c0 = 0 and c1 != 0")
    target = _pmin(s.prec, None if prec is None else QQ(prec))
    if target is None:
        raise ValueError("reverting an exact series requires prec")
    target = QQ(_ceilq(target))
    if target < 2:
        return PSeries(0, [], target)
    c1 = s.coeffs[0]
    t = PSeries(1, [_inv_scalar(c1)], 2)
    while t.prec < target:
        new_p = _pmin(2 * t.prec - 1, target)
        t = PSeries(t.offset, t.coeffs, new_p, t.d)
        f = ps_compose(ps_truncate(s, new_p), t, prec=new_p)
        err = ps_sub(f, ps_x(new_p))
        if not err.is_zero():
            dfdt = ps_compose(ps_diff(ps_truncate(s, new_p)), t,
                              prec=new_p - 1)
            t = ps_sub(t, ps_div(err, dfdt))
        t = PSeries(t.offset, t.coeffs, new_p, t.d)
    return t


# ----------------------------------------------------------------------
# exp, log, powers

def ps_exp(s, prec=None):
    if s.is_zero():
        p = _pmin(s.prec, None if prec is None else QQ(prec))
        return ps_const(_ONE, p)
    if s.offset.denominator != 1 or s.offset < 1:
        raise ExpLogDomain("exp needs a series with zero constant term")
    rel = _pmin(s.prec, None if prec is None else QQ(prec))
    if rel is None:
        raise ValueError("exp of an exact series requires prec")
    n = _ceilq(rel)
    if n <= 0:
        return PSeries(0, [], rel)
    ds = ps_diff(s)
    dsl = [ds.coeff(k) for k in range(n - 1)]
    dsl = [_Z if c is None else c for c in dsl]
    out = [_ONE] + [_Z] * (n - 1)
    for k in range(1, n):
        acc = _Z
        for j in range(k):
            c = dsl[k - 1 - j]
            if c != 0:
                acc = acc + c * out[j]
        out[k] = acc / k
    return PSeries(0, out, rel, s.d)


def ps_log(s, prec=None):
    if s.is_zero() or s.offset != 0 or s.coeffs[0] != 1:
        raise ExpLogDomain("log needs constant term exactly 1")
    rel = _pmin(s.prec, None if prec is None else QQ(prec))
    if rel is None:
        raise ValueError("log of an exact series requires prec")
    su = ps_truncate(s, rel)
    lu = ps_div(ps_diff(su), su, prec=rel - 1)
    return ps_truncate(ps_integrate(lu), rel)


def ps_exp_log(s, which, prec=None):
    """Named dispatcher: which in {"exp", "log"}."""
    if which == "exp":
        return ps_exp(s, prec)
    if which == "log":
        return ps_log(s, prec)
    raise ValueError("which must be 'exp' or 'log'")


def ps_pow(s, e, prec=None):
    """s^e for rational e; principal branch, exact leading-root extraction.

    The result offset is e*(valuation of s).  For fractional e the leading
    coefficient must have an exact root in the field (RootNotInField else).
    """
    e = QQ(e)
    want = None if prec is None else QQ(prec)
    if s.is_zero():
        if e > 0:
            return PSeries(0, [], None if s.prec is None else s.prec * e)
        raise DivisionByZero("zero-window series to a nonpositive power")
    v = s.offset
    unit = PSeries(0, s.coeffs, _padd(s.prec, -v), s.d)
    if e.denominator == 1:
        k = int(e)
        if k == 0:
            return ps_one() if s.is_exact() else ps_const(_ONE, unit.prec)
        if k > 0:
            out = ps_one()
            base = unit
            kk = k
            wantu = None if want is None else want - v * e
            while kk:
                if kk & 1:
                    out = ps_mul(out, base)
                    if wantu is not None:
                        out = ps_truncate(out, wantu)
                kk >>= 1
                if kk:
                    base = ps_mul(base, base)
                    if wantu is not None:
                        base = ps_truncate(base, wantu)
            return ps_shift(out, v * e)
        inv = ps_inv(unit, prec=None if want is None else want - v * e)
        return ps_shift(ps_pow(inv, -k,
                               prec=None if want is None else want - v * e),
                        v * e)
    lead = s.coeffs[0]
    root = _ONE if lead == 1 else scalar_kth_root(lead, int(e.denominator))
    if root is None:
        raise RootNotInField("leading coefficient %s has no exact %d-th root"
                             % (scalar_str(lead), e.denominator))
    clead = root ** abs(int(e.numerator))
    if e < 0:
        clead = _inv_scalar(clead)
    w = ps_scalar_mul(_inv_scalar(lead), unit)       # leading coefficient 1
    relcap = _pmin(w.prec, None if want is None else want - v * e)
    if relcap is None:
        raise ValueError("fractional power of an exact series requires prec")
    we = ps_exp(ps_scalar_mul(e, ps_log(w, prec=relcap)), prec=relcap)
    return ps_shift(ps_scalar_mul(clead, we), v * e)


def ps_nth_root(s, n, prec=None):
    """Principal n-th root: ps_pow(s, 1/n).  Result offset = offset/n."""
    return ps_pow(s, QQ(1, int(n)), prec=prec)


# ----------------------------------------------------------------------
# Hadamard product and the Schwarzian derivative

def ps_hadamard(a, b):
    """Coefficientwise product; both operands must be Taylor windows."""
    for s in (a, b):
        if s.coeffs and (s.offset.denominator != 1 or s.offset < 0):
            raise OffsetMismatch("Hadamard product needs offset-0 series")
    prec = _pmin(a.prec, b.prec)
    if prec is None:
        hi = max((int(a.offset) + len(a.coeffs)) if a.coeffs else 0,
                 (int(b.offset) + len(b.coeffs)) if b.coeffs else 0)
    else:
        hi = max(0, _ceilq(prec))
    out = []
    for k in range(hi):
        ca = a.coeff(k)
        cb = b.coeff(k)
        out.append(ca * cb)
    return PSeries(0, out, prec, join_disc(a.d, b.d))


def ps_schwarzian(y):
    """{y, x} = y'''/y' - (3/2)(y''/y')^2, offset-aware."""
    y1 = ps_diff(y)
    if y1.is_zero():
        raise SchwarzianDomain("derivative vanishes to the working order")
    y2 = ps_diff(y1)
    y3 = ps_diff(y2)
    r1 = ps_div(y3, y1)
    r2 = ps_div(y2, y1)
    return ps_sub(r1, ps_scalar_mul(QQ(3, 2), ps_mul(r2, r2)))


# ----------------------------------------------------------------------
# comparison helpers

def ps_equal(a, b, through=None):
    """True when a - b vanishes on the common window.

    ``through`` additionally requires the common window to reach that
    exponent (exclusive); otherwise any window is accepted as long as the
    difference is zero on it.
    """
    diff = ps_sub(a, b)
    if not diff.is_zero():
        return False
    if through is not None and diff.prec is not None \
            and diff.prec < QQ(through):
        return False
    return True


def ps_first_mismatch(a, b):
    """(exponent, coeff of a, coeff of b) at the first disagreement, or
    None when the difference vanishes on the common window."""
    diff = ps_sub(a, b)
    if diff.is_zero():
        return None
    e = diff.offset
    return (e, a.coeff(e), b.coeff(e))
