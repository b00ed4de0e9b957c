"""Multivariate rational functions and their main-diagonal series.

Polynomials are sparse dicts mapping exponent tuples to scalars; rational
functions are (numerator, denominator) pairs reduced by their common
monomial factor only (no full multivariate gcd — equality uses cross
multiplication instead).

The diagonal of R(v1, ..., vn) is the one-variable series whose m-th
coefficient is the coefficient of (v1*...*vn)^m in the Taylor expansion of
R at the origin.  It is computed by the triangular recurrence obtained
from  den * S = num  on the exponent box {0 <= k_i < M}, walking in order
of total degree.  Two optimisations keep exact big-integer arithmetic
affordable at useful orders:

* interchangeable variables (those whose transposition leaves both
  numerator and denominator unchanged) are detected and the solution is
  only stored on sorted representatives, shrinking the box by up to n!;
* when every coefficient is an integer and the denominator's constant
  term is +-1, the recurrence runs on plain Python ints.

>>> R = parse_mrat("1/(1 - x - y)", ("x", "y"))
>>> print(diagonal(R, 6))
1 + 2*x + 6*x^2 + 20*x^3 + 70*x^4 + 252*x^5 + O(x^6)
>>> parse_mrat("(x*y + x^2*y)/(x - x*y)", ("x", "y"))
<MRatFun (y + x*y)/(1 - y)>
"""

import itertools

from .errors import (BadParameters, DiagonalDomain, DivisionByZero,
                     ParseError)
from .field import (QQ, is_rational, qe, rat_sqrt, scalar_str)
from .series import PSeries
from .upoly import RatFun1

_Z = QQ(0)
_ONE = QQ(1)


class MPoly:
    """Sparse multivariate polynomial: {exponent tuple: nonzero scalar}."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = int(nvars)
        clean = {}
        if terms:
            for e, c in terms.items():
                if c == 0:
                    continue
                if len(e) != self.nvars:
                    raise ValueError("exponent arity mismatch")
                clean[tuple(int(x) for x in e)] = \
                    QQ(c) if isinstance(c, int) else c
        self.terms = clean

    @classmethod
    def const(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars, i):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): _ONE})

    def is_zero(self):
        return not self.terms

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, _Z)

    def deg_vec(self):
        """Per-variable maximum exponent (all -1 for the zero polynomial)."""
        if not self.terms:
            return (-1,) * self.nvars
        out = [0] * self.nvars
        for e in self.terms:
            for i, x in enumerate(e):
                if x > out[i]:
                    out[i] = x
        return tuple(out)

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __neg__(self):
        return MPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, _Z) + c
            if v == 0:
                out.pop(e, None)
            else:
                out[e] = v
        return MPoly(self.nvars, out)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, _Z) + c1 * c2
                if v == 0:
                    out.pop(e, None)
                else:
                    out[e] = v
        return MPoly(self.nvars, out)

    def scale(self, k):
        if k == 0:
            return MPoly(self.nvars)
        return MPoly(self.nvars, {e: k * c for e, c in self.terms.items()})

    def pow(self, k):
        k = int(k)
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = MPoly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def partial(self, i):
        """d/dv_i."""
        out = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            e2 = list(e)
            e2[i] -= 1
            e2 = tuple(e2)
            v = out.get(e2, _Z) + e[i] * c
            if v == 0:
                out.pop(e2, None)
            else:
                out[e2] = v
        return MPoly(self.nvars, out)

    def eval(self, point):
        acc = _Z
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                for _ in range(k):
                    t = t * x
            acc = acc + t
        return acc

    def permute_vars(self, perm):
        """New polynomial with v_i renamed to position perm.index(i)."""
        out = {}
        for e, c in self.terms.items():
            out[tuple(e[p] for p in perm)] = c
        return MPoly(self.nvars, out)

    def str_with(self, names):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda t: (sum(t), t)):
            c = self.terms[e]
            mono = []
            for n, k in zip(names, e):
                if k == 1:
                    mono.append(n)
                elif k > 1:
                    mono.append("%s^%d" % (n, k))
            cs = scalar_str(c)
            if ("+" in cs[1:]) or ("-" in cs[1:]) or "sqrt" in cs:
                cs = "(%s)" % cs
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append("*".join(mono))
            elif cs == "-1":
                parts.append("-" + "*".join(mono))
            else:
                parts.append(cs + "*" + "*".join(mono))
        return " + ".join(parts).replace("+ -", "- ")


class MRatFun:
    """num/den with the common monomial factor cancelled."""

    __slots__ = ("num", "den", "names")

    def __init__(self, num, den=None, names=None):
        if den is None:
            den = MPoly.const(num.nvars, 1)
        if num.nvars != den.nvars:
            raise ValueError("variable count mismatch")
        if den.is_zero():
            raise DivisionByZero("rational function with zero denominator")
        if num.is_zero():
            den = MPoly.const(num.nvars, 1)
        else:
            shift = _common_monomial(num, den)
            if any(shift):
                num = _shift_down(num, shift)
                den = _shift_down(den, shift)
        self.num = num
        self.den = den
        self.names = tuple(names) if names else \
            tuple("v%d" % i for i in range(num.nvars))

    @property
    def nvars(self):
        return self.num.nvars

    def is_zero(self):
        return self.num.is_zero()

    def _lift(self, other):
        if isinstance(other, MRatFun):
            return other
        if is_rational(other) or type(other).__name__ == "QuadExt":
            return MRatFun(MPoly.const(self.nvars, other), None, self.names)
        return None

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return MRatFun(self.num * o.den + o.num * self.den,
                       self.den * o.den, self.names)

    __radd__ = __add__

    def __neg__(self):
        return MRatFun(-self.num, self.den, self.names)

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
        return MRatFun(self.num * o.num, self.den * o.den, self.names)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if o.num.is_zero():
            raise DivisionByZero("rational function divided by zero")
        return MRatFun(self.num * o.den, self.den * o.num, self.names)

    def __rtruediv__(self, other):
        o = self._lift(other)
        return o / self

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            if self.num.is_zero():
                raise DivisionByZero("zero to a negative power")
            return MRatFun(self.den.pow(-k), self.num.pow(-k), self.names)
        return MRatFun(self.num.pow(k), self.den.pow(k), self.names)

    def eval(self, point):
        dv = self.den.eval(point)
        if dv == 0:
            raise DivisionByZero("pole of the rational function")
        return self.num.eval(point) / dv

    def __str__(self):
        ns = self.num.str_with(self.names)
        if self.den == MPoly.const(self.nvars, 1):
            return ns
        ds = self.den.str_with(self.names)
        if len(self.num.terms) > 1:
            ns = "(%s)" % ns
        return "%s/(%s)" % (ns, ds)

    def __repr__(self):
        return "<MRatFun %s>" % self.__str__()


def _common_monomial(*polys):
    mins = None
    for p in polys:
        for e in p.terms:
            if mins is None:
                mins = list(e)
            else:
                mins = [min(a, b) for a, b in zip(mins, e)]
    return tuple(mins) if mins else ()


def _shift_down(p, shift):
    return MPoly(p.nvars, {tuple(a - b for a, b in zip(e, shift)): c
                           for e, c in p.terms.items()})


def mrat_equal(a, b):
    return a == b


def homog_partial(r, i):
    """v_i * dR/dv_i, the homogeneous partial derivative."""
    i = int(i)
    if not 0 <= i < r.nvars:
        raise BadParameters("variable index out of range")
    vi = MPoly.var(r.nvars, i)
    num = (r.num.partial(i) * r.den - r.num * r.den.partial(i)) * vi
    return MRatFun(num, r.den * r.den, r.names)


def monomial_subst(r, table):
    """Substitute v_i -> lam_i * monomial for selected variables.

    ``table`` maps a variable index to ``(lam, exponents)`` where
    ``exponents`` is a length-nvars integer vector, negative entries
    allowed (Laurent substitutions such as v -> 1/v are cleared against
    the denominator afterwards).
    """
    n = r.nvars
    for i, (_, ev) in table.items():
        if not 0 <= int(i) < n or len(ev) != n:
            raise BadParameters("bad substitution table")

    def image(p):
        out = {}
        for e, c in p.terms.items():
            vec = [0] * n
            coef = c
            for i, k in enumerate(e):
                if k == 0:
                    continue
                if i in table:
                    lam, ev = table[i]
                    if k > 0:
                        coef = coef * (lam ** k if not is_rational(lam)
                                       else QQ(lam) ** k)
                    for idx in range(n):
                        vec[idx] += k * ev[idx]
                else:
                    vec[i] += k
            key = tuple(vec)
            v = out.get(key, _Z) + coef
            if v == 0:
                out.pop(key, None)
            else:
                out[key] = v
        return out

    tn, td = image(r.num), image(r.den)
    mins = [0] * n
    for d in (tn, td):
        for e in d:
            for i, x in enumerate(e):
                if x < mins[i]:
                    mins[i] = x
    lift = tuple(-m for m in mins)
    num = MPoly(n, {tuple(a + b for a, b in zip(e, lift)): c
                    for e, c in tn.items()})
    den = MPoly(n, {tuple(a + b for a, b in zip(e, lift)): c
                    for e, c in td.items()})
    return MRatFun(num, den, r.names)


def reciprocal_transform(r):
    """-1/(v1*...*vn) * R(1/v1, ..., 1/vn), cleared to a rational function."""
    n = r.nvars
    table = {i: (_ONE, tuple(-1 if j == i else 0 for j in range(n)))
             for i in range(n)}
    flipped = monomial_subst(r, table)
    allv = MPoly(n, {(1,) * n: _ONE})
    return MRatFun(-flipped.num, flipped.den * allv, r.names)


def mrat_to_rf1(r):
    """Restriction to a single used variable, as a RatFun1."""
    used = set()
    for p in (r.num, r.den):
        for e in p.terms:
            for i, x in enumerate(e):
                if x:
                    used.add(i)
    if len(used) > 1:
        raise BadParameters("rational function uses %d variables"
                            % len(used))
    i = used.pop() if used else 0

    def dense(p):
        out = [_Z] * (max((e[i] for e in p.terms), default=0) + 1)
        for e, c in p.terms.items():
            out[e[i]] = c
        return out

    return RatFun1(dense(r.num), dense(r.den))


# ----------------------------------------------------------------------
# parsing

_OPS = set("+-*/^()")


def _tokenize(text):
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("num", int(text[i:j]), i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(("name", text[i:j], i))
            i = j
            continue
        if ch == "*" and i + 1 < n and text[i + 1] == "*":
            toks.append(("op", "^", i))
            i += 2
            continue
        if ch in _OPS:
            toks.append(("op", ch, i))
            i += 1
            continue
        raise ParseError("unexpected character %r" % ch, i)
    toks.append(("end", None, n))
    return toks


class _Parser:
    def __init__(self, text, names):
        self.text = text
        self.toks = _tokenize(text)
        self.pos = 0
        self.names = list(names)
        self.nvars = len(self.names)

    def peek(self):
        return self.toks[self.pos]

    def take(self):
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, val):
        kind, v, p = self.take()
        if kind != "op" or v != val:
            raise ParseError("expected %r" % val, p)

    def const(self, c):
        return MRatFun(MPoly.const(self.nvars, c), None, self.names)

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
            kind, v, _ = self.peek()
            if kind == "op" and v in "*/":
                self.take()
                rhs = self.factor()
                if v == "*":
                    acc = acc * rhs
                else:
                    if rhs.is_zero():
                        raise ParseError("division by zero",
                                         self.toks[self.pos - 1][2])
                    acc = acc / rhs
            else:
                return acc

    def factor(self):
        kind, v, p = self.peek()
        if kind == "op" and v in "+-":
            self.take()
            f = self.factor()
            return f if v == "+" else -f
        return self.power()

    def power(self):
        base = self.atom()
        kind, v, p = self.peek()
        if kind == "op" and v == "^":
            self.take()
            e = self.int_exponent()
            if e < 0 and base.is_zero():
                raise ParseError("zero to a negative power", p)
            return base ** e
        return base

    def int_exponent(self):
        kind, v, p = self.take()
        sign = 1
        if kind == "op" and v in "+-":
            sign = -1 if v == "-" else 1
            kind, v, p = self.take()
        if kind == "op" and v == "(":
            e = self.int_exponent()
            self.expect(")")
            return sign * e
        if kind != "num":
            raise ParseError("integer exponent expected", p)
        return sign * v

    def atom(self):
        kind, v, p = self.take()
        if kind == "num":
            return self.const(QQ(v))
        if kind == "name":
            if v == "sqrt":
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return self.const(_scalar_sqrt_of(arg, p))
            if v in self.names:
                i = self.names.index(v)
                return MRatFun(MPoly.var(self.nvars, i), None, self.names)
            raise ParseError("unknown name %r" % v, p)
        if kind == "op" and v == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError("unexpected token", p)


def _scalar_sqrt_of(r, pos):
    c = MPoly.const(r.nvars, 1)
    if r.den != c or list(r.num.terms) not in ([], [(0,) * r.nvars]):
        raise ParseError("sqrt of a non-constant", pos)
    val = r.num.constant_term()
    if not is_rational(val):
        raise ParseError("nested radicals are not supported", pos)
    val = QQ(val)
    ex = rat_sqrt(val)
    if ex is not None:
        return ex
    return qe(0, 1, val)


def parse_mrat(text, names):
    """Parse +,-,*,/,^ expressions over the given variable names."""
    names = tuple(names)
    if len(set(names)) != len(names):
        raise ValueError("duplicate variable names")
    return _Parser(text, names).parse()


# ----------------------------------------------------------------------
# the diagonal

def _int_clear(num, den):
    """Scale num, den by a common rational to integer coefficients.

    Returns (numdict, dendict, is_int) where is_int tells whether every
    scalar really was rational (quadratic irrationals pass through
    unchanged with is_int False).
    """
    from math import gcd
    coeffs = list(num.terms.values()) + list(den.terms.values())
    for c in coeffs:
        if not is_rational(c):
            return dict(num.terms), dict(den.terms), False
    L = 1
    for c in coeffs:
        q = QQ(c)
        L = L * int(q.denominator) // gcd(L, int(q.denominator))
    g = 0
    for c in coeffs:
        g = gcd(g, abs(int(QQ(c) * L)))
    nd = {e: int(QQ(c) * L) // g for e, c in num.terms.items()}
    dd = {e: int(QQ(c) * L) // g for e, c in den.terms.items()}
    return nd, dd, True


def _symmetry_classes(num, den, n):
    """Partition of variable indices into interchangeable classes."""
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def swap_invariant(p, i, j):
        for e, c in p.terms.items():
            f = list(e)
            f[i], f[j] = f[j], f[i]
            if p.terms.get(tuple(f)) != c:
                return False
        return True

    for i in range(n):
        for j in range(i + 1, n):
            if swap_invariant(num, i, j) and swap_invariant(den, i, j):
                a, b = find(i), find(j)
                if a != b:
                    parent[b] = a
    classes = {}
    for i in range(n):
        classes.setdefault(find(i), []).append(i)
    return sorted(classes.values())


def _block_swap(num, den, classes):
    """One pair of equal-sized classes whose wholesale exchange fixes
    num and den, if any (covers the frequent (a,b) <-> (c,d) layout)."""
    for x in range(len(classes)):
        for y in range(x + 1, len(classes)):
            ca, cb = classes[x], classes[y]
            if len(ca) != len(cb):
                continue
            perm = list(range(num.nvars))
            for a, b in zip(ca, cb):
                perm[a], perm[b] = perm[b], perm[a]

            def ok(p):
                for e, c in p.terms.items():
                    if p.terms.get(tuple(e[perm[i]]
                                         for i in range(len(perm)))) != c:
                        return False
                return True

            if ok(num) and ok(den):
                return x, y
    return None


def diagonal_coeffs(r, terms):
    """The first `terms` diagonal coefficients of r, as exact scalars."""
    terms = int(terms)
    if terms <= 0:
        return []
    n = r.nvars
    if n > 4:
        raise BadParameters("diagonals support at most 4 variables")
    num, den = r.num, r.den
    if den.constant_term() == 0:
        raise DiagonalDomain("denominator vanishes at the origin")
    if n == 1:
        f = mrat_to_rf1(r)
        s = f.series(terms)
        return [s.coeff(k) for k in range(terms)]

    nd, dd, is_int = _int_clear(num, den)
    classes = _symmetry_classes(num, den, n)
    # reorder variables so each class is a contiguous slice
    perm = [i for cl in classes for i in cl]
    if perm != list(range(n)):
        nd = {tuple(e[p] for p in perm): c for e, c in nd.items()}
        dd = {tuple(e[p] for p in perm): c for e, c in dd.items()}
    bounds = []
    lo = 0
    for cl in classes:
        bounds.append((lo, lo + len(cl)))
        lo += len(cl)
    nperm = MPoly(n, nd)
    dperm = MPoly(n, dd)
    swap = _block_swap(nperm, dperm, [list(range(a, b)) for a, b in bounds])

    q0 = dd[(0,) * n]
    qterms = [(e, c) for e, c in dd.items() if any(e)]
    M = terms

    sl = [slice(a, b) for a, b in bounds]
    if swap is not None:
        sa, sb = sl[swap[0]], sl[swap[1]]

    if swap is None and len(classes) == n:
        def canon(t):
            return t
    elif swap is None and len(classes) == 1:
        def canon(t):
            return tuple(sorted(t, reverse=True))
    else:
        def canon(t):
            parts = []
            for s in sl:
                seg = t[s]
                parts.append(tuple(sorted(seg, reverse=True))
                             if len(seg) > 1 else seg)
            if swap is not None and parts[swap[0]] < parts[swap[1]]:
                parts[swap[0]], parts[swap[1]] = \
                    parts[swap[1]], parts[swap[0]]
            out = ()
            for p in parts:
                out = out + p
            return out

    # canonical representatives, walked by total degree
    per_class = []
    for a, b in bounds:
        c = b - a
        if c == 1:
            per_class.append([(k,) for k in range(M)])
        else:
            per_class.append([tuple(reversed(t)) for t in
                              itertools.combinations_with_replacement(
                                  range(M), c)])
    reps = []
    for combo in itertools.product(*per_class):
        t = ()
        for p in combo:
            t = t + p
        if swap is not None:
            if t[sa] < t[sb]:
                continue
        reps.append(t)
    reps.sort(key=sum)

    if is_int and q0 in (1, -1):
        S = _sweep_int(reps, canon, nd, qterms, q0, n)
    else:
        S = _sweep_field(reps, canon, nd, qterms, q0, n)

    out = []
    for m in range(M):
        v = S[(m,) * n]
        out.append(QQ(v) if isinstance(v, int) else v)
    return out


def _sweep_int(reps, canon, pd, qterms, q0, n):
    S = {}
    get = S.__getitem__
    for k in reps:
        acc = pd.get(k, 0)
        for j, c in qterms:
            ok = True
            diff = []
            for a, b in zip(k, j):
                d = a - b
                if d < 0:
                    ok = False
                    break
                diff.append(d)
            if ok:
                acc -= c * get(canon(tuple(diff)))
        S[k] = acc if q0 == 1 else -acc
    return S


def _sweep_field(reps, canon, pd, qterms, q0, n):
    S = {}
    get = S.__getitem__
    inv0 = _ONE / q0 if is_rational(q0) else 1 / q0
    zero = _Z
    for k in reps:
        acc = pd.get(k, zero)
        for j, c in qterms:
            ok = True
            diff = []
            for a, b in zip(k, j):
                d = a - b
                if d < 0:
                    ok = False
                    break
                diff.append(d)
            if ok:
                acc = acc - c * get(canon(tuple(diff)))
        S[k] = acc * inv0
    return S


def diagonal(r, terms):
    """Diagonal series of r as a PSeries known below exponent `terms`."""
    return PSeries(0, diagonal_coeffs(r, terms), QQ(int(terms)))
