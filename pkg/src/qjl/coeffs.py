"""Exact coefficient arithmetic: Gaussian rationals and rational functions of zeta.

``ZetaRat`` stores ``zeta**val * (re + i*im) / den`` with ``re``, ``im`` and
``den`` in Q[zeta] (python-flint ``fmpq_poly``).  The denominator is kept real:
dividing by a complex numerator multiplies through by its coefficient-wise
conjugate.  Canonical form: ``den`` monic with ``den(0) != 0``; ``re`` and
``im`` not both divisible by zeta; ``gcd(re, im, den) = 1`` over Q.  Two equal
rational functions therefore have identical fields.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from numbers import Rational

from flint import fmpq, fmpq_poly

__all__ = ["GQ", "ZetaRat", "to_fraction", "as_gq", "ZERO", "ONE"]


def to_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, fmpq):
        return Fraction(int(c.p), int(c.q))
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"cannot convert {c!r} to an exact rational")


def _fmpq(c: Fraction) -> fmpq:
    return fmpq(c.numerator, c.denominator)


class GQ:
    """A Gaussian rational ``re + im*i`` with exact equality."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = to_fraction(re)
        self.im = to_fraction(im)

    @classmethod
    def parse(cls, value) -> "GQ":
        if isinstance(value, GQ):
            return value
        if isinstance(value, complex):
            raise TypeError("floating-point values are not exact")
        if isinstance(value, str):
            t = value.strip().replace(" ", "")
            for unit in ("I", "i"):
                if t.endswith(unit):
                    c = t[:-1].rstrip("*")
                    c = {"": "1", "+": "1", "-": "-1"}.get(c, c)
                    return cls(0, c)
        return cls(value)

    def __repr__(self):
        return f"GQ({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*I"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re} {sign} {abs(self.im)}*I)"

    def __eq__(self, other):
        if isinstance(other, GQ):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __neg__(self):
        return GQ(-self.re, -self.im)

    def __add__(self, other):
        other = as_gq(other)
        return GQ(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = as_gq(other)
        return GQ(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return as_gq(other) - self

    def __mul__(self, other):
        other = as_gq(other)
        return GQ(self.re * other.re - self.im * other.im,
                  self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def conjugate(self) -> "GQ":
        return GQ(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GQ":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("GQ zero has no inverse")
        return GQ(self.re / n, -self.im / n)

    def __truediv__(self, other):
        return self * as_gq(other).inverse()

    def __rtruediv__(self, other):
        return as_gq(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = GQ(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def sqrt(self) -> "GQ | None":
        """Exact principal square root in Q(i), or None when it does not exist."""
        if not self:
            return GQ(0)
        r = _rational_sqrt(self.norm())
        if r is None:
            return None
        x2 = (self.re + r) / 2
        x = _rational_sqrt(x2)
        if x is None:
            return None
        if x == 0:
            y = _rational_sqrt(-self.re)
            if y is None:
                return None
            root = GQ(0, y if self.im >= 0 else -y)
        else:
            root = GQ(x, self.im / (2 * x))
        assert root * root == self
        return root


def _isqrt_exact(n: int):
    if n < 0:
        return None
    from math import isqrt

    r = isqrt(n)
    return r if r * r == n else None


def _rational_sqrt(c: Fraction):
    a, b = _isqrt_exact(c.numerator), _isqrt_exact(c.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)


def as_gq(value) -> GQ:
    if isinstance(value, GQ):
        return value
    return GQ(value)


# ---------------------------------------------------------------------------
# polynomial helpers on fmpq_poly

_ZERO = fmpq_poly(0)
_ONE = fmpq_poly(1)


def _low_order(p: fmpq_poly) -> int:
    """zeta-adic valuation of a nonzero polynomial."""
    for j, c in enumerate(p.coeffs()):
        if c != 0:
            return j
    raise ValueError("valuation of zero")


def _spread(p: fmpq_poly, k: int) -> fmpq_poly:
    """p(zeta**k) for k >= 1."""
    if k == 1 or p.degree() <= 0:
        return p
    cs = p.coeffs()
    out = [0] * (k * (len(cs) - 1) + 1)
    for j, c in enumerate(cs):
        out[k * j] = c
    return fmpq_poly(out)


def _reverse(p: fmpq_poly) -> fmpq_poly:
    return fmpq_poly(list(reversed(p.coeffs())))


def _poly_at(p: fmpq_poly, v: GQ) -> GQ:
    acc = GQ(0)
    for c in reversed(p.coeffs()):
        acc = acc * v + GQ(to_fraction(c))
    return acc


_UNITS = {(1, 0), (-1, 0), (0, 1), (0, -1)}


class ZetaRat:
    """Rational function of zeta over Q(i) in canonical reduced form."""

    __slots__ = ("val", "re", "im", "den", "_hash")

    def __init__(self, val: int, re: fmpq_poly, im: fmpq_poly, den: fmpq_poly):
        # trusted constructor: callers pass canonical data (use ZetaRat.make)
        self.val = val
        self.re = re
        self.im = im
        self.den = den
        self._hash = None

    # -- construction -----------------------------------------------------
    @classmethod
    def make(cls, val: int, re: fmpq_poly, im: fmpq_poly, den: fmpq_poly = _ONE) -> "ZetaRat":
        if re.is_zero() and im.is_zero():
            return ZERO
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        v = min(_low_order(p) for p in (re, im) if not p.is_zero())
        if v:
            re, im, val = re.right_shift(v), im.right_shift(v), val + v
        if not den.is_one():
            vd = _low_order(den)
            if vd:
                den, val = den.right_shift(vd), val - vd
            if den.degree() > 0:
                g = den.gcd(re)
                if g.degree() > 0 and not im.is_zero():
                    g = g.gcd(im)
                if g.degree() > 0:
                    den, re, im = den // g, re // g, im // g
            lc = den.leading_coefficient()
            if lc != 1:
                den, re, im = den / lc, re / lc, im / lc
        return cls(val, re, im, den)

    @classmethod
    def const(cls, c) -> "ZetaRat":
        c = as_gq(c)
        return cls.make(0, fmpq_poly([_fmpq(c.re)]), fmpq_poly([_fmpq(c.im)]))

    @classmethod
    def monomial(cls, k: int, c=1) -> "ZetaRat":
        c = as_gq(c)
        if not c:
            return ZERO
        return cls(k, fmpq_poly([_fmpq(c.re)]), fmpq_poly([_fmpq(c.im)]), _ONE)

    @classmethod
    def laurent(cls, terms) -> "ZetaRat":
        """From an iterable of (exponent, coefficient) pairs."""
        terms = [(int(e), as_gq(c)) for e, c in terms]
        terms = [(e, c) for e, c in terms if c]
        if not terms:
            return ZERO
        lo = min(e for e, _ in terms)
        hi = max(e for e, _ in terms)
        re = [fmpq(0)] * (hi - lo + 1)
        im = [fmpq(0)] * (hi - lo + 1)
        for e, c in terms:
            re[e - lo] += _fmpq(c.re)
            im[e - lo] += _fmpq(c.im)
        return cls.make(lo, fmpq_poly(re), fmpq_poly(im))

    @classmethod
    def fraction(cls, num: "ZetaRat", den: "ZetaRat") -> "ZetaRat":
        return num * den.inverse()

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def is_constant(self) -> bool:
        return self.den.is_one() and (self.is_zero() or (
            self.val == 0 and self.re.degree() <= 0 and self.im.degree() <= 0))

    def is_real(self) -> bool:
        return self.im.is_zero()

    def constant_value(self) -> GQ:
        if not self.is_constant():
            raise ValueError("coefficient depends on zeta")
        return GQ(to_fraction(self.re[0]), to_fraction(self.im[0]))

    def __eq__(self, other):
        if not isinstance(other, ZetaRat):
            if isinstance(other, (int, Fraction, GQ)):
                return self == ZetaRat.const(other)
            return NotImplemented
        return (self.val == other.val and self.re == other.re
                and self.im == other.im and self.den == other.den)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.val, str(self.re), str(self.im), str(self.den)))
        return self._hash

    # -- arithmetic -------------------------------------------------------
    def __neg__(self):
        if self.is_zero():
            return self
        return ZetaRat(self.val, -self.re, -self.im, self.den)

    def __add__(self, other):
        if not isinstance(other, ZetaRat):
            other = ZetaRat.const(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        v = min(self.val, other.val)
        r1, i1 = self.re, self.im
        r2, i2 = other.re, other.im
        if self.val != v:
            s = self.val - v
            r1, i1 = r1.left_shift(s), i1.left_shift(s)
        if other.val != v:
            s = other.val - v
            r2, i2 = r2.left_shift(s), i2.left_shift(s)
        d1, d2 = self.den, other.den
        if d1 == d2:
            if d1.is_one():
                return ZetaRat.make(v, r1 + r2, i1 + i2)
            return ZetaRat.make(v, r1 + r2, i1 + i2, d1)
        g = d1.gcd(d2)
        m1, m2 = d2 // g, d1 // g
        return ZetaRat.make(v, r1 * m1 + r2 * m2, i1 * m1 + i2 * m2, d1 * m1)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, ZetaRat):
            other = ZetaRat.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return ZetaRat.const(other) - self

    def __mul__(self, other):
        if not isinstance(other, ZetaRat):
            return self.scale(other)
        if self.is_zero() or other.is_zero():
            return ZERO
        if self.im.is_zero() and other.im.is_zero():
            re, im = self.re * other.re, _ZERO
        elif self.im.is_zero():
            re, im = self.re * other.re, self.re * other.im
        elif other.im.is_zero():
            re, im = self.re * other.re, self.im * other.re
        else:
            re = self.re * other.re - self.im * other.im
            im = self.re * other.im + self.im * other.re
        if self.den.is_one() and other.den.is_one():
            return ZetaRat(self.val + other.val, re, im, _ONE)
        return ZetaRat.make(self.val + other.val, re, im, self.den * other.den)

    __rmul__ = __mul__

    def scale(self, c) -> "ZetaRat":
        c = as_gq(c)
        if not c or self.is_zero():
            return ZERO
        a, b = _fmpq(c.re), _fmpq(c.im)
        if b == 0:
            return ZetaRat(self.val, self.re * a, self.im * a, self.den)
        re = self.re * a - self.im * b
        im = self.re * b + self.im * a
        return ZetaRat(self.val, re, im, self.den)

    def inverse(self) -> "ZetaRat":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero coefficient")
        if self.im.is_zero():
            return ZetaRat.make(-self.val, self.den, _ZERO, self.re)
        norm = self.re * self.re + self.im * self.im
        return ZetaRat.make(-self.val, self.den * self.re, -(self.den * self.im), norm)

    def __truediv__(self, other):
        if not isinstance(other, ZetaRat):
            return self.scale(as_gq(other).inverse())
        return self * other.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj_zeta(self) -> "ZetaRat":
        """Substitute zeta -> 1/zeta."""
        return self.subs_power(-1)

    def subs_power(self, k: int) -> "ZetaRat":
        """Substitute zeta -> zeta**k (k != 0)."""
        if k == 0:
            raise ValueError("zeta -> 1 is a specialization, not a substitution")
        if self.is_zero() or k == 1:
            return self
        m = abs(k)
        re, im, den = _spread(self.re, m), _spread(self.im, m), _spread(self.den, m)
        val = self.val * k
        if k < 0:
            # p(zeta^-m) = zeta^(-m*deg p) * reverse(p)(zeta^m), degrees aligned to the numerator
            dn = max(self.re.degree(), self.im.degree())
            re = _spread(_pad_reverse(self.re, dn), m)
            im = _spread(_pad_reverse(self.im, dn), m)
            den = _spread(_reverse(self.den), m)
            val += -m * dn + m * self.den.degree()
        return ZetaRat.make(val, re, im, den)

    def zeta_derivative(self) -> "ZetaRat":
        """zeta * d/dzeta."""
        if self.is_zero():
            return self
        v, d = self.val, self.den

        def part(p):
            if p.is_zero():
                return p
            t = p.derivative().left_shift(1)
            if d.is_one():
                return p * v + t
            return p * d * v + t * d - p * d.derivative().left_shift(1)

        if d.is_one():
            return ZetaRat.make(v, part(self.re), part(self.im))
        return ZetaRat.make(v, part(self.re), part(self.im), d * d)

    # -- evaluation -------------------------------------------------------
    def at_unit(self, v: GQ) -> GQ:
        """Exact value at zeta = v, v a fourth root of unity."""
        v = as_gq(v)
        if (v.re, v.im) not in _UNITS:
            raise ValueError("exact specialization only at zeta in {1, -1, i, -i}")
        d = _poly_at(self.den, v)
        if not d:
            from .errors import PoleError

            raise PoleError(f"denominator vanishes at zeta = {v}")
        num = _poly_at(self.re, v) + GQ(0, 1) * _poly_at(self.im, v)
        return num * (v ** self.val) / d

    def evaluate(self, zeta: complex) -> complex:
        def ev(p):
            acc = 0j
            for c in reversed(p.coeffs()):
                acc = acc * zeta + float(c)
            return acc

        return (ev(self.re) + 1j * ev(self.im)) * zeta ** self.val / ev(self.den)

    def abs_bound(self, zeta: complex) -> float:
        return abs(self.evaluate(zeta))

    # -- inspection -------------------------------------------------------
    def num_terms(self) -> list[tuple[int, GQ]]:
        out = []
        n = max(self.re.length(), self.im.length())
        rc, ic = self.re.coeffs(), self.im.coeffs()
        for j in range(n):
            a = to_fraction(rc[j]) if j < len(rc) else Fraction(0)
            b = to_fraction(ic[j]) if j < len(ic) else Fraction(0)
            if a or b:
                out.append((self.val + j, GQ(a, b)))
        return out

    def den_terms(self) -> list[tuple[int, GQ]]:
        return [(j, GQ(to_fraction(c))) for j, c in enumerate(self.den.coeffs()) if c != 0]

    def zeta_degrees(self) -> tuple[int, int]:
        """(min, max) zeta exponents of the numerator (polynomial case)."""
        ts = self.num_terms()
        return ts[0][0], ts[-1][0]

    def __repr__(self):
        num = " + ".join(f"{c}*z^{e}" for e, c in self.num_terms()) or "0"
        if self.den.is_one():
            return f"ZetaRat({num})"
        den = " + ".join(f"{c}*z^{e}" for e, c in self.den_terms())
        return f"ZetaRat(({num}) / ({den}))"


def _pad_reverse(p: fmpq_poly, n: int) -> fmpq_poly:
    cs = p.coeffs()
    cs = cs + [0] * (n + 1 - len(cs))
    return fmpq_poly(list(reversed(cs)))


ZERO = ZetaRat(0, _ZERO, _ZERO, _ONE)
ONE = ZetaRat(0, _ONE, _ZERO, _ONE)
