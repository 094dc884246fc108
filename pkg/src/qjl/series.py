"""Truncated q-series whose coefficients are rational functions of zeta.

A :class:`QYSeries` represents ``(2 pi i)**weight * sum_n c_n(zeta) q**(q_offset + n)``
for ``0 <= n < trunc``; everything at or beyond ``q_offset + trunc`` is unknown.
Here ``q = exp(2 pi i tau)`` and ``zeta = exp(pi i z)`` (so ``y = zeta**2``).

Lattice shifts and torsion specializations move zeta-powers into q-powers, so
unknown tail terms can land inside the visible window.  To decide which
exponents survive such a substitution a series may carry a
:class:`SupportEnvelope`: a promise that the *untruncated* series only has
terms ``zeta**r q**E`` with ``E >= r**2 / (8 k) + floor`` (``k = 0`` meaning
``r = 0``).  Theta has ``k = 1, floor = 0`` by the triple product formula;
envelopes add under multiplication and take the max/min under addition.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .coeffs import GQ, ONE, ZERO, ZetaRat, as_gq, to_fraction
from .errors import (DomainError, NotUnitError, OffsetError, PoleError, PrecisionError,
                     ShiftError, SqrtError, WeightError)

__all__ = ["QYSeries", "QSeries", "SupportEnvelope"]


@dataclass(frozen=True)
class SupportEnvelope:
    """Terms zeta**r q**E satisfy E >= (r - center)**2 / (8 index) + floor.

    ``index == 0`` means r == center exactly.
    """

    index: int
    floor: Fraction
    center: Fraction = Fraction(0)

    def __add__(self, other: "SupportEnvelope") -> "SupportEnvelope":
        return SupportEnvelope(self.index + other.index, self.floor + other.floor,
                               self.center + other.center)

    def union(self, other: "SupportEnvelope") -> "SupportEnvelope | None":
        if self.center != other.center:
            return None
        return SupportEnvelope(max(self.index, other.index), min(self.floor, other.floor),
                               self.center)

    def allows(self, r: int, e: Fraction) -> bool:
        if self.index == 0:
            return r == self.center and e >= self.floor
        return e >= Fraction((r - self.center) ** 2, 8 * self.index) + self.floor

    def shifted(self, rate: Fraction) -> "SupportEnvelope":
        """Envelope after zeta**r q**E -> zeta**r q**(E + rate*r)."""
        k, c = self.index, self.center
        return SupportEnvelope(k, self.floor + rate * c - 2 * k * rate * rate, c - 4 * k * rate)


def _scalar(c) -> ZetaRat:
    return c if isinstance(c, ZetaRat) else ZetaRat.const(c)


class QYSeries:
    __slots__ = ("q_offset", "terms", "trunc", "weight", "envelope")

    def __init__(self, terms: Mapping[int, ZetaRat] | Iterable, q_offset=0, trunc: int = 12,
                 weight: int = 0, envelope: SupportEnvelope | None = None):
        if isinstance(terms, Mapping):
            items = terms.items()
        else:
            items = enumerate(terms)
        self.q_offset = to_fraction(q_offset)
        self.trunc = int(trunc)
        self.weight = int(weight)
        self.envelope = envelope
        clean = {}
        for n, c in items:
            if c is None:
                continue
            c = _scalar(c)
            if c.is_zero():
                continue
            if n < 0:
                raise ValueError("negative term index; lower q_offset instead")
            if n < self.trunc:
                clean[int(n)] = c
        self.terms = clean

    # -- constructors -----------------------------------------------------
    @classmethod
    def one(cls, trunc: int, weight: int = 0) -> "QYSeries":
        return cls({0: ONE}, 0, trunc, weight, SupportEnvelope(0, Fraction(0)))

    @classmethod
    def zero(cls, trunc: int, weight: int = 0, q_offset=0) -> "QYSeries":
        return cls({}, q_offset, trunc, weight)

    @classmethod
    def constant(cls, c, trunc: int, weight: int = 0) -> "QYSeries":
        c = _scalar(c)
        env = SupportEnvelope(0, Fraction(0)) if c.is_constant() else None
        return cls({0: c}, 0, trunc, weight, env)

    @classmethod
    def from_q_coefficients(cls, coeffs: Iterable, trunc: int, weight: int = 0,
                            q_offset=0) -> "QYSeries":
        """zeta-constant series from a list of scalars."""
        s = cls({n: ZetaRat.const(c) for n, c in enumerate(coeffs)}, q_offset, trunc, weight)
        s.envelope = SupportEnvelope(0, s.q_offset)
        return s

    def with_weight(self, weight: int) -> "QYSeries":
        return QYSeries(self.terms, self.q_offset, self.trunc, weight, self.envelope)

    def with_envelope(self, envelope: SupportEnvelope | None) -> "QYSeries":
        return QYSeries(self.terms, self.q_offset, self.trunc, self.weight, envelope)

    def with_trunc(self, trunc: int) -> "QYSeries":
        if trunc > self.trunc:
            raise PrecisionError("cannot raise the truncation of an existing series")
        return QYSeries(self.terms, self.q_offset, trunc, self.weight, self.envelope)

    # -- access -----------------------------------------------------------
    def __getitem__(self, n: int) -> ZetaRat:
        if not 0 <= n < self.trunc:
            raise PrecisionError(f"term {n} outside valid range [0, {self.trunc})")
        return self.terms.get(n, ZERO)

    @property
    def precision(self) -> Fraction:
        """Absolute q-exponent below which every coefficient is known."""
        return self.q_offset + self.trunc

    def coefficient_at(self, exponent) -> ZetaRat:
        n = to_fraction(exponent) - self.q_offset
        if n.denominator != 1:
            return ZERO
        return self[int(n)]

    def valuation(self) -> int:
        return min(self.terms) if self.terms else self.trunc

    def is_zero(self) -> bool:
        return not self.terms

    def is_polynomial(self) -> bool:
        return all(c.is_polynomial() for c in self.terms.values())

    def is_zeta_constant(self) -> bool:
        return all(c.is_constant() for c in self.terms.values())

    def normalized(self) -> "QYSeries":
        """Strip leading zero terms into the offset."""
        v = self.valuation()
        if v == 0 or v == self.trunc:
            return self
        return QYSeries({n - v: c for n, c in self.terms.items()}, self.q_offset + v,
                        self.trunc - v, self.weight, self.envelope)

    def __repr__(self):
        shown = ", ".join(f"q^({self.q_offset + n}): {c!r}" for n, c in
                          sorted(self.terms.items())[:3])
        return (f"QYSeries(weight={self.weight}, offset={self.q_offset}, trunc={self.trunc}, "
                f"[{shown}{', ...' if len(self.terms) > 3 else ''}])")

    # -- alignment --------------------------------------------------------
    def _aligned(self, other: "QYSeries"):
        d = self.q_offset - other.q_offset
        if d.denominator != 1:
            raise OffsetError(f"q offsets {self.q_offset} and {other.q_offset} differ by a non-integer")
        off = min(self.q_offset, other.q_offset)
        prec = min(self.precision, other.precision)
        trunc = int(prec - off)
        sa, sb = int(self.q_offset - off), int(other.q_offset - off)
        return off, trunc, sa, sb

    def __eq__(self, other):
        if not isinstance(other, QYSeries):
            return NotImplemented
        return (self.q_offset == other.q_offset and self.trunc == other.trunc
                and self.weight == other.weight and self.terms == other.terms)

    def __hash__(self):
        return hash((self.q_offset, self.trunc, self.weight, frozenset(self.terms.items())))

    def agrees(self, other: "QYSeries") -> bool:
        """Exact agreement on the common valid range (weights must match)."""
        return (self - other).is_zero()

    def first_difference(self, other: "QYSeries"):
        diff = self - other
        if diff.is_zero():
            return None
        n = min(diff.terms)
        return diff.q_offset + n, self.coefficient_at(diff.q_offset + n), \
            other.coefficient_at(diff.q_offset + n)

    # -- ring operations --------------------------------------------------
    def __neg__(self):
        return QYSeries({n: -c for n, c in self.terms.items()}, self.q_offset, self.trunc,
                        self.weight, self.envelope)

    def __add__(self, other):
        if not isinstance(other, QYSeries):
            other = QYSeries.constant(other, self.trunc + int(math.ceil(self.q_offset)),
                                      self.weight)
        if self.weight != other.weight:
            raise WeightError(f"cannot add weight {self.weight} to weight {other.weight}")
        off, trunc, sa, sb = self._aligned(other)
        out = {}
        for n, c in self.terms.items():
            if n + sa < trunc:
                out[n + sa] = c
        for n, c in other.terms.items():
            m = n + sb
            if m < trunc:
                out[m] = out[m] + c if m in out else c
        env = None
        if self.envelope is not None and other.envelope is not None:
            env = self.envelope.union(other.envelope)
        return QYSeries(out, off, trunc, self.weight, env)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, QYSeries):
            return self + (-_scalar(other))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "QYSeries":
        c = _scalar(c)
        env = self.envelope if c.is_constant() else None
        return QYSeries({n: t * c for n, t in self.terms.items()}, self.q_offset, self.trunc,
                        self.weight, env)

    def __mul__(self, other):
        if not isinstance(other, QYSeries):
            return self.scale(other)
        a, b = self.normalized(), other.normalized()
        off = a.q_offset + b.q_offset
        trunc = min(a.trunc, b.trunc)
        env = None
        if a.envelope is not None and b.envelope is not None:
            env = a.envelope + b.envelope
        out: dict[int, ZetaRat] = {}
        bt = b.terms
        for i, ca in a.terms.items():
            if i >= trunc:
                continue
            for j, cb in bt.items():
                n = i + j
                if n >= trunc:
                    continue
                p = ca * cb
                out[n] = out[n] + p if n in out else p
        return QYSeries(out, off, trunc, a.weight + b.weight, env)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "QYSeries":
        if k < 0:
            return self.invert() ** (-k)
        out = QYSeries.one(self.trunc + 1 + max(0, int(math.ceil(k * self.q_offset))), 0)
        base = self
        first = True
        while k:
            if k & 1:
                out = base if first else out * base
                first = False
            k >>= 1
            if k:
                base = base * base
        return out

    def shift_q(self, e) -> "QYSeries":
        """Multiply by q**e."""
        return QYSeries(self.terms, self.q_offset + to_fraction(e), self.trunc, self.weight,
                        None if self.envelope is None else
                        SupportEnvelope(self.envelope.index, self.envelope.floor + to_fraction(e),
                                        self.envelope.center))

    def times_binomial(self, c, zeta_power: int, q_power: int) -> "QYSeries":
        """Multiply by (1 + c * zeta**zeta_power * q**q_power), q_power >= 1."""
        mono = ZetaRat.monomial(zeta_power, c)
        out = dict(self.terms)
        for n, t in self.terms.items():
            m = n + q_power
            if m < self.trunc:
                p = t * mono
                out[m] = out[m] + p if m in out else p
        return QYSeries(out, self.q_offset, self.trunc, self.weight, self.envelope)

    def invert(self) -> "QYSeries":
        a = self.normalized()
        if 0 not in a.terms:
            raise NotUnitError("series has no nonzero leading term in its valid range")
        inv0 = a.terms[0].inverse()
        # divide out the leading coefficient first so that series like theta,
        # whose coefficients are all multiples of it, stay polynomial
        unit = {k: c * inv0 for k, c in a.terms.items() if k > 0}
        N = a.trunc
        b: list[ZetaRat] = [ONE] + [ZERO] * (N - 1)
        items = sorted(unit.items())
        for n in range(1, N):
            acc = ZERO
            for k, c in items:
                if k > n:
                    break
                if b[n - k]:
                    acc = acc + c * b[n - k]
            b[n] = -acc
        return QYSeries({n: c * inv0 for n, c in enumerate(b) if c}, -a.q_offset, N, -a.weight)

    def __truediv__(self, other):
        if isinstance(other, QYSeries):
            return self * other.invert()
        return self.scale(_scalar(other).inverse())

    def sqrt_unit(self) -> "QYSeries":
        a = self.normalized()
        if 0 not in a.terms:
            raise SqrtError("zero leading term")
        lead = a.terms[0]
        if not lead.is_polynomial() or len(lead.num_terms()) != 1:
            raise SqrtError("leading coefficient is not a monomial in zeta")
        (k, c), = lead.num_terms()
        root_c = c.sqrt()
        if k % 2 or a.weight % 2 or root_c is None:
            raise SqrtError("leading monomial has no exact square root")
        unit = a.scale(lead.inverse())
        N = a.trunc
        b = [ONE] + [ZERO] * (N - 1)
        for n in range(1, N):
            acc = unit[n]
            for j in range(1, n):
                if b[j] and b[n - j]:
                    acc = acc - b[j] * b[n - j]
            b[n] = acc.scale(Fraction(1, 2))
        root = QYSeries(dict(enumerate(b)), a.q_offset / 2, N, a.weight // 2)
        return root.scale(ZetaRat.monomial(k // 2, root_c))

    def q_derivative(self) -> "QYSeries":
        """q d/dq on the stored series (weight tag +2)."""
        return QYSeries({n: c.scale(self.q_offset + n) for n, c in self.terms.items()},
                        self.q_offset, self.trunc, self.weight + 2, self.envelope)

    def zeta_derivative(self) -> "QYSeries":
        """zeta d/dzeta (no weight change; y d/dy is half of this)."""
        return QYSeries({n: c.zeta_derivative() for n, c in self.terms.items()},
                        self.q_offset, self.trunc, self.weight, self.envelope)

    def y_derivative(self) -> "QYSeries":
        """y d/dy, the normalized z-derivative (weight tag +1)."""
        d = self.zeta_derivative().scale(Fraction(1, 2))
        return d.with_weight(self.weight + 1)

    def exp(self) -> "QYSeries":
        if self.weight != 0:
            raise DomainError("exp needs a weight-0 series")
        a = self
        if a.q_offset.denominator != 1 or a.q_offset < 0 or (a.q_offset == 0 and 0 in a.terms):
            raise DomainError("exp needs strictly positive integral q-order")
        a = QYSeries({n + int(a.q_offset): c for n, c in a.terms.items()}, 0,
                     a.trunc + int(a.q_offset), 0)
        N = a.trunc
        b = [ONE] + [ZERO] * (N - 1)
        da = {k: c.scale(k) for k, c in a.terms.items()}
        for n in range(1, N):
            acc = ZERO
            for k, c in da.items():
                if k <= n and b[n - k]:
                    acc = acc + c * b[n - k]
            b[n] = acc.scale(Fraction(1, n))
        return QYSeries(dict(enumerate(b)), 0, N, 0)

    def log(self) -> "QYSeries":
        if self.weight != 0 or self.q_offset != 0 or self.terms.get(0) != ONE:
            raise DomainError("log needs a weight-0 series with constant term 1")
        N = self.trunc
        out = [ZERO] * N
        # n L_n = n a_n - sum_{k<n} k L_k a_{n-k}
        for n in range(1, N):
            acc = self[n].scale(n)
            for k in range(1, n):
                if out[k] and (n - k) in self.terms:
                    acc = acc - out[k].scale(k) * self.terms[n - k]
            out[n] = acc.scale(Fraction(1, n))
        return QYSeries(dict(enumerate(out)), 0, N, 0)

    # -- substitutions ----------------------------------------------------
    def subs_zeta_power(self, k: int) -> "QYSeries":
        """zeta -> zeta**k."""
        env = None
        if self.envelope is not None:
            e = self.envelope
            env = SupportEnvelope(e.index * k * k, e.floor, e.center * k)
        return QYSeries({n: c.subs_power(k) for n, c in self.terms.items()}, self.q_offset,
                        self.trunc, self.weight, env)

    def conj_zeta(self) -> "QYSeries":
        return self.subs_zeta_power(-1)

    def _monomial_substitution(self, rate: Fraction, envelope: SupportEnvelope | None,
                               phase=None):
        """Map zeta**r q**E -> phase(r) * zeta**r q**(E + rate*r) (zeta kept).

        Returns (mapped terms as {exponent: {r: coeff}}, determinacy predicate).
        """
        if not self.is_polynomial():
            raise ShiftError("zeta-shift needs polynomial coefficients")
        env = envelope or self.envelope
        if env is None:
            if not self.is_zeta_constant():
                raise ShiftError("no support envelope known for this series; pass one")
            env = SupportEnvelope(0, min(self.q_offset, Fraction(0)))
        bound = _determinacy_bound(self.precision, rate, env)
        mapped: dict[Fraction, list] = {}
        for n, c in self.terms.items():
            e = self.q_offset + n
            for r, coef in c.num_terms():
                if not env.allows(r, e):
                    raise ShiftError(f"stored term zeta^{r} q^{e} violates the support envelope")
                if phase is not None:
                    coef = coef * phase(r)
                mapped.setdefault(e + rate * r, []).append((r, coef))
        return mapped, bound

    def substitute_y_qshift(self, m: int, envelope: SupportEnvelope | None = None) -> "QYSeries":
        """z -> z + m*tau, i.e. zeta -> zeta * q**(m/2), on the determined range."""
        if m == 0:
            return self
        rate = Fraction(m, 2)
        mapped, determined = self._monomial_substitution(rate, envelope)
        exps = sorted(mapped)
        base = exps[0] if exps else self.q_offset
        for e in exps:
            if (e - base).denominator != 1:
                raise ShiftError("zeta-parity mixes q-cosets under this shift")
        trunc = 0
        while determined(base + trunc):
            trunc += 1
        if trunc == 0:
            raise PrecisionError("shift leaves no determined terms; raise the truncation")
        out = {}
        for e in exps:
            n = int(e - base)
            if n < trunc:
                out[n] = ZetaRat.laurent(mapped[e])
        env = envelope or self.envelope or SupportEnvelope(0, min(self.q_offset, Fraction(0)))
        return QYSeries(out, base, trunc, self.weight, env.shifted(rate))

    def specialize_zeta(self, v) -> "QSeries":
        v = as_gq(v)
        terms = {}
        for n, c in self.terms.items():
            val = c.at_unit(v)
            if val:
                terms[self.q_offset + n] = val
        return QSeries(terms, self.precision, self.weight)

    def specialize_torsion(self, alpha: int, beta: int,
                           envelope: SupportEnvelope | None = None) -> "QSeries":
        """z = (alpha tau + beta)/2, i.e. zeta -> i**beta * q**(alpha/4)."""
        if alpha == 0:
            return self.specialize_zeta(GQ(0, 1) ** beta)
        rate = Fraction(alpha, 4)
        phase = lambda r: GQ(0, 1) ** (beta * r)  # noqa: E731
        mapped, determined = self._monomial_substitution(rate, envelope, phase)
        terms = {}
        prec = None
        for e in sorted(mapped):
            if not determined(e):
                prec = e
                break
            total = sum((c for _, c in mapped[e]), GQ(0))
            if total:
                terms[e] = total
        if prec is None:
            prec = _first_undetermined(determined, sorted(mapped)[-1] if mapped else Fraction(0))
        return QSeries(terms, prec, self.weight)

    # -- numerics ---------------------------------------------------------
    def eval_complex(self, tau: complex, z: complex) -> tuple[complex, float]:
        """Numerically sum the stored value at (tau, z) with a geometric tail estimate."""
        if tau.imag <= 0:
            raise DomainError("Im tau must be positive")
        q = cmath.exp(2j * math.pi * tau)
        zeta = cmath.exp(1j * math.pi * z)
        aq = abs(q)
        total = 0j
        mags = {}
        for n, c in self.terms.items():
            t = c.evaluate(zeta) * cmath.exp(2j * math.pi * tau * float(self.q_offset + n))
            total += t
            mags[n] = abs(t)
        if not mags:
            return total, 0.0
        N = self.trunc
        # coefficient growth from the upper half of the stored window
        tail_idx = [n for n in mags if n >= N // 2] or list(mags)
        if aq >= 1:
            return total, math.inf
        lead = max(mags[n] * aq ** (N - n) for n in tail_idx)
        return total, lead / (1 - aq) * N

    # -- serialization ----------------------------------------------------
    def to_json(self) -> dict:
        def fmt(terms):
            return [[e, _ratstr(c.re), _ratstr(c.im)] for e, c in terms]

        out = {
            "weight": self.weight,
            "q_offset": _ratstr(self.q_offset),
            "trunc": self.trunc,
            "terms": [{"n": n, "coeff": {"num": fmt(c.num_terms()), "den": fmt(c.den_terms())}}
                      for n, c in sorted(self.terms.items())],
        }
        if self.envelope is not None:
            f = self.envelope.floor
            out["envelope"] = {"index": self.envelope.index,
                               "floor": _ratstr(f), "center": _ratstr(self.envelope.center)}
        return out

    @classmethod
    def from_json(cls, data: dict) -> "QYSeries":
        def coeff(block):
            num = ZetaRat.laurent((e, GQ(Fraction(a), Fraction(b))) for e, a, b in block["num"])
            den = ZetaRat.laurent((e, GQ(Fraction(a), Fraction(b))) for e, a, b in block["den"])
            return num / den

        env = None
        if "envelope" in data:
            e = data["envelope"]
            env = SupportEnvelope(int(e["index"]), Fraction(e["floor"]), Fraction(e.get("center", "0")))
        return cls({t["n"]: coeff(t["coeff"]) for t in data["terms"]}, Fraction(data["q_offset"]),
                   data["trunc"], data["weight"], env)


def _ratstr(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def _determinacy_bound(precision: Fraction, rate: Fraction, env: SupportEnvelope):
    """Predicate: is the substituted exponent x free of unknown tail contributions?

    Tail terms have E >= precision and E >= r^2/(8k) + floor; they land at
    E + rate*r.  x is determined iff x < min over the tail of that quantity.
    """
    if env.center:
        inner = _determinacy_bound(precision, rate, SupportEnvelope(env.index, env.floor))
        shift = rate * env.center
        return lambda x: inner(x - shift)
    s = abs(rate)
    k = env.index
    T = precision
    if k == 0:
        return lambda x: x < T
    span = 8 * k * (T - env.floor)  # R0**2
    if span < 0:
        span = Fraction(0)
    # interior minimum e0 - 2 k s^2 applies when 4 k s > R0
    if (4 * k * s) ** 2 > span:
        lim = env.floor - 2 * k * s * s
        return lambda x: x < lim

    def determined(x):
        # x < T - s*R0  <=>  s*R0 < T - x
        rhs = T - x
        return rhs > 0 and s * s * span < rhs * rhs

    return determined


def _first_undetermined(determined, start: Fraction) -> Fraction:
    x = start
    step = Fraction(1, 8)
    while determined(x):
        x += step
    return x


class QSeries:
    """q-series over Q(i) with arbitrary rational exponents, known below ``precision``."""

    __slots__ = ("terms", "precision", "weight")

    def __init__(self, terms: Mapping, precision, weight: int = 0):
        self.precision = to_fraction(precision)
        self.weight = weight
        self.terms = {to_fraction(e): as_gq(c) for e, c in terms.items()
                      if as_gq(c) and to_fraction(e) < self.precision}

    def __getitem__(self, e) -> GQ:
        e = to_fraction(e)
        if e >= self.precision:
            raise PrecisionError(f"exponent {e} beyond precision {self.precision}")
        return self.terms.get(e, GQ(0))

    def __repr__(self):
        body = " + ".join(f"({c})q^{e}" for e, c in sorted(self.terms.items())[:6])
        return f"QSeries({body} + O(q^{self.precision}))"

    def __add__(self, other: "QSeries") -> "QSeries":
        prec = min(self.precision, other.precision)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, GQ(0)) + c
        return QSeries(out, prec, self.weight)

    def __neg__(self):
        return QSeries({e: -c for e, c in self.terms.items()}, self.precision, self.weight)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "QSeries":
        c = as_gq(c)
        return QSeries({e: v * c for e, v in self.terms.items()}, self.precision, self.weight)

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return self.scale(other)
        lo_a = min(self.terms, default=self.precision)
        lo_b = min(other.terms, default=other.precision)
        prec = min(self.precision + lo_b, other.precision + lo_a)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                if e < prec:
                    out[e] = out.get(e, GQ(0)) + c1 * c2
        return QSeries(out, prec, self.weight + other.weight)

    def agrees(self, other: "QSeries", upto=None) -> bool:
        prec = min(self.precision, other.precision)
        if upto is not None:
            prec = min(prec, to_fraction(upto))
        keys = {e for e in list(self.terms) + list(other.terms) if e < prec}
        return all(self.terms.get(e, GQ(0)) == other.terms.get(e, GQ(0)) for e in keys)

    def first_difference(self, other: "QSeries"):
        prec = min(self.precision, other.precision)
        for e in sorted({e for e in list(self.terms) + list(other.terms) if e < prec}):
            a, b = self.terms.get(e, GQ(0)), other.terms.get(e, GQ(0))
            if a != b:
                return e, a, b
        return None

    def is_rational(self) -> bool:
        return all(c.im == 0 for c in self.terms.values())

    def evaluate(self, tau: complex) -> complex:
        return sum(complex(c) * cmath.exp(2j * math.pi * tau * float(e))
                   for e, c in self.terms.items())
