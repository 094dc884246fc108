"""Power series in a nilpotent variable x with QYSeries coefficients.

The coefficient of ``x**j`` carries weight tag ``base_weight + j``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import DomainError, PrecisionError
from .series import QYSeries

__all__ = ["XSeries"]


class XSeries:
    __slots__ = ("coeffs", "base_weight", "trunc")

    def __init__(self, coeffs: Sequence[QYSeries | None], base_weight: int, trunc: int):
        self.base_weight = base_weight
        self.trunc = trunc
        out = []
        for j, c in enumerate(coeffs):
            w = base_weight + j
            if c is None:
                c = QYSeries.zero(trunc, w)
            elif c.weight != w:
                raise DomainError(f"x^{j} coefficient has weight {c.weight}, expected {w}")
            out.append(c)
        self.coeffs = out

    @property
    def nx(self) -> int:
        """Highest stored x-degree."""
        return len(self.coeffs) - 1

    def __getitem__(self, j: int) -> QYSeries:
        if j > self.nx:
            raise PrecisionError(f"x-degree {j} beyond truncation {self.nx}")
        return self.coeffs[j]

    def __repr__(self):
        return f"XSeries(nx={self.nx}, base_weight={self.base_weight}, trunc={self.trunc})"

    def _zero(self, j, base=None):
        return QYSeries.zero(self.trunc, (self.base_weight if base is None else base) + j)

    def __add__(self, other: "XSeries") -> "XSeries":
        n = min(self.nx, other.nx)
        return XSeries([self.coeffs[j] + other.coeffs[j] for j in range(n + 1)],
                       self.base_weight, min(self.trunc, other.trunc))

    def __neg__(self):
        return XSeries([-c for c in self.coeffs], self.base_weight, self.trunc)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "XSeries":
        return XSeries([a.scale(c) for a in self.coeffs], self.base_weight, self.trunc)

    def times(self, s: QYSeries) -> "XSeries":
        """Multiply every coefficient by the x-free series s."""
        return XSeries([a * s for a in self.coeffs], self.base_weight + s.weight,
                       min(self.trunc, s.trunc))

    def __mul__(self, other: "XSeries") -> "XSeries":
        n = min(self.nx, other.nx)
        base = self.base_weight + other.base_weight
        trunc = min(self.trunc, other.trunc)
        out = []
        for k in range(n + 1):
            acc = None
            for i in range(k + 1):
                a, b = self.coeffs[i], other.coeffs[k - i]
                if a.is_zero() or b.is_zero():
                    continue
                p = a * b
                acc = p if acc is None else acc + p
            out.append(acc if acc is not None else QYSeries.zero(trunc, base + k))
        return XSeries(out, base, trunc)

    def inverse(self) -> "XSeries":
        a0inv = self.coeffs[0].invert()
        n = self.nx
        out = [a0inv]
        for k in range(1, n + 1):
            acc = None
            for i in range(1, k + 1):
                if self.coeffs[i].is_zero() or out[k - i].is_zero():
                    continue
                p = self.coeffs[i] * out[k - i]
                acc = p if acc is None else acc + p
            out.append(-(acc * a0inv) if acc is not None else
                       QYSeries.zero(self.trunc, -self.base_weight + k))
        return XSeries(out, -self.base_weight, a0inv.trunc)

    def log(self) -> "XSeries":
        """log of a series with constant coefficient 1 (result has zero constant term)."""
        if self.base_weight != 0 or not (self.coeffs[0] - QYSeries.one(self.trunc)).is_zero():
            raise DomainError("log needs constant coefficient 1")
        n = self.nx
        # k L_k = k a_k - sum_{j<k} j L_j a_{k-j}
        L: list[QYSeries] = [QYSeries.zero(self.trunc, 0)]
        for k in range(1, n + 1):
            acc = self.coeffs[k].scale(k)
            for j in range(1, k):
                if L[j].is_zero() or self.coeffs[k - j].is_zero():
                    continue
                acc = acc - (L[j] * self.coeffs[k - j]).scale(j)
            L.append(acc.scale(Fraction(1, k)))
        return XSeries(L, 0, self.trunc)

    def exp(self) -> "XSeries":
        """exp of a series with zero constant term."""
        if self.base_weight != 0 or not self.coeffs[0].is_zero():
            raise DomainError("exp needs zero constant coefficient")
        n = self.nx
        E: list[QYSeries] = [QYSeries.one(self.trunc)]
        # k E_k = sum_{j=1..k} j a_j E_{k-j}
        for k in range(1, n + 1):
            acc = None
            for j in range(1, k + 1):
                if self.coeffs[j].is_zero() or E[k - j].is_zero():
                    continue
                p = (self.coeffs[j] * E[k - j]).scale(j)
                acc = p if acc is None else acc + p
            E.append(acc.scale(Fraction(1, k)) if acc is not None else
                     QYSeries.zero(self.trunc, k))
        return XSeries(E, 0, self.trunc)

    def subs_zeta_power(self, k: int) -> "XSeries":
        return XSeries([c.subs_zeta_power(k) for c in self.coeffs], self.base_weight, self.trunc)

    def substitute_scaled(self, lam) -> "XSeries":
        """x -> lam * x for a rational lam."""
        lam = Fraction(lam)
        return XSeries([c.scale(lam ** j) for j, c in enumerate(self.coeffs)], self.base_weight,
                       self.trunc)
