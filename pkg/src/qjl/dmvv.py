"""Fourier coefficient tables of elliptic genera and the symmetric-product generating series."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

from .coeffs import GQ, ZetaRat
from .errors import NormalizationError, RangeError
from .series import QYSeries

__all__ = ["DmvvTable", "TripleSeries", "extract_cml", "borcherds_product", "sym_product_genus"]


def _plain(v: GQ):
    return v.re if v.im == 0 else v


def _fmt(v) -> str:
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return str(v)


@dataclass
class DmvvTable:
    """c(m, l): coefficient of q^m y^l of zeta^normalizer * s."""

    c: dict
    normalizer: int
    max_m: int

    def get(self, m: int, l: int):
        if m > self.max_m:
            raise RangeError(f"table only reaches q^{self.max_m}, needed q^{m}")
        return self.c.get((m, l), Fraction(0))

    def layer(self, m: int) -> dict:
        if m > self.max_m:
            raise RangeError(f"table only reaches q^{self.max_m}, needed q^{m}")
        return {l: v for (mm, l), v in self.c.items() if mm == m}

    def to_series(self) -> QYSeries:
        """Rebuild sum c(m,l) y^l q^m zeta^-normalizer."""
        terms = {}
        for m in range(self.max_m + 1):
            lay = self.layer(m)
            if lay:
                terms[m] = ZetaRat.laurent((2 * l - self.normalizer, v) for l, v in lay.items())
        return QYSeries(terms, 0, self.max_m + 1, 0)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "l", "value"])
        for (m, l), v in sorted(self.c.items()):
            w.writerow([m, l, _fmt(v)])
        return buf.getvalue()


def extract_cml(s: QYSeries) -> DmvvTable:
    """Read off c(m, l) from a polynomial-coefficient series with integral q-exponents."""
    if s.q_offset.denominator != 1:
        raise NormalizationError("q-exponents must be integers")
    if not s.is_polynomial():
        raise NormalizationError("coefficients must be Laurent polynomials in zeta")
    parities = {k % 2 for c in s.terms.values() for k, _ in c.num_terms()}
    if len(parities) > 1:
        raise NormalizationError("series mixes even and odd zeta-degrees")
    normalizer = parities.pop() if parities else 0
    table: dict = {}
    off = int(s.q_offset)
    if off < 0:
        raise NormalizationError("negative q-exponents are not supported")
    for n, c in s.terms.items():
        for k, v in c.num_terms():
            k += normalizer
            if k % 2:
                raise NormalizationError("odd zeta-degree after normalization")
            table[(off + n, k // 2)] = _plain(v)
    return DmvvTable(table, normalizer, off + s.trunc - 1)


@dataclass
class TripleSeries:
    """Coefficients layers[n][(m, l)] of p^n q^m y^l, for n <= P, m <= M, |l| <= L."""

    layers: list
    P: int
    M: int
    L: int

    def layer(self, n: int) -> dict:
        if n > self.P:
            raise RangeError(f"series only known to p^{self.P}")
        return self.layers[n]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p", "m", "l", "value"])
        for n, lay in enumerate(self.layers):
            for (m, l), v in sorted(lay.items()):
                w.writerow([n, m, l, _fmt(v)])
        return buf.getvalue()


def _poly_mul(a: dict, b: dict, M: int) -> dict:
    out: dict = {}
    for (m1, l1), v1 in a.items():
        for (m2, l2), v2 in b.items():
            m = m1 + m2
            if m > M:
                continue
            key = (m, l1 + l2)
            out[key] = out.get(key, 0) + v1 * v2
    return {k: v for k, v in out.items() if v}


def borcherds_product(t: DmvvTable, P: int, M: int, L: int) -> TripleSeries:
    """prod_{i>=1, m>=0, l} (1 - p^i y^l q^m)^(-c(m i, l)), truncated.

    Expanded as exp(sum_{i,m,l} c(mi,l) sum_r p^(ir) y^(lr) q^(mr) / r).
    """
    if M * max(P, 1) > t.max_m:
        raise RangeError(f"need c(m, l) up to m = {M * P}, table reaches {t.max_m}")
    # G[k] = coefficient of p^k in the logarithm
    G = [dict() for _ in range(P + 1)]
    for i in range(1, P + 1):
        for r in range(1, P // i + 1):
            k = i * r
            for m in range(0, M // r + 1):
                for l, v in t.layer(m * i).items():
                    key = (m * r, l * r)
                    G[k][key] = G[k].get(key, 0) + Fraction(1, r) * v
    F = [{(0, 0): Fraction(1)}]
    for n in range(1, P + 1):
        acc: dict = {}
        for k in range(1, n + 1):
            if not G[k] or not F[n - k]:
                continue
            for key, v in _poly_mul(G[k], F[n - k], M).items():
                acc[key] = acc.get(key, 0) + k * v
        F.append({key: v / n for key, v in acc.items() if v})
    layers = [{key: v for key, v in lay.items() if abs(key[1]) <= L} for lay in F]
    return TripleSeries(layers, P, M, L)


def sym_product_genus(t: DmvvTable, n: int, M: int, L: int) -> dict:
    """p^n layer of the product: predicted orbifold elliptic genus of Sym^n."""
    return borcherds_product(t, n, M, L).layer(n)

