"""Theta function, Eisenstein series and the theta quotient generating the E_n.

Everything is 2 pi i normalized: a series tagged with weight w stands for
``(2 pi i)**w`` times its stored value.  The z-derivative ``d/dz`` becomes
``(2 pi i) * y d/dy = (2 pi i) * (1/2) zeta d/dzeta``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .coeffs import GQ, ONE, ZetaRat
from .errors import DomainError
from .series import QYSeries, SupportEnvelope
from .xseries import XSeries

__all__ = [
    "bernoulli", "g_k", "ebar_q", "theta", "theta_prime0", "theta_zeta_derivative",
    "theta_at_one", "theta_inverse", "theta_log_derivative", "phi", "ebar",
]

_MINUS_I = GQ(0, -1)


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """B_n with B_1 = -1/2."""
    if n < 0:
        raise DomainError("negative index")
    if n == 0:
        return Fraction(1)
    acc = sum((comb(n + 1, j) * bernoulli(j) for j in range(n)), Fraction(0))
    return -acc / (n + 1)


def _sigma(k: int, n: int) -> int:
    return sum(d ** k for d in range(1, n + 1) if n % d == 0)


@lru_cache(maxsize=None)
def g_k(k: int, N: int) -> QYSeries:
    """G_k = -B_k/(2k) + sum sigma_{k-1}(l) q^l, tagged with weight k."""
    if k < 2 or k % 2:
        raise DomainError("G_k needs even k >= 2")
    coeffs = [-bernoulli(k) / (2 * k)] + [Fraction(_sigma(k - 1, l)) for l in range(1, N)]
    return QYSeries.from_q_coefficients(coeffs, N, k)


@lru_cache(maxsize=None)
def ebar_q(k: int, N: int) -> QYSeries:
    """Quasi-modular e_k = 2 G_k/(k-1)!; zero for odd k."""
    if k < 1:
        raise DomainError("k must be positive")
    if k % 2:
        return QYSeries.zero(N, k).with_envelope(SupportEnvelope(0, Fraction(0)))
    return g_k(k, N).scale(Fraction(2, factorial(k - 1)))


@lru_cache(maxsize=None)
def theta(N: int) -> QYSeries:
    """q^(1/8) (-i)(zeta - 1/zeta) prod_{l<N} (1-q^l)(1-q^l zeta^2)(1-q^l zeta^-2)."""
    if N < 1:
        raise DomainError("N must be at least 1")
    lead = ZetaRat.laurent([(1, _MINUS_I), (-1, GQ(0, 1))])
    s = QYSeries({0: lead}, Fraction(1, 8), N, 0)
    for l in range(1, N):
        s = s.times_binomial(-1, 0, l)
        s = s.times_binomial(-1, 2, l)
        s = s.times_binomial(-1, -2, l)
    return s.with_envelope(SupportEnvelope(1, Fraction(0)))


@lru_cache(maxsize=None)
def theta_zeta_derivative(j: int, N: int) -> QYSeries:
    """((1/2) zeta d/dzeta)^j theta, tagged weight j."""
    if j == 0:
        return theta(N)
    return theta_zeta_derivative(j - 1, N).y_derivative()


@lru_cache(maxsize=None)
def theta_at_one(j: int, N: int) -> QYSeries:
    """((1/2) zeta d/dzeta)^j theta at zeta = 1, from the triple-product sum."""
    coeffs = [GQ(0)] * N
    if j % 2:
        n = 0
        while n * (n + 1) // 2 < N:
            c = Fraction(2 * (-1) ** n * (2 * n + 1) ** j, 2 ** j)
            coeffs[n * (n + 1) // 2] = _MINUS_I * c
            n += 1
    return QYSeries.from_q_coefficients(coeffs, N, j, Fraction(1, 8))


def theta_prime0(N: int) -> QYSeries:
    """Normalized theta'(0): -i q^(1/8) prod (1-q^l)^3, weight 1."""
    return theta_at_one(1, N)


@lru_cache(maxsize=None)
def theta_inverse(N: int) -> QYSeries:
    return theta(N).invert()


@lru_cache(maxsize=None)
def theta_log_derivative(j: int, N: int) -> QYSeries:
    """((1/2) zeta d/dzeta)^j theta / theta, weight j."""
    if j == 0:
        return QYSeries.one(N)
    return theta_zeta_derivative(j, N) * theta_inverse(N)


@lru_cache(maxsize=None)
def phi(nx: int, N: int) -> XSeries:
    """x theta(x/(2 pi i) + z) theta'(0) / (theta(x/(2 pi i)) theta(z)) in powers of x.

    The numerator shift is zeta -> zeta e^(x/2), a Taylor series in the
    zeta-derivatives of theta; the x/theta(x/(2 pi i)) factor comes from the
    derivatives of theta at zeta = 1.
    """
    if nx < 1:
        raise DomainError("nx must be at least 1")
    A = XSeries([theta_log_derivative(j, N).scale(Fraction(1, factorial(j)))
                 for j in range(nx + 1)], 0, N)
    S = XSeries([theta_at_one(j + 1, N).scale(Fraction(1, factorial(j + 1)))
                 for j in range(nx + 1)], 1, N)
    C = S.inverse().times(theta_prime0(N))
    return A * C


@lru_cache(maxsize=None)
def _log_phi(nx: int, N: int) -> XSeries:
    return phi(nx, N).log()


@lru_cache(maxsize=None)
def ebar(n: int, N: int) -> QYSeries:
    """Normalized two-variable Eisenstein series E_n/(2 pi i)^n, weight n."""
    if n < 1:
        raise DomainError("n must be at least 1")
    nx = max(n, 4)
    if n == 1:
        return phi(nx, N)[1]
    L = _log_phi(nx, N)[n]
    sign = 1 if n % 2 else -1
    return ebar_q(n, N) + L.scale(sign * n)
