from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qjl.coeffs import GQ, ZetaRat
from qjl.errors import DomainError
from qjl.series import QYSeries
from qjl.theta import (bernoulli, ebar, ebar_q, g_k, phi, theta, theta_at_one, theta_prime0,
                       theta_zeta_derivative)

N = 16


def divisor_sigma(k, n):
    return sum(d ** k for d in range(1, n + 1) if n % d == 0)


def theta_from_sum(N):
    """-i sum_n (-1)^n q^((n+1/2)^2/2) zeta^(2n+1), grouped by n >= 0."""
    terms = {}
    n = 0
    while n * (n + 1) // 2 < N:
        s = -1 if n % 2 else 1
        terms[n * (n + 1) // 2] = ZetaRat.laurent([(2 * n + 1, GQ(0, -s)), (-2 * n - 1, GQ(0, s))])
        n += 1
    return QYSeries(terms, Fraction(1, 8), N)


def test_bernoulli_table():
    table = {0: 1, 1: Fraction(-1, 2), 2: Fraction(1, 6), 4: Fraction(-1, 30), 6: Fraction(1, 42),
             8: Fraction(-1, 30), 10: Fraction(5, 66), 12: Fraction(-691, 2730), 3: 0, 5: 0}
    for n, v in table.items():
        assert bernoulli(n) == v


def test_theta_product_equals_triple_product_sum():
    assert theta(N).agrees(theta_from_sum(N))


def test_theta_is_odd():
    th = theta(N)
    assert th.conj_zeta().agrees(-th)


def test_theta_prime_is_eta_cubed():
    # -i q^(1/8) prod (1 - q^l)^3
    coeffs = [0] * N
    coeffs[0] = 1
    for l in range(1, N):
        for _ in range(3):
            coeffs = [coeffs[n] - (coeffs[n - l] if n >= l else 0) for n in range(N)]
    expected = QYSeries.from_q_coefficients([GQ(0, -c) for c in coeffs], N, 1, Fraction(1, 8))
    assert theta_prime0(N).agrees(expected)


def test_theta_at_one_matches_derivative_of_product():
    for j in range(4):
        direct = theta_zeta_derivative(j, N).specialize_zeta(GQ(1))
        fast = theta_at_one(j, N).specialize_zeta(GQ(1))
        assert direct.agrees(fast)


def test_eisenstein_coefficients():
    e4 = ebar_q(4, N)
    assert e4[0].constant_value() == GQ(2 * Fraction(1, 240) / 6)
    for n in range(1, N):
        assert g_k(4, N)[n].constant_value() == GQ(divisor_sigma(3, n))
    assert ebar_q(3, N).is_zero()


def test_phi_constant_term():
    # q^0 part of the theta quotient at x^1 is 1/2 (1+y)/(y-1) = Ebar_1 at q^0
    y = ZetaRat.monomial(2)
    expected = (1 + y) / (y - 1) * ZetaRat.const(Fraction(1, 2))
    assert phi(4, N)[1][0] == expected
    assert phi(4, N)[0].agrees(QYSeries.one(N))


def test_ebar1_closed_form():
    terms = {0: (1 + ZetaRat.monomial(2)) / (ZetaRat.monomial(2) - 1) * ZetaRat.const(Fraction(1, 2))}
    for n in range(1, N):
        terms[n] = ZetaRat.laurent([(e, c) for d in range(1, n + 1) if n % d == 0
                                    for e, c in ((-2 * d, 1), (2 * d, -1))])
    assert ebar(1, N).agrees(QYSeries(terms, 0, N, 1))


def test_weierstrass_closed_form():
    # P = Ebar_2 - ebar_2 = 1/12 + y/(1-y)^2 + sum_n sum_{d|n} d (y^d - 2 + y^-d) q^n
    y = ZetaRat.monomial(2)
    terms = {0: ZetaRat.const(Fraction(1, 12)) + y / ((1 - y) * (1 - y))}
    for n in range(1, N):
        terms[n] = ZetaRat.laurent([(e, c) for d in range(1, n + 1) if n % d == 0
                                    for e, c in ((2 * d, d), (0, -2 * d), (-2 * d, d))])
    assert (ebar(2, N) - ebar_q(2, N)).agrees(QYSeries(terms, 0, N, 2))


@given(st.integers(1, 5))
def test_ebar_derivative_recursion(n):
    lhs = ebar(n + 1, 10)
    rhs = ebar(n, 10).y_derivative().scale(Fraction(-1, n))
    assert lhs.agrees(rhs)


def test_ebar_parity():
    for n in range(1, 6):
        s = ebar(n, 10)
        assert s.conj_zeta().agrees(s.scale((-1) ** n))


def test_domain_errors():
    with pytest.raises(DomainError):
        theta(0)
    with pytest.raises(DomainError):
        ebar(0, 5)
