from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qjl.coeffs import GQ, ONE, ZetaRat
from qjl.errors import NotUnitError, OffsetError, PrecisionError, SqrtError
from qjl.series import QSeries, QYSeries, SupportEnvelope
from qjl.theta import theta

from conftest import positive_series, qy_series


@given(qy_series(), qy_series(), qy_series())
def test_ring_axioms(a, b, c):
    assert ((a + b) + c).agrees(a + (b + c))
    assert (a * (b + c)).agrees(a * b + a * c)
    assert (a * b).agrees(b * a)
    assert ((a * b) * c).agrees(a * (b * c))


@given(qy_series(unit=True))
def test_invert_round_trip(a):
    assert (a * a.invert()).agrees(QYSeries.one(a.trunc))


@given(qy_series(unit=True))
def test_sqrt_round_trip(a):
    r = a.sqrt_unit()
    assert (r * r).agrees(a)


@given(positive_series())
def test_exp_log_round_trip(a):
    assert a.exp().log().agrees(a)
    assert (a + a).exp().agrees(a.exp() * a.exp())


@given(qy_series(unit=True), qy_series(unit=True))
def test_log_is_additive(a, b):
    assert (a * b).log().agrees(a.log() + b.log())


@given(qy_series(), qy_series())
def test_derivations(a, b):
    for d in (QYSeries.q_derivative, QYSeries.y_derivative):
        assert d(a * b).agrees(d(a) * b + a * d(b))


@given(qy_series(), st.integers(-3, 3))
def test_json_round_trip(a, w):
    s = a.with_weight(w).shift_q(Fraction(1, 8))
    data = json.loads(json.dumps(s.to_json()))
    back = QYSeries.from_json(data)
    assert back == s
    assert back.to_json() == s.to_json()


def test_json_keeps_envelope():
    th = theta(6)
    back = QYSeries.from_json(json.loads(json.dumps(th.to_json())))
    assert back == th and back.envelope == th.envelope


def test_truncation_is_min():
    a = QYSeries.one(5)
    b = QYSeries.one(8)
    assert (a + b).trunc == 5
    assert (a * b).trunc == 5


def test_offset_mismatch():
    a = QYSeries.one(5)
    b = QYSeries.one(5).shift_q(Fraction(1, 3))
    with pytest.raises(OffsetError):
        a + b


def test_not_unit():
    with pytest.raises(NotUnitError):
        QYSeries.zero(5).invert()


def test_sqrt_requires_square_leading():
    with pytest.raises(SqrtError):
        QYSeries.constant(2, 5).sqrt_unit()


def test_raising_truncation_is_an_error():
    with pytest.raises(PrecisionError):
        QYSeries.one(4).with_trunc(6)


def test_envelope_rules():
    e = SupportEnvelope(1, Fraction(0))
    assert e.allows(1, Fraction(1, 8))
    assert not e.allows(3, Fraction(1, 8))
    assert (e + e) == SupportEnvelope(2, Fraction(0))
    # shifting theta's support by one lattice period
    assert e.shifted(1) == SupportEnvelope(1, Fraction(0) + 0 - 2, -4)


def test_y_shift_composes():
    th = theta(24)
    once = th.substitute_y_qshift(1).substitute_y_qshift(1)
    twice = th.substitute_y_qshift(2)
    assert once.agrees(twice)


def test_y_shift_of_theta_matches_quasi_periodicity():
    th = theta(30)
    factor = QYSeries({0: ZetaRat.monomial(-2, -1)}, Fraction(-1, 2), 30)
    assert th.substitute_y_qshift(1).agrees(factor * th)


def test_specialize_zeta_of_theta_vanishes_at_one():
    assert all(not v for v in theta(10).specialize_zeta(GQ(1)).terms.values())


def test_qseries_arithmetic():
    a = QSeries({Fraction(0): 1, Fraction(1, 2): 2}, 3)
    b = QSeries({Fraction(1, 2): 1}, 3)
    c = a * b
    assert c[Fraction(1, 2)] == GQ(1) and c[Fraction(1)] == GQ(2)
    assert (a + b)[Fraction(1, 2)] == GQ(3)
    assert a.is_rational()


def test_eval_complex_matches_product():
    import cmath
    tau, z = 1.3j, 0.2 + 0.05j
    q = cmath.exp(2j * cmath.pi * tau)
    zeta = cmath.exp(1j * cmath.pi * z)
    expected = q ** 0.125 * (-1j) * (zeta - 1 / zeta)
    for l in range(1, 40):
        expected *= (1 - q ** l) * (1 - q ** l * zeta ** 2) * (1 - q ** l / zeta ** 2)
    val, err = theta(20).eval_complex(tau, z)
    assert abs(val - expected) < 1e-12
    assert err < 1e-10


# -- x-series -----------------------------------------------------------------------------

from qjl.xseries import XSeries


@given(qy_series(N=5), qy_series(N=5), qy_series(N=5))
def test_xseries_inverse_log_exp(a, b, c):
    one = QYSeries.one(5)
    x = XSeries([one, a.with_weight(1), b.with_weight(2), c.with_weight(3)], 0, 5)
    prod = x * x.inverse()
    assert prod[0].agrees(one)
    assert all(prod[j].is_zero() for j in range(1, 4))
    back = x.log().exp()
    assert all(back[j].agrees(x[j]) for j in range(4))


def test_xseries_weights():
    one = QYSeries.one(4)
    x = XSeries([one, one.with_weight(1)], 0, 4)
    assert x[1].weight == 1
    assert (x * x)[1].weight == 1
