from __future__ import annotations

import cmath
from fractions import Fraction

import mpmath
import pytest

from qjl.coeffs import GQ, ZetaRat
from qjl.dsl import parse_poly
from qjl.errors import DegenerateDivisorError
from qjl.genus import (chi_y, divisor_factor, elliptic_genus, jacobi_normalized, ochanine_direct,
                       ochanine_signature_cusp, ochanine_via_specialization,
                       signature_cusp_correction, specialize_torsion)
from qjl.models import PRESETS, load_model, model_hypersurface, model_product, model_projective
from qjl.quasijacobi import recognize
from qjl.series import QYSeries

N = 10
SUITE = ["pt", "P1", "P2", "P3", "P1xP1", "K3", "F1"]


def phi01(tau, z):
    """Weight 0 index 1 weak Jacobi form, 4 sum_i (theta_i(z)/theta_i(0))^2, numerically."""
    q = mpmath.exp(1j * mpmath.pi * tau)
    w = mpmath.pi * z
    return 4 * sum((mpmath.jtheta(i, w, q) / mpmath.jtheta(i, 0, q)) ** 2 for i in (2, 3, 4))


def test_point_genus_is_one():
    assert elliptic_genus(PRESETS["pt"](), N).agrees(QYSeries.one(N))


def test_k3_is_twice_phi01():
    ell = elliptic_genus(PRESETS["K3"](), 14)
    for tau, z in [(1.1j, 0.23 + 0.07j), (0.3 + 0.9j, 0.41 - 0.1j)]:
        val, err = ell.eval_complex(tau, z)
        assert abs(val - complex(2 * phi01(tau, z))) < 1e-8


def test_k3_low_coefficients():
    ell = elliptic_genus(PRESETS["K3"](), 3)
    assert ell[0] == ZetaRat.laurent([(-2, 2), (0, 20), (2, 2)])
    assert ell[1] == ZetaRat.laurent([(-4, 20), (-2, -128), (0, 216), (2, -128), (4, 20)])


def test_multiplicative_on_products():
    p1, p2 = model_projective(1), model_projective(2)
    prod = elliptic_genus(model_product(p1, p2), N)
    assert prod.agrees(elliptic_genus(p1, N) * elliptic_genus(p2, N))


@pytest.mark.parametrize("d,expected", [
    (1, "9/2*E1^2 - 3/2*P"), (2, "4*E1^2"), (3, "3/2*E1^2 + 15/2*P"), (4, "24*P")])
def test_degree_d_surfaces(d, expected):
    f = recognize(jacobi_normalized(model_hypersurface(3, d), 12), w=2)
    assert f == parse_poly(expected)


def test_projective_line():
    assert recognize(jacobi_normalized(model_projective(1), 12), w=1) == parse_poly("2*E1")


def test_chi_y():
    assert chi_y(model_projective(1)) == {0: 1, 1: -1}
    assert chi_y(model_projective(2)) == {0: 1, 1: -1, 2: 1}
    assert chi_y(model_projective(3)) == {0: 1, 1: -1, 2: 1, 3: -1}
    assert chi_y(PRESETS["K3"]()) == {0: 2, 1: -20, 2: 2}
    # Todd genus of the blow-up is 1
    assert chi_y(PRESETS["F1"]())[0] == 1


@pytest.mark.parametrize("name", SUITE)
def test_chi_minus_one_is_euler_number(name):
    m = PRESETS[name]()
    assert sum(v * (-1) ** p for p, v in chi_y(m).items()) == m.euler_number()


def test_divisor_factor_edge_cases():
    with pytest.raises(DegenerateDivisorError):
        divisor_factor(-1, 2, 6)
    f = divisor_factor(0, 2, 6)
    assert f[0].agrees(QYSeries.one(6)) and f[1].is_zero() and f[2].is_zero()


def test_blowup_pair_equals_plane():
    pair = load_model({"type": "preset", "name": "F1", "divisors": [{"class": "E", "delta": 1}]})
    assert elliptic_genus(pair, N).agrees(elliptic_genus(model_projective(2), N))
    assert not elliptic_genus(PRESETS["F1"](), N).agrees(elliptic_genus(model_projective(2), N))


def test_ochanine_constant_terms():
    # q^0 of the direct genus is the A-hat genus
    assert ochanine_direct(model_projective(2), 4)[0] == GQ(Fraction(-1, 8))
    assert ochanine_direct(PRESETS["K3"](), 4)[0] == GQ(2)
    # the specialization carries the signature, scaled by 2^-dim
    assert ochanine_via_specialization(model_projective(2), 4)[0] == GQ(Fraction(1, 4))
    assert ochanine_via_specialization(PRESETS["K3"](), 4)[0] == GQ(-4)


@pytest.mark.parametrize("name", ["pt", "P1", "P2", "K3", "P1xP1"])
def test_specialization_is_signature_cusp_expansion(name):
    m = PRESETS[name]()
    lhs = ochanine_signature_cusp(m, N) * signature_cusp_correction(m.dim, N)
    assert lhs.agrees(ochanine_via_specialization(m, N))


def test_torsion_specialization_numeric():
    ell = elliptic_genus(model_projective(1), 16)
    tau = 1.2j
    s = specialize_torsion(ell, 1, 0)
    val, _ = ell.eval_complex(tau, tau / 2)
    assert abs(s.evaluate(tau) - val) < 1e-10
