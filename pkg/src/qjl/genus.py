"""Elliptic, chi_y and Ochanine genera of variety models.

The characteristic series is

    R(x) = x theta(x/(2 pi i) - z) theta'(0) / (theta(-z) theta(x/(2 pi i)))

(the theta quotient of :func:`qjl.theta.phi` at -z).  Its genus ``R[X]`` has
rational zeta-coefficients; multiplying by ``(theta(-z)/theta'(0))**dim``
gives the Laurent-polynomial elliptic genus returned by :func:`elliptic_genus`.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

from .coeffs import GQ, ONE, ZetaRat
from .errors import DegenerateDivisorError, PrecisionError
from .models import VarietyModel
from .series import QSeries, QYSeries, SupportEnvelope
from .theta import phi, theta, theta_log_derivative, theta_prime0
from .xseries import XSeries

__all__ = [
    "char_series_elliptic", "char_series_ochanine", "char_series_signature_cusp",
    "divisor_factor", "power_sums", "genus", "elliptic_genus", "jacobi_normalized",
    "chi_y", "hodge_layer", "ochanine_direct", "ochanine_via_specialization",
    "ochanine_signature_cusp", "signature_cusp_correction", "specialize_torsion",
    "sqrt_elliptic_class",
]


@lru_cache(maxsize=None)
def char_series_elliptic(nx: int, N: int) -> XSeries:
    """x-expansion of the normalized elliptic characteristic series (constant term 1)."""
    return phi(max(nx, 1), N).subs_zeta_power(-1)


@lru_cache(maxsize=None)
def _theta_shift(nx: int, N: int) -> XSeries:
    """theta(x/(2 pi i) + z)/theta(z) as a series in x."""
    return XSeries([theta_log_derivative(j, N).scale(Fraction(1, factorial(j)))
                    for j in range(nx + 1)], 0, N)


@lru_cache(maxsize=None)
def divisor_factor(delta: int, nx: int, N: int) -> XSeries:
    """theta(d - (delta+1) z) theta(-z) / (theta(d - z) theta(-(delta+1) z)) in powers of d."""
    if delta == -1:
        raise DegenerateDivisorError("divisor coefficient -1 makes theta(-(delta+1)z) vanish")
    base = _theta_shift(nx, N)
    if delta == 0:
        return XSeries([QYSeries.one(N)], 0, N) if nx == 0 else \
            XSeries([QYSeries.one(N)] + [None] * nx, 0, N)
    num = base.subs_zeta_power(-(delta + 1))
    den = base.subs_zeta_power(-1)
    return num * den.inverse()


def power_sums(model: VarietyModel) -> list[dict]:
    """Power sums p_1..p_dim of the Chern roots, via Newton's identities."""
    r = model.ring
    d = model.dim
    c = [model.chern_class(i) for i in range(d + 1)]
    p: list[dict] = [{}]
    for m in range(1, d + 1):
        acc = r.scale(c[m], Fraction((-1) ** (m - 1) * m))
        for i in range(1, m):
            acc = r.add(acc, r.scale(r.mul(c[i], p[m - i]), Fraction((-1) ** (i - 1))))
        p.append({k: v for k, v in acc.items() if v})
    return p


def _ring_exp(ring, u: dict, d: int, N: int) -> dict:
    """exp of a nilpotent element whose degree-j coefficients are weight-j series."""
    out = {ring.unit: QYSeries.one(N)}
    term = {ring.unit: QYSeries.one(N)}
    for k in range(1, d + 1):
        term = ring.mul(term, u)
        term = {b: s.scale(Fraction(1, k)) for b, s in term.items()}
        out = ring.add(out, term)
    return out


def _evaluate_on_class(ring, f: XSeries, cls: dict, d: int) -> dict:
    """sum_j f_j cls^j in the ring."""
    out = {ring.unit: f[0]}
    power = ring.one()
    for j in range(1, d + 1):
        power = ring.mul(power, cls)
        if j > f.nx:
            break
        for b, v in power.items():
            if v:
                term = f[j].scale(v)
                out[b] = out[b] + term if b in out else term
    return out


def genus(model: VarietyModel, cs: XSeries, use_divisors: bool = True,
          divisor_series=None) -> QYSeries:
    """Integral over the model of prod_l R(x_l) prod_k F(d_k).

    The coefficient of x^j in ``cs`` must carry weight j; the result carries
    weight ``dim``.  ``divisor_series(delta)`` supplies the divisor factors.
    """
    d = model.dim
    N = cs.trunc
    if cs.nx < d:
        raise PrecisionError(f"characteristic series known to x^{cs.nx}, need x^{d}")
    ring = model.ring
    if d == 0:
        top = QYSeries.one(N)
        return top.scale(ring.integrate({ring.unit: Fraction(1)}))
    logR = cs.log()
    p = power_sums(model)
    u: dict = {}
    for m in range(1, d + 1):
        for b, v in p[m].items():
            term = logR[m].scale(v)
            u[b] = u[b] + term if b in u else term
    total = _ring_exp(ring, u, d, N)
    if use_divisors:
        for cls, delta in model.divisors:
            F = divisor_series(delta) if divisor_series else divisor_factor(delta, d, N)
            total = ring.mul(total, _evaluate_on_class(ring, F, cls, d))
    return ring.integrate(ring.part(total, d), QYSeries.zero(N, d))


@lru_cache(maxsize=None)
def _normalizer(d: int, N: int) -> QYSeries:
    """(theta(-z)/theta'(0))**d, weight -d."""
    q = theta(N).conj_zeta() * theta_prime0(N).invert()
    out = QYSeries.one(N)
    for _ in range(d):
        out = out * q
    return out


def elliptic_genus(model: VarietyModel, N: int = 12, use_divisors: bool = True) -> QYSeries:
    """Laurent-polynomial elliptic genus, weight 0 (point -> 1)."""
    d = model.dim
    g = genus(model, char_series_elliptic(max(d, 1), N), use_divisors)
    if d == 0:
        return g.with_envelope(SupportEnvelope(0, Fraction(0)))
    out = g * _normalizer(d, N)
    return out.with_envelope(SupportEnvelope(d, Fraction(-d, 8)))


def jacobi_normalized(model: VarietyModel, N: int = 12, use_divisors: bool = True) -> QYSeries:
    """Ell * (theta'(0)/theta(z))**dim, a weight-dim quasi-Jacobi form."""
    d = model.dim
    g = genus(model, char_series_elliptic(max(d, 1), N), use_divisors)
    return g if d % 2 == 0 else -g


def hodge_layer(model: VarietyModel, N: int = 2) -> dict[int, Fraction]:
    """q^0 coefficient of zeta^dim * Ell as {power of y: coefficient}."""
    d = model.dim
    ell = elliptic_genus(model, max(N, 1))
    c = ell.coefficient_at(0) * ZetaRat.monomial(d)
    out: dict[int, Fraction] = {}
    for k, v in c.num_terms():
        if k % 2 or v.im:
            raise PrecisionError("q^0 layer is not a polynomial in y with rational coefficients")
        out[k // 2] = v.re
    return out


def chi_y(model: VarietyModel) -> dict[int, Fraction]:
    """Hirzebruch chi_y = sum_p chi(Omega^p) y^p from the q^0 layer (y -> -y)."""
    return {p: v * (-1) ** p for p, v in hodge_layer(model).items() if v}


# -- Ochanine genus ----------------------------------------------------------------

def _exp_coeffs(nx: int, rate: int) -> list[Fraction]:
    """Coefficients of e^(rate x) + e^(-rate x) - 2."""
    return [Fraction(2 * rate ** j, factorial(j)) if j % 2 == 0 and j else Fraction(0)
            for j in range(nx + 1)]


def _log_x_over_sinh(nx: int) -> list[Fraction]:
    """log((x/2)/sinh(x/2)) = -sum_{j>=1} B_{2j} x^{2j} / (2j (2j)!)."""
    from .theta import bernoulli
    out = [Fraction(0)] * (nx + 1)
    for j in range(2, nx + 1, 2):
        out[j] = -bernoulli(j) / (j * factorial(j))
    return out


def _log_x_over_tanh(nx: int) -> list[Fraction]:
    """log((x/2)/tanh(x/2)) = log((x/2)/sinh(x/2)) + log cosh(x/2)."""
    from .theta import bernoulli
    out = [Fraction(0)] * (nx + 1)
    # log cosh(t) = sum_{n>=1} 2^{2n}(2^{2n}-1) B_{2n} t^{2n} / (2n (2n)!)
    for j in range(2, nx + 1, 2):
        b = bernoulli(j)
        lc = Fraction(2 ** j * (2 ** j - 1), 1) * b / (j * factorial(j)) / 2 ** j
        out[j] = -b / (j * factorial(j)) + lc
    return out


def _char_from_log(logc: list[list[Fraction]], nx: int, N: int) -> XSeries:
    """Characteristic series from its log given as [x-degree][q-order] rationals."""
    L = XSeries([QYSeries.from_q_coefficients(logc[j], N, j) for j in range(nx + 1)], 0, N)
    return L.exp()


@lru_cache(maxsize=None)
def char_series_ochanine(nx: int, N: int) -> XSeries:
    """(x/2)/sinh(x/2) prod_n [(1-q^n)^2/((1-q^n e^x)(1-q^n e^-x))]^((-1)^n)."""
    logc = [[Fraction(0)] * N for _ in range(nx + 1)]
    head = _log_x_over_sinh(nx)
    for j in range(nx + 1):
        logc[j][0] = head[j]
    for n in range(1, N):
        for r in range(1, (N - 1) // n + 1):
            e = _exp_coeffs(nx, r)
            for j in range(nx + 1):
                logc[j][n * r] += (-1) ** n * e[j] / r
    return _char_from_log(logc, nx, N)


@lru_cache(maxsize=None)
def char_series_signature_cusp(nx: int, N: int) -> XSeries:
    """(x/2)/tanh(x/2) prod_n (1+q^n e^x)(1+q^n e^-x)(1-q^n)^2 / ((1-q^n e^x)(1-q^n e^-x)(1+q^n)^2)."""
    logc = [[Fraction(0)] * N for _ in range(nx + 1)]
    head = _log_x_over_tanh(nx)
    for j in range(nx + 1):
        logc[j][0] = head[j]
    for n in range(1, N):
        for r in range(1, (N - 1) // n + 1):
            e = _exp_coeffs(nx, r)
            for j in range(nx + 1):
                # log(1+a) - log(1-a) terms: (1 - (-1)^r) a^r / r
                logc[j][n * r] += (1 - (-1) ** r) * e[j] / r
    return _char_from_log(logc, nx, N)


def _as_rational_qseries(s: QYSeries) -> QSeries:
    terms = {}
    for n, c in s.terms.items():
        terms[s.q_offset + n] = c.constant_value()
    return QSeries(terms, s.precision, 0)


def ochanine_direct(model: VarietyModel, N: int = 12) -> QSeries:
    d = model.dim
    return _as_rational_qseries(genus(model, char_series_ochanine(max(d, 1), N), False))


def ochanine_signature_cusp(model: VarietyModel, N: int = 12) -> QSeries:
    d = model.dim
    return _as_rational_qseries(genus(model, char_series_signature_cusp(max(d, 1), N), False))


def signature_cusp_correction(d: int, N: int) -> QSeries:
    """prod_n ((1+q^n)/(1-q^n))^(2d)."""
    num = QYSeries.one(N)
    den = QYSeries.one(N)
    for n in range(1, N):
        num = num.times_binomial(1, 0, n)
        den = den.times_binomial(-1, 0, n)
    ratio = num * den.invert()
    out = QYSeries.one(N)
    for _ in range(2 * d):
        out = out * ratio
    return _as_rational_qseries(out)


# Fixed dimensional factor: zeta**dim * Ell at zeta = i, divided by 2**dim.
OCHANINE_FACTOR = Fraction(1, 2)


def ochanine_via_specialization(model: VarietyModel, N: int = 12) -> QSeries:
    d = model.dim
    ell = elliptic_genus(model, N) * QYSeries({0: ZetaRat.monomial(d)}, 0, N)
    return ell.specialize_zeta(GQ(0, 1)).scale(OCHANINE_FACTOR ** d)


def specialize_torsion(s: QYSeries, alpha: int, beta: int, envelope=None) -> QSeries:
    return s.specialize_torsion(alpha, beta, envelope)


def sqrt_elliptic_class(s: QYSeries) -> QYSeries:
    return s.sqrt_unit()
