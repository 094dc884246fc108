"""Lattice shifts (exact), modular transformations (numeric) and a brute-force lattice sum."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .coeffs import ZetaRat
from .errors import DomainError, FitError, PoleError, PrecisionError
from .quasijacobi import SYMBOLS, GeneratorPoly, expand
from .series import QYSeries, SupportEnvelope
from .theta import bernoulli, theta

__all__ = [
    "LatticeSumSpec", "AnomalyFit", "ShiftReport", "POLE_ORDER", "pole_order", "theta_shift_factor",
    "shift_check", "expand_stored", "brute_lattice_sum", "modular_check", "modular_check_function",
    "ANOMALY_BASIS", "S", "T", "DEFAULT_POINTS",
]

POLE_ORDER = {"E1": 1, "P": 2, "E3": 3, "E4": 4, "e2": 0, "e4": 0, "e6": 0}

S = ((0, -1), (1, 0))
T = ((1, 1), (0, 1))
DEFAULT_POINTS = [(2j, 0.3 + 0.1j), (2j, 0.17 - 0.05j), (1 + 2j, 0.3 + 0.1j), (1 + 2j, 0.17 - 0.05j)]


def pole_order(f: GeneratorPoly) -> int:
    """Largest pole order at z = 0 over the monomials (E_n has a pole of order n)."""
    best = 0
    for m in f.terms:
        best = max(best, sum(e * POLE_ORDER[s] for s, e in zip(SYMBOLS, m)))
    return best


def theta_shift_factor(m: int, N: int) -> QYSeries:
    """(-1)^m zeta^(-2m) q^(-m^2/2): theta(z + m tau) / theta(z)."""
    return QYSeries({0: ZetaRat.monomial(-2 * m, -1 if m % 2 else 1)}, Fraction(-m * m, 2), N)


@dataclass
class ShiftReport:
    passed: bool
    m: int
    checked_from: Fraction
    checked_to: Fraction
    first_difference: tuple | None = None

    def to_json(self) -> dict:
        fd = None
        if self.first_difference:
            e, a, b = self.first_difference
            fd = {"q_exponent": str(e), "shifted": repr(a), "expected": repr(b)}
        return {"passed": self.passed, "m": self.m, "checked_from": str(self.checked_from),
                "checked_to": str(self.checked_to), "first_difference": fd}


def expand_stored(f: GeneratorPoly, N: int, weight: int) -> QYSeries:
    """Sum of the stored expansions of the weight components of ``f``, tagged ``weight``.

    Lattice shifts mix normalized weights (E1 -> E1 - m), so the prediction
    is compared on stored coefficients.
    """
    acc = QYSeries.zero(N, weight)
    for comp in f.components().values():
        acc = acc + expand(comp, N).with_weight(weight)
    return acc


def shift_check(f, m: int, expected=None, N: int = 40, poles: int | None = None) -> ShiftReport:
    """Compare f(z + m tau) with ``expected`` exactly on the determined range.

    ``f`` is a QYSeries or GeneratorPoly; ``expected`` is the predicted value
    of the shifted function (a QYSeries/GeneratorPoly, the string "theta" for
    the theta law, or None for invariance).  Series with poles at z = 0 are
    multiplied by theta^k first, k being the pole order, and the prediction
    by the matching power of the theta factor.
    """
    if isinstance(f, GeneratorPoly):
        if poles is None:
            poles = pole_order(f)
        f = expand(f, N)
    if isinstance(expected, GeneratorPoly):
        expected = expand_stored(expected, N, f.weight)
    N = f.trunc
    if isinstance(expected, str):
        if expected != "theta":
            raise DomainError(f"unknown expected law {expected!r}")
        expected = f * theta_shift_factor(m, N)
        poles = 0
    elif expected is None:
        expected = f
    if poles is None:
        poles = 0 if f.is_polynomial() else None
        if poles is None:
            raise DomainError("pole order needed for a series with zeta-denominators")
    if poles:
        th = theta(N) ** poles
        lifted = (f * th).with_envelope(SupportEnvelope(poles, Fraction(0)))
        factor = theta_shift_factor(m, N) ** poles
        target = factor * th * expected
    else:
        lifted = f
        target = expected
    shifted = lifted.substitute_y_qshift(m)
    diff = shifted - target
    lo = max(shifted.q_offset, target.q_offset)
    hi = min(shifted.precision, target.precision)
    if hi <= lo:
        raise PrecisionError("no overlapping determined range; raise N")
    if diff.is_zero():
        return ShiftReport(True, m, lo, hi)
    e = diff.q_offset + min(diff.terms)
    return ShiftReport(False, m, lo, hi, (e, shifted.coefficient_at(e) if e >= shifted.q_offset else None,
                                         target.coefficient_at(e) if e >= target.q_offset else None))


# -- lattice sums ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LatticeSumSpec:
    n: int
    cutoff_A: int = 2000
    cutoff_B: int = 2000

    def __post_init__(self):
        if self.n < 1 or self.cutoff_A < 1 or self.cutoff_B < 1:
            raise DomainError("n and cutoffs must be positive")


_EM_TERMS = 6


def _rising(n: int, k: int) -> int:
    out = 1
    for j in range(k):
        out *= n + j
    return out


def _inner_tail(w: np.ndarray, n: int, B: int) -> np.ndarray:
    """Euler-Maclaurin estimate of sum_{t > B} (w+t)^-n + (w-t)^-n."""
    wp = w + B
    wm = w - B
    if n == 1:
        integral = np.log((B - w) / (B + w))
    else:
        integral = wp ** (1 - n) / (n - 1) + (-1) ** n * (-wm) ** (1 - n) / (n - 1)
    g = wp ** (-n) + wm ** (-n)
    out = integral - g / 2
    for k in range(1, _EM_TERMS + 1):
        order = 2 * k - 1
        dplus = (-1) ** order * _rising(n, order) * wp ** (-n - order)
        dminus = _rising(n, order) * wm ** (-n - order)
        b = float(bernoulli(2 * k)) / math.factorial(2 * k)
        out = out - b * (dplus + dminus)
    return out


def _row_sums(n: int, z: complex, tau: complex, a: np.ndarray, B: int) -> np.ndarray:
    b = np.arange(-B, B + 1, dtype=float)
    w = z + a * tau
    vals = (w[:, None] + b[None, :]) ** (-n)
    # add small terms first
    order = np.argsort(-np.abs(b))
    rows = vals[:, order].sum(axis=1)
    return rows + _inner_tail(w, n, B)


def brute_lattice_sum(spec: LatticeSumSpec, z: complex, tau: complex,
                      swap_order: bool = False) -> complex:
    """sum_a sum_b (z + a tau + b)^-n, inner limit over b, outer over a (both symmetric).

    Rows beyond |a| where the symmetric pair is below 1e-18 relative to the
    running total are dropped (they decay like exp(-2 pi |a| Im tau)).
    ``swap_order`` sums over a on the inside instead (valid for n >= 3).
    """
    tau = complex(tau)
    z = complex(z)
    if tau.imag <= 0:
        raise DomainError("Im tau must be positive")
    if swap_order:
        # z + a tau + b = tau (z/tau + a + b/tau): inner a-sum is a lattice row in 1/tau
        if spec.n < 3:
            raise DomainError("order swap is only meaningful for absolutely convergent sums")
        inner = LatticeSumSpec(spec.n, spec.cutoff_B, spec.cutoff_A)
        return brute_lattice_sum(inner, z / tau, -1 / tau) * tau ** (-spec.n)
    # pole check
    for a in range(-3, 4):
        w = z + a * tau
        if abs(w - round(w.real)) < 1e-14 and abs(w.imag) < 1e-14:
            raise PoleError("z is a lattice point")
    n, A, B = spec.n, spec.cutoff_A, spec.cutoff_B
    total = _row_sums(n, z, tau, np.array([0.0]), B)[0]
    chunk = 64
    a0 = 1
    while a0 <= A:
        a_vals = np.arange(a0, min(a0 + chunk, A + 1), dtype=float)
        plus = _row_sums(n, z, tau, a_vals, B)
        minus = _row_sums(n, z, tau, -a_vals, B)
        pair = plus + minus
        total += pair.sum()
        if np.all(np.abs(pair) < 1e-18 * max(1.0, abs(total))):
            break
        a0 += chunk
    return complex(total)


# -- modular transformations -------------------------------------------------------------

ANOMALY_BASIS: dict[str, Callable[[complex, complex, int, int], complex]] = {
    "cz/(ctau+d)": lambda tau, z, c, d: c * z / (c * tau + d),
    "c/(ctau+d)": lambda tau, z, c, d: c / (c * tau + d),
    "(cz/(ctau+d))^2": lambda tau, z, c, d: (c * z / (c * tau + d)) ** 2,
    "cz*c/(ctau+d)^2": lambda tau, z, c, d: c * z * c / (c * tau + d) ** 2,
}


@dataclass
class AnomalyFit:
    gamma: tuple
    weight: int
    basis: list[str]
    coefficients: list[complex]
    residual: float
    condition: float
    notes: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"gamma": [list(r) for r in self.gamma], "weight": self.weight, "basis": self.basis,
                "coefficients": [[c.real, c.imag] for c in self.coefficients],
                "residual": self.residual, "condition": self.condition, **self.notes}


def _act(gamma, tau: complex, z: complex):
    (a, b), (c, d) = gamma
    if a * d - b * c != 1:
        raise DomainError("gamma must have determinant 1")
    j = c * tau + d
    return (a * tau + b) / j, z / j, j


def modular_check_function(F: Callable[[complex, complex], complex], k: int, gamma,
                           points: Sequence[tuple[complex, complex]] = DEFAULT_POINTS,
                           basis: Sequence[str] = (), max_condition: float = 1e10) -> AnomalyFit:
    """Fit (c tau + d)^-k F(gamma tau, z/(c tau + d)) - F(tau, z) on the anomaly basis."""
    (_, _), (c, d) = gamma
    resid = []
    cols = [[] for _ in basis]
    for tau, z in points:
        tau2, z2, j = _act(gamma, complex(tau), complex(z))
        if tau2.imag <= 0:
            raise DomainError("transformed point left the upper half plane")
        r = j ** (-k) * F(tau2, z2) - F(tau, z)
        resid.append(r)
        for col, name in zip(cols, basis):
            col.append(ANOMALY_BASIS[name](complex(tau), complex(z), c, d))
    y = np.array(resid, dtype=complex)
    if not basis:
        return AnomalyFit(gamma, k, [], [], float(np.max(np.abs(y))), 1.0)
    X = np.array(cols, dtype=complex).T
    G = X.conj().T @ X
    cond = float(np.linalg.cond(G))
    if not np.isfinite(cond) or cond > max_condition:
        raise FitError(f"anomaly fit is ill-conditioned (condition number {cond:.3g})", cond)
    coef = np.linalg.solve(G, X.conj().T @ y)
    res = float(np.max(np.abs(y - X @ coef)))
    return AnomalyFit(gamma, k, list(basis), [complex(v) for v in coef], res, cond)


def modular_check(f: QYSeries, k: int, gamma, points=DEFAULT_POINTS, basis=(),
                  max_condition: float = 1e10) -> AnomalyFit:
    """Anomaly fit for the function (2 pi i)^weight * f, from its q-expansion."""
    scale = (2j * math.pi) ** f.weight

    def F(tau, z):
        v, _ = f.eval_complex(tau, z)
        return scale * v

    fit = modular_check_function(F, k, gamma, points, basis, max_condition)
    errs = [f.eval_complex(t, z)[1] for t, z in points]
    fit.notes["series_tail_bound"] = max(errs) * abs(scale)
    return fit
