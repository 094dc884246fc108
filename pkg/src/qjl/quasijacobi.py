"""Polynomials in the quasi-Jacobi generators and their q-expansions.

Generators (with weights): E1 (1), P = E2 - e2 (2), E3 (3), E4 (4), and the
quasi-modular e2 (2), e4 (4), e6 (6).  Two relations hold among them,

    E4   = P^2 - 5 e4
    E3^2 = P^3 - 15 e4 P - 35 e6

so a polynomial is in *normal form* when it avoids E4 and has E3-degree at
most one.  Normal-form monomials are linearly independent, which is what
recognition relies on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial
from typing import Iterable, Mapping

from flint import fmpq, fmpq_mat, fmpq_poly

from .coeffs import GQ, ZetaRat, as_gq
from .errors import NotInAlgebraError, PrecisionError, WeightError
from .series import QYSeries
from .theta import ebar, ebar_q

__all__ = [
    "SYMBOLS", "WEIGHTS", "GeneratorPoly", "Depth", "IdentityReport", "generator_series",
    "expand", "recognize", "normal_form", "depth", "d_tau", "d_z", "serre_d", "rc_bracket",
    "rc_bracket_n", "identity_check", "monomials_of_weight", "expansion_rank", "pochhammer",
]

SYMBOLS = ("E1", "P", "E3", "E4", "e2", "e4", "e6")
WEIGHTS = (1, 2, 3, 4, 2, 4, 6)
_INDEX = {s: i for i, s in enumerate(SYMBOLS)}
_ZERO_EXP = (0,) * len(SYMBOLS)

Monomial = tuple


def _mono_weight(m: Monomial) -> int:
    return sum(e * w for e, w in zip(m, WEIGHTS))


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


class GeneratorPoly:
    """Sparse polynomial over Q(i) in the seven generators."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        clean = {}
        for m, c in (terms or {}).items():
            c = as_gq(c)
            if c:
                m = tuple(int(e) for e in m)
                if len(m) != len(SYMBOLS) or min(m) < 0:
                    raise ValueError(f"bad monomial {m}")
                clean[m] = clean.get(m, GQ(0)) + c
        self.terms = {m: c for m, c in clean.items() if c}

    @classmethod
    def const(cls, c) -> "GeneratorPoly":
        return cls({_ZERO_EXP: c})

    @classmethod
    def symbol(cls, name: str) -> "GeneratorPoly":
        if name == "E2":
            return cls.symbol("P") + cls.symbol("e2")
        if name not in _INDEX:
            raise KeyError(name)
        m = [0] * len(SYMBOLS)
        m[_INDEX[name]] = 1
        return cls({tuple(m): 1})

    @classmethod
    def monomial(cls, exps: Mapping[str, int], c=1) -> "GeneratorPoly":
        m = [0] * len(SYMBOLS)
        for s, e in exps.items():
            m[_INDEX[s]] = e
        return cls({tuple(m): c})

    # -- structure --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def weights(self) -> set[int]:
        return {_mono_weight(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.weights()) <= 1

    def weight(self) -> int:
        ws = self.weights()
        if len(ws) > 1:
            raise WeightError(f"polynomial mixes weights {sorted(ws)}")
        return ws.pop() if ws else 0

    def components(self) -> dict[int, "GeneratorPoly"]:
        out: dict[int, dict] = {}
        for m, c in self.terms.items():
            out.setdefault(_mono_weight(m), {})[m] = c
        return {w: GeneratorPoly(t) for w, t in sorted(out.items())}

    def degree_in(self, name: str) -> int:
        i = _INDEX[name]
        return max((m[i] for m in self.terms), default=0)

    # -- arithmetic -------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, GeneratorPoly):
            other = GeneratorPoly.const(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if not isinstance(other, GeneratorPoly):
            other = GeneratorPoly.const(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, GQ(0)) + c
        return GeneratorPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return GeneratorPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, GeneratorPoly):
            other = GeneratorPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, GeneratorPoly):
            c = as_gq(other)
            return GeneratorPoly({m: v * c for m, v in self.terms.items()})
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, GQ(0)) + c1 * c2
        return GeneratorPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "GeneratorPoly":
        out = GeneratorPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    # -- text form ----------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (-_mono_weight(t[0]), tuple(-e for e in t[0])))

    def __str__(self) -> str:
        from .dsl import format_poly
        return format_poly(self)

    def __repr__(self):
        return f"GeneratorPoly({self})"


@dataclass(frozen=True)
class Depth:
    s: int
    t: int


@dataclass
class IdentityReport:
    equal: bool
    weights: list[int]
    homogeneous: bool
    first_difference: tuple | None = None
    checked_to: Fraction | None = None
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        fd = None
        if self.first_difference is not None:
            w, e, lhs, rhs = self.first_difference
            fd = {"weight": w, "q_exponent": str(e), "lhs": repr(lhs), "rhs": repr(rhs)}
        return {"equal": self.equal, "weights": self.weights, "homogeneous": self.homogeneous,
                "first_difference": fd,
                "checked_to": None if self.checked_to is None else str(self.checked_to),
                "notes": self.notes}


# -- expansion ------------------------------------------------------------------

@lru_cache(maxsize=None)
def generator_series(name: str, N: int) -> QYSeries:
    if name == "E1":
        return ebar(1, N)
    if name == "P":
        return ebar(2, N) - ebar_q(2, N)
    if name == "E3":
        return ebar(3, N)
    if name == "E4":
        return ebar(4, N)
    if name in ("e2", "e4", "e6"):
        return ebar_q(int(name[1]), N)
    raise KeyError(name)


@lru_cache(maxsize=None)
def _power(name: str, k: int, N: int) -> QYSeries:
    if k == 1:
        return generator_series(name, N)
    half = _power(name, k // 2, N)
    sq = half * half
    return sq * generator_series(name, N) if k % 2 else sq


@lru_cache(maxsize=None)
def _monomial_series(m: Monomial, N: int) -> QYSeries:
    out = None
    for name, e in zip(SYMBOLS, m):
        if e:
            p = _power(name, e, N)
            out = p if out is None else out * p
    return out if out is not None else QYSeries.one(N)


def expand(f: GeneratorPoly, N: int, weight: int | None = None) -> QYSeries:
    """q-expansion of a weight-homogeneous polynomial."""
    if not f.is_homogeneous():
        raise WeightError(f"cannot expand a polynomial mixing weights {sorted(f.weights())}")
    w = f.weight() if f.terms else (weight or 0)
    acc = QYSeries.zero(N, w)
    for m, c in f.terms.items():
        acc = acc + _monomial_series(m, N).scale(c)
    return acc


# -- normal form and monomial bases ------------------------------------------------

_E4_RULE = None
_E3SQ_RULE = None


def _rules():
    global _E4_RULE, _E3SQ_RULE
    if _E4_RULE is None:
        P, e4, e6 = (GeneratorPoly.symbol(s) for s in ("P", "e4", "e6"))
        _E4_RULE = P * P - 5 * e4
        _E3SQ_RULE = P ** 3 - 15 * e4 * P - 35 * e6
    return _E4_RULE, _E3SQ_RULE


def normal_form(f: GeneratorPoly) -> GeneratorPoly:
    """Rewrite E4 and E3^2 through the two quadratic relations."""
    e4_rule, e3sq_rule = _rules()
    i3, i4 = _INDEX["E3"], _INDEX["E4"]
    out = GeneratorPoly()
    pending = list(f.terms.items())
    done: dict = {}
    while pending:
        m, c = pending.pop()
        if m[i4] == 0 and m[i3] < 2:
            done[m] = done.get(m, GQ(0)) + c
            continue
        m = list(m)
        if m[i4]:
            m[i4] -= 1
            rule = e4_rule
        else:
            m[i3] -= 2
            rule = e3sq_rule
        rest = tuple(m)
        for rm, rc in rule.terms.items():
            pending.append((_mono_mul(rest, rm), c * rc))
    out = GeneratorPoly(done)
    return out


def monomials_of_weight(w: int, symbols: Iterable[str] = SYMBOLS,
                        normal: bool = False) -> list[Monomial]:
    """All monomials of weight w in the given symbols (optionally only normal-form ones)."""
    symbols = [s for s in SYMBOLS if s in set(symbols)]
    idx = [_INDEX[s] for s in symbols]
    out: list[Monomial] = []

    def rec(pos, remaining, exps):
        if pos == len(idx):
            if remaining == 0:
                out.append(tuple(exps))
            return
        i = idx[pos]
        wt = WEIGHTS[i]
        for e in range(remaining // wt + 1):
            exps[i] = e
            rec(pos + 1, remaining - e * wt, exps)
        exps[i] = 0

    rec(0, w, [0] * len(SYMBOLS))
    if normal:
        syms = set(symbols)
        drop_e4 = {"P", "e4"} <= syms
        drop_e3sq = {"P", "e4", "e6"} <= syms
        out = [m for m in out
               if not (drop_e4 and m[_INDEX["E4"]]) and not (drop_e3sq and m[_INDEX["E3"]] >= 2)]
    out.sort(key=lambda m: tuple(-e for e in m))
    return out


# -- linear algebra ------------------------------------------------------------------

def _lcm(a: fmpq_poly, b: fmpq_poly) -> fmpq_poly:
    g = a.gcd(b)
    return (a * b) // g


def _coefficient_rows(series: list[QYSeries]):
    """Clear zeta-denominators per q-order and list (row key -> values per series)."""
    trunc = min(s.trunc for s in series)
    offsets = {s.q_offset for s in series if not s.is_zero()}
    if len(offsets) > 1:
        base = min(offsets)
        for o in offsets:
            if (o - base).denominator != 1:
                raise NotInAlgebraError("q-offsets are incompatible", {"offsets": sorted(offsets)})
    base = min(s.q_offset for s in series)
    prec = min(s.precision for s in series)
    rows: dict = {}
    n = 0
    while base + n < prec:
        e = base + n
        coeffs = [s.coefficient_at(e) if e >= s.q_offset else ZetaRat.const(0) for s in series]
        den = fmpq_poly([1])
        low = 0
        for c in coeffs:
            if c.is_zero():
                continue
            den = _lcm(den, c.den)
            low = min(low, c.val)
        clear = ZetaRat.make(-low, den, fmpq_poly([]), fmpq_poly([1]))
        for j, c in enumerate(coeffs):
            if c.is_zero():
                continue
            for k, v in (c * clear).num_terms():
                row = rows.setdefault((e, k), [GQ(0)] * len(series))
                row[j] = v
        n += 1
    return rows


def _solve(rows: dict, ncols: int):
    """Solve sum_j x_j col_j = rhs over Q(i); returns (solution or None, rank, keys)."""
    keys = sorted(rows)
    real = all(rows[k][j].im == 0 for k in keys for j in range(ncols))
    if real:
        M = fmpq_mat(len(keys), ncols + 2)
        for r, k in enumerate(keys):
            row = rows[k]
            for j in range(ncols):
                M[r, j] = fmpq(row[j].re.numerator, row[j].re.denominator)
            b = row[ncols]
            M[r, ncols] = fmpq(b.re.numerator, b.re.denominator)
            M[r, ncols + 1] = fmpq(b.im.numerator, b.im.denominator)
        R, rank = M.rref()
        sol_re, sol_im, rank_a, consistent = _read_rref(R, rank, ncols, 2)
        if not consistent:
            return None, rank_a
        return [GQ(a, b) for a, b in zip(sol_re, sol_im)], rank_a
    # complex matrix: realified block system [Ar -Ai; Ai Ar]
    nr = len(keys)
    M = fmpq_mat(2 * nr, 2 * ncols + 1)
    for r, k in enumerate(keys):
        row = rows[k]
        for j in range(ncols):
            a = row[j]
            M[r, j] = fmpq(a.re.numerator, a.re.denominator)
            M[r, ncols + j] = fmpq(-a.im.numerator, a.im.denominator)
            M[nr + r, j] = fmpq(a.im.numerator, a.im.denominator)
            M[nr + r, ncols + j] = fmpq(a.re.numerator, a.re.denominator)
        b = row[ncols]
        M[r, 2 * ncols] = fmpq(b.re.numerator, b.re.denominator)
        M[nr + r, 2 * ncols] = fmpq(b.im.numerator, b.im.denominator)
    R, rank = M.rref()
    sol, _, rank_a, consistent = _read_rref(R, rank, 2 * ncols, 1)
    if not consistent:
        return None, rank_a // 2
    return [GQ(sol[j], sol[ncols + j]) for j in range(ncols)], rank_a // 2


def _read_rref(R, rank, ncols, nrhs):
    pivots = []
    consistent = True
    for r in range(rank):
        c = 0
        while R[r, c] == 0:
            c += 1
        if c >= ncols:
            consistent = False
            continue
        pivots.append((r, c))
    rank_a = len(pivots)
    sols = []
    for t in range(nrhs):
        x = [Fraction(0)] * ncols
        for r, c in pivots:
            v = R[r, ncols + t]
            x[c] = Fraction(int(v.p), int(v.q))
        sols.append(x)
    while len(sols) < 2:
        sols.append([Fraction(0)] * ncols)
    return sols[0], sols[1], rank_a, consistent


def expansion_rank(w: int, N: int, symbols: Iterable[str] = SYMBOLS,
                   normal: bool = False) -> tuple[int, int]:
    """(rank, number of monomials) of the weight-w monomial expansion matrix."""
    monos = monomials_of_weight(w, symbols, normal)
    if not monos:
        return 0, 0
    series = [_monomial_series(m, N) for m in monos]
    rows = _coefficient_rows(series + [QYSeries.zero(N, w)])
    _, rank = _solve(rows, len(monos))
    return rank, len(monos)


def recognize(s: QYSeries, allowed: Iterable[str] = SYMBOLS, w: int | None = None,
              N: int | None = None) -> GeneratorPoly:
    """The unique normal-form polynomial of weight w over ``allowed`` expanding to s."""
    if w is None:
        w = s.weight
    if s.weight != w:
        raise WeightError(f"series has weight {s.weight}, asked for {w}")
    allowed = set(allowed)
    if "E2" in allowed:
        allowed = (allowed - {"E2"}) | {"P", "e2"}
    unknown = allowed - set(SYMBOLS)
    if unknown:
        raise KeyError(f"unknown symbols {sorted(unknown)}")
    N = N or s.trunc
    if s.precision < N:
        N = int(s.precision) if s.precision > 0 else N
    monos = monomials_of_weight(w, allowed, normal=True)
    if not monos:
        if s.is_zero():
            return GeneratorPoly()
        raise NotInAlgebraError(f"no monomials of weight {w} over {sorted(allowed)}",
                                {"nonzero_terms": len(s.terms)})
    series = [_monomial_series(m, N) for m in monos]
    rows = _coefficient_rows(series + [s])
    sol, rank = _solve(rows, len(monos))
    if sol is None:
        raise NotInAlgebraError(
            f"series is not a weight-{w} polynomial in {sorted(allowed)} to the checked order",
            {"rank": rank, "columns": len(monos), "rows": len(rows)})
    if rank < len(monos):
        raise PrecisionError(
            f"monomial expansion matrix has rank {rank} < {len(monos)}; raise the truncation")
    return GeneratorPoly({m: c for m, c in zip(monos, sol)})


# -- depth and derivations --------------------------------------------------------------

def depth(f: GeneratorPoly) -> Depth:
    return Depth(f.degree_in("E1"), f.degree_in("e2"))


_RULE_N = 20


@lru_cache(maxsize=None)
def _derived_rule(kind: str, name: str) -> GeneratorPoly:
    s = generator_series(name, _RULE_N)
    d = s.q_derivative() if kind == "tau" else s.y_derivative()
    allowed = ("e2", "e4", "e6") if name.startswith("e") else SYMBOLS
    return recognize(d, allowed, d.weight)


def _generator_derivative(kind: str, name: str) -> GeneratorPoly:
    E1, P, E3, E4, e2 = (GeneratorPoly.symbol(s) for s in ("E1", "P", "E3", "E4", "e2"))
    E2 = P + e2
    if kind == "tau":
        if name == "E1":
            return E3 - E1 * E2
        if name == "P":
            return 3 * E4 - 2 * E1 * E3 - E2 * E2 - _derived_rule("tau", "e2")
        return _derived_rule("tau", name)
    if name == "E1":
        return -E2
    if name == "P":
        return -2 * E3
    if name.startswith("e"):
        return GeneratorPoly()
    return _derived_rule("z", name)


def _derivation(f: GeneratorPoly, kind: str) -> GeneratorPoly:
    out = GeneratorPoly()
    for m, c in f.terms.items():
        for i, e in enumerate(m):
            if not e:
                continue
            rest = list(m)
            rest[i] -= 1
            d = _generator_derivative(kind, SYMBOLS[i])
            out = out + GeneratorPoly({tuple(rest): c * e}) * d
    return normal_form(out)


def d_tau(f: GeneratorPoly) -> GeneratorPoly:
    """q d/dq on the generator algebra (weight +2)."""
    return _derivation(f, "tau")


def d_z(f: GeneratorPoly) -> GeneratorPoly:
    """y d/dy on the generator algebra (weight +1)."""
    return _derivation(f, "z")


def serre_d(f: GeneratorPoly, k: int | None = None) -> GeneratorPoly:
    """D f = q d/dq f - E1 * y d/dy f."""
    if k is not None and f.terms and f.weight() != k:
        raise WeightError(f"polynomial has weight {f.weight()}, not {k}")
    return normal_form(d_tau(f) - GeneratorPoly.symbol("E1") * d_z(f))


def rc_bracket(f: GeneratorPoly, k: int, g: GeneratorPoly, l: int,
               literal: bool = False) -> GeneratorPoly:
    """First bracket l*(Df)*g - k*(Dg)*f, which is Jacobi for Jacobi f, g.

    ``literal=True`` gives k*(Df)*g - l*(Dg)*f instead; for k != l that
    combination keeps an e2 term.
    """
    Df, Dg = serre_d(f, k), serre_d(g, l)
    if literal:
        return normal_form(k * Df * g - l * Dg * f)
    return normal_form(l * Df * g - k * Dg * f)


def pochhammer(a: int, n: int) -> int:
    out = 1
    for j in range(n):
        out *= a + j
    return out


def rc_bracket_n(f: GeneratorPoly, k: int, g: GeneratorPoly, l: int, n: int) -> GeneratorPoly:
    """(k)_n (l)_n times the X^n coefficient of f_D(-X) g_D(X).

    Here f_D(X) = sum_m D^m f X^m / (m! (k)_m).  For n = 1 this is the
    negative of :func:`rc_bracket`.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    Df = [f]
    Dg = [g]
    for r in range(1, n + 1):
        Df.append(serre_d(Df[-1]))
        Dg.append(serre_d(Dg[-1]))
    out = GeneratorPoly()
    scale = pochhammer(k, n) * pochhammer(l, n)
    for r in range(n + 1):
        s = n - r
        c = Fraction((-1) ** r * scale, factorial(r) * pochhammer(k, r) * factorial(s) * pochhammer(l, s))
        out = out + Df[r] * Dg[s] * c
    return normal_form(out)


# -- identity checking -------------------------------------------------------------------

def identity_check(lhs: GeneratorPoly, rhs: GeneratorPoly, N: int = 20) -> IdentityReport:
    """Expand both sides weight by weight and compare exactly."""
    diff = lhs - rhs
    weights = sorted(lhs.weights() | rhs.weights())
    homogeneous = len(weights) <= 1
    notes = []
    if not homogeneous:
        notes.append(f"sides mix weights {weights}; each weight component is compared separately")
    for w, comp in diff.components().items():
        s = expand(comp, N)
        if not s.is_zero():
            e = s.q_offset + min(s.terms)
            lhs_c = lhs.components().get(w, GeneratorPoly())
            rhs_c = rhs.components().get(w, GeneratorPoly())
            lv = expand(lhs_c, N, w).coefficient_at(e) if e >= 0 else None
            rv = expand(rhs_c, N, w).coefficient_at(e) if e >= 0 else None
            return IdentityReport(False, weights, homogeneous, (w, e, lv, rv), Fraction(N), notes)
    return IdentityReport(True, weights, homogeneous, None, Fraction(N), notes)
