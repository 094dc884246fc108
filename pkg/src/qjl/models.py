"""Graded intersection rings and variety models.

A ring element is a dict ``basis name -> coefficient``; coefficients may be
Fractions, GQ scalars or anything else closed under + and * with them (the
genus computation uses QYSeries coefficients).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Any, Mapping

from .errors import ModelError

__all__ = [
    "GradedRing", "VarietyModel", "model_point", "model_projective", "model_hypersurface",
    "model_ci", "model_product", "model_explicit", "model_blowup_p2", "load_model", "PRESETS",
]


class GradedRing:
    def __init__(self, basis: Mapping[str, int], mult: Mapping[tuple[str, str], Mapping[str, Any]],
                 integrate: Mapping[str, Any], unit: str = "1"):
        self.basis = dict(basis)
        if not self.basis:
            raise ModelError("empty basis")
        self.dim = max(self.basis.values())
        if unit not in self.basis or self.basis[unit] != 0:
            raise ModelError(f"unit {unit!r} must be a degree-0 basis element")
        self.unit = unit
        self.order = sorted(self.basis, key=lambda b: (self.basis[b], b))
        self.mult: dict[tuple[str, str], dict[str, Fraction]] = {}
        for (a, b), prod in mult.items():
            for n in (a, b):
                if n not in self.basis:
                    raise ModelError(f"unknown basis element {n!r} in multiplication table")
            clean = {}
            for c, v in prod.items():
                if c not in self.basis:
                    raise ModelError(f"unknown basis element {c!r} in product {a}*{b}")
                if self.basis[c] != self.basis[a] + self.basis[b]:
                    raise ModelError(f"product {a}*{b} has a term {c!r} of the wrong degree")
                v = Fraction(v)
                if v:
                    clean[c] = v
            self.mult[(a, b)] = clean
            if (b, a) in mult and {k: Fraction(v) for k, v in mult[(b, a)].items() if Fraction(v)} != clean:
                raise ModelError(f"multiplication table is not commutative at {a}, {b}")
            self.mult[(b, a)] = clean
        for b in self.basis:
            self.mult[(self.unit, b)] = {b: Fraction(1)}
            self.mult[(b, self.unit)] = {b: Fraction(1)}
        self.integrate_values = {k: Fraction(v) for k, v in integrate.items()}
        for k in self.integrate_values:
            if k not in self.basis or self.basis[k] != self.dim:
                raise ModelError(f"integration is only defined on top-degree classes, not {k!r}")
        self._check()

    def _check(self):
        for a in self.order:
            for b in self.order:
                if self.basis[a] + self.basis[b] <= self.dim and (a, b) not in self.mult:
                    raise ModelError(f"missing product {a}*{b}")
        # associativity on basis triples
        for a in self.order:
            for b in self.order:
                for c in self.order:
                    if self.basis[a] + self.basis[b] + self.basis[c] > self.dim:
                        continue
                    x = self.mul(self.mul({a: Fraction(1)}, {b: Fraction(1)}), {c: Fraction(1)})
                    y = self.mul({a: Fraction(1)}, self.mul({b: Fraction(1)}, {c: Fraction(1)}))
                    if _strip(x) != _strip(y):
                        raise ModelError(f"multiplication table is not associative at {a}, {b}, {c}")

    def element(self, data: Mapping[str, Any]) -> dict:
        for k in data:
            if k not in self.basis:
                raise ModelError(f"unknown basis element {k!r}")
        return {k: v for k, v in data.items()}

    def one(self) -> dict:
        return {self.unit: Fraction(1)}

    def add(self, a: dict, b: dict) -> dict:
        out = dict(a)
        for k, v in b.items():
            out[k] = out[k] + v if k in out else v
        return out

    def scale(self, a: dict, c) -> dict:
        return {k: v * c for k, v in a.items()}

    def mul(self, a: dict, b: dict) -> dict:
        out: dict = {}
        for x, cx in a.items():
            for y, cy in b.items():
                if self.basis[x] + self.basis[y] > self.dim:
                    continue
                for z, s in self.mult.get((x, y), {}).items():
                    term = (cx * cy) * s
                    out[z] = out[z] + term if z in out else term
        return out

    def power(self, a: dict, k: int) -> dict:
        out = self.one()
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def part(self, a: dict, degree: int) -> dict:
        return {k: v for k, v in a.items() if self.basis[k] == degree}

    def integrate(self, a: dict, zero=Fraction(0)):
        acc = zero
        for k, v in a.items():
            if self.basis[k] == self.dim and k in self.integrate_values:
                acc = acc + v * self.integrate_values[k]
        return acc


def _strip(a: dict) -> dict:
    return {k: v for k, v in a.items() if v}


@dataclass
class VarietyModel:
    ring: GradedRing
    chern: dict
    divisors: list = field(default_factory=list)
    name: str = ""

    def __post_init__(self):
        r = self.ring
        self.chern = {k: Fraction(v) for k, v in r.element(self.chern).items()}
        if self.chern.get(r.unit, 0) != 1 or any(r.basis[k] == 0 and k != r.unit and v
                                                 for k, v in self.chern.items()):
            raise ModelError("total Chern class must have degree-0 part 1")
        clean = []
        for cls, delta in self.divisors:
            cls = {k: Fraction(v) for k, v in r.element(cls).items() if Fraction(v)}
            if any(r.basis[k] != 1 for k in cls):
                raise ModelError("divisor classes must have degree 1")
            clean.append((cls, int(delta)))
        self.divisors = clean

    @property
    def dim(self) -> int:
        return self.ring.dim

    def chern_class(self, i: int) -> dict:
        return self.ring.part(self.chern, i)

    def euler_number(self) -> Fraction:
        return self.ring.integrate(self.chern_class(self.dim))

    def with_divisors(self, divisors) -> "VarietyModel":
        return VarietyModel(self.ring, self.chern, list(divisors), self.name)


def _hname(j: int) -> str:
    return "1" if j == 0 else ("h" if j == 1 else f"h^{j}")


def _truncated_polynomial_ring(dim: int, top: Fraction) -> GradedRing:
    basis = {_hname(j): j for j in range(dim + 1)}
    mult = {(_hname(i), _hname(j)): {_hname(i + j): 1}
            for i in range(dim + 1) for j in range(dim + 1) if i + j <= dim}
    return GradedRing(basis, mult, {_hname(dim): top})


def _series_in_h(coeffs: list[Fraction], dim: int) -> dict:
    return {_hname(j): Fraction(c) for j, c in enumerate(coeffs[:dim + 1]) if c}


def _ci_chern(n: int, degrees: list[int], dim: int) -> list[Fraction]:
    c = [Fraction(comb(n + 1, j)) for j in range(dim + 1)]
    for d in degrees:
        # divide by (1 + d h)
        inv = [Fraction((-d) ** j) for j in range(dim + 1)]
        c = [sum((c[i] * inv[j - i] for i in range(j + 1)), Fraction(0)) for j in range(dim + 1)]
    return c


def model_point() -> VarietyModel:
    return VarietyModel(GradedRing({"1": 0}, {}, {"1": 1}), {"1": 1}, [], "point")


def model_projective(n: int) -> VarietyModel:
    if n < 1:
        raise ModelError("projective space needs n >= 1")
    ring = _truncated_polynomial_ring(n, Fraction(1))
    return VarietyModel(ring, _series_in_h(_ci_chern(n, [], n), n), [], f"P{n}")


def model_ci(n: int, degrees: list[int]) -> VarietyModel:
    degrees = [int(d) for d in degrees]
    if n < 1 or any(d < 1 for d in degrees):
        raise ModelError("complete intersection needs n >= 1 and degrees >= 1")
    dim = n - len(degrees)
    if dim < 0:
        raise ModelError("too many equations")
    top = Fraction(1)
    for d in degrees:
        top *= d
    if dim == 0:
        ring = GradedRing({"1": 0}, {}, {"1": top})
        return VarietyModel(ring, {"1": 1}, [], f"CI{n}{degrees}")
    ring = _truncated_polynomial_ring(dim, top)
    return VarietyModel(ring, _series_in_h(_ci_chern(n, degrees, dim), dim), [],
                        f"CI{n}{tuple(degrees)}")


def model_hypersurface(n: int, d: int) -> VarietyModel:
    m = model_ci(n, [d])
    m.name = f"X{d}⊂P{n}"
    return m


def model_product(a: VarietyModel, b: VarietyModel) -> VarietyModel:
    ra, rb = a.ring, b.ring

    def nm(x, y):
        if x == ra.unit and y == rb.unit:
            return "1"
        if y == rb.unit:
            return f"{x}|1"
        if x == ra.unit:
            return f"1|{y}"
        return f"{x}|{y}"

    basis = {nm(x, y): ra.basis[x] + rb.basis[y] for x in ra.basis for y in rb.basis}
    mult = {}
    for x1 in ra.basis:
        for y1 in rb.basis:
            for x2 in ra.basis:
                for y2 in rb.basis:
                    px = ra.mult.get((x1, x2), {}) if ra.basis[x1] + ra.basis[x2] <= ra.dim else {}
                    py = rb.mult.get((y1, y2), {}) if rb.basis[y1] + rb.basis[y2] <= rb.dim else {}
                    mult[(nm(x1, y1), nm(x2, y2))] = {nm(u, v): cu * cv for u, cu in px.items()
                                                      for v, cv in py.items()}
    integrate = {nm(x, y): vx * vy for x, vx in ra.integrate_values.items()
                 for y, vy in rb.integrate_values.items()}
    ring = GradedRing(basis, mult, integrate)
    chern = {nm(x, y): cx * cy for x, cx in a.chern.items() for y, cy in b.chern.items()}
    divisors = [({nm(k, rb.unit): v for k, v in cls.items()}, d) for cls, d in a.divisors]
    divisors += [({nm(ra.unit, k): v for k, v in cls.items()}, d) for cls, d in b.divisors]
    return VarietyModel(ring, chern, divisors, f"{a.name}x{b.name}")


def model_explicit(data: Mapping) -> VarietyModel:
    """Model from explicit data.

    ``basis``: list of {name, degree} (the degree-0 element must be named "1"),
    ``mult``: list of [a, b, {c: value}], ``chern``: {name: value},
    ``integrate``: {name: value}, ``divisors``: list of {class, delta}.
    """
    try:
        basis = {b["name"]: int(b["degree"]) for b in data["basis"]}
        mult = {(a, b): {k: Fraction(v) for k, v in prod.items()} for a, b, prod in data["mult"]}
        ring = GradedRing(basis, mult, {k: Fraction(v) for k, v in data["integrate"].items()})
        chern = {k: Fraction(v) for k, v in data["chern"].items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"malformed explicit model: {exc}") from exc
    return VarietyModel(ring, chern, _parse_divisors(ring, data.get("divisors", [])),
                        data.get("name", "explicit"))


def _parse_divisors(ring: GradedRing, items) -> list:
    out = []
    for item in items:
        cls = item["class"]
        if isinstance(cls, str):
            cls = _parse_class(cls)
        out.append((cls, int(item["delta"])))
    return out


def _parse_class(text: str) -> dict:
    """'E', '-E', '2H-E' style integer combinations of basis names."""
    out: dict = {}
    import re
    for sign, coef, name in re.findall(r"([+-]?)\s*(\d*)\s*\*?\s*([A-Za-z_][\w^]*)", text.replace(" ", "")):
        c = Fraction(int(coef) if coef else 1) * (-1 if sign == "-" else 1)
        out[name] = out.get(name, Fraction(0)) + c
    if not out:
        raise ModelError(f"cannot parse divisor class {text!r}")
    return out


def model_blowup_p2() -> VarietyModel:
    """P^2 blown up at a point: H^2 = pt, E^2 = -pt, H.E = 0, c = 1 + (3H - E) + 4 pt."""
    basis = {"1": 0, "H": 1, "E": 1, "pt": 2}
    mult = {("H", "H"): {"pt": 1}, ("E", "E"): {"pt": -1}, ("H", "E"): {}}
    ring = GradedRing(basis, mult, {"pt": 1})
    return VarietyModel(ring, {"1": 1, "H": 3, "E": -1, "pt": 4}, [], "F1")


PRESETS = {
    "point": model_point,
    "pt": model_point,
    "P1": lambda: model_projective(1),
    "P2": lambda: model_projective(2),
    "P3": lambda: model_projective(3),
    "P1xP1": lambda: model_product(model_projective(1), model_projective(1)),
    "K3": lambda: model_hypersurface(3, 4),
    "F1": model_blowup_p2,
}


def load_model(spec) -> VarietyModel:
    """Build a model from a preset name, a JSON string, or a decoded JSON object."""
    if isinstance(spec, str):
        s = spec.strip()
        if s in PRESETS:
            return PRESETS[s]()
        try:
            spec = json.loads(s)
        except json.JSONDecodeError as exc:
            raise ModelError(f"unknown model {spec!r}") from exc
    if not isinstance(spec, Mapping) or "type" not in spec:
        raise ModelError("model description needs a 'type'")
    t = spec["type"]
    try:
        if t == "point":
            m = model_point()
        elif t == "preset":
            m = PRESETS[spec["name"]]()
        elif t == "projective":
            m = model_projective(int(spec["n"]))
        elif t == "hypersurface":
            m = model_hypersurface(int(spec["n"]), int(spec["d"]))
        elif t == "ci":
            m = model_ci(int(spec["n"]), list(spec["degrees"]))
        elif t == "product":
            factors = [load_model(f) for f in spec["factors"]]
            m = factors[0]
            for f in factors[1:]:
                m = model_product(m, f)
        elif t == "explicit":
            return model_explicit(spec)
        else:
            raise ModelError(f"unknown model type {t!r}")
    except KeyError as exc:
        raise ModelError(f"model description is missing {exc}") from exc
    if spec.get("divisors"):
        m = m.with_divisors(_parse_divisors(m.ring, spec["divisors"]))
    return m
