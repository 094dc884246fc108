from __future__ import annotations

import json
from fractions import Fraction

import pytest

from qjl.errors import ModelError
from qjl.models import (PRESETS, GradedRing, load_model, model_ci, model_hypersurface,
                        model_product, model_projective)


def c1_squared(m):
    r = m.ring
    return r.integrate(r.mul(m.chern_class(1), m.chern_class(1)))


def test_projective_space_euler_numbers():
    for n in range(1, 5):
        assert model_projective(n).euler_number() == n + 1


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_surface_chern_numbers(d):
    m = model_hypersurface(3, d)
    assert m.euler_number() == d ** 3 - 4 * d ** 2 + 6 * d
    assert c1_squared(m) == d * (4 - d) ** 2


def test_k3():
    m = PRESETS["K3"]()
    assert m.euler_number() == 24
    assert not m.chern_class(1)


def test_blowup_noether():
    m = PRESETS["F1"]()
    assert c1_squared(m) == 8 and m.euler_number() == 4
    assert (c1_squared(m) + m.euler_number()) / 12 == 1


def test_complete_intersection_k3():
    # (2,3) complete intersection in P^4 is a K3 surface
    m = model_ci(4, [2, 3])
    assert m.euler_number() == 24 and not m.chern_class(1)


def test_product_is_multiplicative():
    a, b = model_projective(1), model_projective(2)
    assert model_product(a, b).euler_number() == a.euler_number() * b.euler_number()


def test_load_model_forms():
    assert load_model("P2").euler_number() == 3
    assert load_model('{"type": "projective", "n": 3}').euler_number() == 4
    assert load_model({"type": "hypersurface", "n": 3, "d": 4}).euler_number() == 24
    prod = load_model({"type": "product", "factors": ["P1", {"type": "projective", "n": 1}]})
    assert prod.euler_number() == 4
    pair = load_model({"type": "preset", "name": "F1", "divisors": [{"class": "E", "delta": 1}]})
    assert pair.divisors == [({"E": Fraction(1)}, 1)]


def test_explicit_model_round_trip():
    data = {"basis": [{"name": "1", "degree": 0}, {"name": "h", "degree": 1}, {"name": "pt", "degree": 2}],
            "mult": [["h", "h", {"pt": 1}]], "integrate": {"pt": 1},
            "chern": {"1": 1, "h": 3, "pt": 3}}
    m = load_model({"type": "explicit", **data})
    assert m.euler_number() == 3 and c1_squared(m) == 9
    assert load_model(json.dumps({"type": "explicit", **data})).euler_number() == 3


def test_bad_models():
    with pytest.raises((ModelError, KeyError)):
        load_model("nosuch")
    with pytest.raises(ModelError):
        load_model({"type": "hypersurface", "n": 3})
    with pytest.raises(ModelError):
        load_model({"type": "widget"})


def test_ring_rejects_non_commutative_table():
    with pytest.raises(ModelError):
        GradedRing({"1": 0, "a": 1, "b": 1, "pt": 2},
                   {("a", "b"): {"pt": 1}, ("b", "a"): {"pt": 2}}, {"pt": 1})
