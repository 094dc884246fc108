from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qjl.dsl import BinOp, Sym, format_poly, node_weight, parse_expr, parse_poly
from qjl.errors import ExprSyntaxError, QJLError
from qjl.quasijacobi import GeneratorPoly, monomials_of_weight


def test_two_term_expression():
    node = parse_expr("9/2*E1^2 - 3/2*P")
    assert isinstance(node, BinOp) and node.op == "-"
    assert node_weight(node) == 2
    assert format_poly(parse_poly("9/2*E1^2 - 3/2*P")) == "9/2*E1^2 - 3/2*P"


def test_single_symbol():
    node = parse_expr("E1")
    assert isinstance(node, Sym) and node.name == "E1"


def test_syntax_error_position():
    with pytest.raises(ExprSyntaxError) as info:
        parse_expr("E1 + + E3")
    assert (info.value.line, info.value.column) == (1, 6)


def test_error_on_second_line():
    with pytest.raises(ExprSyntaxError) as info:
        parse_expr("E1 +\n  * P")
    assert info.value.line == 2 and info.value.column == 3


def test_unknown_symbol():
    with pytest.raises(QJLError):
        parse_poly("E7 + P")


def test_parentheses_and_powers():
    assert parse_poly("(E1 + P)^2") == parse_poly("E1^2 + 2*E1*P + P^2")
    assert parse_poly("-E1") == parse_poly("0 - E1")


def test_imaginary_unit():
    f = parse_poly("I*E1")
    (c,) = f.terms.values()
    assert c.im == 1


@st.composite
def polys(draw):
    w = draw(st.integers(0, 5))
    mons = monomials_of_weight(w) if w else [(0,) * 7]
    picks = draw(st.lists(st.sampled_from(mons), min_size=1, max_size=4, unique=True))
    out = GeneratorPoly({})
    for m in picks:
        c = draw(st.fractions(min_value=-9, max_value=9, max_denominator=5).filter(bool))
        out = out + GeneratorPoly({m: c})
    return out


@given(polys())
def test_print_parse_round_trip(f):
    text = format_poly(f)
    assert parse_poly(text) == f
    assert format_poly(parse_poly(text)) == text
