"""Tests for the Kauffman bracket and the unnormalized Jones polynomial."""

import pytest
import sympy

from khovanov.core.bracket import LOOP, Q, coefficients, jones_polynomial, kauffman_bracket, mirror_jones
from khovanov.core.diagram import mirror, parse_pd


@pytest.mark.parametrize(
    "pd, expected",
    [
        ("circles=1", {-1: 1, 1: 1}),
        ("X(1,2,2,1)", {-1: 1, 1: 1}),
        ("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)", {1: 1, 3: 1, 5: 1, 9: -1}),
        ("X(4,1,3,2) X(2,3,1,4)", {0: 1, 2: 1, 4: 1, 6: 1}),
        ("X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)", {-5: 1, 5: 1}),
    ],
)
def test_jones_polynomial(pd, expected):
    assert coefficients(jones_polynomial(parse_pd(pd))) == expected


def test_bracket_of_a_circle():
    assert kauffman_bracket(parse_pd("circles=2")) == LOOP**2


def test_mirror_substitutes_inverse_q():
    d = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)")
    assert jones_polynomial(mirror(d)) == mirror_jones(jones_polynomial(d))
    assert coefficients(mirror_jones(jones_polynomial(d))) == {-9: -1, -5: 1, -3: 1, -1: 1}


def test_coefficients_rejects_other_symbols():
    with pytest.raises(ValueError):
        coefficients(Q + sympy.Symbol("t"))
