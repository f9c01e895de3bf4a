import random
from itertools import product

import pytest

from khovanov.core.coeff import (
    NEGATE_ALL,
    ONE,
    PI,
    SWAP_XY,
    X_UNIT,
    XY_UNIT,
    Y_UNIT,
    Z_UNIT,
    ChronDegree,
    Monomial,
    RingAutomorphism,
    RingElem,
    SDeg,
    SpecVariant,
    Unit,
    ZPi,
    lam,
    specialize,
    unit_quotients,
)
from khovanov.core.frobenius import disjoint_tori


def test_x_and_y_square_to_one():
    x = RingElem.parse("X")
    y = RingElem.parse("Y")
    assert x * x == 1
    assert y * y == 1
    assert (x * y).render() == "X*Y"


def test_z_is_invertible():
    z = RingElem.parse("Z")
    assert z * RingElem.parse("Z^-1") == 1
    assert (Z_UNIT ** -2).to_elem() == RingElem.parse("Z^-2")


def test_parse_render():
    r = RingElem.parse("-X*Y*Z^-2 + 3")
    assert RingElem.parse(r.render()) == r
    assert r.coefficient(Monomial(1, 1, -2)) == -1
    assert r.coefficient(Monomial()) == 3
    assert RingElem.parse("X*Z + Y*Z") - RingElem.parse("Y*Z") == RingElem.parse("X*Z")


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        RingElem.parse("X*W")
    with pytest.raises(ValueError):
        RingElem.parse("")


def test_units():
    u = -X_UNIT * Z_UNIT
    assert u.inverse() * u == ONE
    assert RingElem.parse("-X*Z").as_unit() == u
    assert not RingElem.parse("1 + X").is_unit()
    with pytest.raises(ValueError):
        RingElem.parse("2").as_unit()


def test_lambda_on_generators():
    plus, minus = ChronDegree(1, 0), ChronDegree(0, -1)
    assert lam(plus, plus) == X_UNIT
    assert lam(minus, minus) == Y_UNIT
    assert lam(plus, minus) == Z_UNIT.inverse()
    assert lam(minus, plus) == Z_UNIT


def test_splitting_degrees_of_generators():
    assert X_UNIT.sdeg == SDeg(1, 0)
    assert Y_UNIT.sdeg == SDeg(1, 0)
    assert Z_UNIT.sdeg == SDeg(0, -1)
    assert XY_UNIT.sdeg == SDeg(0, 0)
    assert SDeg(3, -1) == SDeg(1, -1)


def test_homogeneous_sdeg():
    assert RingElem.parse("X*Z + Y*Z").homogeneous_sdeg() == SDeg(1, -1)
    assert RingElem.parse("1 + X").homogeneous_sdeg() is None


@pytest.mark.parametrize(
    "variant, expected",
    [
        (SpecVariant.EVEN, 2),
        (SpecVariant.ODD, 0),
        (SpecVariant.NEGATED, 2),
        (SpecVariant.MOD2, 0),
        (SpecVariant.UNIFIED, ZPi(1, 1)),
    ],
)
def test_specialize_torus_value(variant, expected):
    torus = RingElem.parse("X*Z + Y*Z")
    assert specialize(torus, variant) == expected


def test_zpi_arithmetic():
    assert PI * PI == ZPi(1, 0)
    assert (ZPi(2, 3) * ZPi(1, -1)).at(1) == ZPi(2, 3).at(1) * ZPi(1, -1).at(1)
    assert (ZPi(2, 3) * ZPi(1, -1)).at(-1) == ZPi(2, 3).at(-1) * ZPi(1, -1).at(-1)
    assert str(ZPi(1, -1)) == "1 - pi"
    assert not ZPi()


def test_automorphism_presets_fix_xy():
    xy = RingElem.parse("X*Y")
    assert NEGATE_ALL(xy) == xy
    assert SWAP_XY(xy) == xy
    assert NEGATE_ALL(RingElem.parse("X*Z + Y*Z")) == RingElem.parse("X*Z + Y*Z")
    assert SWAP_XY(RingElem.parse("X")) == RingElem.parse("Y")


def test_automorphism_validation():
    with pytest.raises(ValueError):
        RingAutomorphism(x_image=Z_UNIT)
    with pytest.raises(ValueError):
        RingAutomorphism(x_image=-X_UNIT)


def test_generator_scale():
    assert NEGATE_ALL.generator_scale(SDeg(1, -1)) == ONE
    assert NEGATE_ALL.generator_scale(SDeg(0, -1)) == Unit(-1)
    assert SWAP_XY.generator_scale(SDeg(1, 0)) == XY_UNIT


def test_negated_is_even_after_negate_all():
    r = RingElem.parse("3*X*Z^2 - Y + 5*X*Y*Z^-1")
    assert specialize(r, SpecVariant.NEGATED) == specialize(NEGATE_ALL(r), SpecVariant.EVEN)


def test_unit_quotients_of_the_two_tori():
    sequential = disjoint_tori()
    interleaved = disjoint_tori(interleaved=True)
    assert sequential == RingElem.parse("2*Z^2 + 2*X*Y*Z^2")
    assert interleaved == RingElem.parse("2*X*Z^4 + 2*Y*Z^4")
    ratios = unit_quotients(interleaved, sequential)
    assert ratios == [Unit(1, Monomial(0, 1, 2)), Unit(1, Monomial(1, 0, 2))]
    for u in ratios:
        assert sequential.scale(u) == interleaved


def test_unit_quotients_signs_and_failures():
    r = RingElem.parse("3*X - Z")
    assert unit_quotients(-r, r) == [Unit(-1)]
    assert unit_quotients(r.scale(XY_UNIT), r) == [XY_UNIT]
    assert unit_quotients(RingElem.parse("3*X + Z"), r) == []
    assert unit_quotients(RingElem.parse("6*X - 2*Z"), r) == []
    assert unit_quotients(0, 0) == [ONE]
    assert unit_quotients(r, 0) == []
    assert unit_quotients(0, r) == []


GRID = range(-10, 11)


def test_lambda_is_antisymmetric_and_unital_on_the_grid():
    degrees = [ChronDegree(a, b) for a in GRID for b in GRID]
    zero = ChronDegree()
    for d in degrees:
        assert lam(d, zero) == ONE
        assert lam(zero, d) == ONE
        for e in degrees:
            assert lam(d, e) * lam(e, d) == ONE


def test_lambda_is_determined_by_generators():
    plus, minus = ChronDegree(1, 0), ChronDegree(0, -1)
    coarse = range(-10, 11, 5)
    for alpha, beta in product(coarse, repeat=2):
        d = ChronDegree(alpha, beta)
        for a2 in coarse:
            for b2 in coarse:
                e = ChronDegree(a2, b2)
                expected = (
                    lam(plus, plus) ** (alpha * a2)
                    * lam(minus, minus) ** (beta * b2)
                    * lam(plus, minus) ** (-alpha * b2)
                    * lam(minus, plus) ** (-beta * a2)
                )
                assert lam(d, e) == expected, (d, e)


@pytest.mark.parametrize("seed", range(5))
def test_lambda_is_bilinear(seed):
    rng = random.Random(seed)

    def pick() -> ChronDegree:
        return ChronDegree(rng.randint(-10, 10), rng.randint(-10, 10))

    for _ in range(200):
        d, d2, e = pick(), pick(), pick()
        assert lam(d + d2, e) == lam(d, e) * lam(d2, e)
        assert lam(e, d + d2) == lam(e, d) * lam(e, d2)


def _random_elem(rng: random.Random) -> RingElem:
    terms: dict[Monomial, int] = {}
    for _ in range(rng.randint(0, 5)):
        mono = Monomial(rng.randint(0, 1), rng.randint(0, 1), rng.randint(-3, 3))
        terms[mono] = terms.get(mono, 0) + rng.randint(-4, 4)
    return RingElem(terms)


@pytest.mark.parametrize(
    "variant",
    [SpecVariant.EVEN, SpecVariant.ODD, SpecVariant.NEGATED, SpecVariant.UNIFIED],
    ids=lambda v: v.value,
)
def test_specialization_is_a_ring_map(variant):
    rng = random.Random(variant.value)
    for _ in range(300):
        r, s = _random_elem(rng), _random_elem(rng)
        assert specialize(r * s, variant) == specialize(r, variant) * specialize(s, variant)
        assert specialize(r + s, variant) == specialize(r, variant) + specialize(s, variant)
    assert specialize(1, variant) == (ZPi(1, 0) if variant is SpecVariant.UNIFIED else 1)


def test_mod2_specialization_is_multiplicative():
    rng = random.Random(2)
    for _ in range(300):
        r, s = _random_elem(rng), _random_elem(rng)
        product = specialize(r, SpecVariant.MOD2) * specialize(s, SpecVariant.MOD2)
        assert specialize(r * s, SpecVariant.MOD2) == product % 2
