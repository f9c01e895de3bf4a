"""Tests for Smith normal form and the homology tables built from it."""

import random
from itertools import combinations
from math import gcd

import pytest
import sympy

from khovanov.core.bracket import Q, jones_polynomial
from khovanov.core.coeff import SpecVariant
from khovanov.core.complex import build_complex, specialize_complex
from khovanov.core.diagram import mirror, parse_pd
from khovanov.core.homology import (
    check_duality,
    compute_homology,
    euler_characteristic,
    f2_from_integral,
    homology_f2,
    homology_unified,
    homology_z,
    identity,
    prime_power_orders,
    rank_f2,
    render_table,
    smith,
    table_euler,
)

TREFOIL = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"
FIGURE_EIGHT = "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)"


@pytest.fixture(scope="module")
def trefoil():
    return build_complex(parse_pd(TREFOIL))


@pytest.fixture(scope="module")
def left_trefoil():
    return build_complex(mirror(parse_pd(TREFOIL)))


def test_smith_small():
    a = [[2, 4], [6, 8]]
    form = smith(a)
    assert form.diagonal == [2, 4]
    assert form.verify(a)


def test_smith_identity_and_zero():
    assert smith(identity(3)).invariant_factors == [1, 1, 1]
    zero = smith([[0, 0, 0], [0, 0, 0]])
    assert zero.rank == 0
    assert zero.verify([[0, 0, 0], [0, 0, 0]])
    assert smith([]).rank == 0


def test_smith_rectangular_torsion():
    a = [[0, 2, 0], [0, 0, 3]]
    form = smith(a)
    assert form.invariant_factors == [1, 6]
    assert form.verify(a)


def test_smith_without_transforms_cannot_verify():
    form = smith([[1]], transforms=False)
    with pytest.raises(ValueError):
        form.verify([[1]])


def _determinantal_factors(a):
    """Invariant factors as quotients of successive gcds of k x k minors."""
    m = sympy.Matrix(a)
    factors, previous = [], 1
    for k in range(1, m.rank() + 1):
        g = 0
        for rows in combinations(range(m.rows), k):
            for cols in combinations(range(m.cols), k):
                g = gcd(g, abs(int(m.extract(list(rows), list(cols)).det())))
        factors.append(g // previous)
        previous = g
    return factors


def test_smith_matches_determinantal_divisors():
    rng = random.Random(7)
    for _ in range(40):
        rows, cols = rng.randint(1, 4), rng.randint(1, 4)
        a = [[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rows)]
        form = smith(a)
        assert form.verify(a), a
        assert form.invariant_factors == _determinantal_factors(a), a


def _naive_invariant_factors(a):
    """Euclid steps down to a diagonal, then gcd/lcm swaps into a divisibility chain."""
    m = [list(row) for row in a]
    rows, cols = len(m), len(m[0]) if m else 0
    diag = []
    for t in range(min(rows, cols)):
        nonzero = [(i, j) for i in range(t, rows) for j in range(t, cols) if m[i][j]]
        if not nonzero:
            break
        i, j = nonzero[0]
        m[t], m[i] = m[i], m[t]
        for row in m:
            row[t], row[j] = row[j], row[t]
        while any(m[i][t] for i in range(t + 1, rows)) or any(m[t][j] for j in range(t + 1, cols)):
            for i in range(t + 1, rows):
                while m[i][t]:
                    f = m[t][t] // m[i][t]
                    m[t] = [x - f * y for x, y in zip(m[t], m[i])]
                    m[t], m[i] = m[i], m[t]
            for j in range(t + 1, cols):
                while m[t][j]:
                    f = m[t][t] // m[t][j]
                    for row in m:
                        row[t] -= f * row[j]
                        row[t], row[j] = row[j], row[t]
        diag.append(abs(m[t][t]))
    for x in range(len(diag)):
        for y in range(x + 1, len(diag)):
            g = gcd(diag[x], diag[y])
            diag[x], diag[y] = g, diag[x] * diag[y] // g
    return diag


def _scramble(diag, rows, cols, rng):
    """diag placed in a rows x cols matrix, then mixed by random unimodular row and column operations."""
    a = [[0] * cols for _ in range(rows)]
    for k, d in enumerate(diag):
        a[k][k] = d
    for _ in range(3 * (rows + cols)):
        if rng.random() < 0.5:
            i, j = rng.sample(range(rows), 2)
            f = rng.choice([-2, -1, 1, 2])
            a[i] = [x + f * y for x, y in zip(a[i], a[j])]
        else:
            i, j = rng.sample(range(cols), 2)
            f = rng.choice([-2, -1, 1, 2])
            for row in a:
                row[i] += f * row[j]
    rng.shuffle(a)
    return a


@pytest.mark.parametrize(
    "rows, cols, seed",
    [(8, 8, 1), (15, 22, 2), (30, 30, 3), (40, 40, 4), (40, 28, 5)],
)
def test_smith_recovers_planted_factors(rows, cols, seed):
    rng = random.Random(seed)
    rank = min(rows, cols) - rng.randint(0, 3)
    diag = sorted(rng.choice([1, 1, 1, 2, 2, 6, 12]) for _ in range(rank))
    a = _scramble(diag, rows, cols, rng)
    form = smith(a)
    assert form.verify(a)
    assert form.rank == rank
    assert form.invariant_factors == diag
    assert _naive_invariant_factors(a) == diag


@pytest.mark.parametrize(
    "rows, cols, seed",
    [(6, 9, 11), (18, 18, 12), (25, 40, 13), (40, 40, 14), (40, 12, 15)],
)
def test_smith_matches_naive_reduction(rows, cols, seed):
    rng = random.Random(seed)
    a = [[rng.choice([0, 0, 0, 0, 1, -1, 2]) for _ in range(cols)] for _ in range(rows)]
    form = smith(a)
    assert form.verify(a)
    assert form.invariant_factors == _naive_invariant_factors(a)


def test_naive_reduction_agrees_with_minors():
    rng = random.Random(21)
    for _ in range(30):
        a = [[rng.randint(-6, 6) for _ in range(3)] for _ in range(rng.randint(1, 4))]
        assert _naive_invariant_factors(a) == _determinantal_factors(a), a


def test_prime_power_orders_and_f2_rank():
    assert prime_power_orders(12) == [3, 4]
    assert prime_power_orders(2) == [2]
    assert rank_f2([0b11, 0b01, 0b10]) == 2
    assert rank_f2([]) == 0


def test_trefoil_even_homology(trefoil):
    table = homology_z(specialize_complex(trefoil, SpecVariant.EVEN))
    assert table.variant == "even"
    assert table.groups() == {
        (0, 1): (1, ()),
        (0, 3): (1, ()),
        (2, 5): (1, ()),
        (3, 7): (0, (2,)),
        (3, 9): (1, ()),
    }


def test_trefoil_odd_homology(trefoil):
    table = homology_z(specialize_complex(trefoil, SpecVariant.ODD))
    assert table.groups() == {
        (0, 1): (1, ()),
        (0, 3): (1, ()),
        (2, 5): (1, ()),
        (2, 7): (1, ()),
        (3, 7): (1, ()),
        (3, 9): (1, ()),
    }


def test_ungraded_homology_sums_over_q(trefoil):
    table = homology_z(specialize_complex(trefoil, SpecVariant.EVEN), graded_by_q=False)
    assert table.groups() == {(0, 0): (2, ()), (2, 0): (1, ()), (3, 0): (1, (2,))}


def test_homology_z_rejects_unified(trefoil):
    with pytest.raises(ValueError):
        homology_z(specialize_complex(trefoil, SpecVariant.UNIFIED))
    with pytest.raises(ValueError):
        compute_homology(trefoil)


def test_unified_homology_carries_both_specializations(trefoil):
    table = homology_unified(specialize_complex(trefoil, SpecVariant.UNIFIED))
    assert table.variant == "unified"
    assert set(table.specializations) == {"even", "odd"}
    involution = {(e.i, e.q): (e.plus, e.minus) for e in table.involution}
    assert involution[(0, 1)] == (1, 1)
    assert involution[(2, 7)] == (0, 1)
    assert involution[(3, 7)] == (0, 1)


def test_unified_unknot():
    c = build_complex(parse_pd("circles=1"))
    table = compute_homology(specialize_complex(c, SpecVariant.UNIFIED))
    assert table.groups() == {(0, -1): (2, ()), (0, 1): (2, ())}


def test_f2_agrees_across_variants(trefoil):
    even = homology_z(specialize_complex(trefoil, SpecVariant.EVEN))
    predicted = f2_from_integral(even)
    assert predicted == {(0, 1): 1, (0, 3): 1, (2, 5): 1, (2, 7): 1, (3, 7): 1, (3, 9): 1}
    for variant in (SpecVariant.EVEN, SpecVariant.ODD, SpecVariant.MOD2):
        f2 = homology_f2(specialize_complex(trefoil, variant))
        assert {k: v[0] for k, v in f2.groups().items()} == predicted
    assert homology_f2(trefoil).variant == "mod2"


def test_universal_coefficient_duality(trefoil, left_trefoil):
    for variant in (SpecVariant.EVEN, SpecVariant.ODD):
        original = homology_z(specialize_complex(trefoil, variant))
        mirrored = homology_z(specialize_complex(left_trefoil, variant))
        result = check_duality(mirrored, original)
        assert result.passed, result.details
    even = homology_z(specialize_complex(trefoil, SpecVariant.EVEN))
    assert not check_duality(even, even).passed


def test_euler_characteristic(trefoil):
    jones = sympy.expand(Q + Q**3 + Q**5 - Q**9)
    assert euler_characteristic(trefoil) == jones
    assert table_euler(homology_z(specialize_complex(trefoil, SpecVariant.ODD))) == jones


@pytest.mark.parametrize(
    "pd, jones",
    [
        ("mirror", Q**-1 + Q**-3 + Q**-5 - Q**-9),
        (FIGURE_EIGHT, Q**-5 + Q**5),
    ],
)
def test_euler_characteristic_in_negative_degrees(pd, jones):
    d = mirror(parse_pd(TREFOIL)) if pd == "mirror" else parse_pd(pd)
    c = build_complex(d)
    assert min(c.degrees()) < 0
    assert jones_polynomial(d) == sympy.expand(jones)
    chi = euler_characteristic(c)
    assert chi == sympy.expand(jones)
    assert not chi.atoms(sympy.Float)
    for variant in (SpecVariant.EVEN, SpecVariant.ODD):
        table = homology_z(specialize_complex(c, variant))
        assert any(e.i < 0 for e in table.entries)
        assert table_euler(table) == sympy.expand(jones)


def test_render_table(trefoil):
    text = render_table(homology_z(specialize_complex(trefoil, SpecVariant.EVEN)))
    lines = text.splitlines()
    assert lines[0] == "variant: even"
    assert lines[2].split()[0] == "9"
    assert "Z/2" in text
    assert len(lines) == 7


def test_render_mod2_and_unified(trefoil):
    mod2 = render_table(homology_f2(trefoil))
    assert "F" in mod2
    assert "Z" not in mod2
    unified = render_table(homology_unified(specialize_complex(trefoil, SpecVariant.UNIFIED)))
    assert "pi eigenspaces" in unified
