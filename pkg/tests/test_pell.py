import math
from fractions import Fraction

import pytest

from rqlab.arith import is_square, is_squarefree
from rqlab.pell import (
    canonical_integral_unit,
    continued_fraction_sqrt,
    convergents_sqrt,
    decompose_norm_one,
    fundamental_unit,
    sqrt_product_in_K1_test,
)

SQUAREFREE = [d for d in range(2, 501) if is_squarefree(d)]


def test_continued_fractions():
    assert continued_fraction_sqrt(2) == (1, [2])
    assert continued_fraction_sqrt(15) == (3, [1, 6])
    assert continued_fraction_sqrt(442) == (21, [42])
    assert continued_fraction_sqrt(94) == (9, [1, 2, 3, 1, 1, 5, 1, 8, 1, 5, 1, 1, 3, 2, 1, 18])


def test_convergents_approach_sqrt():
    for x, y in list(convergents_sqrt(7, 12))[4:]:
        assert abs(Fraction(x, y) ** 2 - 7) < Fraction(1, y * y) * 10


def test_fixture_units():
    assert (fundamental_unit(2).x, fundamental_unit(2).y, fundamental_unit(2).norm) == (1, 1, -1)
    assert (fundamental_unit(5).x, fundamental_unit(5).y) == (Fraction(1, 2), Fraction(1, 2))
    assert (fundamental_unit(65).x, fundamental_unit(65).y, fundamental_unit(65).norm) == (8, 1, -1)
    assert (fundamental_unit(442).x, fundamental_unit(442).y, fundamental_unit(442).norm) == (21, 1, -1)
    assert (fundamental_unit(15).x, fundamental_unit(15).y, fundamental_unit(15).norm) == (4, 1, 1)
    assert (fundamental_unit(94).x, fundamental_unit(94).y) == (2143295, 221064)


@pytest.mark.parametrize("d", SQUAREFREE)
def test_pell_identity(d):
    u = fundamental_unit(d)
    assert u.x * u.x - d * u.y * u.y == u.norm
    assert u.norm in (1, -1) and u.x > 0 and u.y > 0
    assert (u.x.denominator == 2) == (d % 4 == 1 and u.x.denominator != 1)


def test_unit_minimality_brute_force():
    """No unit with smaller y exists, searching y (scaled) up to 10^4."""
    for d in SQUAREFREE:
        u = fundamental_unit(d)
        k = 2 if d % 4 == 1 else 1
        Y = int(u.y * k)
        for y in range(1, min(Y, 10**4 + 1)):
            for n in (k * k, -k * k):
                assert not is_square(d * y * y + n), (d, y)
        if Y <= 10**4:
            assert is_square(d * Y * Y + u.norm * k * k)


def test_rejects_bad_d():
    for d in (1, 0, 12, 49):
        with pytest.raises(ValueError):
            fundamental_unit(d)


def test_canonical_integral_unit():
    u = canonical_integral_unit(fundamental_unit(5))
    assert u.power == 3 and (u.x, u.y) == (2, 1)
    assert canonical_integral_unit(fundamental_unit(15)) == fundamental_unit(15)


def test_decompose_norm_one():
    for d in SQUAREFREE:
        u = canonical_integral_unit(fundamental_unit(d))
        if u.norm != 1:
            with pytest.raises(ValueError):
                decompose_norm_one(u.x, u.y, d)
            continue
        dec = decompose_norm_one(u.x, u.y, d)
        assert dec.plus_value() == u.x + 1 and dec.minus_value() == u.x - 1
        assert dec.d1 * dec.d2 == d and 1 < dec.d1 * dec.d2


def test_sqrt_product_test_fixtures():
    assert sqrt_product_in_K1_test(9645, 5) is True
    assert sqrt_product_in_K1_test(645, 5) is False
    r = int(fundamental_unit(2 * 9645).x)
    assert math.isqrt(5 * (r + 1)) ** 2 == 5 * (r + 1)
    with pytest.raises(ValueError):
        sqrt_product_in_K1_test(645, 7)
