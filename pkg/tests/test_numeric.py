from decimal import Decimal, getcontext
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from barrierflow.errors import EmptyIsolation, NotIrrational
from barrierflow.numeric import (
    AlphaValue,
    Coord,
    compare,
    convergents,
    covering_threshold,
    make_alpha,
    nearest_integer_distance,
)

from instances import GOLDEN, INV_SQRT2, INV_SQRT3

getcontext().prec = 60


def _dec(alpha: AlphaValue) -> Decimal:
    p, q, d, r = alpha.surd
    return (Decimal(p) + Decimal(q) * Decimal(d).sqrt()) / Decimal(r)


def _dec_cf(x: Decimal, n: int) -> list:
    out = []
    for _ in range(n):
        a = int(x)
        out.append(a)
        x = 1 / (x - a)
    return out


def test_surd_rejects_rational():
    with pytest.raises(NotIrrational):
        AlphaValue.from_surd(1, 2, 4, 1)
    with pytest.raises(NotIrrational):
        AlphaValue.from_surd(1, 0, 2, 1)


def test_root_isolation_errors():
    with pytest.raises(EmptyIsolation):
        AlphaValue.from_root([-2, 0, 1], 2, 3)
    with pytest.raises(EmptyIsolation):
        AlphaValue.from_root([-2, 0, 1], -2, 2)
    with pytest.raises(NotIrrational):
        AlphaValue.from_root([-1, 0, 1], Fraction(1, 2), 2)


def test_negative_slope_rejected():
    with pytest.raises(ValueError):
        AlphaValue.from_surd(0, -1, 2, 2)


@pytest.mark.parametrize("alpha", [INV_SQRT2, GOLDEN, INV_SQRT3], ids=["isqrt2", "golden", "isqrt3"])
def test_continued_fraction_digits_match_decimal(alpha):
    assert alpha.digits(20) == _dec_cf(_dec(alpha), 20)


def test_golden_convergents_are_fibonacci():
    conv = convergents(GOLDEN, 10)
    fib = [1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89]
    assert [q for _, q in conv] == fib[:10]


def test_cubic_root_digits_against_decimal():
    a = AlphaValue.from_root([1, -3, -1, 1], Fraction(3, 10), Fraction(8, 25))
    # Newton in 60-digit decimals as the second route
    x = Decimal("0.311")
    for _ in range(40):
        x = x - (x ** 3 - x ** 2 - 3 * x + 1) / (3 * x ** 2 - 2 * x - 3)
    assert a.digits(12) == _dec_cf(x, 12)
    assert abs(float(a) - float(x)) < 1e-15


def test_scaled_slope():
    a = INV_SQRT2.scaled(Fraction(1, 25))
    assert abs(float(a) - float(_dec(INV_SQRT2)) / 25) < 1e-16
    assert a.cmp_rational(Fraction(1, 36)) > 0


def test_make_alpha_forms():
    a = make_alpha({"surd": {"p": 0, "q": 1, "d": 2, "r": 2}})
    b = make_alpha({"root": {"coeffs": ["-1/2", "0", "1"], "lo": "0", "hi": "1"}})
    assert a == b
    with pytest.raises(ValueError):
        make_alpha({"decimal": "0.7"})


def test_nearest_integer_distance_and_threshold():
    d = nearest_integer_distance(INV_SQRT2, 5)
    assert abs(float(d) - abs(5 * 0.7071067811865476 - 4)) < 1e-12
    q = covering_threshold(GOLDEN, Fraction(1, 10))
    assert q == 13


@pytest.mark.parametrize("alpha", [INV_SQRT2, GOLDEN, INV_SQRT3], ids=["isqrt2", "golden", "isqrt3"])
def test_small_multiples_stay_away_from_integers(alpha):
    # ||n alpha|| > 1/(2 q_k) for 1 <= n < q_k, every convergent with q_k <= 200
    for _, q in convergents(alpha, 30):
        if q > 200:
            break
        for n in range(1, q):
            assert nearest_integer_distance(alpha, n) > Fraction(1, 2 * q)


# -- coordinates ------------------------------------------------------------

coords = st.tuples(st.fractions(min_value=-5, max_value=5, max_denominator=50), st.integers(-6, 6))


@given(coords, coords)
def test_coord_order_matches_decimal(a, b):
    x = Coord(a[0], a[1], INV_SQRT2)
    y = Coord(b[0], b[1], INV_SQRT2)
    dx = Decimal(a[0].numerator) / a[0].denominator + a[1] * _dec(INV_SQRT2)
    dy = Decimal(b[0].numerator) / b[0].denominator + b[1] * _dec(INV_SQRT2)
    expected = "less" if dx < dy else ("greater" if dx > dy else "equal")
    assert compare(x, y) == expected


@given(coords)
def test_floor_and_mod1(a):
    x = Coord(a[0], a[1], GOLDEN)
    dx = Decimal(a[0].numerator) / a[0].denominator + a[1] * _dec(GOLDEN)
    assert x.floor() == int(dx.to_integral_value(rounding="ROUND_FLOOR"))
    m = x.mod1()
    assert 0 <= m < 1
    assert (x - m).is_rational()


@given(coords, coords)
def test_coord_arithmetic(a, b):
    x = Coord(a[0], a[1], INV_SQRT3)
    y = Coord(b[0], b[1], INV_SQRT3)
    assert (x + y) - y == x
    assert -(-x) == x
    assert x * 3 == x + x + x


@settings(max_examples=50)
@given(coords, coords)
def test_field_elements_multiply_like_decimals(a, b):
    F = INV_SQRT2.field
    x = Coord(a[0], a[1], INV_SQRT2).to_field(F)
    y = Coord(b[0], b[1], INV_SQRT2).to_field(F)
    prod = x * y
    dx = Decimal(a[0].numerator) / a[0].denominator + a[1] * _dec(INV_SQRT2)
    dy = Decimal(b[0].numerator) / b[0].denominator + b[1] * _dec(INV_SQRT2)
    assert abs(Decimal(float(prod)) - dx * dy) < Decimal("1e-12")
    if not y.is_zero():
        assert (x / y) * y == x
