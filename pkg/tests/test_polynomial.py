import random

import pytest
from gmpy2 import mpz
from hypothesis import given, strategies as st

from painleve_asymptotics import polynomial as zp

small_polys = st.lists(st.integers(-10**6, 10**6), min_size=1, max_size=12).map(zp.from_ints)
big_polys = st.lists(st.integers(-10**40, 10**40), min_size=1, max_size=30).map(zp.from_ints)


def naive_mul(a, b):
    if not a or not b:
        return []
    out = [mpz(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return zp.trim(out)


@given(big_polys, big_polys)
def test_kronecker_product_matches_schoolbook(a, b):
    assert zp.mul(a, b) == naive_mul(a, b)


@given(big_polys)
def test_square_is_self_product(a):
    assert zp.sqr(a) == naive_mul(a, a)


@given(small_polys, small_polys.filter(lambda p: len(p) > 0))
def test_exact_division_recovers_factor(a, b):
    q = zp.divexact(zp.mul(a, b), b)
    assert q == zp.trim(a)


@given(small_polys, small_polys, small_polys)
def test_gcd_contains_common_factor(a, b, c):
    if not c or zp.degree(c) < 1:
        return
    g = zp.gcd(zp.mul(a, c), zp.mul(b, c))
    # the common factor divides the gcd
    _, cp = zp.primitive(c)
    assert zp.divmod_exact(g, cp) is not None


def test_gcd_routes_agree_on_structured_input():
    rng = random.Random(7)
    for _ in range(20):
        f = zp.from_ints([rng.randint(-50, 50) for _ in range(6)])
        g = zp.from_ints([rng.randint(-50, 50) for _ in range(5)])
        h = zp.from_ints([rng.randint(-50, 50) for _ in range(4)])
        a, b = zp.mul(f, h), zp.mul(g, h)
        assert zp.primitive(zp.gcd_subresultant(a, b))[1] == zp.primitive(zp.gcd(a, b))[1]


def test_coprime_detection():
    x_minus_1 = zp.from_ints([-1, 1])
    x_plus_1 = zp.from_ints([1, 1])
    assert zp.coprime_modular(x_minus_1, x_plus_1)
    assert not zp.coprime_modular(zp.mul(x_minus_1, x_plus_1), x_minus_1)


def test_evaluate_and_derivative():
    p = zp.from_ints([6, 0, 0, 1])          # y^3 + 6
    assert zp.evaluate(p, 2) == 14
    assert zp.deriv(p) == zp.from_ints([0, 0, 3])


@pytest.mark.parametrize("k", [0, 1, 5])
def test_shift_multiplies_by_power(k):
    p = zp.from_ints([1, 2, 3])
    assert zp.shift(p, k) == [mpz(0)] * k + p
