import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from painleve_asymptotics.harness import ladder_state
from painleve_asymptotics.scaled import PoleHit, ScaledComplex, eval_scaled


def test_constant_one():
    v = eval_scaled(ladder_state(0).u, 3 + 4j, 64)
    assert v.logmag == 0 and v.phase == 0


def test_seed_v_at_minus_six():
    v = eval_scaled(ladder_state(0).v, -6, 64)
    assert abs(v.to_complex() - 1) < 1e-15


def test_u2_at_i():
    v = eval_scaled(ladder_state(2).u, 1j, 128).to_complex()
    assert abs(v - (6 - 1j) / 36j) < 1e-15


def test_large_values_match_exact_log():
    # about e^360, computed exactly on the rational side
    f = ladder_state(30).u
    v = eval_scaled(f, 1e6, 256)
    assert v.logmag == pytest.approx(math.log(f(Fraction(10 ** 6))), rel=1e-14)


def test_pole_is_reported():
    with pytest.raises(PoleHit):
        eval_scaled(ladder_state(2).u, 0, 64)


@given(st.fractions(min_value=-5, max_value=5, max_denominator=50), st.integers(1, 10))
def test_agrees_with_exact_rational_evaluation(q, m):
    f = ladder_state(m).u
    point = float(q)
    try:
        exact = f(Fraction(point))
    except ZeroDivisionError:
        return
    got = eval_scaled(f, complex(point), 128)
    if exact == 0:
        assert got.is_zero or got.logmag < -100
        return
    assert got.logmag == pytest.approx(math.log(abs(exact)), abs=1e-12)
    assert abs(cmath.rect(1, got.phase) - (1 if exact > 0 else -1)) < 1e-12


@given(st.floats(-50, 50), st.floats(-10, 10), st.floats(-50, 50), st.floats(-10, 10))
def test_product_adds_logs(a, p, b, q):
    z = ScaledComplex(a, p) * ScaledComplex(b, q)
    assert z.logmag == pytest.approx(a + b)
    assert abs(cmath.rect(1, z.phase) - cmath.rect(1, p + q)) < 1e-9
    assert -math.pi < z.phase <= math.pi
