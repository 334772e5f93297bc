"""Tritronquee solver: start-up, reversibility, pole certification, corner map."""
import cmath
import math

import numpy as np
import pytest

from painleve_asymptotics import painleve_one as pi1
from painleve_asymptotics.geometry import X_C


@pytest.fixture(scope="module")
def fld():
    return pi1.default_field()


def test_value_at_minus_fifty():
    axis = pi1.real_axis_trajectory(-400.0, -50.0, samples=50)
    assert abs(axis[-1].Y + math.sqrt(50 / 6)) < 1e-3


def test_round_trip():
    start = pi1.initial_state(-400.0)
    there = pi1.integrate_segment(start, -50.0)
    back = pi1.integrate_segment(there, -400.0)
    assert abs(back.Y - start.Y) < 1e-8


def test_start_is_close_to_series():
    assert pi1.initialization_error(-400.0) < 1e-15


def test_hamiltonian_along_axis():
    for s in pi1.real_axis_trajectory(-400.0, 0.0, samples=80):
        assert abs(s.H - pi1.hamiltonian(s.t, s.Y, s.Z)) < 1e-9 * max(1.0, abs(s.H))


def test_reflection(fld):
    for t in (1.0 + 0.5j, -2.0 + 3.0j, 0.5 - 4.0j):
        a, b = fld.evaluate(t), fld.evaluate(t.conjugate())
        assert abs(a.Y - b.Y.conjugate()) < 1e-9 * max(1.0, abs(a.Y))


def test_equation_residual(fld):
    # second difference of Y against 6 Y^2 + t
    h = 1e-3
    for t in (0.7 + 0.2j, -3.0 + 1.0j):
        ym, y0, yp = (fld.evaluate(t + k * h).Y for k in (-1, 0, 1))
        assert abs((yp - 2 * y0 + ym) / h ** 2 - (6 * y0 ** 2 + t)) < 1e-4


def test_poles_stay_in_their_sector(fld):
    assert fld.poles
    for p in fld.poles:
        assert abs(cmath.phase(-p.t0)) >= 4 * math.pi / 5 - 0.01


def test_first_real_pole_is_certified(fld):
    real = [p for p in fld.poles if abs(p.t0.imag) < 1e-8 and p.t0.real > 0]
    first = min(real, key=lambda p: p.t0.real)
    first.certify()
    assert abs(first.y_coeffs[3] + 1 / 6) < 1e-3
    assert abs(first.h_residue - 1) < 1e-4


def test_synthetic_laurent_recovery():
    t0, centre, radius = 3.0, 3.07, 0.3
    angles = 2 * math.pi * np.arange(64) / 64
    for _ in range(3):
        ts = centre + radius * np.exp(1j * angles)
        ys = np.array([pi1.laurent_model(t0, t) for t in ts])
        c = pi1._laurent_from_samples(angles, ys, radius)
        centre += c[-3] / (2 * c[-2])
    assert abs(centre - t0) < 1e-8


def test_bad_fit_is_rejected():
    fit = pi1.LaurentFit(3.0, {k: 0j for k in range(-4, 5)} | {-2: 1.0, 2: 0.0, 3: -1 / 6},
                         {k: 0j for k in range(-4, 5)} | {-1: 1.0}, 0.3)
    with pytest.raises(pi1.LaurentCertificationError):
        fit.certify()


def test_t_start_checked():
    with pytest.raises(ValueError):
        pi1.tritronquee_solve(t_start=-50.0)


def test_corner_map():
    cm = pi1.CornerMap(40)
    assert cm.t_of_x(X_C) == 0
    assert cm.x_of_t(cm.t_of_x(1 + 2j)) == pytest.approx(1 + 2j, abs=1e-14)


def test_corner_value_at_corner(fld):
    h0 = fld.evaluate(0).H
    got = pi1.corner_approx(X_C, 10, "U", fld).to_complex()
    assert got == pytest.approx(1 + 2 ** 0.4 * 10 ** -0.2 * h0, rel=1e-14)


def test_u_and_p_corrections_consistent(fld):
    # d/dt of H is -Y
    t, h = -1.5, 1e-4
    dh = (fld.evaluate(t + h).H - fld.evaluate(t - h).H) / (2 * h)
    assert dh == pytest.approx(-fld.evaluate(t).Y, abs=1e-6)


def test_large_m_limit(fld):
    x = pi1.CornerMap(10 ** 12).x_of_t(-1.0)
    assert abs(pi1.corner_approx(x, 10 ** 12, "U", fld).to_complex() - 1) < 1e-2


def test_near_pole_rejected(fld):
    t0 = fld.poles[0].t0
    with pytest.raises(pi1.PoleProximity):
        pi1.corner_approx(pi1.CornerMap(10).x_of_t(t0 + 0.1), 10, "P", fld)
