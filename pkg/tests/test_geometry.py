"""Spectral scalars: branch choice, algebraic relations, and the two routes to d."""
import cmath
import math

import mpmath
import pytest
from hypothesis import given, strategies as st

from painleve_asymptotics import geometry as geo

X_EDGE = 1.4430318723300515  # frozen from an independent root find on the quadrature route


def sector_points(sigma=0.05, rmin=0.2, rmax=6.0):
    return st.builds(lambda r, th: cmath.rect(r, th),
                     st.floats(rmin, rmax), st.floats(-math.pi / 3 + sigma, math.pi / 3 - sigma))


def test_large_x_behaviour():
    assert geo.solve_s(1e6) == pytest.approx(-2e-6, rel=1e-6)
    assert geo.solve_s(-1e6) == pytest.approx(2e-6, rel=1e-6)


def test_origin_value():
    assert geo.solve_s(0) == pytest.approx(geo.S_ORIGIN, rel=1e-12)


def test_corner_value_from_below():
    s = geo.solve_s(geo.X_C - 1e-10)
    assert abs(s - geo.S_CORNER) < 1e-4


@given(sector_points(sigma=0.01, rmin=0.05, rmax=50))
def test_cubic_residual(x):
    s = geo.solve_s(x)
    assert abs(3 * s ** 3 + 4 * x * s + 8) < 1e-10 * (1 + abs(x * s))
    assert geo.in_image_region(s)


@given(sector_points())
def test_rotation(x):
    # x in the open sector, x * omega avoids the cut set
    rotated = geo.solve_s(x * geo.OMEGA)
    assert abs(rotated - geo.solve_s(x) / geo.OMEGA) < 1e-11


@given(sector_points())
def test_schwarz_reflection_of_s(x):
    assert abs(geo.solve_s(x.conjugate()) - geo.solve_s(x).conjugate()) < 1e-12


def test_cut_points_rejected():
    with pytest.raises(geo.BranchError):
        geo.solve_s(-1.0)


@given(sector_points())
def test_band_relations(x):
    sd = geo.spectral_data(x)
    assert abs(sd.Delta ** 2 - 16 / (3 * sd.S)) < 1e-10 * abs(sd.Delta) ** 2
    assert abs(sd.a - (sd.S - sd.Delta) / 2) < 1e-14 * (1 + abs(sd.S))
    assert abs(sd.b - (sd.S + sd.Delta) / 2) < 1e-14 * (1 + abs(sd.S))
    assert abs(sd.r_star ** 2 - (sd.z_star - sd.a) * (sd.z_star - sd.b)) < 1e-10 * (1 + abs(sd.r_star) ** 2)


def test_band_square_root_at_infinity():
    sd = geo.spectral_data(2.0)
    z = 1e7 + 3e6j
    assert abs(geo.r_band(z, sd.S, sd.Delta) / z - 1) < 1e-6


def test_ell_real_at_edge():
    assert abs(geo.spectral_data(X_EDGE).ell.imag) < 1e-12


def test_x_edge_frozen():
    assert geo.x_edge() == pytest.approx(X_EDGE, abs=1e-12)


def test_x_edge_through_quadrature_route():
    root = mpmath.findroot(lambda t: geo.frak_d_line(float(t)).real, (1.40, 1.50), solver="secant", tol=1e-24)
    assert float(root) == pytest.approx(X_EDGE, abs=1e-10)


@pytest.mark.parametrize("x", [1.6, 2.0, 4.0, 10.0])
def test_d_real_and_positive_beyond_edge(x):
    d = geo.frak_d(x)
    assert abs(d.imag) < 1e-12 and d.real > 0


@pytest.mark.parametrize("x", [0.5, 1.0, 1.4])
def test_d_negative_inside(x):
    assert geo.frak_d(x).real < 0


@given(sector_points(sigma=0.1, rmin=0.5, rmax=5))
def test_d_routes_agree(x):
    assert abs(geo.frak_d(x) - geo.frak_d_line(x)) < 1e-10 * max(1.0, abs(geo.frak_d(x)))


@given(sector_points(sigma=0.1, rmin=0.5, rmax=5))
def test_d_schwarz(x):
    assert abs(geo.frak_d(x.conjugate()) - geo.frak_d(x).conjugate()) < 1e-12 * max(1.0, abs(geo.frak_d(x)))


def test_d_prime_against_circle_derivative():
    for x in (1.2 + 0.3j, 2.5 - 0.7j, 0.8):
        fd = geo.complex_step_derivative(geo.frak_d, x, h=1e-2, points=32)
        assert abs(geo.frak_d_prime(x) - fd) < 1e-9 * max(1.0, abs(fd))


def test_rotated_c_matches_principal_sector():
    x = 1.7 + 0.4j
    assert geo.frak_c_rotated(x) == geo.frak_c(x)
    assert geo.frak_c_rotated(x * geo.OMEGA) == pytest.approx(geo.frak_c(x) - 1j * math.pi, abs=1e-12)
    assert geo.frak_c_rotated(x / geo.OMEGA) == pytest.approx(geo.frak_c(x), abs=1e-12)
    with pytest.raises(geo.BranchError):
        geo.sector_of(cmath.rect(2.0, math.pi / 3))


def test_lambda_at_two():
    lam, mu = geo.compute_lambda_mu(2.0)
    assert lam.imag == pytest.approx(-math.pi, abs=1e-9)
    assert mu.imag == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize("x", [0.7, 2.0, 1.3 + 0.5j, 3 - 1j])
def test_lambda_path_matches_closed_form(x):
    assert abs(geo.compute_lambda_mu(x)[0] - geo.lambda_closed_form(x)) < 1e-8


def test_lambda_reflection():
    x = 1.3 + 0.5j
    lam = geo.lambda_closed_form(x)
    assert abs(geo.lambda_closed_form(x.conjugate()) - (lam.conjugate() - 2j * math.pi)) < 1e-12


def test_short_boundary_trace():
    tr = geo.trace_boundary(n=21)
    assert tr.x_e == pytest.approx(X_EDGE, abs=1e-12)
    for x in tr.samples:
        assert abs(geo.frak_d(x).real) < 1e-10
    assert abs(tr.samples[-1] - geo.CORNER_UPPER) < 1e-3
    assert abs(tr.samples[0] - geo.CORNER_LOWER) < 1e-3
    ims = [geo.frak_d(x).imag for x in tr.samples]
    assert all(b > a for a, b in zip(ims, ims[1:]))
