"""Branch-resolved spectral scalars as functions of the scaled variable x.

Everything is built from the root S(x) of 3 S^3 + 4 x S + 8 = 0 that behaves
like -2/x at infinity and is analytic off the three segments
[x_c, 0], [0, x_c e^{2 pi i/3}], [0, x_c e^{-2 pi i/3}].  On the sector
|arg x| < pi/3 the band endpoints are a, b = (S -+ Delta)/2 with
Delta = -4i / (-3S)^{1/2}, and the square root r(z; a, b) ~ z is realised as a
product of principal square roots in coordinates centred on the band.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
import numpy as np

X_C = -(4.5 ** (2.0 / 3.0))
A_C = -(6.0 ** (-1.0 / 3.0))
B_C = 4.5 ** (1.0 / 3.0)
S_CORNER = (4.0 / 3.0) ** (1.0 / 3.0)
S_ORIGIN = -((8.0 / 3.0) ** (1.0 / 3.0))
OMEGA = cmath.exp(2j * math.pi / 3)
CORNER_UPPER = X_C / OMEGA  # x_c e^{-2 pi i/3}, arg = +pi/3
CORNER_LOWER = X_C * OMEGA  # x_c e^{+2 pi i/3}, arg = -pi/3

GL_NODES = 200
_gl_x, _gl_w = np.polynomial.legendre.leggauss(GL_NODES)
# nodes and weights on [0, 1]
_SIG = 0.5 * (_gl_x + 1.0)
_WT = 0.5 * _gl_w


class BranchError(ValueError):
    """x sits on a cut, or two evaluation routes disagree."""


# --- S(x) -------------------------------------------------------------------

def on_sigma_s(x: complex, tol: float = 1e-13) -> bool:
    """True for x on one of the three cut segments of S (the origin excluded)."""
    if x == 0 or abs(x) > abs(X_C) * (1 + tol):
        return False
    for ray in (-1.0, CORNER_UPPER / abs(X_C), CORNER_LOWER / abs(X_C)):
        proj = (x / ray)
        if proj.real > 0 and abs(proj.imag) <= tol * max(abs(x), 1e-300):
            return True
    return False


def _cubic_roots(x: complex) -> np.ndarray:
    return np.roots([3.0, 0.0, 4.0 * x, 8.0])


def _newton_s(s, x, iters=3):
    for _ in range(iters):
        s = s - (3 * s ** 3 + 4 * x * s + 8) / (9 * s ** 2 + 4 * x)
    return s


def in_image_region(s: complex, tol: float = 1e-9) -> bool:
    """Whether s lies in the image of S: |s|^2 Re(s w^k) < 4/3 for k = 0, 1, 2."""
    return all(abs(s) ** 2 * (s * OMEGA ** k).real < 4 / 3 + tol for k in range(3))


def _continue_s(x: complex, r_start: float) -> complex:
    # adaptive continuation in u = asinh(rho) along the ray through x, from the anchor -2/x
    theta = 0.0 if x == 0 else cmath.phase(x)
    ray = cmath.exp(1j * theta)
    u0, u1 = math.asinh(r_start), math.asinh(abs(x))
    s = complex(_newton_s(-2.0 / (r_start * ray), r_start * ray))
    s_prev, u_prev = s, u0
    u, h = u0, 0.05
    while u > u1:
        step = min(h, u - u1)
        un = u - step
        xn = math.sinh(un) * ray
        guess = s + (s - s_prev) * step / max(u_prev - u, 1e-300) if u_prev != u else s
        roots = _cubic_roots(xn)
        order = np.argsort(np.abs(roots - guess))
        pick, other = roots[order[0]], roots[order[1]]
        if abs(pick - guess) < 0.25 * abs(other - pick):
            s_prev, u_prev = s, u
            s, u = complex(pick), un
            h = min(1.5 * h, 0.2)
        else:
            h *= 0.5
            if h < 1e-13:
                raise BranchError(f"continuation of S stalled near x = {xn}")
    return complex(_newton_s(s, x))


@lru_cache(maxsize=65536)
def solve_s(x: complex, r_start: float = 1e6) -> complex:
    """The branch of the cubic root S(x) ~ -2/x.

    Followed by homotopy from x = r_start e^{i arg x} inward along the ray; the
    ray through x meets the cut set only if x does.  The origin is taken as
    the limit along arg x = 0.  The result must also land in the image
    region of S, which singles out one root of the cubic by itself.
    """
    x = complex(x)
    if on_sigma_s(x):
        raise BranchError(f"x = {x} lies on a branch cut of S")
    s = _continue_s(x, r_start)
    if x != 0 and not in_image_region(s, 1e-7 * (1 + abs(s))):
        raise BranchError(f"S({x}) = {s} falls outside the image region")
    return s


def solve_s_array(x) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    return np.vectorize(lambda z: solve_s(complex(z)), otypes=[complex])(x)


def s_prime(x: complex, s: complex | None = None) -> complex:
    s = solve_s(x) if s is None else s
    return -4 * s / (9 * s * s + 4 * x)


# --- square roots -------------------------------------------------------------

def r_unit(w):
    """r(w; -1, 1) = sqrt(w - 1) sqrt(w + 1), principal roots, ~ w at infinity."""
    return np.sqrt(w - 1 + 0j) * np.sqrt(w + 1 + 0j)


def delta_of(s: complex) -> complex:
    """Delta with Delta^2 = 16/(3S), positive for real x < x_c (where S > 0)."""
    if s.real > 0 and abs(s.imag) <= 1e-12 * abs(s):
        return 4 / math.sqrt(3 * s.real)
    return -4j / cmath.sqrt(-3 * s)


def r_band(z, s: complex, delta: complex):
    """r(z; a, b) with a, b = (S -+ Delta)/2: cut on the segment [a, b], r ~ z."""
    d = delta / 2
    return d * r_unit((np.asarray(z) - s / 2) / d)


# --- spectral data -------------------------------------------------------------

@dataclass(frozen=True)
class SpectralData:
    x: complex
    S: complex
    Delta: complex
    a: complex
    b: complex
    z_star: complex
    r_star: complex
    t_star: complex
    ell: complex
    lam: complex | None = None
    mu: complex | None = None
    frak_c: complex | None = None
    frak_d: complex | None = None
    extra: dict = field(default_factory=dict, compare=False, repr=False)


def in_sector(x: complex, sigma: float = 0.0) -> bool:
    return x != 0 and abs(cmath.phase(x)) < math.pi / 3 - sigma


def spectral_data(x: complex, full: bool = False) -> SpectralData:
    """Scalars S, Delta, a, b, z*, r*, t*, l at x (lambda, mu, c, d when full)."""
    x = complex(x)
    s = solve_s(x)
    dl = delta_of(s)
    a, b = (s - dl) / 2, (s + dl) / 2
    z_star = -s / 2
    r_star = complex(r_band(z_star, s, dl))
    t_star = (2 / (1j * dl)) * (-s + r_star)
    ell = 0.5 * math.log(2 / 3) + cmath.log(1j * dl) - math.log(4) - 2.5 * cmath.log(r_star)
    if not full:
        return SpectralData(x, s, dl, a, b, z_star, r_star, t_star, ell)
    lam = compute_lambda_mu(x)[0]
    d = frak_d(x)
    return SpectralData(x, s, dl, a, b, z_star, r_star, t_star, ell,
                        lam, lam + 1j * math.pi, d + 1j * math.pi / 2, d)


# --- the contour integral c(x) and d(x) = c(x) - i pi / 2 -------------------------

def t_of_x(x: complex, s: complex | None = None) -> complex:
    s = solve_s(x) if s is None else s
    return 1j * math.sqrt(0.75) * cmath.exp(1.5 * cmath.log(-s))


def integral_i(t: complex) -> complex:
    """I(t) = -(2/t) int_{-1}^{t} (w - t) r(w; -1, 1) dw - i pi/2 by Gauss-Legendre.

    With w = -1 + (t + 1) s^2 the square-root endpoint becomes analytic.
    """
    w = -1 + (t + 1) * _SIG ** 2
    jac = 2 * (t + 1) * _SIG
    val = np.sum(_WT * (w - t) * r_unit(w) * jac)
    return -(2 / t) * val - 1j * math.pi / 2


def integral_i_prime(t: complex) -> complex:
    """I'(t) = 2 r(t; -1, 1)^3 / (3 t^2)."""
    return 2 * complex(r_unit(t)) ** 3 / (3 * t * t)


def frak_d(x: complex) -> complex:
    """d(x) on the sector |arg x| < pi/3 through the I(t) representation."""
    return integral_i(t_of_x(complex(x)))


def frak_d_prime(x: complex) -> complex:
    x = complex(x)
    s = solve_s(x)
    t = t_of_x(x, s)
    dt = 1j * math.sqrt(0.75) * 1.5 * cmath.sqrt(-s) * (-s_prime(x, s))
    return integral_i_prime(t) * dt


def frak_c(x: complex) -> complex:
    return frak_d(x) + 1j * math.pi / 2


def frak_c_line(x: complex) -> complex:
    """c(x) = (3/2) int_a^{z*} (zeta - z*) r(zeta; a, b) d zeta along the straight segment."""
    x = complex(x)
    s = solve_s(x)
    dl = delta_of(s)
    a = (s - dl) / 2
    z_star = -s / 2
    zeta = a + (z_star - a) * _SIG ** 2
    jac = 2 * (z_star - a) * _SIG
    val = np.sum(_WT * (zeta - z_star) * r_band(zeta, s, dl) * jac)
    return 1.5 * val


def frak_d_line(x: complex) -> complex:
    return frak_c_line(x) - 1j * math.pi / 2


def frak_d_checked(x: complex, tol: float = 1e-10) -> complex:
    """Primary route, cross-checked against the straight-line quadrature."""
    d1 = frak_d(x)
    d2 = frak_d_line(x)
    if abs(d1 - d2) > tol * max(1.0, abs(d1)):
        raise BranchError(f"routes for d({x}) disagree: {d1} vs {d2}")
    return d1


def sector_of(x: complex) -> int:
    """0 for |arg x| < pi/3, +1 for the sector rotated by 2 pi/3, -1 for -2 pi/3."""
    ph = cmath.phase(x)
    edge = 1e-14
    if abs(ph) < math.pi / 3 - edge:
        return 0
    if math.pi / 3 + edge < ph < math.pi - edge:
        return 1
    if -math.pi + edge < ph < -math.pi / 3 - edge:
        return -1
    raise BranchError(f"x = {x} lies on a sector boundary")


def frak_c_rotated(x: complex) -> complex:
    """c(x) extended to the two rotated sectors."""
    x = complex(x)
    k = sector_of(x)
    if k == 0:
        return frak_c(x)
    if k == 1:
        return frak_c(x / OMEGA) - 1j * math.pi
    return frak_c(x * OMEGA)


# --- lambda and mu -------------------------------------------------------------

def lambda_closed_form(x: complex) -> complex:
    """lambda = S^3/4 + 2 log(-Delta/4) + 2 pi i k, with k fixed by Im lambda(x>0) = -pi.

    This is the exact value of the large-|z| limit; it serves as an
    independent check on the path evaluation.
    """
    s = solve_s(complex(x))
    dl = delta_of(s)
    base = s ** 3 / 4 + 2 * cmath.log(-dl / 4)
    return base - 2j * math.pi


def _lambda_at_radius(s: complex, dl: complex, x: complex, radius: float, dps: int) -> complex:
    # E(R) = 2 log(-z) - z^3 - x z + 3 (F(z) - F(a)), z = a + i R, tracked branch of log(u + r)
    d = dl / 2
    ua = -d
    # continuous argument of u + r along the vertical path, from double-precision samples
    hs = np.concatenate([[0.0], np.geomspace(1e-9, radius, 4000)])
    us = ua + 1j * hs
    vals = us + d * r_unit(us / d)
    # at the start u + r = -d exactly; nudge the first sample off the branch point
    vals[0] = -d
    args = np.unwrap(np.angle(vals))
    winding = args[-1] - cmath.phase(complex(vals[-1]))
    with mpmath.workdps(dps):
        S, D, X = mpmath.mpc(s), mpmath.mpc(dl), mpmath.mpc(x)
        dd = D / 2
        a = (S - D) / 2
        z = a + 1j * mpmath.mpf(radius)
        u = z - S / 2
        r = dd * mpmath.sqrt(u / dd - 1) * mpmath.sqrt(u / dd + 1)
        lz = mpmath.log(u + r) + 1j * mpmath.mpf(winding)
        la = mpmath.log(-dd) + 1j * mpmath.mpf(args[0] - cmath.phase(-d))
        fz = r ** 3 / 3 + S * (u * r / 2 - dd ** 2 / 2 * lz)
        fa = S * (-(dd ** 2) / 2 * la)
        e = 2 * mpmath.log(-z) - z ** 3 - X * z + 3 * (fz - fa)
        return complex(e)


def compute_lambda_mu(x: complex, radius: float = 1e3, dps: int = 50,
                      levels: int = 4, tol: float = 1e-9) -> tuple[complex, complex]:
    """lambda(x) from the closed-form antiderivative along the upward vertical from a.

    The finite-radius values E(R) differ from the limit by a power series in
    1/R, so a Richardson table over R, 2R, 4R, ... removes the tail.  The two
    best estimates must agree to ``tol``.  Returns (lambda, mu) with
    mu = lambda + i pi.
    """
    x = complex(x)
    s = solve_s(x)
    dl = delta_of(s)
    row = [_lambda_at_radius(s, dl, x, radius * 2 ** k, dps) for k in range(levels)]
    best = []
    for j in range(1, levels):
        row = [(2 ** j * row[i + 1] - row[i]) / (2 ** j - 1) for i in range(len(row) - 1)]
        best.append(row[-1])
    lam = best[-1]
    if abs(best[-1] - best[-2]) > tol:
        raise BranchError(f"lambda({x}) unstable across radii: {best[-2]} vs {best[-1]}")
    return lam, lam + 1j * math.pi


def corner_limit(func, h0: float = 1e-3, levels: int = 6):
    """Limit of func(x) as x -> x_c along x < x_c, by polynomial extrapolation in sqrt(h)."""
    hs = [h0 * 4.0 ** (-k) for k in range(levels)]
    roots_h = np.sqrt(hs)
    vals = np.array([complex(func(X_C - h)) for h in hs])
    # Neville at 0
    p = list(vals)
    for j in range(1, levels):
        for i in range(levels - j):
            p[i] = (roots_h[i + j] * p[i] - roots_h[i] * p[i + 1]) / (roots_h[i + j] - roots_h[i])
    return p[0]


def complex_step_derivative(f, z: complex, h: float = 1e-3, points: int = 16) -> complex:
    """f'(z) for analytic f from samples on a circle of radius h (Lyness-Moler)."""
    k = np.arange(points)
    w = np.exp(2j * np.pi * k / points)
    vals = np.array([f(z + h * wk) for wk in w])
    return complex(np.mean(vals / w) / h)


# --- the edge of the elliptic region -------------------------------------------

class ContinuationStall(RuntimeError):
    def __init__(self, message: str, last_good: complex):
        super().__init__(message)
        self.last_good = last_good


def solve_level(target: complex, x0: complex, tol: float = 1e-13, max_iter: int = 50) -> complex:
    """Newton for d(x) = target starting at x0."""
    x = complex(x0)
    for _ in range(max_iter):
        step = (frak_d(x) - target) / frak_d_prime(x)
        x -= step
        if abs(step) <= tol * max(1.0, abs(x)):
            return x
    raise ContinuationStall(f"Newton for d(x) = {target} did not settle", x)


@lru_cache(maxsize=1)
def x_edge() -> float:
    """The point x_e > 0 where the edge of the elliptic region crosses the real axis."""
    x = solve_level(0.0, 1.445)
    return x.real


@dataclass(frozen=True)
class BoundaryTrace:
    samples: tuple
    levels: tuple
    x_e: float
    corner_lower: complex
    corner_upper: complex
    rotated: tuple = ()

    def csv_rows(self):
        for x in self.samples:
            d = frak_d(x)
            yield x.real, x.imag, d.real, d.imag


def _follow(x0: complex, eta0: float, eta1: float, min_step: float = 1e-12) -> complex:
    # adaptive predictor-corrector in eta from d(x0) = i eta0 to d(x) = i eta1
    x, eta = x0, eta0
    h = eta1 - eta0
    while eta != eta1:
        h = math.copysign(min(abs(h), abs(eta1 - eta)), eta1 - eta)
        pred = x + 1j * h / frak_d_prime(x)
        try:
            xn = solve_level(1j * (eta + h), pred, max_iter=8)
        except (ContinuationStall, BranchError):
            xn = None
        if xn is None or abs(xn - pred) > 0.1 * abs(pred - x) + 1e-14:
            h *= 0.5
            if abs(h) < min_step:
                raise ContinuationStall(f"edge trace stalled at Im d = {eta}", x)
            continue
        x, eta = xn, eta + h
        h *= 1.5
    return x


def trace_boundary(n: int = 400, end_gap: float = 1e-6) -> BoundaryTrace:
    """n points on Re d = 0 in the sector |arg x| < pi/3, bottom to top.

    Im d runs uniformly over [-(1 - end_gap) pi/2, (1 - end_gap) pi/2]; the
    samples are found by continuation outward from x_e in both directions.
    """
    if n < 3:
        raise ValueError("need at least three boundary points")
    top = (1 - end_gap) * math.pi / 2
    levels = np.linspace(-top, top, n)
    xe = x_edge()
    mid = int(np.searchsorted(levels, 0.0))
    pts: dict[int, complex] = {}
    x = complex(xe)
    eta = 0.0
    for i in range(mid, n):
        x = _follow(x, eta, float(levels[i]))
        eta = float(levels[i])
        pts[i] = x
    x, eta = complex(xe), 0.0
    for i in range(mid - 1, -1, -1):
        x = _follow(x, eta, float(levels[i]))
        eta = float(levels[i])
        pts[i] = x
    samples = tuple(pts[i] for i in range(n))
    rotated = tuple(tuple(z * OMEGA ** k for z in samples) for k in (1, 2))
    return BoundaryTrace(samples, tuple(float(v) for v in levels), xe,
                         CORNER_LOWER, CORNER_UPPER, rotated)


def corner_angle(trace: BoundaryTrace, k: int = 1) -> float:
    """Opening angle of the elliptic region at x_c e^{-2 pi i/3} from chords of the traces.

    One edge arrives at the corner as the top of the traced arc; the other is
    the bottom of the copy rotated by 2 pi/3.  The chord to each from the
    k-th sample back estimates the tangent directions.
    """
    c = trace.corner_upper
    v_top = trace.samples[-k] - c
    v_rot = trace.samples[k - 1] * OMEGA - c
    return abs(cmath.phase(v_top / v_rot))
