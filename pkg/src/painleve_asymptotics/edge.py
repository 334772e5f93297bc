"""Edge asymptotics of U_m, V_m, P_m, Q_m in the sector |arg x| < pi/3.

All series are built from the exponents

    X_n = d + (n + 1/2)(eps/2) log(1/eps) - (n + 1/2) eps l + eps log(sqrt(2 pi) h_n),

with eps = 1/(m - 1/2), and the switching functions H_n = coth(X_n/eps) when
n and m have the same parity, tanh(X_n/eps) otherwise.  The sums over n are
truncated at N = K + 12 by default, where K counts how many exponents sit
left of the imaginary axis.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

from . import geometry as geo
from .scaled import ScaledComplex

DEFAULT_DELTA = 0.5
DEFAULT_M_BOUND = 5.0
EXTRA_TERMS = 12


class HoleError(ValueError):
    """x is inside an excluded disc around a predicted singularity or zero."""


class SeriesDivergence(ArithmeticError):
    """The truncated n-sum is not decaying."""


class NearPole(ArithmeticError):
    """A denominator of the P or Q series is numerically zero."""


def epsilon_of(m: int) -> float:
    if m < 1:
        raise ValueError("m must be positive")
    return 1.0 / (m - 0.5)


@dataclass(frozen=True)
class EdgeSeriesParams:
    m: int
    N: int | None = None
    delta: float = DEFAULT_DELTA

    @property
    def epsilon(self) -> float:
        return epsilon_of(self.m)


def hermite_lead(n: int) -> float:
    """Leading coefficient 2^{n/2} / (pi^{1/4} sqrt(n!)) of the n-th normalised Hermite polynomial."""
    return math.exp(log_hermite_lead(n))


def log_hermite_lead(n: int) -> float:
    return 0.5 * n * math.log(2) - 0.25 * math.log(math.pi) - 0.5 * math.lgamma(n + 1)


def _log_sqrt2pi_h(n: int) -> float:
    return 0.5 * math.log(2 * math.pi) + log_hermite_lead(n)


def nearest_integer(v: float) -> int:
    """Nearest integer, halves rounded up."""
    return math.floor(v + 0.5 + 1e-12)


def K_from_real_part(re_2c: float, eps: float) -> int:
    """K from the value of Re(2c) and eps."""
    scale = eps * math.log(1 / eps)
    if re_2c > 0.5 * scale:
        return 0
    return max(nearest_integer(-re_2c / scale), 0)


def K_of(x: complex, eps: float) -> int:
    return K_from_real_part(2 * geo.frak_d(complex(x)).real, eps)


# --- per-term data -------------------------------------------------------------

def ell_prime(x: complex) -> complex:
    """Derivative of l(x) = log(sqrt(2/3) i Delta / (4 r*^{5/2}))."""
    s = geo.solve_s(x)
    ds = geo.s_prime(x, s)
    r2 = s * s - 4 / (3 * s)
    return -ds / (2 * s) - 2.5 * (s + 2 / (3 * s * s)) * ds / r2


@dataclass(frozen=True)
class _Base:
    x: complex
    d: complex
    d_prime: complex
    data: geo.SpectralData


@lru_cache(maxsize=8192)
def _base(x: complex) -> _Base:
    return _Base(x, geo.frak_d(x), geo.frak_d_prime(x), geo.spectral_data(x))


def identity_residuals(x: complex) -> tuple[float, float]:
    """Residuals of the two algebraic relations between t*, r*, S and Delta.

    -t*^2 (i Delta/4 - (r*/(i Delta))(r* + S)) = i Delta/4 - (r*/(i Delta))(r* - S)
    and t*^2 (r* + S) = r* - S.
    """
    sd = _base(complex(x)).data
    t2, r, s, dl = sd.t_star ** 2, sd.r_star, sd.S, sd.Delta
    lhs = -t2 * (1j * dl / 4 - r / (1j * dl) * (r + s))
    rhs = 1j * dl / 4 - r / (1j * dl) * (r - s)
    first = abs(lhs - rhs) / max(1.0, abs(rhs))
    second = abs(t2 * (r + s) - (r - s)) / max(1.0, abs(r - s))
    return first, second


def exponent(x: complex, n: int, eps: float) -> complex:
    b = _base(complex(x))
    return (b.d + 0.5 * (n + 0.5) * eps * math.log(1 / eps)
            - (n + 0.5) * eps * b.data.ell + eps * _log_sqrt2pi_h(n))


def exponent_prime(x: complex, n: int, eps: float) -> complex:
    x = complex(x)
    return _base(x).d_prime - (n + 0.5) * eps * ell_prime(x)


def _switch(z: complex, coth: bool) -> tuple[complex, complex]:
    # (H - 1, H + 1) for H = coth z or tanh z, without overflow and with clean saturation
    if z.real >= 0:
        q = cmath.exp(-2 * z)
        if coth:
            return 2 * q / (1 - q), 2 / (1 - q)
        return -2 * q / (1 + q), 2 / (1 + q)
    p = cmath.exp(2 * z)
    if coth:
        return 2 / (p - 1), 2 * p / (p - 1)
    return -2 / (p + 1), 2 * p / (p + 1)


@dataclass(frozen=True)
class EdgeTermData:
    n: int
    X: complex
    H: complex
    h: float
    H_minus_one: complex
    H_plus_one: complex


def edge_terms(x: complex, m: int, N: int | None = None) -> list[EdgeTermData]:
    """X_n, H_n and h_n for n = 0..N (N defaults to K + 12)."""
    x = complex(x)
    eps = epsilon_of(m)
    if N is None:
        N = K_of(x, eps) + EXTRA_TERMS
    out = []
    for n in range(N + 1):
        X = exponent(x, n, eps)
        try:
            hm, hp = _switch(X / eps, (n - m) % 2 == 0)
        except ZeroDivisionError as exc:
            raise HoleError(f"x = {x} sits on a singularity of H_{n}") from exc
        out.append(EdgeTermData(n, X, hm + 1, hermite_lead(n), hm, hp))
    return out


# --- series ------------------------------------------------------------------

@dataclass(frozen=True)
class SeriesValue:
    value: complex
    tail_bound: float
    K: int
    N: int


def _sum_with_tail(terms: list[complex]) -> tuple[complex, float]:
    total = sum(terms, 0j)
    a, b = abs(terms[-2]), abs(terms[-1])
    if b == 0:
        return total, 0.0
    ratio = b / a if a else math.inf
    if ratio >= 1:
        if b > 1e-14 * max(abs(total), 1.0):
            raise SeriesDivergence(f"terms not decaying: |t_N/t_(N-1)| = {ratio:.3g}")
        return total, b
    return total, b * ratio / (1 - ratio)


def _prepare(x: complex, m: int, N: int | None, check_holes: bool, delta: float):
    x = complex(x)
    eps = epsilon_of(m)
    K = K_of(x, eps)
    N = K + EXTRA_TERMS if N is None else N
    if N < 1:
        raise ValueError("need N >= 1")
    if check_holes and not in_admissible_set(x, m, delta, "inf", N):
        raise HoleError(f"x = {x} lies within {delta} eps of a predicted singularity")
    return x, eps, K, N, edge_terms(x, m, N), _base(x).data


def edge_U_bracket(x: complex, m: int, N: int | None = None, *, check_holes: bool = False,
                   delta: float = DEFAULT_DELTA) -> SeriesValue:
    """i Delta/4 + (r*/(i Delta))(r* - S) sum (-1)^n t*^{2n} (H_n - 1)."""
    x, eps, K, N, terms, sd = _prepare(x, m, N, check_holes, delta)
    t2 = sd.t_star ** 2
    coef = sd.r_star / (1j * sd.Delta) * (sd.r_star - sd.S)
    parts = [coef * (-1) ** t.n * t2 ** t.n * t.H_minus_one for t in terms]
    tot, tail = _sum_with_tail(parts)
    return SeriesValue(1j * sd.Delta / 4 + tot, tail, K, N)


def edge_V_bracket(x: complex, m: int, N: int | None = None, *, check_holes: bool = False,
                   delta: float = DEFAULT_DELTA) -> SeriesValue:
    x, eps, K, N, terms, sd = _prepare(x, m, N, check_holes, delta)
    t2 = sd.t_star ** 2
    coef = sd.r_star / (1j * sd.Delta) * (sd.r_star + sd.S)
    parts = [coef * (-1) ** t.n * t2 ** (-t.n) * t.H_minus_one for t in terms]
    tot, tail = _sum_with_tail(parts)
    return SeriesValue(1j * sd.Delta / 4 + tot, tail, K, N)


def mu_of(x: complex) -> complex:
    return _mu(complex(x))


@lru_cache(maxsize=8192)
def _mu(x: complex) -> complex:
    return geo.compute_lambda_mu(x)[1]


def edge_U(x: complex, m: int, N: int | None = None, *, check_holes: bool = True,
           delta: float = DEFAULT_DELTA) -> ScaledComplex:
    """Approximation to m^{-2m/3} e^{-m mu} U_m((m - 1/2)^{2/3} x) near the edge."""
    br = edge_U_bracket(x, m, N, check_holes=check_holes, delta=delta)
    pre = (-1) ** m * cmath.exp(-1 / 3 - mu_of(x) / 2)
    return ScaledComplex.from_complex(pre * br.value)


def edge_V(x: complex, m: int, N: int | None = None, *, check_holes: bool = True,
           delta: float = DEFAULT_DELTA) -> ScaledComplex:
    """Approximation to m^{2(m-1)/3} e^{m mu} V_m((m - 1/2)^{2/3} x) near the edge."""
    br = edge_V_bracket(x, m, N, check_holes=check_holes, delta=delta)
    pre = (-1) ** (m + 1) * cmath.exp(1 / 3 + mu_of(x) / 2)
    return ScaledComplex.from_complex(pre * br.value)


def _ratio_term(r, w, sign, hval, d2):
    den = d2 + sign * 4 * r * w * hval
    if abs(den) <= 1e-13 * (abs(d2) + abs(4 * r * w * hval)):
        raise NearPole("denominator of the P/Q series vanishes")
    return -0.5 * r * hval + 2 * r * w * w * hval / den


def _pq_forms(x, m, N, plus_shift: float, centre_sign: int, check_holes, delta):
    x, eps, K, N, terms, sd = _prepare(x, m, N, check_holes, delta)
    r, s, d2 = sd.r_star, sd.S, sd.Delta ** 2
    w_plus = r + plus_shift * s
    w_minus = r - plus_shift * s
    centre = centre_sign * sd.z_star
    a = [_ratio_term(r, w_plus, +1, t.H_plus_one, d2) for t in terms]
    b = [_ratio_term(r, w_minus, -1, t.H_minus_one, d2) for t in terms]
    sa, ta = _sum_with_tail(a)
    sb, tb = _sum_with_tail(b)
    return SeriesValue(centre + sa, ta, K, N), SeriesValue(centre + sb, tb, K, N)


def edge_P_forms(x: complex, m: int, N: int | None = None, *, check_holes: bool = False,
                 delta: float = DEFAULT_DELTA) -> tuple[SeriesValue, SeriesValue]:
    """The (H + 1)-form and the (H - 1)-form of the P series."""
    return _pq_forms(x, m, N, +1.0, +1, check_holes, delta)


def edge_Q_forms(x: complex, m: int, N: int | None = None, *, check_holes: bool = False,
                 delta: float = DEFAULT_DELTA) -> tuple[SeriesValue, SeriesValue]:
    return _pq_forms(x, m, N, -1.0, -1, check_holes, delta)


def _checked(forms, tol):
    p1, p2 = forms
    if abs(p1.value - p2.value) > tol * max(1.0, abs(p1.value)):
        raise NearPole(f"the two series forms disagree: {p1.value} vs {p2.value}")
    return p1.value


def edge_P(x: complex, m: int, N: int | None = None, *, check_holes: bool = True,
           delta: float = DEFAULT_DELTA, tol: float = 1e-8) -> complex:
    """Approximation to m^{-1/3} P_m((m - 1/2)^{2/3} x)."""
    if check_holes and not in_admissible_set(x, m, delta, "0U", N):
        raise HoleError(f"x = {x} lies within {delta} eps of a zero of the U approximation")
    return _checked(edge_P_forms(x, m, N, check_holes=check_holes, delta=delta), tol)


def edge_Q(x: complex, m: int, N: int | None = None, *, check_holes: bool = True,
           delta: float = DEFAULT_DELTA, tol: float = 1e-8) -> complex:
    """Approximation to m^{-1/3} Q_m((m - 1/2)^{2/3} x)."""
    if check_holes and not in_admissible_set(x, m, delta, "0V", N):
        raise HoleError(f"x = {x} lies within {delta} eps of a zero of the V approximation")
    return _checked(edge_Q_forms(x, m, N, check_holes=check_holes, delta=delta), tol)


# --- pole lattice ----------------------------------------------------------------

ALPHA_MARGIN = 1e-6


@lru_cache(maxsize=1)
def _trace() -> geo.BoundaryTrace:
    return geo.trace_boundary(400)


def d_inverse(target: complex) -> complex:
    """x in the sector with d(x) = target, by Newton from the nearest traced edge point."""
    tr = _trace()
    start = min(zip(tr.levels, tr.samples), key=lambda p: abs(1j * p[0] - target))[1]
    return geo.solve_level(target, start)


def _lattice_data(alpha: float, n: int, m: int):
    if not -0.5 + ALPHA_MARGIN < alpha < 0.5 - ALPHA_MARGIN:
        raise ValueError("alpha must stay away from the corners at +-1/2")
    eps = epsilon_of(m)
    x0 = d_inverse(1j * math.pi * alpha)
    dp = geo.frak_d_prime(x0)
    ell0 = geo.spectral_data(x0).ell
    return eps, x0, dp, ell0


def lattice_offsets(alpha: float, n: int, N1_range, m: int) -> list[complex]:
    """Predicted d-values of the singularities, d = i pi alpha + (first two corrections)."""
    eps, x0, dp, ell0 = _lattice_data(alpha, n, m)
    shift = 0.0 if (n - m) % 2 == 0 else 0.5
    base = nearest_integer(alpha / eps) - alpha / eps
    out = []
    for n1 in N1_range:
        c2 = 1j * math.pi * (base + n1 + shift) + (n + 0.5) * ell0 - _log_sqrt2pi_h(n)
        out.append(1j * math.pi * alpha - 0.5 * (n + 0.5) * eps * math.log(1 / eps) + c2 * eps)
    return out


def predict_pole_lattice(alpha: float, n: int, N1_range, m: int) -> list[complex]:
    """x = x0 + x1 eps log(1/eps) + x2 eps for each N1 in N1_range."""
    eps, x0, dp, ell0 = _lattice_data(alpha, n, m)
    shift = 0.0 if (n - m) % 2 == 0 else 0.5
    base = nearest_integer(alpha / eps) - alpha / eps
    x1 = -(n + 0.5) / (2 * dp)
    out = []
    for n1 in N1_range:
        x2 = (1j * math.pi * (base + n1 + shift) + (n + 0.5) * ell0 - _log_sqrt2pi_h(n)) / dp
        out.append(x0 + x1 * eps * math.log(1 / eps) + x2 * eps)
    return out


# --- admissibility -----------------------------------------------------------------

def _near_singularity(x: complex, n: int, m: int, radius: float) -> bool:
    eps = epsilon_of(m)
    shift = 0.0 if (n - m) % 2 == 0 else 0.5
    X = exponent(x, n, eps)
    k = round(X.imag / (math.pi * eps) - shift)
    target = 1j * math.pi * eps * (k + shift)
    dX = exponent_prime(x, n, eps)
    if abs(X - target) / abs(dX) > 10 * radius:
        return False
    z = x
    for _ in range(30):
        if not geo.in_sector(z):
            return False
        step = (exponent(z, n, eps) - target) / exponent_prime(z, n, eps)
        z -= step
        if abs(step) < 1e-14 * max(1.0, abs(z)):
            break
        if abs(z - x) > 20 * radius:
            return False
    return abs(z - x) <= radius


def _near_zero(f, x: complex, radius: float) -> bool:
    # Newton from x and from eight points on the circle of the given radius
    seeds = [x] + [x + radius * cmath.exp(2j * math.pi * k / 8) for k in range(8)]
    h = 1e-7 * max(1.0, abs(x))
    for z in seeds:
        for _ in range(40):
            try:
                fz = f(z)
                df = (f(z + h) - f(z - h)) / (2 * h)
            except (HoleError, ZeroDivisionError, geo.BranchError, SeriesDivergence):
                break
            if df == 0:
                break
            step = fz / df
            z -= step
            if abs(z - x) > 4 * radius or not geo.in_sector(z):
                break
            if abs(step) < 1e-13 * max(1.0, abs(z)):
                if abs(z - x) <= radius:
                    return True
                break
    return False


def in_admissible_set(x: complex, m: int, delta: float = DEFAULT_DELTA, which: str = "inf",
                      N: int | None = None) -> bool:
    """Whether x lies outside every excluded disc of radius delta * eps.

    which = "inf": discs around the singularities of the H_n (n = 0..N);
    "0U" / "0V": discs around zeros of the U / V edge approximations.
    """
    x = complex(x)
    eps = epsilon_of(m)
    radius = delta * eps
    if N is None:
        N = K_of(x, eps) + EXTRA_TERMS
    if which == "inf":
        return not any(_near_singularity(x, n, m, radius) for n in range(N + 1))
    if which == "0U":
        return not _near_zero(lambda z: edge_U_bracket(z, m, N).value, x, radius)
    if which == "0V":
        return not _near_zero(lambda z: edge_V_bracket(z, m, N).value, x, radius)
    raise ValueError(f"unknown admissible set {which!r}")


def validity_margin_ok(x: complex, m: int, M: float = DEFAULT_M_BOUND) -> bool:
    """Re d(x) >= -M log(m)/m."""
    return geo.frak_d(complex(x)).real >= -M * math.log(m) / m
