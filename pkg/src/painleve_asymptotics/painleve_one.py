"""The real tritronquee solution of Y'' = 6 Y^2 + t and its Hamiltonian.

The first-order system H' = -Y, Y' = Z, Z' = 6 Y^2 + t is advanced by Taylor
series of fixed high order whose coefficients follow from a two-term
recursion.  The step is a fixed fraction of the radius of convergence read off
the tail coefficients, so paths slow down near poles and never step over one.
The complex plane is covered by a breadth-first sweep over a square grid.
Every pole found on the way is located and certified by a Laurent fit on a
circle around it.
"""

from __future__ import annotations

import cmath
import math
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .geometry import X_C
from .scaled import ScaledComplex

ORDER = 30
STEP_FRACTION = 0.3
MIN_RADIUS = 0.02
T_START = -400.0
ASYMPTOTIC_TERMS = 6


class PoleProximity(ArithmeticError):
    def __init__(self, message: str, estimate: complex):
        super().__init__(message)
        self.estimate = estimate


class LaurentCertificationError(ArithmeticError):
    """A fitted pole does not have the Laurent structure of a PI pole."""


# --- large-|t| start ------------------------------------------------------------

@lru_cache(maxsize=None)
def asymptotic_coefficients(n: int) -> tuple:
    """a_0..a_n in Y ~ -(tau/6)^{1/2} sum a_k tau^{-5k/2}, tau = -t."""
    a = [1.0]
    for k in range(1, n + 1):
        p = (25 * (k - 1) ** 2 - 1) / 4
        conv = sum(a[j] * a[k - j] for j in range(1, k))
        a.append((-a[k - 1] * p / math.sqrt(6) - conv) / 2)
    return tuple(a)


def tritronquee_asymptotic(t: complex, terms: int = ASYMPTOTIC_TERMS) -> tuple[complex, complex]:
    """(Y, Y') from the large-|t| expansion, valid for |arg(-t)| < 4 pi/5."""
    tau = -complex(t)
    a = asymptotic_coefficients(terms)
    root = cmath.sqrt(tau / 6)
    y = 0j
    dy_dtau = 0j
    for k, ak in enumerate(a):
        y += ak * tau ** (-2.5 * k)
        dy_dtau += ak * (0.5 - 2.5 * k) * tau ** (-2.5 * k - 1)
    Y = -root * y
    # d/dt = -d/dtau; the factor tau^{1/2} is folded into dy_dtau
    Z = root * dy_dtau
    return Y, Z


def hamiltonian(t: complex, Y: complex, Z: complex) -> complex:
    return Z * Z / 2 - 2 * Y ** 3 - t * Y


# --- Taylor steps ----------------------------------------------------------------

@dataclass(frozen=True)
class State:
    t: complex
    Y: complex
    Z: complex
    H: complex


def taylor_coefficients(s: State, order: int = ORDER) -> tuple[np.ndarray, np.ndarray]:
    """Taylor coefficients of Y and H about s.t up to the given order."""
    y = np.zeros(order + 1, dtype=complex)
    y[0], y[1] = s.Y, s.Z
    for k in range(order - 1):
        sq = np.dot(y[: k + 1], y[k::-1])
        forcing = s.t if k == 0 else (1.0 if k == 1 else 0.0)
        y[k + 2] = (6 * sq + forcing) / ((k + 1) * (k + 2))
    h = np.zeros(order + 1, dtype=complex)
    h[0] = s.H
    h[1:] = -y[:-1] / np.arange(1, order + 1)
    return y, h


def convergence_radius(y: np.ndarray) -> float:
    n = len(y) - 1
    vals = [abs(y[k]) ** (-1.0 / k) for k in (n - 1, n) if y[k] != 0]
    return min(vals) if vals else math.inf


def pole_estimate(s: State, y: np.ndarray) -> complex:
    """Nearest double pole from the ratio of the last two coefficients."""
    n = len(y) - 1
    return s.t + ((n + 1) / n) * y[n - 1] / y[n]


def _eval(y, h, dt, t_new) -> State:
    powers = dt ** np.arange(len(y))
    Y = np.dot(y, powers)
    Z = np.dot(y[1:] * np.arange(1, len(y)), powers[:-1])
    H = np.dot(h, powers)
    return State(t_new, complex(Y), complex(Z), complex(H))


def integrate_segment(s: State, t_end: complex, min_radius: float = MIN_RADIUS,
                      order: int = ORDER) -> State:
    """Follow the straight segment from s.t to t_end with adaptive Taylor steps."""
    t_end = complex(t_end)
    while s.t != t_end:
        y, h = taylor_coefficients(s, order)
        rad = convergence_radius(y)
        if rad < min_radius:
            raise PoleProximity(f"pole within {rad:.3g} of t = {s.t}", pole_estimate(s, y))
        remaining = t_end - s.t
        step = STEP_FRACTION * rad
        if abs(remaining) <= step:
            s = _eval(y, h, remaining, t_end)
        else:
            dt = remaining / abs(remaining) * step
            s = _eval(y, h, dt, s.t + dt)
    return s


def initial_state(t_start: complex = T_START) -> State:
    Y, Z = tritronquee_asymptotic(t_start)
    return State(complex(t_start), Y, Z, hamiltonian(t_start, Y, Z))


def initialization_error(t_start: complex = T_START) -> float:
    """Size of the first omitted term of the large-|t| series at t_start."""
    tau = -complex(t_start)
    a = asymptotic_coefficients(ASYMPTOTIC_TERMS + 1)
    return abs(cmath.sqrt(tau / 6) * a[-1] * tau ** (-2.5 * (ASYMPTOTIC_TERMS + 1)))


# --- Laurent fit ------------------------------------------------------------------

@dataclass(frozen=True)
class LaurentFit:
    t0: complex
    y_coeffs: dict
    h_coeffs: dict
    radius: float

    @property
    def h_residue(self) -> complex:
        return self.h_coeffs[-1]

    def certify(self, tol_small: float = 1e-6, tol_c2: float = 1e-4, tol_c3: float = 1e-3,
                tol_residue: float = 1e-4) -> None:
        c = self.y_coeffs
        checks = {
            "leading coefficient 1": abs(c[-2] - 1) < tol_small,
            "(t - t0)^-1 vanishes": abs(c[-1]) < tol_small,
            "constant term vanishes": abs(c[0]) < tol_small,
            "(t - t0)^2 is -t0/10": abs(c[2] + self.t0 / 10) < tol_c2,
            "(t - t0)^3 is -1/6": abs(c[3] + 1 / 6) < tol_c3,
            "H residue 1": abs(self.h_residue - 1) < tol_residue,
        }
        failed = [k for k, ok in checks.items() if not ok]
        if failed:
            raise LaurentCertificationError(f"pole near {self.t0}: failed {', '.join(failed)}")


def _circle_samples(start: State, centre: complex, radius: float, points: int):
    # walk to the circle and then around it along chords
    angles = 2 * math.pi * np.arange(points) / points
    first = centre + radius
    s = integrate_segment(start, first)
    ys, hs = [s.Y], [s.H]
    for th in angles[1:]:
        s = integrate_segment(s, centre + radius * cmath.exp(1j * th))
        ys.append(s.Y)
        hs.append(s.H)
    return angles, np.array(ys), np.array(hs)


def _laurent_from_samples(angles, vals, radius, kmin=-4, kmax=4) -> dict:
    out = {}
    for k in range(kmin, kmax + 1):
        out[k] = complex(np.mean(vals * np.exp(-1j * k * angles)) / radius ** k)
    return out


def laurent_fit(t0_guess: complex, start: State, radius: float = 0.3, points: int = 64,
                iterations: int = 6) -> LaurentFit:
    """Refine a pole location from Y on a circle around it and read off the Laurent data.

    ``start`` is any state from which the circle can be reached by a straight
    segment that keeps clear of poles.
    """
    centre = complex(t0_guess)
    for _ in range(iterations):
        angles, ys, hs = _circle_samples(start, centre, radius, points)
        cy = _laurent_from_samples(angles, ys, radius)
        shift = cy[-3] / (2 * cy[-2])
        centre += shift
        if abs(shift) < 1e-13:
            break
    angles, ys, hs = _circle_samples(start, centre, radius, points)
    return LaurentFit(centre, _laurent_from_samples(angles, ys, radius),
                      _laurent_from_samples(angles, hs, radius), radius)


def laurent_model(t0: complex, t: complex) -> complex:
    """Leading Laurent terms of Y at a pole t0."""
    w = t - t0
    return w ** -2 - t0 / 10 * w ** 2 - w ** 3 / 6


# --- field ---------------------------------------------------------------------

@dataclass
class TritronqueeField:
    spacing: float
    window: tuple
    nodes: dict = field(default_factory=dict)
    poles: list = field(default_factory=list)
    rays: dict = field(default_factory=dict)
    init_error: float = 0.0

    def node_t(self, idx) -> complex:
        i, j = idx
        return complex(self.window[0] + i * self.spacing, self.window[2] + j * self.spacing)

    def pole_locations(self) -> list[complex]:
        return [p.t0 for p in self.poles]

    def distance_to_poles(self, t: complex) -> float:
        return min((abs(t - p) for p in self.pole_locations()), default=math.inf)

    def evaluate(self, t: complex) -> State:
        """Y, Z, H at t by a Taylor path from a nearby grid node."""
        t = complex(t)
        near = sorted(self.nodes.values(), key=lambda s: abs(s.t - t))
        for s in near[:12]:
            if _segment_clearance(s.t, t, self.pole_locations()) < 0.1:
                continue
            try:
                return integrate_segment(s, t)
            except PoleProximity:
                continue
        raise PoleProximity(f"no pole-free path to t = {t}", t)

    def samples(self):
        return [self.nodes[k] for k in sorted(self.nodes)]


def _segment_clearance(a: complex, b: complex, poles) -> float:
    best = math.inf
    d = b - a
    for p in poles:
        if d == 0:
            dist = abs(p - a)
        else:
            u = max(0.0, min(1.0, ((p - a) * d.conjugate()).real / abs(d) ** 2))
            dist = abs(a + u * d - p)
        best = min(best, dist)
    return best


def integrate_ray(arg_minus_t: float, origin: State, r_end: float = 9.0,
                  samples: int = 90) -> list[State]:
    """Trajectory from t = 0 outward along arg(-t) = arg_minus_t.

    Only the negative real axis can be integrated inward from far away: off
    that axis the recessive mode of the linearisation grows inward like
    exp(c |t|^{5/4}) and would swamp the start-up error.  The other rays are
    therefore launched from the origin, where the real-axis data are
    accurate.
    """
    direction = -cmath.exp(1j * arg_minus_t)
    s = origin
    out = [s]
    for r in np.linspace(0.0, r_end, samples + 1)[1:]:
        s = integrate_segment(s, r * direction)
        out.append(s)
    return out


def real_axis_trajectory(t_start: float = T_START, t_end: float = 0.0, samples: int = 400) -> list[State]:
    """Trajectory along the negative real axis from the large-|t| start."""
    s = initial_state(t_start)
    out = [s]
    for t in np.linspace(t_start, t_end, samples + 1)[1:]:
        s = integrate_segment(s, t)
        out.append(s)
    return out


DEFAULT_RAYS = (0.0, math.pi / 5, -math.pi / 5, 2 * math.pi / 5, -2 * math.pi / 5,
                3 * math.pi / 5, -3 * math.pi / 5)


def _cluster(points, tol):
    reps = []
    for p in points:
        if all(abs(p - q) > tol for q in reps):
            reps.append(p)
    return reps


def tritronquee_solve(window=(-9.0, 9.0, -9.0, 9.0), spacing: float = 0.25,
                      t_start: float = T_START, rays=DEFAULT_RAYS) -> TritronqueeField:
    """Y, Z, H on a grid covering the window, plus certified poles and ray trajectories.

    The sweep starts from the negative real axis, where the large-|t| series
    supplies initial data at t_start.
    """
    if t_start > -100:
        raise ValueError("t_start must be <= -100")
    fld = TritronqueeField(spacing, tuple(window), init_error=initialization_error(t_start))
    axis = real_axis_trajectory(t_start)
    for th in rays:
        fld.rays[th] = axis if th == 0 else integrate_ray(th, axis[-1])
    nx = int(round((window[1] - window[0]) / spacing))
    ny = int(round((window[3] - window[2]) / spacing))
    j0 = int(round(-window[2] / spacing))
    seed = (0, j0)
    s = integrate_segment(initial_state(t_start), fld.node_t(seed))
    fld.nodes[seed] = s
    queue = deque([seed])
    estimates = []
    while queue:
        idx = queue.popleft()
        s = fld.nodes[idx]
        y, _ = taylor_coefficients(s)
        if convergence_radius(y) < 1.5 * spacing:
            estimates.append(pole_estimate(s, y))
        i, j = idx
        for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            nb = (i + di, j + dj)
            if nb in fld.nodes or not (0 <= nb[0] <= nx and 0 <= nb[1] <= ny):
                continue
            try:
                fld.nodes[nb] = integrate_segment(s, fld.node_t(nb))
            except PoleProximity:
                continue
            queue.append(nb)
    # certify each distinct pole from a node at a comfortable distance
    lo_re, hi_re, lo_im, hi_im = window
    inside = [p for p in estimates if lo_re < p.real < hi_re and lo_im < p.imag < hi_im]
    for guess in _cluster(inside, 0.2):
        start = min((n for n in fld.nodes.values() if 0.45 <= abs(n.t - guess) <= 1.2),
                    key=lambda n: abs(abs(n.t - guess) - 0.6), default=None)
        if start is None:
            continue
        fit = laurent_fit(guess, start)
        if all(abs(fit.t0 - p.t0) > 1e-6 for p in fld.poles):
            fld.poles.append(fit)
    fld.poles.sort(key=lambda p: (round(p.t0.real, 9), round(p.t0.imag, 9)))
    return fld


@lru_cache(maxsize=1)
def default_field() -> TritronqueeField:
    return tritronquee_solve()


# --- corner approximations -------------------------------------------------------

T_MAP_CONST = 2 ** (1 / 15) * 3 ** (-1 / 3)
U_CORR = 2 ** (6 / 15)
P_CORR = 2 ** (7 / 15) / 3 ** (1 / 3)
P_CENTRE = 6 ** (-1 / 3)


@dataclass(frozen=True)
class CornerMap:
    m: int

    def t_of_x(self, x: complex) -> complex:
        return T_MAP_CONST * self.m ** 0.8 * (complex(x) - X_C)

    def x_of_t(self, t: complex) -> complex:
        return X_C + complex(t) / (T_MAP_CONST * self.m ** 0.8)


def corner_approx(x: complex, m: int, family: str, fld: TritronqueeField | None = None,
                  clearance: float = 0.25) -> ScaledComplex:
    """Leading corner approximation of the scaled U, V, P or Q at x.

    U and V refer to the normalised quantities that tend to 1 at the corner;
    P and Q to m^{-1/3} P_m and m^{-1/3} Q_m.
    """
    fld = default_field() if fld is None else fld
    t = CornerMap(m).t_of_x(x)
    if fld.distance_to_poles(t) < clearance:
        raise PoleProximity(f"t = {t} is within {clearance} of a pole of Y", t)
    s = fld.evaluate(t)
    if family == "U":
        val = 1 + U_CORR * m ** -0.2 * s.H
    elif family == "V":
        val = 1 - U_CORR * m ** -0.2 * s.H
    elif family == "P":
        val = -P_CENTRE - m ** -0.4 * P_CORR * s.Y
    elif family == "Q":
        val = P_CENTRE + m ** -0.4 * P_CORR * s.Y
    else:
        raise ValueError(f"unknown family {family!r}")
    return ScaledComplex.from_complex(val)
