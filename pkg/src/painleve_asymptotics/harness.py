"""Exact-versus-asymptotic comparisons, hole filtering and pole matching.

Every report is deterministic: floats are written with ``repr`` and nothing
time-dependent enters a report.
"""
from __future__ import annotations

import cmath
import hashlib
import math
import statistics
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import edge
from . import geometry as geo
from . import painleve_one as pi1
from . import roots as rootfind
from .ladder import LadderState, RationalFunction, ladder_build, ladder_step, log_derivative, from_x, to_x
from .scaled import ScaledComplex, eval_scaled


class HarnessError(ValueError):
    """Misconfigured comparison, e.g. no admissible point survived."""


def config_hash(config: dict) -> str:
    """sha256 over the sorted key=value lines of a flat config."""
    text = "\n".join(f"{k}={config[k]!r}" for k in sorted(config))
    return hashlib.sha256(text.encode()).hexdigest()


def fmt(v) -> str:
    # builtin floats only, so numpy scalars print as plain numbers
    if isinstance(v, complex):
        return f"{float(v.real)!r},{float(v.imag)!r}"
    if isinstance(v, float):
        return repr(float(v))
    return str(v)


# --- exact side ------------------------------------------------------------------

_STATES: list[LadderState] = []


def ladder_state(m: int) -> LadderState:
    """State m of the ladder, extending a module-level cache as needed."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if not _STATES:
        _STATES.extend(ladder_build(0))
    while len(_STATES) <= m:
        u = _STATES[-1].u
        _STATES.append(LadderState(len(_STATES), ladder_step(u), RationalFunction(1 / u.scale, u.d, u.n)))
    return _STATES[m]


@lru_cache(maxsize=None)
def p_function(m: int) -> RationalFunction:
    return log_derivative(ladder_state(m).u)


@lru_cache(maxsize=None)
def q_function(m: int) -> RationalFunction:
    return log_derivative(ladder_state(m).v)


def exact_edge_value(family: str, x: complex, m: int, precision_bits: int = 256) -> ScaledComplex:
    """Exact side in the normalisation of the edge approximations."""
    y = from_x(complex(x), m)
    if family == "U":
        raw = eval_scaled(ladder_state(m).u, y, precision_bits)
        return raw.times_exp(-(2 * m / 3) * math.log(m) - m * edge.mu_of(x))
    if family == "V":
        raw = eval_scaled(ladder_state(m).v, y, precision_bits)
        return raw.times_exp((2 * (m - 1) / 3) * math.log(m) + m * edge.mu_of(x))
    if family == "P":
        return eval_scaled(p_function(m), y, precision_bits).times_exp(-math.log(m) / 3)
    if family == "Q":
        return eval_scaled(q_function(m), y, precision_bits).times_exp(-math.log(m) / 3)
    raise ValueError(f"unknown family {family!r}")


def exact_corner_value(family: str, x: complex, m: int, precision_bits: int = 256) -> ScaledComplex:
    """Exact side normalised so that U, V tend to 1 and P, Q to -+6^(-1/3) at the corner."""
    x = complex(x)
    y = from_x(x, m)
    drift = m * (x - geo.X_C) / 6 ** (1 / 3)
    if family == "U":
        raw = eval_scaled(ladder_state(m).u, y, precision_bits)
        return raw.times_exp(-(2 * m / 3) * math.log(m / 6) + 0.5 - m / 3 + drift)
    if family == "V":
        raw = eval_scaled(ladder_state(m).v, y, precision_bits)
        return raw.times_exp((2 * (m - 1) / 3) * math.log(m / 6) + m / 3 - 0.5 - drift)
    if family in ("P", "Q"):
        return exact_edge_value(family, x, m, precision_bits)
    raise ValueError(f"unknown family {family!r}")


@lru_cache(maxsize=None)
def u_zeros(m: int, precision_bits: int = 256) -> tuple:
    """Roots in y of the numerator of U_m (the +1 residue poles of P_m)."""
    return tuple(complex(z) for z in rootfind.roots(ladder_state(m).u.num, precision_bits))


@lru_cache(maxsize=None)
def u_poles(m: int, precision_bits: int = 256) -> tuple:
    """Roots in y of the denominator of U_m (the -1 residue poles of P_m)."""
    return tuple(complex(z) for z in rootfind.roots(ladder_state(m).u.den, precision_bits))


# --- reports -----------------------------------------------------------------------

@dataclass(frozen=True)
class PointRecord:
    family: str
    m: int
    x: complex
    exact: ScaledComplex
    approx: ScaledComplex
    abs_error: float
    log_error: float
    flags: str = ""
    t: complex | None = None
    K: int | None = None


def _errors(exact: ScaledComplex, approx: ScaledComplex) -> tuple[float, float]:
    ae = abs(exact.to_complex() - approx.to_complex())
    if exact.is_zero or approx.is_zero:
        return ae, math.inf
    dphase = math.remainder(approx.phase - exact.phase, 2 * math.pi)
    return ae, math.hypot(approx.logmag - exact.logmag, dphase)


@dataclass
class ComparisonReport:
    kind: str
    grid: dict
    records: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def errors(self, family: str, m: int, metric: str = "abs") -> list[float]:
        key = "abs_error" if metric == "abs" else "log_error"
        return [getattr(r, key) for r in self.records if r.family == family and r.m == m]

    def max_error(self, family: str, m: int, metric: str = "abs") -> float:
        return max(self.errors(family, m, metric))

    def csv_text(self) -> str:
        lines = ["family,m,re_x,im_x,re_t,im_t,K,exact_logmag,exact_phase,approx_logmag,approx_phase,"
                 "abs_error,log_error,flags"]
        for r in self.records:
            t = r.t if r.t is not None else complex(math.nan, math.nan)
            lines.append(",".join([r.family, str(r.m), fmt(r.x), fmt(t), "" if r.K is None else str(r.K),
                                   fmt(r.exact.logmag), fmt(r.exact.phase),
                                   fmt(r.approx.logmag), fmt(r.approx.phase),
                                   fmt(r.abs_error), fmt(r.log_error), r.flags]))
        return "\n".join(lines) + "\n"

    def summary_text(self) -> str:
        items = [("kind", self.kind)] + [(f"grid.{k}", v) for k, v in self.grid.items()]
        items += list(self.summary.items())
        return "".join(f"{k}={fmt(v)}\n" for k, v in items)


def _summarise(report: ComparisonReport, families, m_list) -> None:
    for fam in families:
        for m in m_list:
            errs = report.errors(fam, m)
            if not errs:
                continue
            report.summary[f"{fam}.m{m}.max_abs"] = max(errs)
            report.summary[f"{fam}.m{m}.median_abs"] = statistics.median(errs)
            report.summary[f"{fam}.m{m}.max_log"] = max(report.errors(fam, m, "log"))
        for m1, m2 in zip(m_list, m_list[1:]):
            e1, e2 = report.errors(fam, m1), report.errors(fam, m2)
            if e1 and e2:
                report.summary[f"{fam}.ratio.m{m2}_over_m{m1}"] = max(e2) / max(e1)


# --- edge comparison ---------------------------------------------------------------

def edge_point_admissible(x: complex, m: int, families, delta: float, M: float) -> bool:
    if not geo.in_sector(x) or not edge.validity_margin_ok(x, m, M):
        return False
    if not edge.in_admissible_set(x, m, delta, "inf"):
        return False
    if "P" in families and not edge.in_admissible_set(x, m, delta, "0U"):
        return False
    if "Q" in families and not edge.in_admissible_set(x, m, delta, "0V"):
        return False
    return True


def admissible_grid(x_min: float, x_max: float, count: int, m_list, families,
                    delta: float = edge.DEFAULT_DELTA, M: float = edge.DEFAULT_M_BOUND,
                    density: int = 4) -> list[float]:
    """count real points of [x_min, x_max] admissible for every m in m_list.

    Candidates form a uniform grid density times finer than requested; the
    survivors are thinned evenly to count points.
    """
    cands = np.linspace(x_min, x_max, density * count)
    good = [float(x) for x in cands
            if all(edge_point_admissible(complex(x), m, families, delta, M) for m in m_list)]
    if not good:
        raise HarnessError("no admissible point in the requested grid")
    if len(good) <= count:
        return good
    pick = np.round(np.linspace(0, len(good) - 1, count)).astype(int)
    return [good[i] for i in pick]


def _edge_approx(family: str, x: complex, m: int, N, delta: float) -> ScaledComplex:
    if family == "U":
        return edge.edge_U(x, m, N, check_holes=False, delta=delta)
    if family == "V":
        return edge.edge_V(x, m, N, check_holes=False, delta=delta)
    if family == "P":
        return ScaledComplex.from_complex(edge.edge_P(x, m, N, check_holes=False, delta=delta))
    if family == "Q":
        return ScaledComplex.from_complex(edge.edge_Q(x, m, N, check_holes=False, delta=delta))
    raise ValueError(f"unknown family {family!r}")


def compare_edge(m_list, x_min: float = 1.0, x_max: float = 2.0, count: int = 200,
                 delta: float = edge.DEFAULT_DELTA, N: int | None = None,
                 families=("U", "P"), M: float = edge.DEFAULT_M_BOUND,
                 precision_bits: int = 256, grid=None) -> ComparisonReport:
    """Edge approximations against the exact ladder on a real admissible grid."""
    m_list = list(m_list)
    xs = admissible_grid(x_min, x_max, count, m_list, families, delta, M) if grid is None else list(grid)
    report = ComparisonReport("edge", {"x_min": float(x_min), "x_max": float(x_max),
                                       "requested": count, "points": len(xs), "delta": float(delta),
                                       "trunc": "K+12" if N is None else N, "M": float(M),
                                       "m_list": " ".join(map(str, m_list)),
                                       "families": " ".join(families)})
    # every grid point passed these admissibility tests for every m
    flags = " ".join(["sector", "margin", "inf"] + ["0U"] * ("P" in families) + ["0V"] * ("Q" in families))
    for m in m_list:
        eps = edge.epsilon_of(m)
        for x in xs:
            xc = complex(x)
            k = edge.K_of(xc, eps)
            for fam in families:
                ex = exact_edge_value(fam, xc, m, precision_bits)
                ap = _edge_approx(fam, xc, m, N, delta)
                ae, le = _errors(ex, ap)
                report.records.append(PointRecord(fam, m, xc, ex, ap, ae, le, flags, K=k))
    _summarise(report, families, m_list)
    return report


# --- corner comparison -----------------------------------------------------------

def exact_corner_poles(m: int, precision_bits: int = 256) -> list[complex]:
    """All poles of P_m (zeros and poles of U_m) in the corner variable t."""
    cmap = pi1.CornerMap(m)
    return [cmap.t_of_x(to_x(y, m)) for y in u_zeros(m, precision_bits) + u_poles(m, precision_bits)]


def compare_corner(m_list, t_min: float = -5.0, t_max: float = 2.0, count: int = 141,
                   clearance: float = 0.3, families=("U", "P"), precision_bits: int = 256,
                   fld: pi1.TritronqueeField | None = None) -> ComparisonReport:
    """Corner approximations against the exact ladder on real t = const m^(4/5) (x - x_c).

    A grid point is dropped for every m when it lies within clearance of a pole
    of Y or of a pole of any exact P_m in m_list.
    """
    fld = pi1.default_field() if fld is None else fld
    m_list = list(m_list)
    exact_poles = [p for m in m_list for p in exact_corner_poles(m, precision_bits)]
    ts, skipped = [], 0
    for t in np.linspace(t_min, t_max, count):
        t = float(t)
        near_exact = min((abs(t - p) for p in exact_poles), default=math.inf)
        if fld.distance_to_poles(complex(t)) < clearance or near_exact < clearance:
            skipped += 1
        else:
            ts.append(t)
    if not ts:
        raise HarnessError("every corner grid point lies within the pole clearance")
    report = ComparisonReport("corner", {"t_min": float(t_min), "t_max": float(t_max),
                                         "requested": count, "points": len(ts),
                                         "clearance": float(clearance),
                                         "m_list": " ".join(map(str, m_list)),
                                         "families": " ".join(families)})
    for m in m_list:
        cmap = pi1.CornerMap(m)
        for t in ts:
            x = cmap.x_of_t(t)
            for fam in families:
                ex = exact_corner_value(fam, x, m, precision_bits)
                ap = pi1.corner_approx(x, m, fam, fld, clearance)
                ae, le = _errors(ex, ap)
                report.records.append(PointRecord(fam, m, x, ex, ap, ae, le, t=complex(t)))
    report.summary["skipped_near_poles"] = skipped
    _summarise(report, families, m_list)
    return report


# --- pole matching -------------------------------------------------------------------

@dataclass
class PairingReport:
    pairs: list            # (actual index, predicted index, distance)
    unpaired_actual: list
    unpaired_predicted: list

    @property
    def distances(self) -> list[float]:
        return [d for _, _, d in self.pairs]

    @property
    def max_distance(self) -> float:
        return max(self.distances, default=math.nan)

    @property
    def mean_distance(self) -> float:
        return statistics.fmean(self.distances) if self.pairs else math.nan

    def summary(self, prefix: str) -> dict:
        return {f"{prefix}.paired": len(self.pairs),
                f"{prefix}.unpaired_actual": len(self.unpaired_actual),
                f"{prefix}.unpaired_predicted": len(self.unpaired_predicted),
                f"{prefix}.max_distance": self.max_distance,
                f"{prefix}.mean_distance": self.mean_distance}


def _entry(item):
    if isinstance(item, tuple):
        return complex(item[0]), item[1]
    return complex(item), None


def match_poles(actual, predicted, radius: float = math.inf) -> PairingReport:
    """Greedy exclusive nearest-neighbour pairing.

    Items are locations or (location, residue) tuples; when both sides carry a
    residue only equal residues may pair.  Pairs farther apart than radius are
    never formed.
    """
    a = [_entry(v) for v in actual]
    p = [_entry(v) for v in predicted]
    if not a or not p:
        raise HarnessError("pole matching needs two nonempty lists")
    cand = []
    for i, (za, ra) in enumerate(a):
        for j, (zp, rp) in enumerate(p):
            if ra is not None and rp is not None and ra != rp:
                continue
            d = abs(za - zp)
            if d <= radius:
                cand.append((d, i, j))
    cand.sort()
    used_a, used_p, pairs = set(), set(), []
    for d, i, j in cand:
        if i in used_a or j in used_p:
            continue
        used_a.add(i)
        used_p.add(j)
        pairs.append((i, j, d))
    pairs.sort(key=lambda q: q[1])
    return PairingReport(pairs, [i for i in range(len(a)) if i not in used_a],
                         [j for j in range(len(p)) if j not in used_p])


# --- corner pole pairing -----------------------------------------------------------

def corner_pole_sets(m: int, t_radius: float, precision_bits: int = 256) -> list[tuple[complex, int]]:
    """Poles of P_m near the corner, in the t variable, with their residues."""
    cmap = pi1.CornerMap(m)
    out = []
    for zs, res in ((u_zeros(m, precision_bits), 1), (u_poles(m, precision_bits), -1)):
        for y in zs:
            t = cmap.t_of_x(to_x(y, m))
            if abs(t) < t_radius:
                out.append((t, res))
    out.sort(key=lambda e: (e[1], round(e[0].real, 9), round(e[0].imag, 9)))
    return out


@dataclass
class CornerPairing:
    m: int
    y_poles: list
    exact: list
    pairing: PairingReport

    def all_matched(self, radius: float) -> bool:
        return not self.pairing.unpaired_predicted and self.pairing.max_distance <= radius


def corner_pole_pairing(m: int, t_window: float = 6.0, radius: float = math.inf,
                        fld: pi1.TritronqueeField | None = None) -> CornerPairing:
    """Each double pole of Y (|t0| < t_window) against one +1 and one -1 pole of P_m."""
    fld = pi1.default_field() if fld is None else fld
    y_poles = [p for p in fld.pole_locations() if abs(p) < t_window]
    predicted = [(p, 1) for p in y_poles] + [(p, -1) for p in y_poles]
    exact = corner_pole_sets(m, t_window + 2.0)
    return CornerPairing(m, y_poles, exact, match_poles(exact, predicted, radius))


def corrected_zero_of_u(pole: pi1.LaurentFit, m: int, fld: pi1.TritronqueeField) -> complex:
    """Zero of the corner U approximation 1 + c m^(-1/5) H(t) next to a pole of Y.

    H = 1/(t - t0) + h0 + ..., so the zero starts near t0 - c/(1 + c h0); a
    damped Newton iteration on the field then settles it.
    """
    c = pi1.U_CORR * m ** -0.2
    t0 = pole.t0
    t = t0 - c / (1 + c * pole.h_coeffs[0])
    for _ in range(60):
        s = fld.evaluate(t)
        step = (1 + c * s.H) / (-c * s.Y)
        if abs(step) > 0.1:
            step *= 0.1 / abs(step)
        t -= step
        if abs(t - t0) > 3 * c:
            break
        if abs(step) < 1e-12:
            return t
    raise HarnessError(f"Newton for the zero of the U approximation near {t0} did not settle")


def corrected_corner_pairing(m: int, t_window: float = 6.0,
                             fld: pi1.TritronqueeField | None = None) -> PairingReport:
    """+1 poles of P_m against the first-order corrected zeros of the U approximation."""
    fld = pi1.default_field() if fld is None else fld
    predicted = [corrected_zero_of_u(p, m, fld) for p in fld.poles if abs(p.t0) < t_window]
    exact = [t for t, res in corner_pole_sets(m, t_window + 2.0) if res == 1]
    return match_poles(exact, predicted)


# --- edge lattice pairing ------------------------------------------------------------

def lattice_alphas(m: int, alpha_max: float) -> list[float]:
    """alpha = k eps for integers k with |alpha| <= alpha_max."""
    eps = edge.epsilon_of(m)
    kmax = int(math.floor(alpha_max / eps + 1e-12))
    return [k * eps for k in range(-kmax, kmax + 1)]


def predicted_edge_poles(m: int, alpha_max: float, n_values=(0, 1, 2)) -> list[tuple[complex, int, float]]:
    """(x, n, alpha) for the N1 = 0 lattice point at each alpha = k eps.

    Points whose predicted d-value has |Im d| / pi > alpha_max are dropped: the
    expansion degenerates as d approaches a corner value +-i pi / 2.
    """
    out = []
    for n in n_values:
        for alpha in lattice_alphas(m, alpha_max):
            d_val = edge.lattice_offsets(alpha, n, [0], m)[0]
            if abs(d_val.imag) / math.pi > alpha_max:
                continue
            out.append((edge.predict_pole_lattice(alpha, n, [0], m)[0], n, alpha))
    return out


def actual_edge_poles(m: int, near, reach: float, precision_bits: int = 256) -> list[complex]:
    """Poles of U_m in the x-plane within reach of any of the given points."""
    xs = [to_x(y, m) for y in u_poles(m, precision_bits)]
    return sorted((x for x in xs if min(abs(x - p) for p in near) <= reach),
                  key=lambda z: (round(z.real, 9), round(z.imag, 9)))


@dataclass
class EdgePairing:
    m: int
    predicted: list       # (x, n, alpha)
    actual: list          # x
    pairing: PairingReport

    def column_phase(self, n: int = 0, alpha_window: float = 0.1) -> float:
        """min |Im d(p)| / (pi eps) over actual poles paired with near-axis points of column n."""
        eps = edge.epsilon_of(self.m)
        vals = [abs(geo.frak_d(self.actual[i]).imag) / (math.pi * eps)
                for i, j, _ in self.pairing.pairs
                if self.predicted[j][1] == n and abs(self.predicted[j][2]) <= alpha_window]
        if not vals:
            raise HarnessError(f"no paired pole of column {n} near the real axis")
        return min(vals)


def edge_pole_pairing(m: int, alpha_max: float = 0.45, n_values=(0, 1, 2)) -> EdgePairing:
    predicted = predicted_edge_poles(m, alpha_max, n_values)
    near = [p for p, _, _ in predicted]
    actual = actual_edge_poles(m, near, 10.0 / m)
    return EdgePairing(m, predicted, actual, match_poles(actual, near))


def stagger(first: EdgePairing, second: EdgePairing, n: int = 0) -> float:
    """Relative shift of the near-axis lattice between two degrees, in lattice spacings."""
    return abs(second.column_phase(n) - first.column_phase(n))
