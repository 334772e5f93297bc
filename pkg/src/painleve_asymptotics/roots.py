"""All complex roots of an exact polynomial.

Aberth's simultaneous iteration supplies the roots and Newton's method on the
exact integer coefficients polishes them.  The iterates themselves live in
double precision, but every Newton ratio p/p' is evaluated by a multiprecision
Horner sweep: the polynomials met here cancel dozens of digits inside their
zero set, so a double-precision Horner sweep would return noise.
Square-free factorisation up front turns repeated roots into simple ones.
"""

from __future__ import annotations

import math

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

from . import polynomial as zp
from .ladder import BigRationalPoly


class RootFindingError(RuntimeError):
    def __init__(self, message: str, cluster=None):
        super().__init__(message)
        self.cluster = [] if cluster is None else list(cluster)


def _log_abs(c) -> float:
    return float(gmpy2.log(abs(mpfr(c, max(53, c.bit_length() + 8)))))


def _newton_ratio(rev, drev, z):
    """p(z)/p'(z) and p(z) for an object array z of mpc."""
    v = np.full(z.shape, mpc(0), dtype=object)
    d = np.full(z.shape, mpc(0), dtype=object)
    for c in drev:
        d = d * z + c
    for c in rev:
        v = v * z + c
    return v / d, v


def aberth(p, prec: int = 256, max_iter: int = 500, seeds=None) -> np.ndarray:
    """Aberth iteration; returns complex128 approximations of all roots of p."""
    n = len(p) - 1
    if seeds is None:
        s = math.exp((_log_abs(p[0]) - _log_abs(p[-1])) / n)
        k = np.arange(n)
        seeds = s * np.exp(1j * (2 * np.pi * k / n + 0.4)) * (1 + 0.01j)
    z = np.array(seeds, dtype=complex)
    rev, drev = p[::-1], zp.deriv(p)[::-1]
    active = np.arange(n)
    with gmpy2.context(precision=prec):
        for it in range(max_iter):
            if active.size == 0:
                aberth.last_iterations = it
                return z
            zm = np.array([mpc(complex(w)) for w in z[active]], dtype=object)
            ratio, _ = _newton_ratio(rev, drev, zm)
            ratio = np.array([complex(r) for r in ratio])
            diff = z[active, None] - z[None, :]
            diff[np.arange(active.size), active] = np.inf
            sigma = (1.0 / diff).sum(axis=1)
            step = ratio / (1 - ratio * sigma)
            step[~np.isfinite(step)] = 0
            z[active] -= step
            done = np.abs(step) <= 4e-15 * np.maximum(np.abs(z[active]), 1.0)
            active = active[~done]
    raise RootFindingError("Aberth iteration hit its cap", z[active])


def newton_polish(p, z0, prec: int, max_iter: int = 40):
    """Vectorised Newton refinement at ``prec`` bits; returns (roots, converged)."""
    rev, drev = p[::-1], zp.deriv(p)[::-1]
    with gmpy2.context(precision=prec):
        z = np.array([mpc(complex(w)) for w in z0], dtype=object)
        tol = mpfr(2) ** (-(prec // 2))
        active = np.arange(len(z))
        for _ in range(max_iter):
            if active.size == 0:
                break
            ratio, _ = _newton_ratio(rev, drev, z[active])
            z[active] = z[active] - ratio
            small = np.array([abs(r) <= tol * max(abs(w), 1) for r, w in zip(ratio, z[active])], dtype=bool)
            active = active[~small]
    return list(z), active.size == 0, active


def _squarefree(p):
    """Yun's square-free decomposition of a primitive polynomial: [(factor, multiplicity)]."""
    dp = zp.deriv(p)
    a = zp.gcd(p, dp)
    if len(a) <= 1:
        return [(p, 1)]
    b = zp.divexact(p, a)
    c = zp.divexact(dp, a)
    out = []
    i = 1
    d = zp.sub(c, zp.deriv(b))
    while len(b) > 1:
        if not d:
            out.append((b, i))
            break
        g = zp.gcd(b, d)
        if len(g) > 1:
            out.append((g, i))
        b = zp.divexact(b, g) if len(g) > 1 else b
        c = zp.divexact(d, g) if len(g) > 1 else d
        d = zp.sub(c, zp.deriv(b))
        i += 1
    return out


def _simple_roots(p, precision_bits: int):
    n = len(p) - 1
    if n == 1:
        with gmpy2.context(precision=precision_bits):
            return [mpc(-mpfr(p[0]) / p[1])]
    seeds = aberth(p, prec=precision_bits)
    out, ok, bad = newton_polish(p, seeds, precision_bits)
    if not ok:
        raise RootFindingError("Newton refinement did not converge", [complex(out[i]) for i in bad])
    arr = np.array([complex(z) for z in out])
    gap = np.abs(arr[:, None] - arr[None, :])
    np.fill_diagonal(gap, np.inf)
    close = gap.min(axis=1) <= 1e-12 * np.maximum(np.abs(arr), 1.0)
    if close.any():
        raise RootFindingError("two seeds refined to the same root", arr[close])
    return out


def roots(p: BigRationalPoly, precision_bits: int = 256) -> list:
    """All complex roots (gmpy2 ``mpc``) with multiplicity."""
    if p.is_zero():
        raise ValueError("the zero polynomial has no finite root set")
    _, ip = p.to_integer()
    zeros = 0
    while ip and ip[0] == 0:
        ip = ip[1:]
        zeros += 1
    out = [mpc(0)] * zeros
    if len(ip) > 1:
        for f, mult in _squarefree(ip):
            out.extend(z for z in _simple_roots(f, precision_bits) for _ in range(mult))
    return out


def residual_certified(p: BigRationalPoly, z, precision_bits: int = 256) -> bool:
    """|p(z)| below 2^(-precision/2) times the Horner magnitude sum |c_k| |z|^k."""
    _, ip = p.to_integer()
    with gmpy2.context(precision=precision_bits):
        z = mpc(z)
        az = abs(z)
        v, b = mpc(0), mpfr(0)
        for c in reversed(ip):
            v = v * z + c
            b = b * az + abs(c)
        return abs(v) <= b * mpfr(2) ** (-(precision_bits // 2))
