"""Log-space complex numbers and high-precision evaluation of exact rationals."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import gmpy2
from gmpy2 import mpc, mpfr

from .ladder import RationalFunction


def _wrap(phase: float) -> float:
    p = math.remainder(phase, 2 * math.pi)
    return math.pi if p == -math.pi else p


@dataclass(frozen=True)
class ScaledComplex:
    """A complex number stored as natural-log magnitude and phase in (-pi, pi].

    ``logmag = -inf`` is an exact zero; ``logmag = +inf`` marks a pole.
    """

    logmag: float
    phase: float = 0.0

    def __post_init__(self):
        ph = 0.0 if math.isinf(self.logmag) else _wrap(float(self.phase))
        object.__setattr__(self, "logmag", float(self.logmag))
        object.__setattr__(self, "phase", ph)

    @classmethod
    def from_complex(cls, z: complex) -> "ScaledComplex":
        if z == 0:
            return cls(-math.inf, 0.0)
        return cls(math.log(abs(z)), cmath.phase(z))

    @property
    def is_pole(self) -> bool:
        return self.logmag == math.inf

    @property
    def is_zero(self) -> bool:
        return self.logmag == -math.inf

    def __mul__(self, other: "ScaledComplex") -> "ScaledComplex":
        return ScaledComplex(self.logmag + other.logmag, self.phase + other.phase)

    def __truediv__(self, other: "ScaledComplex") -> "ScaledComplex":
        return ScaledComplex(self.logmag - other.logmag, self.phase - other.phase)

    def times_exp(self, w: complex) -> "ScaledComplex":
        """Multiply by exp(w) without forming exp(w)."""
        return ScaledComplex(self.logmag + w.real, self.phase + w.imag)

    def to_complex(self) -> complex:
        if self.logmag == -math.inf:
            return 0j
        if self.logmag > 709.0:
            return complex(math.inf, math.inf)
        return cmath.rect(math.exp(self.logmag), self.phase)


class PoleHit(ZeroDivisionError):
    """The denominator vanished exactly at the evaluation point."""


def _horner(coeffs, y, absy):
    # value and the running bound sum |c_k| |y|^k
    v = mpc(0)
    b = mpfr(0)
    for c in reversed(coeffs):
        v = v * y + c
        b = b * absy + abs(c)
    return v, b


def _log_abs_arg(z: mpc) -> tuple[float, float]:
    return float(gmpy2.log(abs(z))), float(gmpy2.phase(z))


def eval_scaled(f: RationalFunction, y, precision_bits: int = 256) -> ScaledComplex:
    """Evaluate f(y) by Horner's rule in binary floating point, returned in log space.

    The a priori Horner bound is checked against the target relative error
    2^(8 - precision/2); the working precision is doubled until it is met.
    """
    if precision_bits < 64:
        raise ValueError("precision_bits must be at least 64")
    if f.is_zero():
        return ScaledComplex(-math.inf)
    target = 2.0 ** (8 - precision_bits / 2)
    prec = precision_bits
    for _ in range(6):
        with gmpy2.context(precision=prec + 16):
            yy = mpc(y) if not isinstance(y, mpc) else y
            ay = abs(yy)
            vn, bn = _horner(f.n, yy, ay)
            vd, bd = _horner(f.d, yy, ay)
            if vd == 0:
                raise PoleHit(f"pole of the rational function at y={complex(yy)}")
            unit = mpfr(2) ** (-prec) * 2 * (len(f.n) + len(f.d) + 2)
            if vn == 0:
                err = math.inf
            else:
                err = float(unit * (bn / abs(vn) + bd / abs(vd)))
            if err < target or vn == 0 and bn == 0:
                break
        prec *= 2
    if vn == 0:
        return ScaledComplex(-math.inf)
    ln, pn = _log_abs_arg(vn)
    ld, pd = _log_abs_arg(vd)
    s = f.scale
    ls = math.log(abs(s.numerator)) - math.log(s.denominator)
    ps = 0.0 if s > 0 else math.pi
    return ScaledComplex(ln - ld + ls, pn - pd + ps)
