"""Exact rational Painleve-II functions built by the Backlund ladder.

The pair (U_m, V_m) solves the coupled system

    u'' + 2 u^2 v + y u / 3 = 0,    v'' + 2 u v^2 + y v / 3 = 0,

starting from U_0 = 1, V_0 = -y/6 and stepping with

    U_{m+1} = -(y/6) U_m - U_m'^2 / U_m + U_m'' / 2,    V_{m+1} = 1 / U_m.

P_m = U_m'/U_m then solves p'' = 2p^3 + (2/3) y p - (2/3) m, and Q_m = V_m'/V_m.
All arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from gmpy2 import mpq, mpz

from . import polynomial as zp


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    q = mpq(c)
    return Fraction(int(q.numerator), int(q.denominator))


@dataclass(frozen=True)
class BigRationalPoly:
    """Polynomial in y with exact rational coefficients, lowest degree first."""

    coeffs: tuple

    def __post_init__(self):
        cs = [_frac(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, y):
        v = 0 * y
        for c in reversed(self.coeffs):
            v = v * y + c
        return v

    def to_integer(self) -> tuple[Fraction, list]:
        """Split as scale * primitive integer polynomial (positive leading term)."""
        if not self.coeffs:
            return Fraction(0), []
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // _gcd(den, c.denominator)
        ints = zp.from_ints([c.numerator * (den // c.denominator) for c in self.coeffs])
        cont, prim = zp.primitive(ints)
        return Fraction(int(cont), den), prim

    @classmethod
    def from_integer(cls, scale: Fraction, p: Sequence) -> "BigRationalPoly":
        return cls(tuple(scale * int(c) for c in p))


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _reduce_factored(num, factors: Iterable):
    """Cancel num against the product of ``factors``; returns (num, den).

    Factor by factor: after dividing num and f by g = gcd(num, f), the two
    quotients are coprime, and later steps only shrink num.
    """
    den = [mpz(1)]
    for f in factors:
        q = zp.divmod_exact(num, f)
        if q is not None:
            num = q
            continue
        g = zp.gcd(num, f)
        if len(g) > 1:
            num = zp.divexact(num, g)
            f = zp.divexact(f, g)
        den = zp.mul(den, f)
    return num, den


@dataclass(frozen=True)
class RationalFunction:
    """Reduced ratio scale * n(y) / d(y) with n, d primitive integer polynomials.

    Both n and d carry a positive leading coefficient and are coprime, so the
    triple (scale, n, d) is a canonical form and equality is structural.  The
    public view ``num / den`` uses a monic denominator.
    """

    scale: Fraction
    n: tuple
    d: tuple

    @classmethod
    def build(cls, scale, num, factors=None, den=None) -> "RationalFunction":
        """Reduce scale * num / den, where den may be given as a list of factors."""
        scale = _frac(scale)
        if factors is None:
            factors = [den if den is not None else [mpz(1)]]
        if any(not f for f in factors):
            raise ZeroDivisionError("zero denominator in the ladder")
        if not num or scale == 0:
            return cls(Fraction(0), (), (mpz(1),))
        cn, num = zp.primitive(num)
        scale *= int(cn)
        prim_factors = []
        for f in factors:
            cf, pf = zp.primitive(f)
            scale /= int(cf)
            if len(pf) > 1:
                prim_factors.append(pf)
        num, d = _reduce_factored(num, prim_factors)
        cd, d = zp.primitive(d)
        return cls(scale / int(cd), tuple(num), tuple(d))

    @classmethod
    def from_polys(cls, num: BigRationalPoly, den: BigRationalPoly) -> "RationalFunction":
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        sn, pn = num.to_integer()
        sd, pd = den.to_integer()
        if sn == 0:
            return cls(Fraction(0), (), (mpz(1),))
        return cls.build(sn / sd, pn, den=pd)

    @classmethod
    def constant(cls, c) -> "RationalFunction":
        c = _frac(c)
        if c == 0:
            return cls(Fraction(0), (), (mpz(1),))
        return cls(c, (mpz(1),), (mpz(1),))

    def is_zero(self) -> bool:
        return not self.n

    @property
    def num(self) -> BigRationalPoly:
        return BigRationalPoly.from_integer(self.scale * int(self.d[-1]), self.n)

    @property
    def den(self) -> BigRationalPoly:
        return BigRationalPoly.from_integer(Fraction(1, int(self.d[-1])), self.d)

    def __call__(self, y):
        return self.scale * zp.evaluate(list(self.n), y) / zp.evaluate(list(self.d), y)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction.build(self.scale * other.scale, zp.mul(list(self.n), list(other.n)),
                                      factors=[list(self.d), list(other.d)])

    def derivative(self) -> "RationalFunction":
        n, d = list(self.n), list(self.d)
        num = zp.sub(zp.mul(zp.deriv(n), d), zp.mul(n, zp.deriv(d)))
        return RationalFunction.build(self.scale, num, factors=[d, d])

    def __repr__(self) -> str:
        return f"RationalFunction(num={list(map(str, self.num.coeffs))}, den={list(map(str, self.den.coeffs))})"


@dataclass(frozen=True)
class LadderState:
    m: int
    u: RationalFunction
    v: RationalFunction


def _second_derivative_parts(n, d):
    """For f = n/d return A with f'' = A / d^3."""
    n1, n2 = zp.deriv(n), zp.deriv(zp.deriv(n))
    d1, d2 = zp.deriv(d), zp.deriv(zp.deriv(d))
    w = zp.sub(zp.mul(n1, d), zp.mul(n, d1))
    return zp.sub(zp.mul(zp.sub(zp.mul(n2, d), zp.mul(n, d2)), d), zp.scale(zp.mul(d1, w), 2)), w


def ladder_step(u: RationalFunction) -> RationalFunction:
    """U_{m+1} = -(y/6) U - U'^2/U + U''/2, reduced."""
    n, d = list(u.n), list(u.d)
    a, w = _second_derivative_parts(n, d)
    # over the common denominator 6 n d^3
    y_n2_d2 = zp.shift(zp.sqr(zp.mul(n, d)), 1)
    g = zp.add(zp.add(zp.neg(y_n2_d2), zp.scale(zp.sqr(w), -6)), zp.scale(zp.mul(n, a), 3))
    return RationalFunction.build(u.scale / 6, g, factors=[d, d, d, n])


def ladder_build(m_max: int) -> list[LadderState]:
    """States m = 0..m_max of the positive Backlund ladder."""
    if m_max < 0:
        raise ValueError("m_max must be nonnegative")
    u = RationalFunction.constant(1)
    v = RationalFunction(Fraction(-1, 6), (mpz(0), mpz(1)), (mpz(1),))
    states = [LadderState(0, u, v)]
    for m in range(m_max):
        u_next = ladder_step(u)
        v = RationalFunction(1 / u.scale, u.d, u.n)
        u = u_next
        states.append(LadderState(m + 1, u, v))
    return states


def log_derivative(f: RationalFunction) -> RationalFunction:
    """f'/f, reduced.  Gives P_m from U_m and Q_m from V_m."""
    if f.is_zero():
        raise ValueError("log-derivative of the zero function")
    n, d = list(f.n), list(f.d)
    num = zp.sub(zp.mul(zp.deriv(n), d), zp.mul(n, zp.deriv(d)))
    return RationalFunction.build(1, num, factors=[n, d])


def _as_ratio(c: Fraction) -> tuple[int, int]:
    return c.numerator, c.denominator


def verify_pii(m: int, p: RationalFunction) -> bool:
    """Exact check of p'' - 2 p^3 - (2/3) y p + (2/3) m = 0."""
    if p.is_zero():
        return m == 0
    n, d = list(p.n), list(p.d)
    a, _ = _second_derivative_parts(n, d)
    cn, cd = _as_ratio(p.scale)
    # residual * 3 cd^3 d^3
    d2 = zp.sqr(d)
    terms = [
        zp.scale(a, 3 * cn * cd * cd),
        zp.scale(zp.mul(zp.sqr(n), n), -6 * cn ** 3),
        zp.scale(zp.shift(zp.mul(n, d2), 1), -2 * cn * cd * cd),
        zp.scale(zp.mul(d2, d), 2 * m * cd ** 3),
    ]
    total: list = []
    for t in terms:
        total = zp.add(total, t)
    return not total


def _coupled_residual(u: RationalFunction, v: RationalFunction) -> list:
    # u'' + 2 u^2 v + y u / 3, cleared of denominators and of the factor u.scale
    nu, du = list(u.n), list(u.d)
    nv, dv = list(v.n), list(v.d)
    a, _ = _second_derivative_parts(nu, du)
    p, q = _as_ratio(u.scale * v.scale)
    t1 = zp.scale(zp.mul(a, dv), 3 * q)
    t2 = zp.scale(zp.mul(zp.mul(zp.sqr(nu), nv), du), 6 * p)
    t3 = zp.scale(zp.shift(zp.mul(zp.mul(nu, zp.sqr(du)), dv), 1), q)
    return zp.add(zp.add(t1, t2), t3)


def verify_coupled(m: int, u: RationalFunction, v: RationalFunction) -> bool:
    """Exact check of both equations of the coupled system.

    The system does not involve m; the argument is kept so the call mirrors
    :func:`verify_pii`.
    """
    if u.is_zero() or v.is_zero():
        return u.is_zero() and v.is_zero()
    return not _coupled_residual(u, v) and not _coupled_residual(v, u)


def backlund_product_is_one(u_m: RationalFunction, v_next: RationalFunction) -> bool:
    prod = u_m * v_next
    return prod == RationalFunction.constant(1)


# --- scaling between y and x ------------------------------------------------

def to_x(y: complex, m: int) -> complex:
    """x = (m - 1/2)^(-2/3) y."""
    if m < 1:
        raise ValueError("m must be positive")
    return y / (m - 0.5) ** (2.0 / 3.0)


def from_x(x: complex, m: int) -> complex:
    if m < 1:
        raise ValueError("m must be positive")
    return x * (m - 0.5) ** (2.0 / 3.0)


# --- text serialisation -----------------------------------------------------

def _fmt(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def dumps(m: int, f: RationalFunction) -> str:
    return "\n".join([
        f"m {m}",
        "num " + " ".join(_fmt(c) for c in f.num.coeffs),
        "den " + " ".join(_fmt(c) for c in f.den.coeffs),
    ]) + "\n"


def loads(text: str) -> tuple[int, RationalFunction]:
    fields = {}
    for line in text.strip().splitlines():
        if line.startswith("#"):
            continue
        key, _, rest = line.partition(" ")
        fields[key] = rest.split()
    m = int(fields["m"][0])
    num = BigRationalPoly(tuple(Fraction(s) for s in fields["num"]))
    den = BigRationalPoly(tuple(Fraction(s) for s in fields["den"]))
    return m, RationalFunction.from_polys(num, den)
