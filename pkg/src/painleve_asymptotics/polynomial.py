"""Dense univariate polynomials over Z with big-integer coefficients.

A polynomial is a list of ``gmpy2.mpz`` coefficients, lowest degree first,
with no trailing zeros; the zero polynomial is ``[]``.  Large products and
exact quotients go through Kronecker substitution so that the heavy lifting
happens inside GMP.
"""

from __future__ import annotations

from functools import reduce

import gmpy2
import numpy as np
from gmpy2 import mpz

Poly = list

_SCHOOLBOOK_CUTOFF = 24


def trim(p):
    n = len(p)
    while n and not p[n - 1]:
        n -= 1
    return p[:n] if n != len(p) else p


def from_ints(coeffs) -> Poly:
    return trim([mpz(c) for c in coeffs])


def degree(p) -> int:
    return len(p) - 1


def add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return trim(out)


def sub(a, b):
    n = max(len(a), len(b))
    out = [mpz(0)] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] -= c
    return trim(out)


def neg(a):
    return [-c for c in a]


def scale(a, k):
    k = mpz(k)
    if not k:
        return []
    return [c * k for c in a]


def shift(a, k: int):
    """Multiply by y**k."""
    return [mpz(0)] * k + list(a) if a else []


def deriv(a):
    return trim([a[i] * i for i in range(1, len(a))])


def max_bits(a) -> int:
    return max((abs(c).bit_length() for c in a), default=0)


def _pack(a, k: int, lo: int, hi: int):
    # value of sum a[i] 2^(k (i-lo)) by divide and conquer
    if hi - lo <= 16:
        v = mpz(0)
        for i in range(hi - 1, lo - 1, -1):
            v = (v << k) + a[i]
        return v
    mid = (lo + hi) // 2
    return _pack(a, k, lo, mid) + (_pack(a, k, mid, hi) << (k * (mid - lo)))


def _unpack(v, k: int, n: int):
    # balanced base-2^k digits of v, n of them
    out = [mpz(0)] * n

    def rec(v, lo, hi):
        if hi - lo == 1:
            out[lo] = v
            return
        mid = (lo + hi) // 2
        s = k * (mid - lo)
        low = v & ((mpz(1) << s) - 1)
        high = v >> s
        if low >> (s - 1):
            low -= mpz(1) << s
            high += 1
        rec(low, lo, mid)
        rec(high, mid, hi)

    if n:
        rec(mpz(v), 0, n)
    return out


def mul(a, b):
    if not a or not b:
        return []
    if min(len(a), len(b)) <= _SCHOOLBOOK_CUTOFF:
        out = [mpz(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return trim(out)
    k = max_bits(a) + max_bits(b) + min(len(a), len(b)).bit_length() + 2
    v = _pack(a, k, 0, len(a)) * _pack(b, k, 0, len(b))
    return trim(_unpack(v, k, len(a) + len(b) - 1))


def sqr(a):
    return mul(a, a)


def divmod_exact(f, g):
    """Quotient of f by g when g divides f over Z, else None."""
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    if not f:
        return []
    dq = len(f) - len(g)
    if dq < 0:
        return None
    if f[-1] % g[-1]:
        return None
    if len(g) == 1:
        c = g[0]
        if any(x % c for x in f):
            return None
        return [gmpy2.divexact(x, c) for x in f]
    k = max(max_bits(f) - max_bits(g), 0) + 2 * (dq + 1).bit_length() + 34
    for _ in range(8):
        vf = _pack(f, k, 0, len(f))
        vg = _pack(g, k, 0, len(g))
        q, r = gmpy2.f_divmod(vf, vg)
        if r:
            return None
        cand = trim(_unpack(q, k, dq + 1))
        if mul(cand, g) == f:
            return cand
        k *= 2
    return None


def divexact(f, g):
    q = divmod_exact(f, g)
    if q is None:
        raise ArithmeticError("polynomial division is not exact")
    return q


def content(a):
    if not a:
        return mpz(0)
    c = abs(reduce(gmpy2.gcd, a))
    return -c if a[-1] < 0 else c


def primitive(a):
    """Return (c, p) with a = c p, p primitive with positive leading coefficient."""
    if not a:
        return mpz(0), []
    c = content(a)
    return c, [gmpy2.divexact(x, c) for x in a]


def evaluate(a, x):
    v = 0 * x
    for c in reversed(a):
        v = v * x + c
    return v


# --- gcd -------------------------------------------------------------------

def _prem(f, g):
    # pseudo-remainder of f by g
    r = list(f)
    lc = g[-1]
    dg = len(g) - 1
    e = len(f) - len(g) + 1
    while r and len(r) - 1 >= dg:
        c = r[-1]
        k = len(r) - 1 - dg
        r = [x * lc for x in r]
        for i, gi in enumerate(g):
            r[i + k] -= c * gi
        r = trim(r)
        e -= 1
    return [x * lc ** e for x in r] if e > 0 else r


def gcd_subresultant(f, g):
    """Primitive gcd by the subresultant PRS."""
    if len(f) < len(g):
        f, g = g, f
    if not g:
        return primitive(f)[1]
    f = primitive(f)[1]
    g = primitive(g)[1]
    lead, h = mpz(1), mpz(1)
    while True:
        delta = len(f) - len(g)
        r = _prem(f, g)
        if not r:
            return primitive(g)[1]
        if len(r) == 1:
            return [mpz(1)]
        div = lead * h ** delta
        f, g = g, [gmpy2.divexact(c, div) for c in r]
        lead = f[-1]
        h = gmpy2.divexact(lead ** delta, h ** (delta - 1)) if delta else h


def _lc_sign(p):
    return p if p[-1] > 0 else neg(p)


def gcd_heuristic(f, g, tries: int = 6):
    """Heuristic gcd: integer gcd at a big evaluation point, then verify."""
    cf, f = primitive(f)
    cg, g = primitive(g)
    k = min(max_bits(f), max_bits(g)) + 34
    for _ in range(tries):
        vf = _pack(f, k, 0, len(f))
        vg = _pack(g, k, 0, len(g))
        v = gmpy2.gcd(vf, vg)
        n = max(len(f), len(g))
        h = trim(_unpack(v, k, n + 1))
        if h:
            h = _lc_sign(primitive(h)[1])
            if divmod_exact(f, h) is not None and divmod_exact(g, h) is not None:
                return h
        k = 2 * k + 17
    return None


def gcd(f, g):
    """Primitive gcd over Z (equivalently the monic gcd over Q up to scale)."""
    if not f:
        return _lc_sign(primitive(g)[1]) if g else []
    if not g:
        return _lc_sign(primitive(f)[1])
    if len(f) == 1 or len(g) == 1:
        return [mpz(1)]
    if coprime_modular(f, g):
        return [mpz(1)]
    h = gcd_heuristic(f, g)
    if h is None:
        h = _lc_sign(gcd_subresultant(f, g))
    return h


# --- arithmetic mod p ------------------------------------------------------

_PRIMES = (2147483629, 2147483587, 2147483579, 2147483563, 2147483549,
           2147483543, 2147483497, 2147483489)


def _gcd_degree_modp(f, g, p: int) -> int:
    a = np.array([int(c % p) for c in f], dtype=np.int64)
    b = np.array([int(c % p) for c in g], dtype=np.int64)
    a, b = np.trim_zeros(a, "b"), np.trim_zeros(b, "b")
    while b.size:
        inv = pow(int(b[-1]), -1, p)
        db = b.size - 1
        while a.size - 1 >= db:
            c = int(a[-1]) * inv % p
            k = a.size - 1 - db
            a[k:] = (a[k:] - c * b) % p
            a = np.trim_zeros(a, "b")
        a, b = b, a
    return a.size - 1


def coprime_modular(f, g, attempts: int = 3) -> bool:
    """True if gcd(f, g) = 1 is certified by a gcd computation modulo a prime.

    A degree-0 gcd modulo a prime not dividing either leading coefficient
    proves coprimality over Q.  A False answer is inconclusive.
    """
    tried = 0
    for p in _PRIMES:
        if f[-1] % p == 0 or g[-1] % p == 0:
            continue
        if _gcd_degree_modp(f, g, p) == 0:
            return True
        tried += 1
        if tried == attempts:
            break
    return False
