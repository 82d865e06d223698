"""Independent reference computations used by the tests.

Nothing here imports the arithmetic it is meant to check.
"""
from __future__ import annotations

from fractions import Fraction

import sympy


def egcd_inverse(a: int, n: int) -> int:
    """Modular inverse by the extended Euclidean algorithm."""
    r0, r1, s0, s1 = n, a % n, 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if r0 != 1:
        raise ValueError("not invertible")
    return s0 % n


def hensel_teichmuller(a: int, p: int, M: int) -> int:
    """Root of x^(p-1) = 1 congruent to a, by Newton iteration."""
    x = a % p
    for _ in range(M + 1):
        f = pow(x, p - 1) - 1
        df = (p - 1) * pow(x, p - 2)
        x = (x - f * egcd_inverse(df % p**M, p**M)) % p**M
    return x


def vp_int(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def eisenstein_poly(p: int, m: int):
    x = sympy.Symbol("x")
    Phi = sum((1 + x) ** (i * p ** (m - 1)) for i in range(p))
    return sympy.Poly(sympy.expand(Phi), x), x


def norm_valuation(coeffs: list[int], p: int, m: int) -> Fraction:
    """v(sum c_i pi^i) as v_p(Res(E_m, a)) / e, with E_m = Phi_{p^m}(1 + x)."""
    E, x = eisenstein_poly(p, m)
    a = sympy.Poly(sum(c * x**i for i, c in enumerate(coeffs)), x)
    res = int(sympy.resultant(E, a))
    e = (p - 1) * p ** (m - 1)
    return Fraction(vp_int(res, p), e)


def poly_mod_eisenstein(a: list[int], b: list[int], p: int, m: int, Q: int) -> list[int]:
    """Product of two pi-polynomials reduced mod E_m by sympy long division, mod Q."""
    E, x = eisenstein_poly(p, m)
    A = sympy.Poly(sum(c * x**i for i, c in enumerate(a)), x)
    B = sympy.Poly(sum(c * x**i for i, c in enumerate(b)), x)
    r = (A * B).rem(E)
    e = E.degree()
    out = [0] * e
    for (k,), c in r.terms():
        out[k] = int(c) % Q
    return out

