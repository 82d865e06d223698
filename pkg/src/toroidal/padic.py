"""Exact arithmetic in Z/p^M with per-value precision.

Every scalar carries its own precision ``M``: the residue is only meaningful
modulo ``p**M``.  Results of binary operations live at the smaller of the two
input precisions.
"""
from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from sympy import isprime


class PrecisionError(ArithmeticError):
    """Raised when an operation would need more p-adic digits than are known."""


def vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_factorial(k: int, p: int) -> int:
    """Legendre's formula for v_p(k!)."""
    v, q = 0, p
    while q <= k:
        v += k // q
        q *= p
    return v


@lru_cache(maxsize=None)
def check_prime(p: int) -> None:
    if p == 2:
        raise ValueError("p = 2 is not supported")
    if not (isinstance(p, int) and p > 2 and isprime(p)):
        raise ValueError(f"{p!r} is not an odd prime")


@dataclass(frozen=True)
class ValInfo:
    """A p-adic valuation normalised so that ord_p(p) = 1.

    ``exact`` means the valuation is known; ``atleast`` means the element is
    indistinguishable from zero at working precision and ``value`` is only a
    lower bound.
    """

    kind: Literal["exact", "atleast"]
    value: Fraction

    @classmethod
    def exact(cls, v) -> ValInfo:
        return cls("exact", Fraction(v))

    @classmethod
    def atleast(cls, v) -> ValInfo:
        return cls("atleast", Fraction(v))

    @property
    def is_exact(self) -> bool:
        return self.kind == "exact"

    def __str__(self) -> str:
        prefix = "" if self.is_exact else ">="
        return f"{prefix}{self.value}"


@dataclass(frozen=True)
class PadicInt:
    """An element of Z/p^M.  ``residue`` is the canonical lift in [0, p^M)."""

    prime: int
    precision: int
    residue: int

    def __post_init__(self):
        check_prime(self.prime)
        if self.precision < 1:
            raise ValueError("precision must be positive")
        if not 0 <= self.residue < self.prime ** self.precision:
            raise ValueError(
                f"residue {self.residue} outside [0, {self.prime}^{self.precision})"
            )

    @classmethod
    def of(cls, value: int, prime: int, precision: int) -> PadicInt:
        return cls(prime, precision, value % prime**precision)

    @property
    def modulus(self) -> int:
        return self.prime**self.precision

    def is_zero(self) -> bool:
        return self.residue == 0

    def is_unit(self) -> bool:
        return self.residue % self.prime != 0

    def reduce(self, precision: int) -> PadicInt:
        if precision > self.precision:
            raise PrecisionError(f"cannot raise precision {self.precision} -> {precision}")
        return PadicInt.of(self.residue, self.prime, precision)

    def _coerce(self, other) -> PadicInt:
        if isinstance(other, PadicInt):
            if other.prime != self.prime:
                raise ValueError(f"prime mismatch: {self.prime} vs {other.prime}")
            return other
        if isinstance(other, int):
            return PadicInt.of(other, self.prime, self.precision)
        return NotImplemented

    def __add__(self, other):
        return arith(self, self._coerce(other), "add")

    __radd__ = __add__

    def __sub__(self, other):
        return arith(self, self._coerce(other), "sub")

    def __rsub__(self, other):
        return arith(self._coerce(other), self, "sub")

    def __mul__(self, other):
        return arith(self, self._coerce(other), "mul")

    __rmul__ = __mul__

    def __neg__(self):
        return PadicInt.of(-self.residue, self.prime, self.precision)

    def __pow__(self, n: int) -> PadicInt:
        if n < 0:
            return inverse(self) ** (-n)
        return PadicInt(self.prime, self.precision, pow(self.residue, n, self.modulus))

    def congruent(self, other: PadicInt) -> bool:
        """Equality modulo the smaller precision."""
        m = min(self.precision, other.precision)
        return (self.residue - other.residue) % self.prime**m == 0

    def __repr__(self) -> str:
        return f"{self.residue} + O({self.prime}^{self.precision})"


def arith(a: PadicInt, b: PadicInt, op: Literal["add", "sub", "mul"]) -> PadicInt:
    if a.prime != b.prime:
        raise ValueError(f"prime mismatch: {a.prime} vs {b.prime}")
    m = min(a.precision, b.precision)
    if op == "add":
        r = a.residue + b.residue
    elif op == "sub":
        r = a.residue - b.residue
    elif op == "mul":
        r = a.residue * b.residue
    else:
        raise ValueError(f"unknown op {op!r}")
    return PadicInt.of(r, a.prime, m)


def inverse(a: PadicInt) -> PadicInt:
    if not a.is_unit():
        raise ZeroDivisionError(f"{a!r} is not a unit")
    return PadicInt(a.prime, a.precision, pow(a.residue, -1, a.modulus))


def valuation(a: PadicInt) -> ValInfo:
    if a.residue == 0:
        return ValInfo.atleast(a.precision)
    return ValInfo.exact(vp(a.residue, a.prime))


def binom_padic(N: PadicInt, k: int) -> PadicInt:
    """Binomial coefficient N choose k for a p-adic integer N.

    If N' = N mod p^M then binom(N', k) = binom(N, k) mod p^(M - v_p(k!)), so the
    integer binomial of the canonical lift is correct at that precision.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    loss = vp_factorial(k, N.prime)
    if loss >= N.precision:
        raise PrecisionError(
            f"binom(N, {k}) needs more than {N.precision} digits of N (loses {loss})"
        )
    return PadicInt.of(math.comb(N.residue, k), N.prime, N.precision - loss)


def teichmuller(a: int, p: int, M: int) -> PadicInt:
    """The (p-1)-st root of unity congruent to a mod p, i.e. a^(p^(M-1)) mod p^M."""
    check_prime(p)
    if a % p == 0:
        raise ValueError(f"{a} is not a unit mod {p}")
    return PadicInt(p, M, pow(a, p ** (M - 1), p**M))


def gamma_power(gamma: PadicInt, K: PadicInt) -> PadicInt:
    """gamma^K for gamma = 1 + (gamma - 1), K in Z_p, via the binomial series.

    With v(gamma - 1) = 1, the k-th term has valuation >= k - v_p(k!), so the
    series is summed until that exceeds the target precision.
    """
    p = gamma.prime
    if gamma.residue % p != 1:
        raise ValueError("gamma must be 1 mod p")
    target = min(gamma.precision, K.precision + 1)
    t = gamma.residue - 1
    total = 1
    k = 1
    # v_p(k!) < k/(p-1), so every term past this k has valuation >= target
    while k * (p - 2) < target * (p - 1):
        if k - vp_factorial(k, p) < target:
            b = binom_padic(K, k)
            # b is known mod p^(M_K - v_p(k!)); (gamma-1)^k adds k digits, >= M_K + 1
            total += b.residue * pow(t, k)
        k += 1
    return PadicInt.of(total, p, target)
