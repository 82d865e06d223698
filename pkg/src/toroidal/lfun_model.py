"""Arithmetic data of a Hida-family branch and its special points.

A classical point (weight k, wild nebentype value zeta = eps(gamma), twist by
the cyclotomic character to the power j - 1 times a wild character zeta') sits at
w = gamma^(k-2) zeta - 1, T = gamma^(j-1) zeta' - 1.

Periods, Gauss sums and the interpolation constant relate these values to
complex L-values.  They fix what ingested coefficients mean but never enter a
computation here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from sympy import factorint
from sympy.functions.combinatorial.numbers import jacobi_symbol

from .cyclotomic import CycElt, RootOfUnity, as_element
from .padic import PadicInt, check_prime, gamma_power


def default_gamma(p: int, precision: int = 30) -> PadicInt:
    return PadicInt.of(1 + p, p, precision)


@dataclass(frozen=True)
class BranchMeta:
    prime: int
    tame_level: int
    component_r: int
    branch_i: int
    twist_discriminant: int = 0
    gamma: PadicInt | None = None

    def __post_init__(self):
        p = self.prime
        check_prime(p)
        if self.tame_level < 1 or self.tame_level % p == 0:
            raise ValueError("tame level must be a positive integer prime to p")
        object.__setattr__(self, "component_r", self.component_r % (p - 1))
        object.__setattr__(self, "branch_i", self.branch_i % (p - 1))
        D = self.twist_discriminant
        if D and math.gcd(D, p * self.tame_level) != 1:
            raise ValueError(f"twist discriminant {D} not prime to pN")
        if self.gamma is None:
            object.__setattr__(self, "gamma", default_gamma(p))
        g = self.gamma
        if g.prime != p or g.precision < 2 or g.residue % p != 1 or g.residue % p**2 == 1:
            raise ValueError("gamma must be a topological generator of 1 + pZ_p")

    @property
    def self_dual(self) -> bool:
        return self.branch_i in self_dual_indices(self.component_r, self.prime)


@dataclass(frozen=True)
class SpecialPoint:
    weight: int
    nebentype_root: RootOfUnity
    j: int
    cyclotomic_root: RootOfUnity
    tame_parity: int | None = None  # eps(-1) when known

    def __post_init__(self):
        if self.weight < 2:
            raise ValueError("weight must be at least 2")
        if not 1 <= self.j <= self.weight - 1:
            raise ValueError(f"need 1 <= j <= k-1, got j={self.j}, k={self.weight}")
        if self.tame_parity is not None and self.tame_parity != (-1) ** self.weight:
            raise ValueError("nebentype parity must equal (-1)^k")


def to_coordinates(pt: SpecialPoint, meta: BranchMeta, m: int) -> tuple[CycElt, CycElt]:
    if m < max(pt.nebentype_root.level, pt.cyclotomic_root.level):
        raise ValueError(f"level {m} too small for the roots of unity at this point")
    p, g = meta.prime, meta.gamma
    M = g.precision

    def coord(power: int, root: RootOfUnity) -> CycElt:
        scal = gamma_power(g, PadicInt.of(power, p, M))
        return as_element(root, m, M) * CycElt.scalar(scal, p, m) - 1

    return coord(pt.weight - 2, pt.nebentype_root), coord(pt.j - 1, pt.cyclotomic_root)


def is_central(pt: SpecialPoint) -> bool:
    return 2 * pt.j == pt.weight


def self_dual_indices(r: int, p: int) -> set[int]:
    """Branch indices i mod p-1 with 2i = r mod p-1."""
    return {i for i in range(p - 1) if (2 * i - r) % (p - 1) == 0}


def kronecker(D: int, n: int) -> int:
    """Kronecker symbol (D|n)."""
    if n == 0:
        return 1 if abs(D) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if D < 0:
            result = -result
    while n % 2 == 0:
        n //= 2
        if D % 2 == 0:
            return 0
        if D % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    return result * int(jacobi_symbol(D % n, n))


def is_fundamental(D: int) -> bool:
    if D in (0, 1):
        return False

    def squarefree(n: int) -> bool:
        return all(e == 1 for e in factorint(abs(n)).values())

    if D % 4 == 1:
        return squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and squarefree(m)
    return False


def enum_discriminants(bound: int, p: int, N: int) -> list[int]:
    """Fundamental discriminants D != 1 with |D| < bound, prime to pN."""
    out = [D for a in range(1, bound) for D in (-a, a)
           if is_fundamental(D) and math.gcd(D, p * N) == 1]
    return sorted(out, key=lambda D: (abs(D), D))
