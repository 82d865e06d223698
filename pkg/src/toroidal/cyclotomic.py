"""Elements of Z_p[zeta_{p^m}] in the basis of powers of the uniformizer pi = zeta - 1.

The minimal polynomial of pi is E_m(pi) = Phi_{p^m}(1 + pi), which is Eisenstein
of degree e = (p-1) p^(m-1).  Since the valuations i/e of the basis elements
have pairwise distinct fractional parts, the valuation of sum c_i pi^i is
exactly min(v_p(c_i) + i/e): no Newton polygons are needed.

Each coordinate carries its own precision, so an element is known modulo an
error of valuation at least ``err = min(prec_i + i/e)``.

Level 0 is Z_p itself (e = 1).  Internally, the ``zeta basis`` (powers of
zeta = 1 + pi) is used for fast evaluation at roots of unity; all conversion
maps are integral and unimodular.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .padic import PadicInt, ValInfo, check_prime, vp

_INT64_SAFE = 2**62


def ram_index(p: int, m: int) -> int:
    return 1 if m == 0 else (p - 1) * p ** (m - 1)


@lru_cache(maxsize=None)
def eisenstein(p: int, m: int) -> tuple[int, ...]:
    """Coefficients (ascending) of Phi_{p^m}(1 + pi); monic of degree e."""
    if m == 0:
        raise ValueError("level 0 has no Eisenstein polynomial")
    step = p ** (m - 1)
    e = ram_index(p, m)
    return tuple(sum(math.comb(i * step, j) for i in range(p)) for j in range(e + 1))


def _matrix(rows: list[list[int]], modulus: int, inner: int) -> np.ndarray:
    if inner * modulus * modulus < _INT64_SAFE:
        return np.array(rows, dtype=np.int64)
    return np.array(rows, dtype=object)


@lru_cache(maxsize=64)
def _pascal(p: int, m: int, K: int) -> np.ndarray:
    """B[j, k] = binom(k, j) mod p^K, the zeta-basis -> pi-basis change of basis."""
    e, q = ram_index(p, m), p**K
    cols = []
    col = [1] + [0] * (e - 1)
    for _ in range(e):
        cols.append(col)
        col = [(col[j] + (col[j - 1] if j else 0)) % q for j in range(e)]
    return _matrix([list(r) for r in zip(*cols)], q, e)


@lru_cache(maxsize=64)
def _pascal_signed(p: int, m: int, K: int) -> np.ndarray:
    """P[k, i] = (-1)^(i-k) binom(i, k) mod p^K, the pi-basis -> zeta-basis map."""
    e, q = ram_index(p, m), p**K
    B = _pascal(p, m, K).astype(object)
    sign = np.array([[(-1) ** ((i - k) % 2) for i in range(e)] for k in range(e)], dtype=object)
    return _matrix((B * sign % q).tolist(), q, e)


def _matvec(M: np.ndarray, v, modulus: int) -> list[int]:
    vec = np.array([x % modulus for x in v], dtype=M.dtype)
    return [int(x) % modulus for x in (M @ vec)]


def reduce_cyclic(vec, p: int, m: int) -> list[int]:
    """Reduce a vector in Z[x]/(x^(p^m) - 1) modulo Phi_{p^m}(x), returning e entries."""
    if m == 0:
        return [sum(vec)]
    n, step = p**m, p ** (m - 1)
    if len(vec) != n:
        raise ValueError(f"expected {n} entries, got {len(vec)}")
    rows = [list(vec[s * step:(s + 1) * step]) for s in range(p)]
    last = rows[-1]
    out: list[int] = []
    for r in rows[:-1]:
        out.extend(a - b for a, b in zip(r, last))
    return out


def _precs_for(err: Fraction, e: int) -> tuple[int, ...]:
    return tuple(max(0, math.ceil(err - Fraction(i, e))) for i in range(e))


@dataclass(frozen=True)
class RootOfUnity:
    """zeta_{p^level}^exponent, with zeta_{p^level} = 1 + pi_level."""

    prime: int
    level: int
    exponent: int

    def __post_init__(self):
        check_prime(self.prime)
        if self.level < 0:
            raise ValueError("level must be nonnegative")
        if not 0 <= self.exponent < self.prime**self.level:
            object.__setattr__(self, "exponent", self.exponent % self.prime**self.level)

    @property
    def is_trivial(self) -> bool:
        return self.exponent == 0

    @property
    def is_primitive(self) -> bool:
        return self.level >= 1 and self.exponent % self.prime != 0

    @property
    def order_level(self) -> int:
        """k such that this root has exact order p^k."""
        if self.exponent == 0:
            return 0
        return self.level - vp(self.exponent, self.prime)

    def at_level(self, m: int) -> RootOfUnity:
        if m < self.level:
            raise ValueError("cannot lower the level of a root of unity")
        return RootOfUnity(self.prime, m, self.exponent * self.prime ** (m - self.level))

    def inverse(self) -> RootOfUnity:
        return RootOfUnity(self.prime, self.level, -self.exponent)

    def __pow__(self, n: int) -> RootOfUnity:
        return RootOfUnity(self.prime, self.level, self.exponent * n)


def torsion_valuation(p: int, m: int, u: int) -> Fraction | None:
    """Valuation of zeta_{p^m}^u - 1, or None when it is exactly zero."""
    u %= p**m
    if u == 0:
        return None
    return Fraction(1, ram_index(p, m - vp(u, p)))


@dataclass(frozen=True)
class CycElt:
    prime: int
    level: int
    coeffs: tuple[int, ...]
    precs: tuple[int, ...]

    def __post_init__(self):
        e = ram_index(self.prime, self.level)
        if len(self.coeffs) != e or len(self.precs) != e:
            raise ValueError(f"level {self.level} needs exactly {e} coordinates")
        for c, M in zip(self.coeffs, self.precs):
            if M < 0 or not 0 <= c < self.prime**M:
                raise ValueError(f"coordinate {c} not reduced mod {self.prime}^{M}")

    # construction

    @classmethod
    def make(cls, p: int, m: int, coeffs, precs) -> CycElt:
        e = ram_index(p, m)
        if isinstance(precs, int):
            precs = (precs,) * e
        coeffs = list(coeffs) + [0] * (e - len(coeffs))
        return cls(p, m, tuple(int(c) % p**M for c, M in zip(coeffs, precs)), tuple(precs))

    @classmethod
    def scalar(cls, value, p: int, m: int, M: int | None = None) -> CycElt:
        if isinstance(value, PadicInt):
            M = value.precision if M is None else min(M, value.precision)
            value = value.residue
        e = ram_index(p, m)
        precs = _precs_for(Fraction(M), e)
        return cls.make(p, m, [value], precs)

    @classmethod
    def uniformizer(cls, p: int, m: int, M: int) -> CycElt:
        return cls.make(p, m, [0, 1], M)

    @classmethod
    def from_zeta_basis(cls, vec, p: int, m: int, err) -> CycElt:
        """Element sum vec[k] zeta^k, known up to an error of valuation >= err.

        ``vec`` has length e (already reduced) or p^m (reduced here).
        """
        e = ram_index(p, m)
        if len(vec) != e:
            vec = reduce_cyclic(vec, p, m)
        precs = _precs_for(Fraction(err), e)
        K = max(precs)
        if K == 0:
            return cls(p, m, (0,) * e, precs)
        b = _matvec(_pascal(p, m, K), vec, p**K) if m else [vec[0] % p**K]
        return cls(p, m, tuple(c % p**M for c, M in zip(b, precs)), precs)

    # structure

    @property
    def e(self) -> int:
        return ram_index(self.prime, self.level)

    @property
    def err(self) -> Fraction:
        e = self.e
        return min(Fraction(M) + Fraction(i, e) for i, M in enumerate(self.precs))

    def to_zeta_basis(self, K: int) -> list[int]:
        if self.level == 0:
            return [self.coeffs[0]]
        return _matvec(_pascal_signed(self.prime, self.level, K), self.coeffs, self.prime**K)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def padic_coeffs(self) -> list[PadicInt]:
        return [PadicInt(self.prime, M, c) for c, M in zip(self.coeffs, self.precs) if M > 0]

    def with_err(self, err) -> CycElt:
        """Coarsen to a (smaller) error bound."""
        precs = _precs_for(Fraction(err), self.e)
        precs = tuple(min(a, b) for a, b in zip(precs, self.precs))
        return CycElt.make(self.prime, self.level, self.coeffs, precs)

    # arithmetic

    def _check(self, other: CycElt) -> tuple[CycElt, CycElt]:
        if not isinstance(other, CycElt):
            if isinstance(other, (int, PadicInt)):
                other = CycElt.scalar(other, self.prime, self.level, max(self.precs) or 1)
            else:
                return NotImplemented
        if other.prime != self.prime:
            raise ValueError(f"prime mismatch: {self.prime} vs {other.prime}")
        m = max(self.level, other.level)
        return raise_level(self, m), raise_level(other, m)

    def __add__(self, other):
        return cyc_arith(self, other, "add")

    __radd__ = __add__

    def __sub__(self, other):
        return cyc_arith(self, other, "sub")

    def __rsub__(self, other):
        a, b = self._check(other)
        return cyc_arith(b, a, "sub")

    def __mul__(self, other):
        return cyc_arith(self, other, "mul")

    __rmul__ = __mul__

    def __neg__(self):
        return CycElt.make(self.prime, self.level, [-c for c in self.coeffs], self.precs)

    def __pow__(self, n: int) -> CycElt:
        result = CycElt.scalar(1, self.prime, self.level, max(self.precs) or 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __repr__(self) -> str:
        terms = [f"{c}*pi^{i}" for i, c in enumerate(self.coeffs) if c]
        return f"CycElt(p={self.prime}, m={self.level}: {' + '.join(terms) or '0'}; err>={self.err})"


def cyc_arith(a: CycElt, b, op: str) -> CycElt:
    a, b = a._check(b)
    p, m, e = a.prime, a.level, a.e
    if op in ("add", "sub"):
        sign = 1 if op == "add" else -1
        precs = tuple(min(x, y) for x, y in zip(a.precs, b.precs))
        return CycElt.make(p, m, [x + sign * y for x, y in zip(a.coeffs, b.coeffs)], precs)
    if op != "mul":
        raise ValueError(f"unknown op {op!r}")
    err = min(a.err, b.err)
    precs = _precs_for(err, e)
    K = max(precs)
    q = p**K if K else 1
    if m == 0:
        return CycElt.make(p, 0, [a.coeffs[0] * b.coeffs[0]], precs)
    r = np.convolve(np.array(a.coeffs, dtype=object), np.array(b.coeffs, dtype=object)) % q
    E = np.array(eisenstein(p, m)[:e], dtype=object)
    for k in range(2 * e - 2, e - 1, -1):
        c = r[k]
        if c:
            r[k - e:k] = (r[k - e:k] - c * E) % q
    return CycElt.make(p, m, [int(x) for x in r[:e]], precs)


def valuation_cyc(a: CycElt) -> ValInfo:
    e = a.e
    bound = a.err
    best = None
    for i, c in enumerate(a.coeffs):
        if c:
            v = vp(c, a.prime) + Fraction(i, e)
            if best is None or v < best:
                best = v
    if best is not None and best < bound:
        return ValInfo.exact(best)
    return ValInfo.atleast(bound)


def raise_level(a: CycElt, m: int) -> CycElt:
    """Image of a under pi_l -> (1 + pi_m)^(p^(m - l)) - 1."""
    if m < a.level:
        raise ValueError(f"cannot lower level {a.level} -> {m}")
    if m == a.level:
        return a
    p = a.prime
    err = a.err
    K = max(1, math.ceil(err))
    z = a.to_zeta_basis(K)
    scale = p ** (m - a.level)
    vec = [0] * p**m
    for k, c in enumerate(z):
        vec[(k * scale) % p**m] += c
    return CycElt.from_zeta_basis(vec, p, m, err)


def as_element(r: RootOfUnity, m: int, M: int) -> CycElt:
    r = r.at_level(m)
    if m == 0:
        return CycElt.scalar(1, r.prime, 0, M)
    vec = [0] * r.prime**m
    vec[r.exponent] = 1
    return CycElt.from_zeta_basis(vec, r.prime, m, M)
