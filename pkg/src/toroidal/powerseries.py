"""Truncated power series over Z_p (or Z_p[zeta]) with per-degree precision.

A :class:`BivariateSeries` stores the terms of total degree <= ``cutoff`` of a
series in Z_p[[w, T]].  The coefficient of total degree d is known modulo
``p**profile[d]``; individual coefficients may be known more precisely
(``overrides``).  Everything past the cutoff is unknown but p-integral, which
is what makes the tail bounds below valid.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Literal, Union

import numpy as np

from .cyclotomic import (
    CycElt,
    RootOfUnity,
    raise_level,
    ram_index,
    reduce_cyclic,
    valuation_cyc,
)
from .padic import (
    PadicInt,
    PrecisionError,
    ValInfo,
    check_prime,
    gamma_power,
    valuation,
    vp,
    vp_factorial,
)

if TYPE_CHECKING:
    from .rigidity import ToroidalFactor

Coeff = Union[int, CycElt]
Bound = Union[int, Fraction]


class FEDivisionError(ArithmeticError):
    """The series is not divisible by (1+w) - (1+T)^2 at certified precision."""

    def __init__(self, degree: int, residue: int):
        super().__init__(f"remainder coefficient of T^{degree} is {residue}, not 0")
        self.degree = degree
        self.residue = residue


def _lower(v) -> Fraction | None:
    """Lower bound from a ValInfo/number; None means infinite."""
    if v is None:
        return None
    if isinstance(v, ValInfo):
        return v.value
    return Fraction(v)


@dataclass(frozen=True, eq=False)
class BivariateSeries:
    prime: int
    cutoff: int
    profile: tuple[int, ...]
    coeffs: dict  # (a, b) -> residue int (level 0) or CycElt; zeros omitted
    gamma: PadicInt
    overrides: dict = field(default_factory=dict)
    level: int = 0

    def __post_init__(self):
        p, D = self.prime, self.cutoff
        check_prime(p)
        if D < 0 or len(self.profile) != D + 1:
            raise ValueError(f"profile must have cutoff + 1 = {D + 1} entries")
        if any(M < 1 for M in self.profile):
            raise ValueError("profile entries must be positive")
        if any(x < y for x, y in zip(self.profile, self.profile[1:])):
            raise ValueError("profile must be non-increasing in degree")
        g = self.gamma
        if g.prime != p or g.precision < 2 or g.residue % p != 1 or g.residue % p**2 == 1:
            raise ValueError("gamma must be 1 mod p and not 1 mod p^2")
        for (a, b), M in self.overrides.items():
            if a < 0 or b < 0 or a + b > D:
                raise ValueError(f"override at ({a},{b}) outside cutoff")
            if M < self.profile[a + b]:
                raise ValueError(f"override at ({a},{b}) is below the degree precision")
        for (a, b), c in self.coeffs.items():
            if a < 0 or b < 0 or a + b > D:
                raise ValueError(f"coefficient ({a},{b}) outside cutoff {D}")
            M = self.precision_at(a, b)
            if self.level == 0:
                if not 0 < c < p**M:
                    raise ValueError(f"coefficient out of range at ({a},{b})")
            elif c.level != self.level or c.err < M:
                raise ValueError(f"cyclotomic coefficient at ({a},{b}) inconsistent")

    @classmethod
    def build(cls, p, D, profile, terms, gamma, overrides=None, level=0) -> BivariateSeries:
        """Normalise raw terms: reduce residues, drop zeros and terms past the cutoff."""
        profile = tuple(int(M) for M in (profile if not isinstance(profile, int) else [profile] * (D + 1)))
        overrides = {k: v for k, v in (overrides or {}).items() if sum(k) <= D and v > profile[sum(k)]}
        coeffs = {}
        for (a, b), c in terms.items():
            if a + b > D:
                continue
            M = overrides.get((a, b), profile[a + b])
            if level == 0:
                if isinstance(c, PadicInt):
                    c = c.residue
                c %= p**M
                if c:
                    coeffs[(a, b)] = c
            else:
                c = c if isinstance(c, CycElt) else CycElt.scalar(c, p, level, M)
                c = raise_level(c, level).with_err(M)
                if not c.is_zero():
                    coeffs[(a, b)] = c
        return cls(p, D, profile, coeffs, gamma, overrides, level)

    def precision_at(self, a: int, b: int) -> int:
        return self.overrides.get((a, b), self.profile[a + b])

    def coefficient(self, a: int, b: int) -> PadicInt | CycElt:
        M = self.precision_at(a, b)
        c = self.coeffs.get((a, b), 0)
        if self.level == 0:
            return PadicInt(self.prime, M, c)
        return c if c else CycElt.scalar(0, self.prime, self.level, M)

    @property
    def coefficients(self) -> dict:
        D = self.cutoff
        return {(a, d - a): self.coefficient(a, d - a) for d in range(D + 1) for a in range(d + 1)}

    def residue(self, a: int, b: int) -> int:
        return self.coeffs.get((a, b), 0)

    def truncate(self, D: int) -> BivariateSeries:
        return BivariateSeries.build(self.prime, D, self.profile[: D + 1], self.coeffs,
                                     self.gamma, self.overrides, self.level)

    def transpose(self) -> BivariateSeries:
        return BivariateSeries(self.prime, self.cutoff, self.profile,
                               {(b, a): c for (a, b), c in self.coeffs.items()}, self.gamma,
                               {(b, a): M for (a, b), M in self.overrides.items()}, self.level)

    def congruent(self, other: BivariateSeries, D: int | None = None) -> bool:
        """Coefficientwise equality modulo the smaller known precision."""
        if self.prime != other.prime:
            return False
        D = min(self.cutoff, other.cutoff) if D is None else D
        p = self.prime
        for d in range(D + 1):
            for a in range(d + 1):
                M = min(self.precision_at(a, d - a), other.precision_at(a, d - a))
                x, y = self.coeffs.get((a, d - a), 0), other.coeffs.get((a, d - a), 0)
                if self.level or other.level:
                    diff = _as_cyc(x, p, self.level or other.level, M) - _as_cyc(y, p, self.level or other.level, M)
                    if not valuation_cyc(diff).value >= M:
                        return False
                elif (x - y) % p**M:
                    return False
        return True

    def content_hash(self) -> str:
        items = sorted((k, v if isinstance(v, int) else (v.level, v.coeffs, v.precs))
                       for k, v in self.coeffs.items())
        blob = repr((self.prime, self.cutoff, self.profile, self.gamma.residue,
                     self.gamma.precision, sorted(self.overrides.items()), self.level, items))
        return hashlib.sha256(blob.encode()).hexdigest()

    def __add__(self, other):
        return ps_arith(self, other, "add")

    def __sub__(self, other):
        return ps_arith(self, other, "sub")

    def __mul__(self, other):
        return ps_arith(self, other, "mul")

    def __repr__(self) -> str:
        terms = " + ".join(f"{c}*w^{a}T^{b}" for (a, b), c in sorted(self.coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0])))
        return f"BivariateSeries(p={self.prime}, D={self.cutoff}: {terms or '0'})"


def _as_cyc(c, p, m, M) -> CycElt:
    if isinstance(c, CycElt):
        return raise_level(c, m)
    return CycElt.scalar(c, p, m, M)


def series_from_poly(terms: dict, p: int, D: int, profile, gamma: PadicInt | None = None,
                     level: int = 0) -> BivariateSeries:
    """Convenience constructor from integer (or CycElt) coefficients."""
    if gamma is None:
        gamma = PadicInt.of(1 + p, p, max(profile) + 2 if not isinstance(profile, int) else profile + 2)
    return BivariateSeries.build(p, D, profile, terms, gamma, level=level)


def ps_arith(f: BivariateSeries, g: BivariateSeries, op: Literal["add", "sub", "mul"]) -> BivariateSeries:
    if f.prime != g.prime:
        raise ValueError(f"prime mismatch: {f.prime} vs {g.prime}")
    if not f.gamma.congruent(g.gamma):
        raise ValueError("gamma mismatch")
    p = f.prime
    D = min(f.cutoff, g.cutoff)
    level = max(f.level, g.level)
    gamma = f.gamma if f.gamma.precision <= g.gamma.precision else g.gamma
    if op in ("add", "sub"):
        profile = tuple(min(f.profile[d], g.profile[d]) for d in range(D + 1))
        overrides = {}
        for k in set(f.overrides) | set(g.overrides):
            if sum(k) <= D:
                overrides[k] = min(f.precision_at(*k), g.precision_at(*k))
        sign = 1 if op == "add" else -1
        terms: dict = {}
        for k, c in f.coeffs.items():
            terms[k] = c
        for k, c in g.coeffs.items():
            if level:
                M = min(f.precision_at(*k) if sum(k) <= f.cutoff else 1, g.precision_at(*k))
                prev = terms.get(k)
                prev = _as_cyc(prev if prev is not None else 0, p, level, M)
                terms[k] = prev + _as_cyc(c, p, level, M) * sign
            else:
                terms[k] = terms.get(k, 0) + sign * c
        return BivariateSeries.build(p, D, profile, terms, gamma, overrides, level)
    if op != "mul":
        raise ValueError(f"unknown op {op!r}")
    profile = tuple(
        min(min(f.profile[e], g.profile[d - e]) for e in range(d + 1)) for d in range(D + 1)
    )
    terms = {}
    if level == 0:
        for (a1, b1), c1 in f.coeffs.items():
            for (a2, b2), c2 in g.coeffs.items():
                if a1 + b1 + a2 + b2 <= D:
                    k = (a1 + a2, b1 + b2)
                    terms[k] = terms.get(k, 0) + c1 * c2
    else:
        for (a1, b1), c1 in f.coeffs.items():
            for (a2, b2), c2 in g.coeffs.items():
                d = a1 + b1 + a2 + b2
                if d <= D:
                    M = profile[d]
                    k = (a1 + a2, b1 + b2)
                    prod = _as_cyc(c1, p, level, M) * _as_cyc(c2, p, level, M)
                    terms[k] = terms[k] + prod if k in terms else prod
    return BivariateSeries.build(p, D, profile, terms, gamma, level=level)


def scale(f: BivariateSeries, c: int) -> BivariateSeries:
    return BivariateSeries.build(f.prime, f.cutoff, f.profile,
                                 {k: v * c for k, v in f.coeffs.items()}, f.gamma, f.overrides, f.level)


def accuracy_bound(f: BivariateSeries, vx, vy) -> Fraction:
    """Valuation below which evaluating the truncation equals evaluating the true series.

    Combines the unknown tail (terms of degree > D, all p-integral) with the
    precision of the stored coefficients.  ``None`` stands for an exactly zero
    coordinate.
    """
    lx, ly = _lower(vx), _lower(vy)
    vals = [v for v in (lx, ly) if v is not None]
    if any(v <= 0 for v in vals):
        raise ValueError("evaluation point must lie in the open unit polydisk")
    if not vals:
        # the origin: only the constant term matters
        return Fraction(f.profile[0])
    v = min(vals)
    D = f.cutoff
    return min([(D + 1) * v] + [f.profile[d] + d * v for d in range(D + 1)])


def eval_at(f: BivariateSeries, x: CycElt, y: CycElt) -> tuple[CycElt, Fraction]:
    p = f.prime
    if isinstance(x, PadicInt):
        x = CycElt.scalar(x, p, 0)
    if isinstance(y, PadicInt):
        y = CycElt.scalar(y, p, 0)
    vx, vy = valuation_cyc(x), valuation_cyc(y)
    for v in (vx, vy):
        if v.is_exact and v.value == 0:
            raise ValueError("evaluation point lies on the unit circle")
    acc = min(accuracy_bound(f, vx, vy), x.err, y.err)
    m = max(x.level, y.level, f.level)
    K = max(1, math.ceil(acc))
    x, y = raise_level(x, m).with_err(K), raise_level(y, m).with_err(K)
    D = f.cutoff
    zero = CycElt.scalar(0, p, m, K)
    total = zero
    for a in range(D, -1, -1):
        row = zero
        for b in range(D - a, -1, -1):
            c = f.coeffs.get((a, b))
            row = row * y
            if c is not None:
                row = row + _as_cyc(c, p, m, K)
        total = total * x + row
    return total, acc


@dataclass(frozen=True, eq=False)
class UnivariateSeries:
    """Dense truncated series in one variable.

    ``profile[n]`` is the error bound on coefficient n (an integer when the
    coefficients are p-adic integers, possibly fractional for cyclotomic ones).
    """

    prime: int
    cutoff: int
    profile: tuple
    coeffs: tuple
    level: int = 0

    def __post_init__(self):
        if len(self.coeffs) != self.cutoff + 1 or len(self.profile) != self.cutoff + 1:
            raise ValueError("coefficient and profile lengths must equal cutoff + 1")
        if any(x < y for x, y in zip(self.profile, self.profile[1:])):
            raise ValueError("profile must be non-increasing")
        for c, M in zip(self.coeffs, self.profile):
            if isinstance(c, PadicInt) and c.precision != M:
                raise ValueError("coefficient precision does not match profile")
            if isinstance(c, CycElt) and c.err < M:
                raise ValueError("cyclotomic coefficient less precise than profile")

    @classmethod
    def from_ints(cls, values, p: int, profile) -> UnivariateSeries:
        if isinstance(profile, int):
            profile = [profile] * len(values)
        return cls(p, len(values) - 1, tuple(profile),
                   tuple(PadicInt.of(v, p, M) for v, M in zip(values, profile)))

    def valuations(self) -> list[ValInfo]:
        return [valuation(c) if isinstance(c, PadicInt) else valuation_cyc(c) for c in self.coeffs]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)


@dataclass(frozen=True)
class MuLambda:
    mu: ValInfo
    lam: int | None

    @property
    def certified(self) -> bool:
        return self.mu.is_exact and self.lam is not None


def mu_lambda(g: UnivariateSeries) -> MuLambda:
    vals = g.valuations()
    exact = [v.value for v in vals if v.is_exact]
    bounds = [v.value for v in vals if not v.is_exact]
    if not exact:
        return MuLambda(ValInfo.atleast(min(bounds)), None)
    mu = min(exact)
    if bounds and min(bounds) < mu:
        return MuLambda(ValInfo.atleast(min(bounds)), None)
    for i, v in enumerate(vals):
        if v.is_exact and v.value == mu:
            return MuLambda(ValInfo.exact(mu), i)
        if not v.is_exact and v.value <= mu:
            return MuLambda(ValInfo.exact(mu), None)
    raise AssertionError("unreachable")


def specialize(f: BivariateSeries, axis: Literal["w", "T"], point) -> UnivariateSeries:
    """Set one variable to ``point``; the result is a series in the other variable."""
    if f.level:
        raise NotImplementedError("specialize is defined for Z_p-coefficient series")
    p, D = f.prime, f.cutoff
    if axis == "T":
        f = f.transpose()
    elif axis != "w":
        raise ValueError(f"unknown axis {axis!r}")
    if isinstance(point, int):
        point = PadicInt.of(point, p, max(f.profile))
    if isinstance(point, PadicInt):
        pv = valuation(point).value
        if pv <= 0:
            raise ValueError("specialization point must have positive valuation")
        pt_err = Fraction(point.precision)
        cyc = None
    else:
        pv = valuation_cyc(point).value
        if pv <= 0:
            raise ValueError("specialization point must have positive valuation")
        pt_err = point.err
        cyc = point
    bounds = []
    for b in range(D + 1):
        beta = min([pt_err, (D - b + 1) * pv] + [f.profile[a + b] + a * pv for a in range(D - b + 1)])
        bounds.append(beta)
    coeffs = []
    if cyc is None:
        q = point.residue
        cutoff = D
        for b, beta in enumerate(bounds):
            M = math.floor(beta)
            if M < 1:
                cutoff = b - 1
                break
            s = sum(f.coeffs.get((a, b), 0) * q**a for a in range(D - b + 1))
            coeffs.append(PadicInt.of(s, p, M))
        if cutoff < 0:
            raise PrecisionError("specialization leaves no known coefficient")
        return UnivariateSeries(p, cutoff, tuple(math.floor(x) for x in bounds[: cutoff + 1]), tuple(coeffs))
    m = cyc.level
    for b, beta in enumerate(bounds):
        K = max(1, math.ceil(beta))
        x = cyc.with_err(K)
        acc = CycElt.scalar(0, p, m, K)
        for a in range(D - b, -1, -1):
            acc = acc * x
            c = f.coeffs.get((a, b))
            if c:
                acc = acc + CycElt.scalar(c, p, m, K)
        coeffs.append(acc.with_err(beta))
    return UnivariateSeries(p, D, tuple(Fraction(x) for x in bounds), tuple(coeffs), m)


def _y_binomial_transform(f: BivariateSeries, Q: int) -> list[list[int]]:
    """d[j][a] with f = sum_j d_j(X) (1+Y)^j, using T^b = sum_j C(b,j)(-1)^(b-j) (1+T)^j."""
    D = f.cutoff
    d = [[0] * (D + 1) for _ in range(D + 1)]
    for (a, b), c in f.coeffs.items():
        for j in range(b + 1):
            term = c * math.comb(b, j)
            d[j][a] += -term if (b - j) % 2 else term
    return [[x % Q for x in row] for row in d]


def substitute_torus(f: BivariateSeries, factor: ToroidalFactor) -> UnivariateSeries:
    """Restrict f to the zero locus of a toroidal factor.

    PowerOnW: 1+T := xi^-1 gamma^A (1+w)^N, result is a series in w.
    PowerOnT: 1+w := xi gamma^-A (1+T)^N, result is a series in T.
    The factor divides f exactly when this restriction vanishes.
    """
    if f.level:
        raise NotImplementedError("substitution is defined for Z_p-coefficient series")
    gA = gamma_power(f.gamma, factor.A)
    if factor.orientation == "PowerOnW":
        return _torus_substitute(f, factor.xi.inverse(), gA, factor.N)
    if factor.orientation == "PowerOnT":
        g_neg = gamma_power(f.gamma, -factor.A)
        return _torus_substitute(f.transpose(), factor.xi, g_neg, factor.N)
    raise ValueError(f"unknown orientation {factor.orientation!r}")


def _torus_substitute(f: BivariateSeries, root: RootOfUnity, u: PadicInt, N: PadicInt) -> UnivariateSeries:
    p, D = f.prime, f.cutoff
    k = root.order_level
    if k:
        v0 = Fraction(1, ram_index(p, k))
    elif (u.residue - 1) % u.modulus == 0:
        v0 = Fraction(u.precision)
    else:
        v0 = Fraction(vp(u.residue - 1, p))
    bounds = []
    for n in range(D + 1):
        beta = [Fraction(u.precision), (D + 1 - n) * v0]
        beta += [f.profile[a + b] + max(0, a + b - n) * v0 for a in range(n + 1) for b in range(D - a + 1)]
        for kk in range(1, n + 1):
            loss = N.precision - vp_factorial(kk, p)
            if loss <= 0:
                raise PrecisionError(f"binomial precision exhausted at degree {kk}")
            beta.append(Fraction(loss))
        bounds.append(min(beta))
    Kmax = max(1, math.ceil(max(bounds)))
    Q = p**Kmax
    d = _y_binomial_transform(f, Q)
    n_slots = p**k
    base = root.exponent // p ** (root.level - k) if k else 0  # same root, written at its order level
    exps = [(base * j) % n_slots for j in range(D + 1)]
    out = [[0] * n_slots for _ in range(D + 1)]
    uj = 1
    for j in range(D + 1):
        row = d[j]
        if any(row):
            binoms = [math.comb(N.residue * j, t) % Q for t in range(D + 1)]
            slot = exps[j]
            for n in range(D + 1):
                s = sum(row[a] * binoms[n - a] for a in range(n + 1))
                if s:
                    out[n][slot] += uj * s
        uj = uj * u.residue % Q
    if k == 0:
        ints = [math.floor(b) for b in bounds]
        coeffs = tuple(PadicInt.of(out[n][0], p, ints[n]) for n in range(D + 1))
        return UnivariateSeries(p, D, tuple(ints), coeffs)
    coeffs = tuple(CycElt.from_zeta_basis(out[n], p, k, bounds[n]) for n in range(D + 1))
    return UnivariateSeries(p, D, tuple(bounds), coeffs, k)


_FE_QUAD = {1: 2, 2: 1}  # h(T) = 2T + T^2


def divide_fe(f: BivariateSeries) -> BivariateSeries:
    """Quotient by the functional-equation factor (1+w) - (1+T)^2 = w - (2T + T^2).

    Synthetic division in w from the top degree; the remainder r(T) = f(2T+T^2, T)
    must vanish at its certified precision.
    """
    if f.level:
        raise NotImplementedError("divide_fe is defined for Z_p-coefficient series")
    p, D = f.prime, f.cutoff
    if D < 1:
        raise PrecisionError("need cutoff >= 1 to divide")
    Q = p ** max(f.profile)
    rows = [[f.coeffs.get((a, b), 0) for b in range(D + 1)] for a in range(D + 1)]

    def times_h(q):
        out = [0] * (D + 1)
        for c, x in enumerate(q):
            if x:
                for s, h in _FE_QUAD.items():
                    if c + s <= D:
                        out[c + s] += h * x
        return out

    q_rows: dict[int, list[int]] = {}
    carry = [0] * (D + 1)
    for a in range(D, 0, -1):
        nxt = [(x + y) % Q for x, y in zip(rows[a], times_h(carry))]
        q_rows[a - 1] = nxt
        carry = nxt
    remainder = [(x + y) % Q for x, y in zip(rows[0], times_h(carry))]
    for b, r in enumerate(remainder):
        if r % p ** f.profile[b]:
            raise FEDivisionError(b, r % p ** f.profile[b])
    terms = {}
    for a, row in q_rows.items():
        for c, x in enumerate(row):
            if a + c <= D - 1 and x:
                terms[(a, c)] = x
    return BivariateSeries.build(p, D - 1, f.profile[1:], terms, f.gamma)


def coordinate_shift(f: BivariateSeries, K1: PadicInt, K2: PadicInt) -> BivariateSeries:
    """f(gamma^K1 (1+w) - 1, gamma^K2 (1+T) - 1), truncated at the same cutoff."""
    if f.level:
        raise NotImplementedError("coordinate_shift is defined for Z_p-coefficient series")
    p, D = f.prime, f.cutoff
    g1, g2 = gamma_power(f.gamma, K1), gamma_power(f.gamma, K2)
    P = min(g1.precision, g2.precision)

    def offset_val(g: PadicInt) -> int:
        c = (g.residue - 1) % g.modulus
        return vp(c, p) if c else g.precision

    vc = min(offset_val(g1), offset_val(g2))
    profile = []
    for d in range(D + 1):
        beta = min([P, (D + 1 - d) * vc] + [f.profile[e] + (e - d) * vc for e in range(d, D + 1)])
        profile.append(beta)
    Q = p ** max(profile)
    c1, c2 = g1.residue - 1, g2.residue - 1

    def expand(c, g, n):
        return [math.comb(n, s) * pow(c, n - s, Q) * pow(g, s, Q) % Q for s in range(n + 1)]

    exp1 = [expand(c1, g1.residue, a) for a in range(D + 1)]
    exp2 = [expand(c2, g2.residue, b) for b in range(D + 1)]
    terms: dict = {}
    for (a, b), c in f.coeffs.items():
        for s, x in enumerate(exp1[a]):
            if not x:
                continue
            for t, y in enumerate(exp2[b]):
                if s + t <= D and y:
                    terms[(s, t)] = terms.get((s, t), 0) + c * x * y
    return BivariateSeries.build(p, D, profile, terms, f.gamma)


class RootGridEvaluator:
    """Fast evaluation of a Z_p-series at (zeta^u - 1 + shift, zeta^v - 1), zeta = 1 + pi_m.

    Rewriting f = sum d_ij (1+w)^i (1+T)^j turns each evaluation into an
    index-shuffle in Z[x]/(x^(p^m) - 1) followed by reduction mod Phi_{p^m}.
    Agrees with :func:`eval_at` on the same points.
    """

    def __init__(self, f: BivariateSeries, m: int, shift: int = 0):
        if f.level:
            raise NotImplementedError("grid evaluation needs Z_p coefficients")
        if m < 1:
            raise ValueError("level must be >= 1")
        self.f, self.m, self.shift = f, m, shift
        p, D = f.prime, f.cutoff
        self.K = max(1, math.ceil(max(f.profile)))
        Q = p**self.K
        dy = _y_binomial_transform(f, Q)  # dy[j][a]: coefficient of w^a (1+T)^j
        d: dict[tuple[int, int], int] = {}
        for j in range(D + 1):
            for a, c in enumerate(dy[j]):
                if not c:
                    continue
                for i in range(a + 1):
                    t = c * math.comb(a, i)
                    d[(i, j)] = d.get((i, j), 0) + (-t if (a - i) % 2 else t)
        g: dict[tuple[int, int], int] = {}
        for (i, j), c in d.items():
            for r in range(i + 1):
                if shift == 0 and r != i:
                    continue
                t = c * math.comb(i, r) * shift ** (i - r)
                g[(r, j)] = (g.get((r, j), 0) + t) % Q
        items = [(r, j, c) for (r, j), c in sorted(g.items()) if c]
        self._r = np.array([x[0] for x in items], dtype=np.int64)
        self._j = np.array([x[1] for x in items], dtype=np.int64)
        self._c = [x[2] for x in items]

    def point_valuations(self, u: int, v: int) -> tuple[Fraction | None, Fraction | None]:
        from .cyclotomic import torsion_valuation

        p, m = self.f.prime, self.m
        vx = torsion_valuation(p, m, u)
        if self.shift:
            sv = Fraction(vp(self.shift, p))
            # a lower bound suffices for the accuracy estimate
            vx = sv if vx is None else min(vx, sv)
        return vx, torsion_valuation(p, m, v)

    def accuracy(self, u: int, v: int) -> Fraction:
        return accuracy_bound(self.f, *self.point_valuations(u, v))

    def value(self, u: int, v: int, err: Bound) -> CycElt:
        p, m = self.f.prime, self.m
        n = p**m
        K = max(1, math.ceil(err))
        Q = p**K
        slots = (u * self._r + v * self._j) % n
        if Q * max(1, len(self._c)) < _INT64_LIMIT:
            vec = np.zeros(n, dtype=np.int64)
            np.add.at(vec, slots, np.array([c % Q for c in self._c], dtype=np.int64))
            vec = [int(x) for x in vec]
        else:
            vec = [0] * n
            for s, c in zip(slots.tolist(), self._c):
                vec[s] += c
        return CycElt.from_zeta_basis(reduce_cyclic(vec, p, m), p, m, err)


_INT64_LIMIT = 2**62
