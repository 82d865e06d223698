"""Toroidal factors and the procedures that exclude them.

A toroidal factor is gamma^A (1+w)^N - xi (1+T) or gamma^A (1+w) - xi (1+T)^N.
A branch divisible by one has infinitely many vanishing special values, so
certifying that no such factor can divide the branch bounds the vanishing.
Two certificates are implemented: a test on the quadratic terms and a sweep of
valuations at torsion points.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Literal

from .cyclotomic import CycElt, RootOfUnity, as_element, valuation_cyc
from .padic import PadicInt, PrecisionError, ValInfo, gamma_power, vp, vp_factorial
from .powerseries import (
    BivariateSeries,
    FEDivisionError,
    RootGridEvaluator,
    divide_fe,
    mu_lambda,
    specialize,
    substitute_torus,
)

if TYPE_CHECKING:
    from .lfun_model import BranchMeta

Orientation = Literal["PowerOnW", "PowerOnT"]


@dataclass(frozen=True)
class ToroidalFactor:
    orientation: Orientation
    N: PadicInt
    A: PadicInt
    xi: RootOfUnity

    def __post_init__(self):
        if self.orientation not in ("PowerOnW", "PowerOnT"):
            raise ValueError(f"unknown orientation {self.orientation!r}")
        if not self.N.prime == self.A.prime == self.xi.prime:
            raise ValueError("prime mismatch inside factor")

    @classmethod
    def of(cls, orientation: Orientation, N: int, A: int = 0, p: int = 3,
           xi: RootOfUnity | None = None, precision: int = 30) -> ToroidalFactor:
        return cls(orientation, PadicInt.of(N, p, precision), PadicInt.of(A, p, precision),
                   xi or RootOfUnity(p, 0, 0))

    @property
    def prime(self) -> int:
        return self.N.prime

    def __str__(self) -> str:
        x = "1" if self.xi.is_trivial else f"zeta_{self.prime}^{self.xi.level}^{self.xi.exponent}"
        if self.orientation == "PowerOnW":
            return f"g^{self.A.residue}(1+w)^{self.N.residue} - {x}(1+T)"
        return f"g^{self.A.residue}(1+w) - {x}(1+T)^{self.N.residue}"


def fe_factor(p: int, precision: int = 30) -> ToroidalFactor:
    """(1+w) - (1+T)^2, the factor forced by the functional equation on self-dual branches."""
    return ToroidalFactor.of("PowerOnT", 2, 0, p, precision=precision)


def _scaled_exponent(N: PadicInt, c: int) -> PadicInt | None:
    if c == 0:
        return None
    return PadicInt.of(N.residue * c, N.prime, N.precision + vp(c, N.prime))


def _binomials(alpha: PadicInt | None, D: int, p: int, floor: int) -> tuple[list[int], list[int]]:
    """Coefficients of (1+X)^alpha up to X^D with their precisions; alpha None means 0."""
    if alpha is None:
        return [1] + [0] * D, [floor] * (D + 1)
    vals, precs = [], []
    for k in range(D + 1):
        M = min(floor, alpha.precision - vp_factorial(k, p))
        if M < 1:
            raise PrecisionError(f"exponent known to {alpha.precision} digits, binomial {k} lost")
        vals.append(math.comb(alpha.residue, k) % p**M)
        precs.append(M)
    return vals, precs


def _monomial(p: int, D: int, scalar: PadicInt, alpha, beta, M: int):
    """Terms of scalar * (1+w)^alpha * (1+T)^beta and the per-degree precision floor."""
    M = min(M, scalar.precision)
    bw, pw = _binomials(alpha, D, p, M)
    bt, pt = _binomials(beta, D, p, M)
    terms = {}
    for a in range(D + 1):
        for b in range(D + 1 - a):
            c = scalar.residue * bw[a] * bt[b]
            if c:
                terms[(a, b)] = c
    profile = [min(pw[d], pt[d]) for d in range(D + 1)]
    return terms, profile


def _profile_list(profile, D: int) -> list[int]:
    return [profile] * (D + 1) if isinstance(profile, int) else list(profile)


def expand_toroidal(F: ToroidalFactor, D: int, profile, gamma: PadicInt) -> BivariateSeries:
    """Truncated expansion of F; coefficients are cyclotomic when xi is nontrivial."""
    p = F.prime
    prof = _profile_list(profile, D)
    gA = gamma_power(gamma, F.A)
    if F.orientation == "PowerOnW":
        left, lp = _monomial(p, D, gA, F.N, None, max(prof))
        right, rp = _monomial(p, D, PadicInt.of(1, p, max(prof)), None, PadicInt.of(1, p, max(prof)), max(prof))
    else:
        left, lp = _monomial(p, D, gA, PadicInt.of(1, p, max(prof)), None, max(prof))
        right, rp = _monomial(p, D, PadicInt.of(1, p, max(prof)), None, F.N, max(prof))
    final = [min(prof[d], lp[d], rp[d]) for d in range(D + 1)]
    final = [min(final[: d + 1]) for d in range(D + 1)]
    if F.xi.is_trivial:
        terms = dict(left)
        for k, c in right.items():
            terms[k] = terms.get(k, 0) - c
        return BivariateSeries.build(p, D, final, terms, gamma)
    m = F.xi.level
    K = max(final)
    xi = as_element(F.xi, m, K)
    terms = {k: CycElt.scalar(c, p, m, K) for k, c in left.items()}
    for k, c in right.items():
        t = xi * CycElt.scalar(c, p, m, K)
        terms[k] = terms[k] - t if k in terms else -t
    return BivariateSeries.build(p, D, final, terms, gamma, level=m)


def expand_toroidal_norm(F: ToroidalFactor, D: int, profile, gamma: PadicInt) -> BivariateSeries:
    """Product of the Galois conjugates of F over Q_p, a Z_p-series divisible by F.

    For xi of exact order p^k this is sum_{s<p} U^(s p^(k-1)) V^((p-1-s) p^(k-1))
    with F = U - xi V.  For trivial xi it is F itself.
    """
    p = F.prime
    k = F.xi.order_level
    if k == 0:
        return expand_toroidal(F, D, profile, gamma)
    prof = _profile_list(profile, D)
    step = p ** (k - 1)
    terms: dict = {}
    floor = list(prof)
    one = PadicInt.of(1, p, max(prof))
    for s in range(p):
        eu, ev = s * step, (p - 1 - s) * step
        A = _scaled_exponent(F.A, eu)
        scal = gamma_power(gamma, A) if A is not None else one
        if F.orientation == "PowerOnW":
            alpha, beta = _scaled_exponent(F.N, eu), (PadicInt.of(ev, p, max(prof) + 30) if ev else None)
        else:
            alpha, beta = (PadicInt.of(eu, p, max(prof) + 30) if eu else None), _scaled_exponent(F.N, ev)
        t, pr = _monomial(p, D, scal, alpha, beta, max(prof))
        for key, c in t.items():
            terms[key] = terms.get(key, 0) + c
        floor = [min(x, y) for x, y in zip(floor, pr)]
    floor = [min(floor[: d + 1]) for d in range(D + 1)]
    return BivariateSeries.build(p, D, floor, terms, gamma)


# -- vanishing along a translate ---------------------------------------------


@dataclass(frozen=True)
class Vanishing:
    """Result of restricting a series to the zero locus of a factor.

    ``status`` is "CertifiedFalse" when some restricted coefficient is a certified
    nonzero, and "ZeroAtPrecision" when everything vanishes at the known digits;
    vanishing to infinite precision can never be certified.
    """

    status: Literal["CertifiedFalse", "ZeroAtPrecision"]
    floor: Fraction
    witness_degree: int | None = None


def vanishes_on_translate(f: BivariateSeries, F: ToroidalFactor) -> Vanishing:
    g = substitute_torus(f, F)
    for n, v in enumerate(g.valuations()):
        if v.is_exact:
            return Vanishing("CertifiedFalse", Fraction(g.profile[n]), n)
    return Vanishing("ZeroAtPrecision", Fraction(min(g.profile)))


# -- quadratic exclusion ------------------------------------------------------


@dataclass(frozen=True)
class QuadraticResult:
    passed: bool
    condition: int | None = None  # failing condition: 1, 2 (w-power side) or 3 (T-power side)
    detail: str = ""

    def __str__(self) -> str:
        return "Pass" if self.passed else f"Fail({self.condition})"


def in_square_of_maximal_ideal(f: BivariateSeries) -> bool:
    """True when the constant and linear coefficients are certified to vanish."""
    return all(f.residue(*k) == 0 for k in ((0, 0), (1, 0), (0, 1))) and f.cutoff >= 2


def _first_unit(f: BivariateSeries, terms, upto: int) -> int | None:
    for d in range(upto + 1):
        if d <= f.cutoff and f.residue(*terms(d)) % f.prime:
            return d
    return None


def exclude_by_quadratic(f: BivariateSeries) -> QuadraticResult:
    """Rule out toroidal factors with unit congruent to 1 mod p from the quadratic terms.

    Condition 1: exactly two of the coefficients of w^2, wT, T^2 are divisible by p.
    Working mod p, a factor (1+w)^N - (1+T) with p | N times a cofactor bw + cT + ...
    has quadratic part (Nb, -b, -c), and the mirrored factor gives (b, c - bN, -cN).
    Writing U for the unit quadratic:

    * U = wT: either orientation is possible; the w-power one forces
      phi(X, 0) = 0 mod (p, X^(p+1)) and the T-power one phi(0, Y) = 0 mod (p, Y^(p+1)).
    * U = w^2: only the T-power orientation, with c = 0 mod p, so phi(0, Y) vanishes
      mod (p, Y^(p+2)); a unit in phi(0, Y) up to degree p+1 excludes it.
    * U = T^2: the mirror image, using phi(X, 0) up to degree p+1.
    """
    p, D = f.prime, f.cutoff
    if D < p:
        raise ValueError(f"cutoff {D} is below p = {p}; cannot test the axis conditions")
    if not in_square_of_maximal_ideal(f):
        raise ValueError("series is not certified to lie in (w, T)^2")
    quad = {"w^2": (2, 0), "wT": (1, 1), "T^2": (0, 2)}
    units = [name for name, k in quad.items() if f.residue(*k) % p]
    if len(units) != 1:
        return QuadraticResult(False, 1, f"{3 - len(units)} of 3 quadratic coefficients divisible by p")
    U = units[0]
    w_axis = lambda d: (d, 0)  # noqa: E731
    t_axis = lambda d: (0, d)  # noqa: E731
    # degree through which a unit is needed, or None if the orientation is impossible
    need_w = {"wT": p, "T^2": p + 1, "w^2": None}[U]
    need_t = {"wT": p, "w^2": p + 1, "T^2": None}[U]
    if need_w is not None and _first_unit(f, w_axis, min(need_w, D)) is None:
        return QuadraticResult(False, 2, f"phi(X,0) vanishes mod p through degree {min(need_w, D)}")
    if need_t is not None and _first_unit(f, t_axis, min(need_t, D)) is None:
        return QuadraticResult(False, 3, f"phi(0,Y) vanishes mod p through degree {min(need_t, D)}")
    return QuadraticResult(True, None, f"unit quadratic {U}")


# -- torsion sweep -------------------------------------------------------------


def min_level(lam: int, p: int) -> int:
    """Smallest m >= 1 with p^m >= lam * p / (p - 1)."""
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    m = 1
    while p**m * (p - 1) < lam * p:
        m += 1
    return m


@dataclass(frozen=True)
class Entry:
    zeta_prime_exp: int
    orientation: Literal["direct", "swapped"]
    valuation: ValInfo
    accuracy: Fraction
    trusted: bool
    denominator_valuation: ValInfo | None = None

    def lower_bound(self) -> Fraction:
        """A certified lower bound for the true valuation."""
        return min(self.valuation.value, self.accuracy)


@dataclass(frozen=True)
class CheckReport:
    branch_id: str
    level: int
    fe_divided: bool
    entries: tuple[Entry, ...]
    outcome: Literal["AllBelowOne", "SomeAtLeastOne", "Untrusted"]
    zeta_exp: int = 1

    def max_valuation(self) -> Fraction:
        return max(e.valuation.value for e in self.entries)

    def offending(self) -> list[Entry]:
        if self.outcome == "SomeAtLeastOne":
            return [e for e in self.entries if e.lower_bound() >= 1]
        if self.outcome == "Untrusted":
            return [e for e in self.entries if not e.trusted]
        return []


def classify(entries) -> str:
    if any(e.lower_bound() >= 1 for e in entries):
        return "SomeAtLeastOne"
    if not all(e.trusted for e in entries):
        return "Untrusted"
    return "AllBelowOne"


def _denominator_valuation(p: int, m: int, a: int, b: int) -> ValInfo:
    """Exact valuation of zeta^a - zeta^(2b) + p."""
    x = as_element(RootOfUnity(p, m, a), m, 3) - as_element(RootOfUnity(p, m, 2 * b), m, 3) + p
    v = valuation_cyc(x)
    if not v.is_exact:
        raise AssertionError("denominator valuation must be exact")
    return v


def _sweep_chunk(f: BivariateSeries, m: int, fe_divide: bool, z: int, exps: list[int]) -> list[Entry]:
    p = f.prime
    ev = RootGridEvaluator(f, m, p if fe_divide else 0)
    out = []
    for s in exps:
        for orient, (u, v) in (("direct", (z, s)), ("swapped", (s, z))):
            acc = ev.accuracy(u, v)
            val = valuation_cyc(ev.value(u, v, acc))
            den = None
            if fe_divide:
                den = _denominator_valuation(p, m, u, v)
                acc = acc - den.value
                val = ValInfo(val.kind, val.value - den.value)
            trusted = val.is_exact and val.value < acc
            out.append(Entry(s, orient, val, acc, trusted, den))
    return out


def modp_sweep(f: BivariateSeries, m: int, fe_divide: bool = False, zeta_exp: int = 1,
               jobs: int = 1) -> CheckReport:
    """Valuations of f at (zeta - 1, zeta' - 1) and (zeta' - 1, zeta - 1), zeta' in mu_{p^m}.

    zeta = (1 + pi_m)^zeta_exp is a fixed primitive root.  With ``fe_divide`` the
    points are shifted by p in the first coordinate and the valuation of the
    functional-equation factor zeta - zeta'^2 + p is subtracted; the undivided
    series is what gets evaluated.
    """
    p = f.prime
    if zeta_exp % p == 0:
        raise ValueError("zeta must be primitive")
    n = p**m
    exps = list(range(n))
    if jobs <= 1 or n < 2 * jobs:
        entries = _sweep_chunk(f, m, fe_divide, zeta_exp, exps)
    else:
        chunks = [exps[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_sweep_chunk, *zip(*[(f, m, fe_divide, zeta_exp, c) for c in chunks])))
        order = {"direct": 0, "swapped": 1}
        entries = sorted((e for part in parts for e in part), key=lambda e: (e.zeta_prime_exp, order[e.orientation]))
    return CheckReport(f.content_hash(), m, fe_divide, tuple(entries), classify(entries), zeta_exp)


# -- pipeline -------------------------------------------------------------------


@dataclass(frozen=True)
class BranchVerdict:
    kind: Literal["UnitBranch", "ExcludedByQuadratic", "ExcludedByModP",
                  "ForcedFEThenExcluded", "Inconclusive"]
    level: int | None = None
    reason: str | None = None

    @property
    def certified(self) -> bool:
        return self.kind != "Inconclusive"

    def __str__(self) -> str:
        if self.level is not None:
            return f"{self.kind}({self.level})"
        if self.reason is not None:
            return f"{self.kind}({self.reason})"
        return self.kind


@dataclass
class PipelineTrace:
    """Everything the pipeline looked at, enough to replay a verdict."""

    series_hash: str
    mu: ValInfo | None = None
    lam: int | None = None
    fe_divided: bool = False
    quadratic: QuadraticResult | None = None
    reports: list[CheckReport] = field(default_factory=list)


def branch_pipeline(f: BivariateSeries, meta: BranchMeta | None, m_max: int = 3,
                    jobs: int = 1) -> tuple[BranchVerdict, PipelineTrace]:
    p = f.prime
    trace = PipelineTrace(f.content_hash())
    if f.residue(0, 0) % p:
        return BranchVerdict("UnitBranch"), trace
    ml = mu_lambda(specialize(f, "w", 0))
    trace.mu, trace.lam = ml.mu, ml.lam
    if not ml.certified or ml.mu.value != 0:
        return BranchVerdict("Inconclusive", reason=f"mu={ml.mu}, lambda={ml.lam}; need certified mu=0"), trace
    lam = ml.lam
    fe = False
    if meta is not None and meta.self_dual:
        if vanishes_on_translate(f, fe_factor(p)).status == "ZeroAtPrecision":
            try:
                q = divide_fe(f)
            except (FEDivisionError, PrecisionError) as exc:
                return BranchVerdict("Inconclusive", reason=f"FE division failed: {exc}"), trace
            mq = mu_lambda(specialize(q, "w", 0))
            if not mq.certified or mq.mu.value != 0 or mq.lam != lam - 1:
                return BranchVerdict("Inconclusive", reason="quotient lambda does not account for the FE zero"), trace
            fe, lam = True, mq.lam
    trace.fe_divided = fe
    if not fe and in_square_of_maximal_ideal(f) and f.cutoff >= p:
        trace.quadratic = exclude_by_quadratic(f)
        if trace.quadratic.passed:
            return BranchVerdict("ExcludedByQuadratic"), trace
    start = min_level(lam, p)
    if start > m_max:
        return BranchVerdict("Inconclusive", reason=f"sweep needs level {start} > m_max={m_max}"), trace
    for m in range(start, m_max + 1):
        rep = modp_sweep(f, m, fe, jobs=jobs)
        trace.reports.append(rep)
        if rep.outcome == "AllBelowOne":
            return BranchVerdict("ForcedFEThenExcluded" if fe else "ExcludedByModP", level=m), trace
    if all(r.outcome == "Untrusted" for r in trace.reports):
        return BranchVerdict("Inconclusive", reason="insufficient precision"), trace
    return BranchVerdict("Inconclusive", reason="small valuations not certified at any level"), trace
