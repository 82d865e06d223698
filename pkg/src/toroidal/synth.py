"""Seeded test series, planted toroidal products, and a brute-force factor oracle.

Random coefficients come from Python's ``random.Random`` (Mersenne Twister
MT19937) seeded with the given seed and drawn with ``randrange``, in the fixed
order (degree, then w-exponent).  :data:`GENERATOR` names this so reports can
record it.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Iterable, Literal

from .cyclotomic import RootOfUnity
from .padic import PadicInt, PrecisionError, vp_factorial
from .powerseries import BivariateSeries, substitute_torus
from .rigidity import ToroidalFactor, expand_toroidal, expand_toroidal_norm

GENERATOR = "python-random-MT19937/v1"

Constraint = Literal["Unit", "InMaximalIdeal", "InSquareOfMaximalIdeal", "Free"]


def _gamma(p: int, profile) -> PadicInt:
    return PadicInt.of(1 + p, p, max(profile) + 1)


def random_series(seed, p: int, D: int, profile, constraint: Constraint = "Unit",
                  gamma: PadicInt | None = None) -> BivariateSeries:
    profile = [profile] * (D + 1) if isinstance(profile, int) else list(profile)
    rng = random.Random(seed)
    terms = {}
    for d in range(D + 1):
        for a in range(d + 1):
            terms[(a, d - a)] = rng.randrange(p ** profile[d])
    if constraint == "Unit":
        M = profile[0]
        terms[(0, 0)] = rng.randrange(1, p) + p * rng.randrange(p ** (M - 1))
    if constraint in ("InMaximalIdeal", "InSquareOfMaximalIdeal"):
        terms[(0, 0)] = 0
    if constraint == "InSquareOfMaximalIdeal":
        terms[(1, 0)] = terms[(0, 1)] = 0
    return BivariateSeries.build(p, D, profile, terms, gamma or _gamma(p, profile))


@dataclass(frozen=True)
class PlantSpec:
    seed: int
    factor: ToroidalFactor
    cofactor_constraint: Constraint
    cutoff: int
    profile: tuple[int, ...]

    def to_json(self) -> str:
        F = self.factor
        doc = {
            "seed": self.seed,
            "factor": {"orientation": F.orientation, "prime": F.prime,
                       "N": str(F.N.residue), "N_precision": F.N.precision,
                       "A": str(F.A.residue), "A_precision": F.A.precision,
                       "xi_level": F.xi.level, "xi_exponent": F.xi.exponent},
            "cofactor_constraint": self.cofactor_constraint,
            "cutoff": self.cutoff,
            "profile": list(self.profile),
            "generator": GENERATOR,
        }
        return json.dumps(doc, sort_keys=True, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> PlantSpec:
        doc = json.loads(text)
        if doc.get("generator", GENERATOR) != GENERATOR:
            raise ValueError(f"spec written by generator {doc['generator']!r}")
        f = doc["factor"]
        p = f["prime"]
        F = ToroidalFactor(f["orientation"], PadicInt.of(int(f["N"]), p, f["N_precision"]),
                           PadicInt.of(int(f["A"]), p, f["A_precision"]),
                           RootOfUnity(p, f["xi_level"], f["xi_exponent"]))
        return cls(doc["seed"], F, doc["cofactor_constraint"], doc["cutoff"], tuple(doc["profile"]))


def factor_series(F: ToroidalFactor, D: int, profile, gamma: PadicInt) -> BivariateSeries:
    """The factor itself over Z_p, or its Galois norm when xi is nontrivial."""
    if F.xi.is_trivial:
        return expand_toroidal(F, D, profile, gamma)
    return expand_toroidal_norm(F, D, profile, gamma)


def plant(spec: PlantSpec) -> BivariateSeries:
    p = spec.factor.prime
    gamma = _gamma(p, spec.profile)
    g = random_series(spec.seed, p, spec.cutoff, spec.profile, spec.cofactor_constraint, gamma)
    return factor_series(spec.factor, spec.cutoff, spec.profile, gamma) * g


def grid_precision(p: int, D: int) -> int:
    """Smallest t with t > v_p(D!), so that every binom(N, k), k <= D, keeps a digit."""
    return vp_factorial(D, p) + 1


def _scan_grid(p: int, m_max: int, t: int, A_grid: Iterable, unit_one_only: bool):
    n = p**m_max
    roots = [RootOfUnity(p, 0, 0)] if unit_one_only else [RootOfUnity(p, m_max, e) for e in range(n)]
    roots.sort(key=lambda r: (r.order_level, r.exponent))
    A_vals = [a if isinstance(a, PadicInt) else PadicInt.of(a, p, 30) for a in A_grid]
    for orientation in ("PowerOnW", "PowerOnT"):
        for xi in roots:
            for N in range(p**t):
                for A in A_vals:
                    yield ToroidalFactor(orientation, PadicInt(p, t, N), A, xi)


def oracle_scan(f: BivariateSeries, m_max: int, t: int, A_grid: Iterable = (0,),
                unit_one_only: bool = False) -> list[ToroidalFactor]:
    """Every grid factor along whose zero locus f vanishes at known precision.

    The grid is both orientations, xi in mu_{p^m_max}, N mod p^t and A in
    ``A_grid``; ``unit_one_only`` restricts to xi = 1, i.e. units congruent to
    1 mod p.  Cost is one substitution, O(D^3) coefficient work, per grid point.
    """
    p = f.prime
    if t <= vp_factorial(f.cutoff, p):
        raise PrecisionError(f"N must be known to more than v_p(D!) = {vp_factorial(f.cutoff, p)} digits")
    found = []
    for F in _scan_grid(p, m_max, t, A_grid, unit_one_only):
        g = substitute_torus(f, F)
        if g.is_zero():
            found.append(F)
    return found


def grid_class(F: ToroidalFactor, t: int) -> tuple:
    """Key identifying F inside the oracle grid."""
    return (F.orientation, F.xi.order_level,
            F.xi.exponent // F.xi.prime ** (F.xi.level - F.xi.order_level) if F.xi.order_level else 0,
            F.N.residue % F.prime**t, F.A.residue)


def factor_count(p: int, m_max: int, t: int, n_A: int) -> int:
    return 2 * p**m_max * p**t * n_A


__all__ = [
    "GENERATOR", "PlantSpec", "random_series", "plant", "factor_series",
    "oracle_scan", "grid_precision", "grid_class", "factor_count",
]
