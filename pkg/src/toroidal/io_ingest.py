"""JSON formats: L-function coefficient files in, verdict reports out.

Input file (format_version 1)::

    {
      "format_version": 1,
      "prime": 3, "tame_level": 5, "component_r": 0, "branch_i": 0,
      "twist_discriminant": 29,
      "gamma": "4",
      "degree_cutoff": 4,
      "precision_profile": [14, 14, 14, 10, 10],
      "coefficients": [{"w": 2, "t": 0, "value": "3729612"},
                       {"w": 1, "t": 1, "value": "148430", "precision": 11}]
    }

``precision_profile[d]`` is the number of known p-adic digits of every degree-d
coefficient.  A record may carry its own ``precision``, which can only be
higher than the profile entry.  Absent coefficients are zero at profile
precision.  Values are residues in [0, p^precision) written in decimal.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .lfun_model import BranchMeta
from .padic import PadicInt, ValInfo, check_prime
from .powerseries import BivariateSeries

FORMAT_VERSION = 1

_REQUIRED = {
    "format_version": int,
    "prime": int,
    "tame_level": int,
    "component_r": int,
    "branch_i": int,
    "twist_discriminant": int,
    "gamma": str,
    "degree_cutoff": int,
    "precision_profile": list,
    "coefficients": list,
}


@dataclass
class IngestError(ValueError):
    code: str
    message: str
    location: str = ""

    def __str__(self) -> str:
        where = f" at {self.location}" if self.location else ""
        return f"{self.code}: {self.message}{where}"


def _int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _decimal(s, where: str) -> int:
    if not isinstance(s, str) or not s.isdigit():
        raise IngestError("E_FIELD", "expected a nonnegative decimal string", where)
    return int(s)


def parse_lfun(data: bytes | str) -> tuple[BivariateSeries, BranchMeta]:
    try:
        doc = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise IngestError("E_SYNTAX", str(exc)) from None
    if not isinstance(doc, dict):
        raise IngestError("E_SYNTAX", "top level must be an object")
    if doc.get("format_version") != FORMAT_VERSION:
        raise IngestError("E_VERSION", f"unsupported format_version {doc.get('format_version')!r}")
    for key, typ in _REQUIRED.items():
        if key not in doc:
            raise IngestError("E_FIELD", "missing field", key)
        if (typ is int and not _int(doc[key])) or not isinstance(doc[key], typ):
            raise IngestError("E_FIELD", f"expected {typ.__name__}", key)
    unknown = set(doc) - set(_REQUIRED)
    if unknown:
        raise IngestError("E_FIELD", "unknown field", sorted(unknown)[0])
    p = doc["prime"]
    try:
        check_prime(p)
    except ValueError as exc:
        raise IngestError("E_PRIME", str(exc), "prime") from None
    N = doc["tame_level"]
    if N < 1 or N % p == 0:
        raise IngestError("E_FIELD", "tame level must be positive and prime to p", "tame_level")
    for key in ("component_r", "branch_i"):
        if not 0 <= doc[key] < p - 1:
            raise IngestError("E_FIELD", f"must lie in [0, {p - 1})", key)
    D = doc["degree_cutoff"]
    if D < 0:
        raise IngestError("E_FIELD", "must be nonnegative", "degree_cutoff")
    profile = doc["precision_profile"]
    if len(profile) != D + 1:
        raise IngestError("E_PROFILE", f"need {D + 1} entries, got {len(profile)}", "precision_profile")
    for d, M in enumerate(profile):
        if not _int(M) or M < 1:
            raise IngestError("E_PROFILE", "entries must be positive integers", f"precision_profile[{d}]")
        if d and M > profile[d - 1]:
            raise IngestError("E_PROFILE", "profile must be non-increasing", f"precision_profile[{d}]")
    g = _decimal(doc["gamma"], "gamma")
    gamma = PadicInt.of(g, p, max(max(profile), 2) + 1)
    if g % p != 1 or g % p**2 == 1:
        raise IngestError("E_GAMMA", "gamma must be 1 mod p and not 1 mod p^2", "gamma")
    tw = doc["twist_discriminant"]
    if tw and math.gcd(tw, p * N) != 1:
        raise IngestError("E_TWIST", "twist discriminant not prime to pN", "twist_discriminant")
    terms, overrides, seen = {}, {}, set()
    for idx, rec in enumerate(doc["coefficients"]):
        where = f"coefficients[{idx}]"
        if not isinstance(rec, dict) or not {"w", "t", "value"} <= set(rec) or set(rec) - {"w", "t", "value", "precision"}:
            raise IngestError("E_FIELD", "record needs keys w, t, value (and optional precision)", where)
        a, b = rec["w"], rec["t"]
        if not (_int(a) and _int(b)) or a < 0 or b < 0 or a + b > D:
            raise IngestError("E_EXPONENT", f"exponent ({a},{b}) outside 0 <= w+t <= {D}", where)
        if (a, b) in seen:
            raise IngestError("E_DUPLICATE", f"coefficient ({a},{b}) listed twice", where)
        seen.add((a, b))
        M = profile[a + b]
        if "precision" in rec:
            P = rec["precision"]
            if not _int(P) or P < M:
                raise IngestError("E_PRECISION", f"record precision must be an integer >= {M}", where)
            M = P
            if P > profile[a + b]:
                overrides[(a, b)] = P
        v = _decimal(rec["value"], where + ".value")
        if v >= p**M:
            raise IngestError("E_RANGE", f"coefficient out of range at ({a},{b})", where)
        if v:
            terms[(a, b)] = v
    meta = BranchMeta(p, N, doc["component_r"], doc["branch_i"], tw, gamma)
    return BivariateSeries(p, D, tuple(profile), terms, gamma, overrides), meta


def serialize_lfun(f: BivariateSeries, meta: BranchMeta) -> bytes:
    """Canonical form: sorted keys and coefficients, zeros omitted."""
    if f.level:
        raise ValueError("only Z_p-coefficient series are serialisable")
    coeffs = []
    for (a, b) in sorted(set(f.coeffs) | set(f.overrides)):
        rec = {"w": a, "t": b, "value": str(f.coeffs.get((a, b), 0))}
        if (a, b) in f.overrides:
            rec["precision"] = f.overrides[(a, b)]
        coeffs.append(rec)
    doc = {
        "format_version": FORMAT_VERSION,
        "prime": f.prime,
        "tame_level": meta.tame_level,
        "component_r": meta.component_r,
        "branch_i": meta.branch_i,
        "twist_discriminant": meta.twist_discriminant,
        "gamma": str(f.gamma.residue),
        "degree_cutoff": f.cutoff,
        "precision_profile": list(f.profile),
        "coefficients": coeffs,
    }
    return (json.dumps(doc, sort_keys=True, indent=1) + "\n").encode()


def content_hash(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _frac(x) -> str:
    v = x.value if isinstance(x, ValInfo) else Fraction(x)
    prefix = ">=" if isinstance(x, ValInfo) and not x.is_exact else ""
    return f"{prefix}{v.numerator}/{v.denominator}"


def report_dict(verdict, trace, input_hash: str) -> dict:
    reports = []
    for rep in trace.reports:
        entries = []
        for e in rep.entries:
            item = {
                "zeta_prime_exp": e.zeta_prime_exp,
                "orientation": e.orientation,
                "valuation": _frac(e.valuation),
                "accuracy": _frac(e.accuracy),
                "trusted": e.trusted,
            }
            if e.denominator_valuation is not None:
                item["denominator_valuation"] = _frac(e.denominator_valuation)
            entries.append(item)
        reports.append({"level": rep.level, "fe_divided": rep.fe_divided,
                        "entries": entries, "outcome": rep.outcome})
    return {"input_hash": input_hash, "verdict": str(verdict), "reports": reports}


def write_report(verdict, trace, input_hash: str) -> bytes:
    return (json.dumps(report_dict(verdict, trace, input_hash), sort_keys=True, indent=1) + "\n").encode()
