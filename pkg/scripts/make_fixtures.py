"""Regenerate fixtures/ deterministically.

The two twisted branches carry only the coefficients that are printed in the
source computation (the three quadratic terms, and for the twist by 41 the
residue of the T^4 coefficient mod 3).  Every other coefficient is written as
0 at the profile precision.  Neither quadratic verdict depends on those
placeholders.
"""
from __future__ import annotations

import sys
from pathlib import Path

from toroidal.io_ingest import serialize_lfun
from toroidal.lfun_model import BranchMeta
from toroidal.padic import PadicInt
from toroidal.powerseries import BivariateSeries
from toroidal.rigidity import fe_factor
from toroidal.synth import PlantSpec, factor_series, plant, random_series
from toroidal.rigidity import ToroidalFactor
from toroidal.cyclotomic import RootOfUnity

OUT = Path(__file__).resolve().parent.parent / "fixtures"

QUADRATIC_PROFILE = (10, 10, 10, 1, 1)
QUADRATIC_OVERRIDES = {(2, 0): 14, (1, 1): 11}


def twisted(D: int, quad: tuple[int, int, int], extra: dict) -> bytes:
    p = 3
    gamma = PadicInt.of(4, p, 15)
    terms = {(2, 0): quad[0], (1, 1): quad[1], (0, 2): quad[2], **extra}
    f = BivariateSeries.build(p, 4, QUADRATIC_PROFILE, terms, gamma, QUADRATIC_OVERRIDES)
    return serialize_lfun(f, BranchMeta(p, 5, 0, 0, D, gamma))


def main(out: Path = OUT) -> None:
    out.mkdir(exist_ok=True)
    files = {
        "chi29_p3_i0.json": twisted(29, (3 * 1243204, 148430, 28717), {}),
        "chi41_p3_i0.json": twisted(41, (4540910, 9 * 1211, 9 * 5350), {(0, 4): 1}),
    }
    p, D, M = 3, 6, 10
    prof = (M,) * (D + 1)
    unit = random_series(11, p, D, prof, "Unit")
    files["unit_p3.json"] = serialize_lfun(unit, BranchMeta(p, 5, 1, 0))
    u = random_series(12, p, D, prof, "Unit")
    fe = factor_series(fe_factor(p), D, prof, u.gamma) * u
    files["fe_times_unit_p3.json"] = serialize_lfun(fe, BranchMeta(p, 5, 0, 0))
    spec = PlantSpec(13, ToroidalFactor(
        "PowerOnW", PadicInt.of(4, p, 40), PadicInt.of(1, p, 40), RootOfUnity(p, 1, 1)), "Unit", D, prof)
    files["planted_p3.json"] = serialize_lfun(plant(spec), BranchMeta(p, 5, 1, 0))
    (out / "planted_p3.spec").write_text(spec.to_json())
    p5 = 5
    prof5 = (8,) * 7
    u5 = random_series(14, p5, 6, prof5, "Unit")
    files["fe_times_unit_p5.json"] = serialize_lfun(
        factor_series(fe_factor(p5), 6, prof5, u5.gamma) * u5, BranchMeta(p5, 7, 0, 2))
    files["unit_p11.json"] = serialize_lfun(random_series(15, 11, 4, (6,) * 5, "Unit"), BranchMeta(11, 3, 1, 0))
    for name, data in files.items():
        (out / name).write_bytes(data)


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else OUT)
