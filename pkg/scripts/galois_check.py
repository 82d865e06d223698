"""Check that sweep outcomes do not depend on the chosen primitive root zeta.

    python3 scripts/galois_check.py --prime 3 --level 2 --count 20
"""
from __future__ import annotations

import argparse

from toroidal.cyclotomic import RootOfUnity
from toroidal.rigidity import ToroidalFactor, modp_sweep
from toroidal.synth import PlantSpec, plant, random_series


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--prime", type=int, default=3)
    ap.add_argument("--level", type=int, default=2)
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--cutoff", type=int, default=6)
    ap.add_argument("--precision", type=int, default=8)
    args = ap.parse_args(argv)
    p, m, D, M = args.prime, args.level, args.cutoff, args.precision
    exps = [a for a in range(1, p**m) if a % p]
    bad = 0
    for s in range(args.count):
        if s % 2:
            F = ToroidalFactor.of("PowerOnT", s, s % p, p, RootOfUnity(p, 1, s % p))
            f = plant(PlantSpec(s, F, "Unit", D, (M,) * (D + 1)))
        else:
            f = random_series(s, p, D, M, "InMaximalIdeal")
        outcomes = [modp_sweep(f, m, zeta_exp=a).outcome for a in exps]
        if len(set(outcomes)) != 1:
            bad += 1
            print(f"series {s}: outcomes depend on zeta: {outcomes}")
    print(f"p={p} m={m}: {args.count} series x {len(exps)} embeddings, {bad} inconsistent")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
