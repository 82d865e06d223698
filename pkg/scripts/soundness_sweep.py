"""Plant toroidal factors, run the sweep and pipeline, count false exclusions.

    python3 scripts/soundness_sweep.py --prime 5 --count 50 --cutoff 6 --precision 8
"""
from __future__ import annotations

import argparse
import random
import time
from collections import Counter

from toroidal.cyclotomic import RootOfUnity
from toroidal.padic import PadicInt
from toroidal.rigidity import ToroidalFactor, branch_pipeline, modp_sweep
from toroidal.synth import PlantSpec, plant


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--prime", type=int, default=3)
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--cutoff", type=int, default=8)
    ap.add_argument("--precision", type=int, default=10)
    ap.add_argument("--max-xi-level", type=int, default=2)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    p, D, M = args.prime, args.cutoff, args.precision
    rng = random.Random(args.seed)
    outcomes, verdicts, false_exclusions = Counter(), Counter(), 0
    t0 = time.perf_counter()
    for i in range(args.count):
        k = rng.randrange(args.max_xi_level + 1)
        xi = RootOfUnity(p, k, rng.randrange(1, p) + p * rng.randrange(p ** (k - 1))) if k else RootOfUnity(p, 0, 0)
        F = ToroidalFactor(rng.choice(["PowerOnW", "PowerOnT"]), PadicInt.of(rng.randrange(p**20), p, 40),
                           PadicInt.of(rng.randrange(p), p, 40), xi)
        f = plant(PlantSpec(args.seed * 100003 + i, F, "Unit", D, (M,) * (D + 1)))
        m = max(1, k)
        rep = modp_sweep(f, m)
        verdict, _ = branch_pipeline(f, None, m)
        outcomes[rep.outcome] += 1
        verdicts[verdict.kind] += 1
        false_exclusions += rep.outcome == "AllBelowOne" or verdict.certified
    print(f"p={p} D={D} M={M}: {args.count} plants in {time.perf_counter() - t0:.1f}s")
    print("sweep outcomes:", dict(outcomes))
    print("pipeline verdicts:", dict(verdicts))
    print("false exclusions:", false_exclusions)
    return 1 if false_exclusions else 0


if __name__ == "__main__":
    raise SystemExit(main())
