"""Command line: inspect, verdict, synth, oracle.

Exit codes: 0 exclusion certified (or command succeeded), 2 inconclusive,
1 operational error (I/O, malformed input).
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .cyclotomic import RootOfUnity
from .io_ingest import IngestError, content_hash, parse_lfun, serialize_lfun, write_report
from .lfun_model import BranchMeta
from .padic import PadicInt, PrecisionError
from .powerseries import mu_lambda, specialize
from .rigidity import ToroidalFactor, branch_pipeline, fe_factor, in_square_of_maximal_ideal
from .synth import GENERATOR, PlantSpec, factor_series, grid_precision, oracle_scan, plant, random_series

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    command: str
    inputs: tuple[str, ...] = ()
    m_max: int = 3
    out: str | None = None
    jobs: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.m_max < 1:
            raise ValueError("--m-max must be at least 1")
        if self.jobs < 1:
            raise ValueError("--jobs must be at least 1")


def _emit(data: bytes | str, out: str | None) -> None:
    if isinstance(data, str):
        data = data.encode()
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.write(data.decode())


def _load(path: str):
    raw = Path(path).read_bytes()
    f, meta = parse_lfun(raw)
    return f, meta, content_hash(serialize_lfun(f, meta))


def cmd_inspect(path: str) -> int:
    f, meta, _ = _load(path)
    p = f.prime
    ml = mu_lambda(specialize(f, "w", 0))
    lines = [
        f"prime: {p}",
        f"tame_level: {meta.tame_level}",
        f"component_r: {meta.component_r}",
        f"branch_i: {meta.branch_i}",
        f"twist_discriminant: {meta.twist_discriminant}",
        f"degree_cutoff: {f.cutoff}",
        f"precision_profile: {list(f.profile)}",
        f"mu: {ml.mu}",
        f"lambda: {ml.lam if ml.lam is not None else 'unknown'}",
        f"self_dual: {meta.self_dual}",
    ]
    if f.residue(0, 0) % p:
        lines.append("unit branch; no zeroes")
    else:
        lines.append("unit branch: no")
    if in_square_of_maximal_ideal(f):
        quad = {"w^2": (2, 0), "wT": (1, 1), "T^2": (0, 2)}
        units = [k for k, e in quad.items() if f.residue(*e) % p]
        lines.append(f"in (w,T)^2: yes; unit quadratic coefficients: {', '.join(units) or 'none'}")
    else:
        lines.append("in (w,T)^2: no")
    print("\n".join(lines))
    return EXIT_OK


def cmd_verdict(cfg: RunConfig) -> int:
    code = EXIT_OK
    for path in cfg.inputs:
        f, meta, h = _load(path)
        verdict, trace = branch_pipeline(f, meta, cfg.m_max, jobs=cfg.jobs)
        report = write_report(verdict, trace, h)
        if cfg.out:
            _emit(report, cfg.out if len(cfg.inputs) == 1 else f"{cfg.out}.{Path(path).stem}.json")
        print(f"{path}: {verdict}", file=sys.stderr if not cfg.out else sys.stdout)
        if not cfg.out:
            _emit(report, None)
        if not verdict.certified:
            code = EXIT_INCONCLUSIVE
    return code


def _synth_meta(p: int, self_dual: bool) -> BranchMeta:
    # r = 1 has no solution of 2i = r mod p-1, so the branch is not self-dual
    return BranchMeta(p, 5 if p != 5 else 7, 0 if self_dual else 1, 0)


def cmd_synth(args) -> int:
    p, D, M = args.prime, args.cutoff, args.precision
    profile = (M,) * (D + 1)
    if args.kind == "unit":
        f = random_series(args.seed, p, D, profile, "Unit")
        meta = _synth_meta(p, False)
    elif args.kind == "fe":
        u = random_series(args.seed, p, D, profile, "Unit")
        f = factor_series(fe_factor(p), D, profile, u.gamma) * u
        meta = _synth_meta(p, True)
    else:
        xi = RootOfUnity(p, args.xi_level, args.xi_exp)
        F = ToroidalFactor(args.orientation, PadicInt.of(args.N, p, 40), PadicInt.of(args.A, p, 40), xi)
        spec = PlantSpec(args.seed, F, args.constraint, D, profile)
        f = plant(spec)
        meta = _synth_meta(p, False)
        if args.spec_out:
            Path(args.spec_out).write_text(spec.to_json())
    _emit(serialize_lfun(f, meta), args.out)
    return EXIT_OK


def cmd_oracle(args) -> int:
    f, _, h = _load(args.file)
    t = args.t or grid_precision(f.prime, f.cutoff)
    found = oracle_scan(f, args.m_max, t, [int(a) for a in args.A_grid.split(",")])
    doc = {
        "input_hash": h,
        "generator": GENERATOR,
        "grid": {"m_max": args.m_max, "t": t, "A_grid": args.A_grid},
        "found": [
            {"orientation": F.orientation, "N": F.N.residue, "N_precision": F.N.precision,
             "A": F.A.residue, "xi_level": F.xi.level, "xi_exponent": F.xi.exponent}
            for F in found
        ],
    }
    _emit(json.dumps(doc, sort_keys=True, indent=1) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="toroidal", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("inspect", help="summarise an L-function file")
    s.add_argument("file")

    s = sub.add_parser("verdict", help="run the exclusion pipeline")
    s.add_argument("files", nargs="+")
    s.add_argument("--m-max", type=int, default=3)
    s.add_argument("--out")
    s.add_argument("--jobs", type=int, default=1)

    s = sub.add_parser("synth", help="write a synthetic L-function file")
    s.add_argument("--kind", choices=["unit", "fe", "plant"], default="unit")
    s.add_argument("--prime", type=int, default=3)
    s.add_argument("--cutoff", type=int, default=6)
    s.add_argument("--precision", type=int, default=10)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--orientation", choices=["PowerOnW", "PowerOnT"], default="PowerOnW")
    s.add_argument("--N", type=int, default=1)
    s.add_argument("--A", type=int, default=0)
    s.add_argument("--xi-level", type=int, default=0)
    s.add_argument("--xi-exp", type=int, default=0)
    s.add_argument("--constraint", default="Unit",
                   choices=["Unit", "InMaximalIdeal", "InSquareOfMaximalIdeal", "Free"])
    s.add_argument("--spec-out")
    s.add_argument("--out")

    s = sub.add_parser("oracle", help="brute-force scan for toroidal factors")
    s.add_argument("file")
    s.add_argument("--m-max", type=int, default=1)
    s.add_argument("--t", type=int, default=0, help="scan N mod p^t (default: v_p(D!) + 1)")
    s.add_argument("--A-grid", default="0")
    s.add_argument("--out")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "inspect":
            return cmd_inspect(args.file)
        if args.command == "verdict":
            return cmd_verdict(RunConfig("verdict", tuple(args.files), args.m_max, args.out, args.jobs))
        if args.command == "synth":
            return cmd_synth(args)
        return cmd_oracle(args)
    except (OSError, IngestError, PrecisionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
