"""Command-line driver: ``nmr-eraser {run-eraser,prep,expand,correlate,tomo}``."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import experiment as ex
from . import state_prep as sp
from . import tomography as tomo
from .dynamics import SpinSystem, alanine
from .spin_core import load_matrix, matrix_to_csv, matrix_to_json


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="experiment or spin-system JSON file")
    p.add_argument("--slices", type=int, help="slices in the gradient average (default 64)")
    p.add_argument("--windings", type=float, help="gradient area in windings (default 1)")
    p.add_argument("--relaxation", action="store_true", default=None, help="relax during GHZ preparation")
    p.add_argument("--miscal", type=float, help="RF angle miscalibration fraction, 0..0.2")
    p.add_argument("--seed", type=int, help="randomize miscalibration per pulse with this seed")
    p.add_argument("--out", help="output directory")


def _config(args) -> ex.ExperimentConfig:
    overrides = {
        "slices": args.slices,
        "windings": args.windings,
        "relaxation": args.relaxation,
        "miscalibration": args.miscal,
        "seed": args.seed,
        "out_dir": args.out,
    }
    if args.config:
        return ex.ExperimentConfig.from_file(args.config, **overrides)
    return ex.ExperimentConfig(**{k: v for k, v in overrides.items() if v is not None})


def cmd_run_eraser(args) -> int:
    cfg = _config(args)
    result = ex.run_eraser(cfg)
    for name in ex.CHECKPOINTS:
        print(f"{name} {result.reports[name]}")
    if cfg.relaxation:
        print(f"ghz_retention {result.reports['ghz'].c:.9f}")
    print(f"artifacts written to {cfg.out_dir}")
    return 0


def cmd_prep(args) -> int:
    system = SpinSystem.from_file(args.config) if args.config else alanine()
    out = Path(args.out or "prep_out")
    os.makedirs(out, exist_ok=True)
    trace: list = []
    rho = sp.thermal_deviation(system)
    steps = [("thermal", rho)]
    sp.pseudo_pure_prep(rho, trace=trace)
    steps += trace
    for i, (name, m) in enumerate(steps):
        (out / f"step{i}_{name}.json").write_text(matrix_to_json(m))
        (out / f"step{i}_{name}.csv").write_text(matrix_to_csv(m))
        print(f"step{i} {name}")
        print(ex.expansion_text(m), end="")
    return 0


def cmd_expand(args) -> int:
    print(ex.expansion_text(load_matrix(args.file), args.threshold), end="")
    return 0


def cmd_correlate(args) -> int:
    a, b = load_matrix(args.exp), load_matrix(args.the)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    print(tomo.attenuated_correlation(a, b))
    return 0


def cmd_tomo(args) -> int:
    rho = load_matrix(args.file)
    records = tomo.simulate_tomography(rho)
    rec = tomo.reconstruct(records)
    err = float(np.max(np.abs(rec.rho - rho)))
    print(f"readouts={len(records)} rank={rec.rank} residual={rec.residual:.3e} max_error={err:.3e}")
    if args.out:
        Path(args.out).write_text(tomo.records_to_json(records))
    if args.reconstructed:
        Path(args.reconstructed).write_text(matrix_to_json(rec.rho))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nmr-eraser", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run-eraser", help="full experiment, writes matrices and reports")
    _add_run_flags(p)
    p.set_defaults(func=cmd_run_eraser)

    p = sub.add_parser("prep", help="dump every pseudo-pure preparation intermediate")
    p.add_argument("--config", help="spin-system JSON file")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_prep)

    p = sub.add_parser("expand", help="product-operator expansion of a matrix file")
    p.add_argument("file")
    p.add_argument("--threshold", type=float, default=1e-12)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("correlate", help="attenuated correlation of EXP against THE")
    p.add_argument("exp")
    p.add_argument("the")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("tomo", help="simulate the readout set and reconstruct")
    p.add_argument("file")
    p.add_argument("--out", help="write readout records (JSON)")
    p.add_argument("--reconstructed", help="write the reconstructed matrix (JSON)")
    p.set_defaults(func=cmd_tomo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError) as exc:
        print(f"nmr-eraser: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
