"""Command line entry point: ``encdec {identity,fit,study,frames,witness}``."""

from __future__ import annotations

import argparse
import csv
import os
import sys

import numpy as np

from ..architecture import save_architecture
from ..codec import encoder_divergence_witness, write_frame_csv
from ..codec.frames import reconstruction_error
from ..errors import EncDecError
from .families import family_by_name
from .operators import CanonicalOperator
from .report import write_outputs
from .study import CODECS, CodecPlan, StudyReport, convergence_study, identity_study

OPERATORS = {"antiderivative": "Antiderivative", "poisson": "Poisson1D", "sin": "PointwiseSin"}


def _n_list(text: str) -> list:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("n values must be positive integers")
    return values


def _common(p: argparse.ArgumentParser, codec_default="sampling") -> None:
    p.add_argument("--codec", choices=CODECS, default=codec_default)
    p.add_argument("--n", type=_n_list, default=[4, 8, 16], help="comma-separated n values, e.g. 4,8,16")
    p.add_argument("--family", default="sine2", help="sineM, sineM-shifted or bumps")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="out", help="output directory")
    p.add_argument("--svg", action="store_true", help="also write report.svg")
    p.add_argument("--nodes", type=int, default=257, help="grid nodes per function")
    p.add_argument("--wall-clock", action="store_true", help="record wall_ms (breaks byte determinism)")


def _fitting(p: argparse.ArgumentParser) -> None:
    p.add_argument("--operator", choices=sorted(OPERATORS), default="antiderivative")
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--test-family", default="", help="comma-separated held-out families")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="encdec", description="Encoder-decoder approximation experiments.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("identity", help="error of D_n o E_n on a family, per n")
    _common(p)
    p = sub.add_parser("fit", help="fit one architecture and save it")
    _common(p)
    _fitting(p)
    p = sub.add_parser("study", help="convergence study over n on train and test families")
    _common(p)
    _fitting(p)
    p = sub.add_parser("frames", help="frame bounds, Gram matrix and dual check")
    p.add_argument("--kind", choices=("mercedes", "sine"), default="mercedes")
    p.add_argument("--n", type=int, default=4, help="sine atoms for --kind sine")
    p.add_argument("--nodes", type=int, default=257)
    p.add_argument("--out", default="out")
    p = sub.add_parser("witness", help="function separating nested sampling from Faber-Schauder coefficients")
    p.add_argument("--max-n", type=int, default=8)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--out", default="out")
    return parser


def _operator(args):
    return CanonicalOperator(OPERATORS[args.operator], shape=(args.nodes,)).spec()


def _families(args, plan):
    train = family_by_name(args.family, shape=args.nodes, space_tag=plan.space_tag)
    names = [s for s in getattr(args, "test_family", "").split(",") if s.strip()]
    return train, [family_by_name(s, shape=args.nodes, space_tag=plan.space_tag) for s in names]


def _run_identity(args) -> int:
    plan = CodecPlan(args.codec, args.nodes, args.seed)
    train, _ = _families(args, plan)
    report = identity_study(plan, args.n, [train], args.wall_clock)
    write_outputs(report, args.out, args.svg, {"command": "identity", "family": args.family, "seed": args.seed,
                                               "nodes": args.nodes})
    _print_rows(report)
    return 0


def _run_study(args) -> int:
    plan = CodecPlan(args.codec, args.nodes, args.seed)
    train, tests = _families(args, plan)
    report = convergence_study(_operator(args), plan, args.n, train, tests, args.degree, args.seed, args.wall_clock)
    write_outputs(report, args.out, args.svg, {"command": "study", "nodes": args.nodes})
    _print_rows(report)
    return 0


def _run_fit(args) -> int:
    if len(args.n) != 1:
        print("fit takes a single --n value", file=sys.stderr)
        return 2
    plan = CodecPlan(args.codec, args.nodes, args.seed)
    train, tests = _families(args, plan)
    report, archs = convergence_study(_operator(args), plan, args.n, train, tests, args.degree, args.seed,
                                      args.wall_clock, keep_architectures=True)
    save_architecture(archs[0], os.path.join(args.out, "architecture"))
    write_outputs(report, args.out, args.svg, {"command": "fit", "nodes": args.nodes})
    _print_rows(report)
    return 0


def _mercedes_frame():
    from ..funcspace import Domain, GridFunction, SpaceTag
    from ..codec import build_frame

    # three unit vectors at 120 degrees, embedded as step functions on two half-intervals
    angles = np.pi / 2 + 2 * np.pi * np.arange(3) / 3
    vecs = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    dom = Domain.unit(1)
    return build_frame([GridFunction(dom, (2,), v / np.sqrt(0.5), SpaceTag.L2) for v in vecs])


def _run_frames(args) -> int:
    from .study import redundant_sine_frame

    fs = _mercedes_frame() if args.kind == "mercedes" else redundant_sine_frame(args.n, args.nodes)
    os.makedirs(args.out, exist_ok=True)
    write_frame_csv(fs, os.path.join(args.out, "frame_gram.csv"), os.path.join(args.out, "frame_bounds.csv"))
    a, b = fs.bounds
    print(f"atoms={fs.size} rank={fs.rank} A={a:.12g} B={b:.12g} reconstruction={reconstruction_error(fs):.3g}")
    return 0


def _run_witness(args) -> int:
    w = encoder_divergence_witness(max_n=args.max_n, tol=args.tol)
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "witness.csv"), "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["label", "n", "k", "disagreement"])
        writer.writerow([w.label, w.n, w.k, repr(w.disagreement)])
    print(f"witness {w.label}: n={w.n} k={w.k} disagreement={w.disagreement:.6g}")
    return 0


def _print_rows(report: StudyReport) -> None:
    for r in report.rows:
        print(f"{r.arch_id:>28} n={r.n:<4d} {r.family:<14} sup_error={r.sup_error:.6e}")
    for note in report.warnings:
        print(f"warning: {note}", file=sys.stderr)


COMMANDS = {"identity": _run_identity, "fit": _run_fit, "study": _run_study, "frames": _run_frames,
            "witness": _run_witness}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return COMMANDS[args.command](args)
    except (EncDecError, OSError, ArithmeticError) as exc:
        print(f"encdec {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
