"""Command-line driver: ``infomat <subcommand> ...``.

Exit status is 0 on success and 2 on invalid input or a failed check.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import suites
from .datasets import center, read_dataset, window, write_dataset
from .errors import InfoMatError
from .generators import (GaussianARModel, IsingPolicy, ar_joint_covariance, ar_sample,
                         ising_joint_pmf, ising_sample, nonlinear_shift, MONOTONE_MAPS)
from .matrix import (estimate_gaussian, estimate_plugin_discrete, infomat_from_gaussian_model,
                     read_infomat_csv, write_infomat_csv)
from .measures import summarize
from .oracle import pmf_infomat
from .render import RenderSpec, render_pgm, render_svg

EXIT_INVALID = 2


def _truncation(text):
    if text in (None, "full"):
        return None
    try:
        lx, ly = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'Lx,Ly' or 'full', got {text!r}")
    return lx, ly


def _cmd_gen_ar(args):
    model = GaussianARModel.from_json(args.model, m=args.m)
    ds = ar_sample(model, args.n_windows, seed=args.seed, n_jobs=args.jobs)
    write_dataset(ds.to_pair(), args.out)


def _cmd_gen_ising(args):
    policy = IsingPolicy.from_json(args.policy)
    ds = ising_sample(policy, args.n_windows, args.m, seed=args.seed, n_jobs=args.jobs)
    write_dataset(ds.to_pair(), args.out)


def _cmd_transform(args):
    ds = window(read_dataset(args.inp), args.m)
    out = nonlinear_shift(ds, args.shift, args.map_x, args.map_y)
    write_dataset(out.to_pair(), args.out)


def _cmd_estimate(args):
    ds = window(read_dataset(args.inp), args.m, args.stride)
    if args.swap:
        ds = ds.swapped()
    if args.method == "gaussian":
        if args.center:
            ds = center(ds)
        mat = estimate_gaussian(ds, n_jobs=args.jobs)
    else:
        mat = estimate_plugin_discrete(ds, args.truncation, n_jobs=args.jobs)
    write_infomat_csv(mat, args.out)


def _cmd_exact(args):
    if args.ar_model:
        model = ar_joint_covariance(GaussianARModel.from_json(args.ar_model, m=args.m))
        if args.swap:
            model = model.swapped()
        mat = infomat_from_gaussian_model(model)
    else:
        pmf = ising_joint_pmf(IsingPolicy.from_json(args.ising_policy), args.m)
        mat = pmf_infomat(pmf.swapped() if args.swap else pmf)
    write_infomat_csv(mat, args.out)


def _cmd_measures(args):
    mat = read_infomat_csv(args.inp)
    rev = read_infomat_csv(args.reverse) if args.reverse else None
    report = summarize(mat, rev, units=args.units, tol=args.tol)
    text = json.dumps(report, indent=2)
    if args.report:
        Path(args.report).write_text(text + "\n")
    else:
        print(text)
    if rev is not None and not report["all_pass"]:
        return EXIT_INVALID


def _cmd_render(args):
    mat = read_infomat_csv(args.inp)
    spec = RenderSpec(colormap=args.colormap, value_clip=args.clip)
    if args.fmt == "pgm":
        render_pgm(mat, spec, args.out)
    else:
        render_svg(mat, spec, args.out)


def _cmd_verify(args):
    names = "all" if args.suite == "all" else args.suite.split(",")
    unknown = [n for n in (names if names != "all" else []) if n not in suites.SUITES]
    if unknown:
        raise InfoMatError(f"unknown suite(s) {unknown}; choose from {sorted(suites.SUITES)}")
    results = suites.run(names)
    print(f"{'suite':<20}{'cases':>7}{'max residual':>16}{'tolerance':>12}  result")
    for r in results:
        print(f"{r.name:<20}{r.cases:>7}{r.max_residual:>16.3e}{r.tolerance:>12.0e}  "
              f"{'PASS' if r.passed else 'FAIL'}")
    if not all(r.passed for r in results):
        return EXIT_INVALID


def build_parser():
    p = argparse.ArgumentParser(prog="infomat", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-ar", help="sample Gaussian AR windows")
    g.add_argument("--model", required=True, help="AR model JSON")
    g.add_argument("--n-windows", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--jobs", type=int, default=1)
    g.add_argument("--out", required=True)
    g.set_defaults(func=_cmd_gen_ar)

    g = sub.add_parser("gen-ising", help="simulate the Ising channel")
    g.add_argument("--policy", required=True, help="policy JSON or 'iid'")
    g.add_argument("--n-windows", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--jobs", type=int, default=1)
    g.add_argument("--out", required=True)
    g.set_defaults(func=_cmd_gen_ising)

    g = sub.add_parser("transform", help="cyclic shift plus monotone maps")
    g.add_argument("--in", dest="inp", required=True)
    g.add_argument("--m", type=int, default=10, help="window length (default 10)")
    g.add_argument("--shift", type=int, default=0)
    g.add_argument("--map-x", choices=sorted(MONOTONE_MAPS), default="identity")
    g.add_argument("--map-y", choices=sorted(MONOTONE_MAPS), default="identity")
    g.add_argument("--out", required=True)
    g.set_defaults(func=_cmd_transform)

    g = sub.add_parser("estimate", help="estimate an InfoMat from data")
    g.add_argument("--in", dest="inp", required=True)
    g.add_argument("--method", choices=("gaussian", "plugin"), required=True)
    g.add_argument("--m", type=int, default=10, help="window length (default 10)")
    g.add_argument("--stride", type=int, default=None, help="window stride (default m)")
    g.add_argument("--truncation", type=_truncation, default=None,
                   help="plug-in history truncation 'Lx,Ly' or 'full'")
    g.add_argument("--center", action="store_true", help="center windows before estimating")
    g.add_argument("--swap", action="store_true", help="estimate the (Y, X) InfoMat")
    g.add_argument("--jobs", type=int, default=1)
    g.add_argument("--out", required=True)
    g.set_defaults(func=_cmd_estimate)

    g = sub.add_parser("exact", help="exact InfoMat of a model")
    src = g.add_mutually_exclusive_group(required=True)
    src.add_argument("--ar-model")
    src.add_argument("--ising-policy")
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--swap", action="store_true", help="exact (Y, X) InfoMat")
    g.add_argument("--out", required=True)
    g.set_defaults(func=_cmd_exact)

    g = sub.add_parser("measures", help="DI, TE, instantaneous info and identity residuals")
    g.add_argument("--in", dest="inp", required=True)
    g.add_argument("--reverse", help="InfoMat of the swapped pair (Y, X)")
    g.add_argument("--report", help="write JSON here instead of stdout")
    g.add_argument("--units", choices=("nats", "bits"), default="nats")
    g.add_argument("--tol", type=float, default=1e-9)
    g.set_defaults(func=_cmd_measures)

    g = sub.add_parser("render", help="draw an InfoMat heatmap")
    g.add_argument("--in", dest="inp", required=True)
    g.add_argument("--fmt", choices=("pgm", "svg"), required=True)
    g.add_argument("--colormap", choices=("fixed-5-stop", "grayscale"), default="fixed-5-stop")
    g.add_argument("--clip", type=float, default=None)
    g.add_argument("--out", required=True)
    g.set_defaults(func=_cmd_render)

    g = sub.add_parser("verify", help="run oracle-backed identity suites")
    g.add_argument("--suite", default="all", help="'all' or comma-separated suite names")
    g.set_defaults(func=_cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else 0
    try:
        return args.func(args) or 0
    except (InfoMatError, OSError, json.JSONDecodeError) as exc:
        print(f"infomat {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
