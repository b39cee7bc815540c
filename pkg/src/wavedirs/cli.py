"""Command-line front end: ``wavedirs dirs | synth | selftest``.

``dirs`` flags may also come from a ``--config`` file of ``key = value``
lines (keys are flag names without the leading dashes, ``-`` or ``_``);
flags given on the command line win.
"""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import io, spatial, synthetic
from .directions import Kind, principal_directions
from .errors import (
    FrameUndefinedError,
    IllConditionedError,
    InsufficientNeighborsError,
    InvalidArgumentError,
    ParseError,
    WavedirsError,
)
from .regression import FitConfig, estimate_at

__all__ = ["compute_records", "build_parser", "run_pipeline", "main"]

# per-point failures that skip the point instead of aborting the run
POINT_ERRORS = (FrameUndefinedError, IllConditionedError, InsufficientNeighborsError)


def _records_at(cloud, index, i, config, orders, max_only):
    frame, coeffs = estimate_at(cloud, i, config, index)
    out = []
    for k in orders:
        for d in principal_directions(coeffs, k, frame):
            if max_only and d.kind is not Kind.MAXIMUM:
                continue
            out.append(io.DirectionRecord(int(i), cloud.positions[i], d))
    return out


def compute_records(cloud, config: FitConfig, orders, indices=None, threads=1, max_only=False):
    """Directions of the requested ``orders`` at ``indices`` (default: every point).

    Returns ``(records, failures)``; records are sorted by point, order and
    angle, ``failures`` maps point index to the error that skipped it.
    """
    orders = sorted(set(int(k) for k in orders))
    for k in orders:
        if not 2 <= k <= config.max_order:
            raise InvalidArgumentError(f"order {k} outside 2..{config.max_order}")
    if threads < 1:
        raise InvalidArgumentError("threads must be at least 1")
    index = spatial.build(cloud)
    indices = np.arange(len(cloud)) if indices is None else np.asarray(indices, dtype=int)

    def one(i):
        try:
            return i, _records_at(cloud, index, i, config, orders, max_only), None
        except POINT_ERRORS as err:
            return i, [], err

    if threads == 1:
        results = [one(i) for i in indices]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, indices, chunksize=64))
    records = [r for _, recs, _ in results for r in recs]
    records.sort(key=io.DirectionRecord.sort_key)
    failures = {int(i): err for i, _, err in results if err is not None}
    return records, failures


# ---------------------------------------------------------------- parser


def _orders(text):
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"orders must be comma-separated integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("at least one order is required")
    return values


def _add_dirs(sub):
    p = sub.add_parser("dirs", help="principal directions of a point cloud")
    p.add_argument("--config", help="key=value file with defaults for these flags")
    p.add_argument("--input", help="xyz or PLY point cloud")
    p.add_argument("--radius", type=float, help="neighborhood radius")
    p.add_argument("--max-order", type=int, default=10)
    p.add_argument("--orders", type=_orders, default=[2, 3], help="comma-separated orders, e.g. 2,3")
    p.add_argument("--norm", choices=["l1", "l2"], default="l2")
    p.add_argument("--subsample", type=int, default=None, help="evaluate at N random points (default: all)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--output", default="directions.txt")
    p.add_argument("--ply-out", default=None, help="also write direction segments as PLY")
    p.add_argument("--scale", type=float, default=0.01, help="segment length factor")
    p.add_argument("--max-only", action="store_true", help="emit only maximum directions")
    p.add_argument("--robust", action="store_true", help="robust PCA frame")
    p.add_argument("--irls-iters", type=int, default=20)
    p.add_argument("--quiet", action="store_true")
    return p


def _add_synth(sub):
    p = sub.add_parser("synth", help="write a synthetic point cloud")
    gens = p.add_subparsers(dest="generator", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=10000, help="number of samples")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--noise-pct", type=float, default=0.0, help="noise std, %% of bounding diagonal")
    common.add_argument("--output", default="cloud.xyz", help="xyz or .ply path")
    for name in ("monkey", "octopus"):
        g = gens.add_parser(name, parents=[common])
        g.add_argument("--radius", type=float, default=1.0, help="disk radius")
    g = gens.add_parser("cube", parents=[common])
    g.add_argument("--edge-len", type=float, default=1.0)
    g.add_argument("--edge-points", type=int, default=None)
    g.add_argument("--random-faces", action="store_true", help="i.i.d. instead of stratified face samples")
    g = gens.add_parser("planes", parents=[common])
    g.add_argument("--n-planes", type=int, default=5)
    g.add_argument("--angles", default=None, help="comma-separated crease angles in degrees")
    g.add_argument("--slope", type=float, default=0.5)
    g.add_argument("--radius", type=float, default=1.0)
    g = gens.add_parser("tjunction", parents=[common])
    g.add_argument("--t", type=float, default=1.0, help="morph parameter in [0, 1]")
    g.add_argument("--width", type=float, default=0.15)
    g.add_argument("--height", type=float, default=0.2)
    g.add_argument("--radius", type=float, default=1.0)
    return p


def build_parser():
    parser = argparse.ArgumentParser(prog="wavedirs", description="Arbitrary-order principal directions on point sets.")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_dirs(sub)
    _add_synth(sub)
    p = sub.add_parser("selftest", help="run the built-in invariant checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rows", type=int, default=200, help="random rows per order")
    return parser


def _read_config(path, dirs_parser):
    dests = {a.dest: a for a in dirs_parser._actions if a.dest not in ("help", "config")}
    values = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InvalidArgumentError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            dest = key.lstrip("-").replace("-", "_")
            if dest not in dests:
                raise InvalidArgumentError(f"{path}:{lineno}: unknown key {key!r}")
            action = dests[dest]
            if isinstance(action, argparse._StoreTrueAction):
                values[dest] = value.lower() in ("1", "true", "yes", "on")
            elif action.type is not None:
                try:
                    values[dest] = action.type(value)
                except (ValueError, argparse.ArgumentTypeError) as err:
                    raise InvalidArgumentError(f"{path}:{lineno}: {err}") from None
            else:
                values[dest] = value
            if action.choices is not None and values[dest] not in action.choices:
                raise InvalidArgumentError(f"{path}:{lineno}: {key} must be one of {list(action.choices)}")
    return values


def _dirs_parser(parser):
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    return sub.choices["dirs"]


# ---------------------------------------------------------------- commands


def _run_dirs(args, err):
    if args.radius is None or args.input is None:
        raise InvalidArgumentError("dirs needs --input and --radius")
    config = FitConfig(
        radius=args.radius,
        max_order=args.max_order,
        norm=args.norm,
        irls_iters=args.irls_iters,
        robust_pca=args.robust,
    )
    if args.scale <= 0:
        raise InvalidArgumentError("scale must be positive")
    cloud = io.read_cloud(args.input)
    if len(cloud) == 0:
        raise InvalidArgumentError(f"{args.input} contains no points")
    indices = None
    if args.subsample is not None:
        if args.subsample < 1:
            raise InvalidArgumentError("subsample must be at least 1")
        if args.subsample < len(cloud):
            rng = np.random.default_rng(args.seed)
            indices = np.sort(rng.choice(len(cloud), args.subsample, replace=False))
    records, failures = compute_records(cloud, config, args.orders, indices, args.threads, args.max_only)
    io.write_directions(args.output, records, args.ply_out, args.scale)
    if not args.quiet:
        evaluated = len(cloud) if indices is None else len(indices)
        print(f"{len(records)} directions at {evaluated - len(failures)}/{evaluated} points -> {args.output}", file=err)
        if failures:
            first = next(iter(failures.items()))
            print(f"skipped {len(failures)} points (e.g. point {first[0]}: {first[1]})", file=err)
    return 0


def _run_synth(args, err):
    name = args.generator
    if name in ("monkey", "octopus"):
        surf = synthetic.GENERATORS[name](n=args.n, radius=args.radius, seed=args.seed)
    elif name == "cube":
        surf = synthetic.cube(n=args.n, edge_len=args.edge_len, seed=args.seed,
                              edge_points=args.edge_points, stratified=not args.random_faces)
    elif name == "planes":
        angles = None
        if args.angles is not None:
            angles = np.radians([float(a) for a in args.angles.split(",")])
        surf = synthetic.intersecting_planes(n=args.n, angles=angles, n_planes=args.n_planes,
                                             slope=args.slope, radius=args.radius, seed=args.seed)
    else:
        surf = synthetic.ridge_to_tjunction(args.t, n=args.n, radius=args.radius, width=args.width,
                                            height=args.height, seed=args.seed)
    cloud = synthetic.add_noise(surf.cloud, args.noise_pct, seed=args.seed + 1)
    io.write_cloud(args.output, cloud)
    print(f"{len(cloud)} points -> {args.output}", file=err)
    return 0


def _run_selftest(args, out):
    from .selftest import run_selftest

    return 0 if run_selftest(seed=args.seed, rows=args.rows, out=out) else 1


def run_pipeline(argv=None, out=None, err=None):
    """Parse ``argv`` and run the subcommand; returns the exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "dirs":
            if args.config:
                defaults = _read_config(args.config, _dirs_parser(parser))
                dirs = _dirs_parser(parser)
                dirs.set_defaults(**defaults)
                args = parser.parse_args(argv)
            return _run_dirs(args, err)
        if args.command == "synth":
            return _run_synth(args, err)
        return _run_selftest(args, out)
    except (WavedirsError, ValueError, OSError) as exc:
        if isinstance(exc, ParseError):
            kind = "parse error"
        elif isinstance(exc, ValueError):
            kind = "invalid argument"
        else:
            kind = "error"
        print(f"wavedirs: {kind}: {exc}", file=err)
        return 2


def main():
    sys.exit(run_pipeline())


if __name__ == "__main__":
    main()
