"""Command-line front end.

Subcommands:

* ``tree`` - emit one level of a mediant tree
* ``enumerate`` - iterate one of the six interval maps from a start point
* ``qmark`` - evaluate the singular homeomorphisms, their inverses, or
  an exact enclosure from a continued-fraction prefix
* ``fourier`` - Fourier coefficients of the limit distribution, by tree
  averaging and by ergodic (orbit) averaging
* ``simulate`` - run the mediant random walks, optionally timing the
  first entry into an interval
* ``verify`` - run the internal invariant suite

Exit codes: 0 on success, 1 on a usage or domain error, 2 when the
verification suite reports a failure.

Output goes to stdout or ``--output PATH``; a relative PATH is placed
under ``$STERNBROCOT_OUTDIR`` when that variable is set.  CSV is the
default format; ``--format json`` wraps the same columns and rows in a
document with a metadata header.  The metadata records only what shaped
the rows (version, seed, semantic flags), never execution details such
as worker counts, so output bytes are reproducible across machines and
parallelism levels.

Generous size caps guard each command; ``--unsafe-cap`` lifts them for
runs that are expected to be large.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import os
import sys
from contextlib import contextmanager
from fractions import Fraction

from . import __version__, maps, stochastic, trees, verify
from .core import CapExceeded, DomainError, ExtRat, ONE, parse_cf
from .minkowski import (
    Dyadic,
    fourier_tree_mean,
    qmark,
    qmark_enclosure,
    qmark_inv,
    rho,
    rho_inv,
)
from .trees import TreeSpec

DEFAULT_SEED = 7
OUTDIR_ENV = "STERNBROCOT_OUTDIR"

# Caps applied under --unsafe-cap.  Streaming commands (tree, enumerate)
# stay exact at any size; the lifted bounds only keep argument typos from
# looking like hangs.
UNSAFE_LEVEL_CAP = 1 << 10
UNSAFE_ORBIT_CAP = 1 << 34
UNSAFE_WALKS_CAP = 10 ** 9
UNSAFE_HORIZON_CAP = 1 << 26


class UsageError(Exception):
    """Bad invocation: malformed value, conflicting flags, unknown name."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; that code is reserved
    # here for verification failures, so route errors through UsageError.
    def error(self, message):
        raise UsageError(message)


@contextmanager
def _lifted_caps(active: bool):
    if not active:
        yield
        return
    saved = (stochastic.WALKS_CAP, stochastic.HORIZON_CAP, maps.ORBIT_CAP)
    stochastic.WALKS_CAP = UNSAFE_WALKS_CAP
    stochastic.HORIZON_CAP = UNSAFE_HORIZON_CAP
    maps.ORBIT_CAP = UNSAFE_ORBIT_CAP
    try:
        yield
    finally:
        stochastic.WALKS_CAP, stochastic.HORIZON_CAP, maps.ORBIT_CAP = saved


# ---------------------------------------------------------------- parsing

def _rat(text: str) -> ExtRat:
    try:
        return ExtRat.from_string(text)
    except (ValueError, DomainError) as exc:
        raise UsageError(f"malformed fraction {text!r}: {exc}") from exc


def _dyadic(text: str) -> Dyadic:
    try:
        return Dyadic.from_string(text)
    except (ValueError, DomainError) as exc:
        raise UsageError(f"malformed dyadic {text!r}: {exc}") from exc


def _interval(text: str) -> tuple[ExtRat, ExtRat]:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"interval must be 'a/b,c/d', got {text!r}")
    return _rat(parts[0]), _rat(parts[1])


def _cf_prefix(text: str) -> list[int]:
    s = text.strip()
    try:
        if s.startswith("["):
            return parse_cf(s)
        return [int(t) for t in s.replace(";", ",").split(",")]
    except (ValueError, DomainError) as exc:
        raise UsageError(
            f"malformed continued-fraction prefix {text!r}"
        ) from exc


def _primed(it):
    """Force a lazy iterator's validation before any output is written."""
    sentinel = object()
    first = next(it, sentinel)
    if first is sentinel:
        return iter(())
    return itertools.chain([first], it)


# ---------------------------------------------------------------- output

def _open_out(args):
    if args.output is None:
        return sys.stdout, False
    path = args.output
    outdir = os.environ.get(OUTDIR_ENV)
    if outdir and not os.path.isabs(path):
        path = os.path.join(outdir, path)
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    return open(path, "w", encoding="utf-8", newline=""), True


def _emit(args, columns, rows, flags, extra=None) -> int:
    """Write one table as CSV rows or as a JSON document with metadata."""
    stream, close = _open_out(args)
    try:
        if args.format == "csv":
            w = csv.writer(stream, lineterminator="\n")
            w.writerow(columns)
            w.writerows(rows)
        else:
            doc = {
                "meta": {
                    "version": __version__,
                    "seed": args.seed,
                    "flags": flags,
                },
                "columns": list(columns),
                "rows": [list(r) for r in rows],
            }
            if extra:
                doc.update(extra)
            json.dump(doc, stream, indent=2)
            stream.write("\n")
    finally:
        if close:
            stream.close()
    return 0


# ------------------------------------------------------------- commands

def _cmd_tree(args) -> int:
    spec = TreeSpec(args.kind, permuted=args.permuted)
    cap = UNSAFE_LEVEL_CAP if args.unsafe_cap else trees.LEVEL_CAP
    k = args.depth
    rows = _primed(
        (k, i, v.num, v.den)
        for i, v in enumerate(trees.level(spec, k, cap=cap), start=1)
    )
    flags = {"kind": args.kind, "permuted": args.permuted, "depth": k}
    return _emit(args, ("level", "index", "num", "den"), rows, flags)


def _cmd_enumerate(args) -> int:
    start = _rat(args.start)
    try:  # reject starts outside the map's interval before any output
        maps.apply(args.map, start)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    cap = UNSAFE_ORBIT_CAP if args.unsafe_cap else maps.ORBIT_CAP
    rows = _primed(
        (i, v.num, v.den)
        for i, v in enumerate(maps.orbit_iter(args.map, start, args.count, cap=cap))
    )
    flags = {"map": args.map, "start": args.start, "count": args.count}
    return _emit(args, ("i", "num", "den"), rows, flags)


def _cmd_qmark(args) -> int:
    if args.enclosure:
        prefix = _cf_prefix(args.value)
        lo, hi = qmark_enclosure(prefix)
        flags = {"input": args.value, "mode": "enclosure"}
        row = (args.value, str(lo), str(hi), _dy_float(lo), _dy_float(hi))
        return _emit(
            args, ("input", "lo", "hi", "lo_decimal", "hi_decimal"), [row], flags
        )
    if args.inverse:
        d = _dyadic(args.value)
        x = rho_inv(d) if args.extended else qmark_inv(d)
        flags = {"input": args.value, "mode": "inverse", "extended": args.extended}
        row = (args.value, str(x), float(x))
    else:
        x = _rat(args.value)
        d = rho(x) if args.extended else qmark(x)
        flags = {"input": args.value, "mode": "value", "extended": args.extended}
        row = (args.value, str(d), _dy_float(d))
    return _emit(args, ("input", "value", "decimal"), [row], flags)


def _dy_float(d: Dyadic) -> float:
    return float(Fraction(d.num, 1 << d.exp))


def _cmd_fourier(args) -> int:
    if args.n_max < 1:
        raise UsageError("--n-max must be at least 1")
    start = _rat(args.start)
    rows = []
    for n in range(1, args.n_max + 1):
        if args.method in ("tree", "both"):
            z = fourier_tree_mean(n, args.depth)
            rows.append((n, z.real, z.imag, "tree", 1 << args.depth))
        if args.method in ("ergodic", "both"):
            with _lifted_caps(args.unsafe_cap):
                z = maps.ergodic_fourier(n, start, args.iters, map=args.map)
            rows.append((n, z.real, z.imag, "ergodic", args.iters))
    flags = {
        "n_max": args.n_max,
        "method": args.method,
        "depth": args.depth,
        "iters": args.iters,
        "map": args.map,
        "start": args.start,
    }
    return _emit(args, ("n", "re", "im", "method", "size"), rows, flags)


def _cmd_simulate(args) -> int:
    if args.workers < 1:
        raise UsageError("--workers must be at least 1")
    if args.chain == "rw":
        if args.start not in (None, "1", "1/1"):
            raise UsageError("the rw chain always starts at 1/1")
        kind, start = "MC0", ONE
    else:
        kind = args.chain.upper()
        start = _rat(args.start) if args.start is not None else ONE
    interval = _interval(args.interval) if args.interval else None
    with _lifted_caps(args.unsafe_cap):
        table = stochastic.walk_table(
            kind,
            start,
            args.walks,
            args.horizon,
            args.seed,
            interval=interval,
            workers=args.workers,
        )
    rows = [(w, hit, num, den) for w, (hit, num, den) in enumerate(table)]
    flags = {
        "chain": args.chain,
        "start": str(start),
        "walks": args.walks,
        "horizon": args.horizon,
        "interval": args.interval,
    }
    extra = None
    if interval is not None and args.format == "json":
        counts = [0] * (args.horizon + 1)
        for hit, _, _ in table:
            if hit >= 0:
                counts[hit] += 1
        hit_total = 0
        curve = []
        for c in counts:
            hit_total += c
            curve.append(str(Fraction(hit_total, args.walks)))
        extra = {"fraction": curve[-1], "curve": curve}
    return _emit(
        args, ("walk", "hit_time", "final_num", "final_den"), rows, flags, extra
    )


def _cmd_verify(args) -> int:
    if args.workers < 1:
        raise UsageError("--workers must be at least 1")
    if args.list:
        stream, close = _open_out(args)
        try:
            for name in verify.names():
                stream.write(name + "\n")
        finally:
            if close:
                stream.close()
        return 0
    try:
        results = verify.run_suite(args.suite, seed=args.seed, workers=args.workers)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from exc
    rows = [(r.name, "ok" if r.ok else "FAIL", r.detail) for r in results]
    flags = {"suite": args.suite}
    _emit(args, ("name", "status", "detail"), rows, flags)
    return 0 if all(r.ok for r in results) else 2


# --------------------------------------------------------------- parser

def _build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument(
        "--format", choices=("csv", "json"), default="csv",
        help="output format (default csv)",
    )
    common.add_argument(
        "--output", metavar="PATH", default=None,
        help=f"write to PATH instead of stdout; relative paths land under ${OUTDIR_ENV} when set",
    )
    common.add_argument(
        "--seed", type=int, default=DEFAULT_SEED,
        help=f"random seed recorded in metadata and used by stochastic commands (default {DEFAULT_SEED})",
    )
    common.add_argument(
        "--unsafe-cap", action="store_true",
        help="lift the built-in size caps",
    )

    p = _Parser(prog="sternbrocot", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    t = sub.add_parser(
        "tree", parents=[common], help="emit one level of a mediant tree"
    )
    t.add_argument("--kind", choices=trees.KINDS, required=True,
                   help="which tree: sb, farey, or dyadic")
    t.add_argument("--permuted", action="store_true",
                   help="use the permuted descendant rule")
    t.add_argument("--depth", type=int, required=True, metavar="K",
                   help="level to emit (root is level 1)")
    t.set_defaults(func=_cmd_tree)

    e = sub.add_parser(
        "enumerate", parents=[common],
        help="iterate an interval map from a start point",
    )
    e.add_argument("--map", choices=maps.MAPS, required=True,
                   help="which map to iterate")
    e.add_argument("--start", required=True, metavar="p/q",
                   help="starting point (1/0 is the point at infinity)")
    e.add_argument("--count", type=int, required=True, metavar="N",
                   help="number of orbit entries, start included")
    e.set_defaults(func=_cmd_enumerate)

    q = sub.add_parser(
        "qmark", parents=[common],
        help="evaluate the singular homeomorphisms exactly",
    )
    q.add_argument("value", help="rational p/q, dyadic k/2^s with --inverse, "
                                 "or a continued-fraction prefix with --enclosure")
    mode = q.add_mutually_exclusive_group()
    mode.add_argument("--inverse", action="store_true",
                      help="map a dyadic back to its rational preimage")
    mode.add_argument("--enclosure", action="store_true",
                      help="exact bounds from a continued-fraction prefix, "
                           "e.g. '[0;2]' or '0,2'")
    q.add_argument("--extended", action="store_true",
                   help="use the two-sided extension on [0, infinity]")
    q.set_defaults(func=_cmd_qmark)

    f = sub.add_parser(
        "fourier", parents=[common],
        help="Fourier coefficients of the limit distribution",
    )
    f.add_argument("--n-max", type=int, default=8, metavar="N",
                   help="compute coefficients 1..N (default 8)")
    f.add_argument("--method", choices=("tree", "ergodic", "both"),
                   default="both", help="estimator(s) to run (default both)")
    f.add_argument("--depth", type=int, default=18, metavar="K",
                   help="tree levels averaged by the tree method (default 18)")
    f.add_argument("--iters", type=int, default=1 << 18, metavar="N",
                   help="orbit length for the ergodic method (default 2^18)")
    f.add_argument("--map", choices=maps.MAPS, default="R",
                   help="map iterated by the ergodic method (default R)")
    f.add_argument("--start", default="1/1", metavar="p/q",
                   help="orbit start for the ergodic method (default 1/1)")
    f.set_defaults(func=_cmd_fourier)

    s = sub.add_parser(
        "simulate", parents=[common], help="run the mediant random walks"
    )
    s.add_argument("--chain", choices=("mc0", "mc1", "rw"), required=True,
                   help="mc0: fair coin; mc1: denominator-weighted; "
                        "rw: mc0 pinned to start 1/1")
    s.add_argument("--start", default=None, metavar="p/q",
                   help="starting state (default 1/1)")
    s.add_argument("--walks", type=int, default=1000, metavar="W",
                   help="number of independent walks (default 1000)")
    s.add_argument("--horizon", type=int, default=100, metavar="H",
                   help="steps per walk (default 100)")
    s.add_argument("--interval", default=None, metavar="a/b,c/d",
                   help="record first entry into this open interval")
    s.add_argument("--workers", type=int, default=1,
                   help="worker threads; results do not depend on this")
    s.set_defaults(func=_cmd_simulate)

    v = sub.add_parser(
        "verify", parents=[common], help="run the internal invariant suite"
    )
    v.add_argument("--suite", default="all",
                   help="'all', or a comma list of check names or module "
                        "prefixes (default all)")
    v.add_argument("--list", action="store_true",
                   help="list check names and exit")
    v.add_argument("--workers", type=int, default=1,
                   help="worker threads; results do not depend on this")
    v.set_defaults(func=_cmd_verify)

    return p


def run(argv=None) -> int:
    """Parse argv and dispatch; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"sternbrocot: error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version paths
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"sternbrocot: error: {exc}", file=sys.stderr)
        return 1
    except (DomainError, CapExceeded) as exc:
        print(f"sternbrocot: error: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        # the reader went away (e.g. head); silence the shutdown flush too
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
    except OSError as exc:
        print(f"sternbrocot: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
