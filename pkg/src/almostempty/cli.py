"""almostempty command line.

Exit codes: 0 success, 1 usage or parse error, 2 input not in general
position, 3 precondition not met, 4 internal check failed.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .chromatic import class_sizes, discrepancy, mono_count
from .counting import profile
from .errors import (GeneralPositionError, InternalCheckError, ParseError, PreconditionError,
                     ResampleLimitError)
from .geometry import PointSet, convex_hull, validate_general_position
from .io import parse_coloring, read_point_file
from .montecarlo import GeneratorConfig, estimate_mono, estimate_Z
from .search import bound_report, exhaustive_min, local_min
from .witness import discrepancy_witness, theorem1_witness, theorem2_run

SEED_ENV = "ALMOSTEMPTY_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={raw!r} is not an integer") from None


def _emit(args, doc) -> str:
    if isinstance(doc, str):
        return doc
    if not args.reproducible:
        doc = dict(doc, timestamp=_dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"))
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _load(args, validate=True):
    return read_point_file(args.file, scale=args.scale, validate=validate and not args.allow_degenerate)


def _coloring(args, pf):
    n = len(pf.points)
    if getattr(args, "coloring", None):
        c = args.colors or pf.c
        if c is None:
            raise UsageError("--colors is required with --coloring")
        return parse_coloring(args.coloring, n, c)
    if pf.colors is None:
        raise UsageError("no colors in the file; pass --coloring")
    try:
        return pf.coloring(args.colors)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def cmd_validate(args) -> tuple:
    pf = _load(args, validate=False)
    P = pf.points
    bad = validate_general_position(P)
    hull = len(convex_hull(P)) if len(P) >= 3 and bad is None else None
    doc = {"n": len(P), "hull_size": hull, "valid": bad is None,
           "violation": None if bad is None else {"kind": bad.kind, "ids": list(bad.ids)}}
    if args.format == "json":
        out = _emit(args, doc)
    else:
        lines = [f"n={len(P)}"]
        if bad is None:
            lines += [f"hull={hull}" if hull is not None else "hull=-", "general position: ok"]
        else:
            lines.append(f"{bad.kind}: ids {' '.join(map(str, bad.ids))}")
        out = "\n".join(lines) + "\n"
    return out, 0 if bad is None else 2


def cmd_count(args) -> tuple:
    pf = _load(args)
    r = args.smax if args.smax is not None else len(pf.points) - 3
    return _emit(args, profile(pf.points, r).to_dict()), 0


def cmd_chroma(args) -> tuple:
    pf = _load(args)
    phi = _coloring(args, pf)
    d = discrepancy(phi)
    doc = {"n": len(pf.points), "c": phi.c, "s": args.s,
           "count": mono_count(pf.points, phi, args.s),
           "class_sizes": list(class_sizes(phi)),
           "scaled_discrepancy": d.value,
           "discrepancy": [d.delta.numerator, d.delta.denominator]}
    return _emit(args, doc), 0


def cmd_witness(args) -> tuple:
    pf = _load(args)
    phi = _coloring(args, pf)
    P = pf.points
    strict = not args.no_strict
    if args.mode == "star":
        rep = theorem1_witness(P, phi, strict=strict)
    elif args.mode == "discrepancy":
        ids = range(len(P)) if args.subset is None else [int(v) for v in args.subset.split(",")]
        rep = discrepancy_witness(P, ids, phi, strict=strict)
    else:
        K = None if args.K is None else Fraction(args.K)
        rep = theorem2_run(P, phi, K=K)
    doc = rep.to_dict()
    doc.update(mode=args.mode, n=len(P), c=phi.c)
    return _emit(args, doc), 0


def cmd_simulate(args) -> tuple:
    seed = args.seed if args.seed is not None else _default_seed()
    cfg = GeneratorConfig(n=args.n, grid_bits=args.grid_bits, seed=seed, trials=args.trials)
    if args.colors:
        rep = estimate_mono(cfg, args.colors, args.smax, workers=args.workers)
    else:
        rep = estimate_Z(cfg, args.smax, workers=args.workers)
    if args.format == "csv":
        return rep.to_csv(), 0
    return _emit(args, rep.to_dict()), 0


def cmd_search(args) -> tuple:
    pf = _load(args)
    seed = args.seed if args.seed is not None else _default_seed()
    if args.colors is None:
        raise UsageError("--colors is required")
    if args.report:
        doc = bound_report(pf.points, args.colors, args.s, seed=seed, budget=args.budget)
    elif args.mode == "exhaustive":
        doc = exhaustive_min(pf.points, args.colors, args.s).to_dict()
    else:
        doc = local_min(pf.points, args.colors, args.s, seed=seed, budget=args.budget).to_dict()
    return _emit(args, doc), 0


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--reproducible", action="store_true", help="omit the timestamp field")
    common.add_argument("--workers", type=int, default=1,
                        help="parallel worker processes (results do not depend on it)")
    common.add_argument("--format", choices=("json", "csv", "text"), default=None)

    pts = _Parser(add_help=False)
    pts.add_argument("file")
    pts.add_argument("--scale", type=str, default=None,
                     help="multiply real coordinates by this and round half-to-even")
    pts.add_argument("--allow-degenerate", action="store_true")

    colored = _Parser(add_help=False)
    colored.add_argument("--colors", type=int, default=None, help="number of colors c")
    colored.add_argument("--coloring", default=None, help="digit string, comma list, or @file")

    p = _Parser(prog="almostempty", description="Almost-empty monochromatic triangles in colored point sets.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("validate", parents=[common, pts], help="check general position")
    v.set_defaults(func=cmd_validate)

    c = sub.add_parser("count", parents=[common, pts], help="interior-count profile")
    c.add_argument("--smax", type=int, default=None)
    c.set_defaults(func=cmd_count)

    ch = sub.add_parser("chroma", parents=[common, pts, colored], help="monochromatic count")
    ch.add_argument("--s", type=int, default=0)
    ch.set_defaults(func=cmd_chroma)

    w = sub.add_parser("witness", parents=[common, pts, colored], help="certified witness triangles")
    w.add_argument("--mode", choices=("star", "discrepancy", "thm2"), default="star")
    w.add_argument("--subset", default=None, help="comma-separated ids (discrepancy mode)")
    w.add_argument("--no-strict", action="store_true", help="report even when preconditions fail")
    w.add_argument("--K", default=None, help="override the constant K (thm2 mode), e.g. 1/4")
    w.set_defaults(func=cmd_witness)

    s = sub.add_parser("simulate", parents=[common], help="random point set statistics")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--trials", type=int, default=10)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--smax", type=int, default=0)
    s.add_argument("--colors", type=int, default=None)
    s.add_argument("--grid-bits", type=int, default=31)
    s.set_defaults(func=cmd_simulate)

    se = sub.add_parser("search", parents=[common, pts], help="minimize over colorings")
    se.add_argument("--colors", type=int, default=None)
    se.add_argument("--s", type=int, default=0)
    se.add_argument("--mode", choices=("exhaustive", "local"), default="local")
    se.add_argument("--seed", type=int, default=None)
    se.add_argument("--budget", type=int, default=20000)
    se.add_argument("--report", action="store_true", help="full comparison with witness counts")
    se.set_defaults(func=cmd_search)
    return p


def run(argv=None) -> tuple:
    """Return (stdout text, stderr text, exit code)."""
    try:
        args = build_parser().parse_args(argv)
        if args.format is None:
            args.format = "text" if args.command == "validate" else "json"
        if args.format == "csv" and args.command != "simulate":
            raise UsageError("csv output is only available for simulate")
        if args.workers < 1:
            raise UsageError("--workers must be at least 1")
        out, code = args.func(args)
        return out, "", code
    except (UsageError, ParseError, OSError) as exc:
        return "", f"error: {exc}\n", 1
    except GeneralPositionError as exc:
        return "", f"error: {exc}\n", 2
    except (PreconditionError, ResampleLimitError) as exc:
        return "", f"error: {exc}\n", 3
    except (InternalCheckError, AssertionError) as exc:
        return "", f"internal check failed: {exc}\n", 4
    except ValueError as exc:
        return "", f"error: {exc}\n", 1


def main(argv=None) -> int:
    out, err, code = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
