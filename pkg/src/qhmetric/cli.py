"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a violation is found, 2 for
usage, document or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import suites
from .distortion import qh_constant_estimate, semisolidity_profile, theorem3_constants, uniformity_constant
from .errors import CertificationError, DocumentError, QHError
from .geodesics import chain_points, extract_neargeodesic
from .geometry import domain_from_dict
from .maps import map_from_dict
from .metrics import SolverConfig, j_distance, qh_distance
from .report import emit_report, task_seed

VERIFY_TASKS = ("lemma34", "eq11", "theorem2", "theorem3", "example1", "example2")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _point(text):
    try:
        x, y = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'x,y', got {text!r}")
    return np.array([x, y])


def _box(text):
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError:
        vals = ()
    if len(vals) != 4:
        raise argparse.ArgumentTypeError(f"expected 'xmin,ymin,xmax,ymax', got {text!r}")
    return vals


def _load_document(arg, what):
    """Read a JSON document from a path, or inline when the argument starts with '{'."""
    if arg is None:
        raise UsageError(f"--{what} is required")
    try:
        if arg.lstrip().startswith("{"):
            return json.loads(arg)
        with open(arg) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {what} document {arg!r}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{what} document is not valid JSON: {exc}", field=None)


def _domain(args):
    return domain_from_dict(_load_document(args.domain, "domain"))


def _map(args):
    return map_from_dict(_load_document(args.map, "map"))


def _cfg(args):
    cfg = SolverConfig()
    if args.tol is not None:
        cfg = cfg.replace(relative_tolerance=args.tol)
    return cfg


def _require(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise UsageError(f"--{n.rstrip('_')} is required")


def _samples(args, default):
    return default if args.samples is None else args.samples


def _emit(args, rows, columns, summary=None):
    emit_report(rows, args.format, args.out, columns=columns, summary=summary)


# ---------------------------------------------------------------------------
# subcommands


def cmd_jdist(args):
    _require(args, "from_", "to")
    d = _domain(args)
    j = j_distance(d, args.from_, args.to)
    _emit(args, [{"x": args.from_, "y": args.to, "j": j}], ("x", "y", "j"))
    return 0


def cmd_kdist(args):
    _require(args, "from_", "to")
    d = _domain(args)
    r = qh_distance(d, args.from_, args.to, _cfg(args), box=args.box)
    row = {"x": args.from_, "y": args.to, "lower": r.lower, "upper": r.upper,
           "refinement_level": r.refinement_level, "exact": r.exact}
    _emit(args, [row], tuple(row), summary={"path": r.path.to_list()})
    return 0


def cmd_geodesic(args):
    _require(args, "from_", "to")
    d = _domain(args)
    path = extract_neargeodesic(d, args.from_, args.to, args.c, _cfg(args))
    rows = [{"index": i, "x": v[0], "y": v[1]} for i, v in enumerate(path.vertices)]
    _emit(args, rows, ("index", "x", "y"))
    return 0


def cmd_chain(args):
    _require(args, "from_", "to")
    d = _domain(args)
    if args.a is not None:
        a = args.a
    else:
        a = theorem3_constants(args.M if args.M is not None else 1.0)[0]
    if d.visible_many(args.from_[None], args.to[None])[0]:
        path = np.stack([args.from_, args.to])
    else:
        path = qh_distance(d, args.from_, args.to, _cfg(args)).path
    ch = chain_points(d, path, a)
    dist = d.distance(ch.points)
    rows = [{"index": i, "x": z[0], "y": z[1], "boundary_distance": dz} for i, (z, dz) in enumerate(zip(ch.points, dist))]
    _emit(args, rows, ("index", "x", "y", "boundary_distance"),
          summary={"a": a, "p": ch.p, "steps": ch.steps, "terminal_covered": ch.terminal_covered})
    return 0


def cmd_uniformity(args):
    d = _domain(args)
    u = uniformity_constant(d, _samples(args, 200), task_seed(args.seed, "uniformity"), _cfg(args), box=args.box)
    _emit(args, [u.to_dict()], ("constant", "x", "y", "k_upper", "j", "pairs"))
    return 0


def cmd_distortion(args):
    d, f = _domain(args), _map(args)
    seed = task_seed(args.seed, "distortion")
    n = _samples(args, 100)
    rep = semisolidity_profile(f, d, n, seed, _cfg(args), box=args.box)
    est = qh_constant_estimate(f, d, n, seed, _cfg(args), box=args.box)
    rows = [r.row() for r in rep.records]
    summary = {**rep.summary(), "qh_constant": est.value, "qh_constant_consistent_min": est.consistent_min,
               "qh_constant_consistent_max": est.consistent_max}
    _emit(args, rows, tuple(rows[0]) if rows else (), summary=summary)
    return 0


def _run_suite(task, args):
    if task == "eq11":
        return suites.eq11_suite(_samples(args, 200), args.seed, _cfg(args))
    if task == "lemma34":
        return suites.lemma34_suite(_samples(args, 100), args.seed, _cfg(args))
    if task == "theorem2":
        return suites.theorem2_suite()
    if task == "theorem3":
        return suites.theorem3_suite()
    if task == "example1":
        return suites.example1_suite(_cfg(args))
    if task == "example2":
        M = args.M if args.M is not None else 2.0
        r = args.r if args.r is not None else 0.1
        return suites.example2_suite(M, r, args.mmax)
    raise UsageError(f"unknown verify task {task!r}")


def cmd_verify(args):
    tasks = VERIFY_TASKS if args.task == "all" else (args.task,)
    results = [_run_suite(t, args) for t in tasks]
    if len(results) == 1:
        res = results[0]
        _emit(args, res.rows, res.columns, summary={"passed": res.passed, **res.summary})
    else:
        rows = [{"suite": r.name, "passed": r.passed} for r in results]
        _emit(args, rows, ("suite", "passed"))
    for r in results:
        print(f"{r.name}: {'PASS' if r.passed else 'FAIL'}", file=sys.stderr)
    return 0 if all(r.passed for r in results) else 1


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--domain")
    common.add_argument("--map")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int)
    common.add_argument("--tol", type=float)
    common.add_argument("--out")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--from", dest="from_", type=_point)
    common.add_argument("--to", type=_point)
    common.add_argument("--box", type=_box)
    common.add_argument("--M", type=float)
    common.add_argument("--r", type=float)
    common.add_argument("--mmax", type=int, default=20)

    parser = _Parser(prog="qhmetric", description="Distance-ratio and quasihyperbolic metric toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("jdist", parents=[common], help="distance ratio metric").set_defaults(fn=cmd_jdist)
    sub.add_parser("kdist", parents=[common], help="quasihyperbolic bracket").set_defaults(fn=cmd_kdist)
    g = sub.add_parser("geodesic", parents=[common], help="certified near-geodesic")
    g.add_argument("--c", type=float, default=1.1)
    g.set_defaults(fn=cmd_geodesic)
    c = sub.add_parser("chain", parents=[common], help="sphere chain along a path")
    c.add_argument("--a", type=float)
    c.set_defaults(fn=cmd_chain)
    sub.add_parser("uniformity", parents=[common], help="uniformity constant").set_defaults(fn=cmd_uniformity)
    sub.add_parser("distortion", parents=[common], help="distortion profile of a map").set_defaults(fn=cmd_distortion)
    v = sub.add_parser("verify", parents=[common], help="verification suites")
    v.add_argument("task", choices=VERIFY_TASKS + ("all",))
    v.set_defaults(fn=cmd_verify)
    return parser


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.samples is not None and args.samples < 0:
            raise UsageError("--samples must be nonnegative")
        if args.mmax < 1:
            raise UsageError("--mmax must be at least 1")
        return args.fn(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except DocumentError as exc:
        where = f" (field '{exc.field}')" if exc.field else ""
        print(f"document error{where}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"cannot write report: {exc}", file=sys.stderr)
        return 2
    except CertificationError as exc:
        print(f"not certified: {exc}", file=sys.stderr)
        return 1
    except QHError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
