"""Command-line entry point: ``dsmzi {report,sweep,optimize,wigner,validate}``.

Exit codes: 0 success, 1 computation-level failure (divergence under
``--strict``, fully diverged optimization, failed validation), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
import time

import numpy as np

from . import __version__
from . import gaussian as gs
from .config import (InterferometerConfig, InvalidParameterError, NumericalDegeneracyError,
                     OptimizationError, TruncationError)
from .figures import PRESETS, Table, format_value, sweep_table, to_csv
from .optimize import SweepSpec, optimal_phase, optimal_r2
from .sensitivity import phase_sensitivity_noisy

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _clean(value):
    """JSON-safe copy: floats rounded to 12 significant digits, inf/nan -> null."""
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return float("%.12g" % value) if math.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    return value


def to_json(obj) -> str:
    return json.dumps(_clean(obj), allow_nan=False)


def atomic_write(path, text):
    """Write ``text`` to a temporary file beside ``path`` and rename it into place."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def manifest(command, params, started, divergences=0, **extra):
    data = {"command": command, "parameters": params, "version": __version__,
            "duration_s": time.perf_counter() - started, "divergences": int(divergences)}
    data.update(extra)
    return data


def _emit(args, text, meta):
    """CSV/JSON body to ``--out`` (plus sidecar manifest) or to standard output."""
    if args.out:
        atomic_write(args.out, text)
        atomic_write(args.out + ".manifest.json", to_json(meta) + "\n")
        if args.json:
            print(to_json(meta))
    elif args.json:
        print(to_json(meta))
    else:
        sys.stdout.write(text)


def _config(args, phi=None):
    r2 = args.r1 if args.r2 is None else args.r2
    return InterferometerConfig(args.alpha, args.r1, r2, args.phi if phi is None else phi, args.eta)


def cmd_report(args):
    started = time.perf_counter()
    cfg = _config(args)
    rep = phase_sensitivity_noisy(cfg)
    body = rep.as_dict()
    text = to_json(body) + "\n"
    if args.out:
        atomic_write(args.out, text)
        atomic_write(args.out + ".manifest.json",
                     to_json(manifest("report", cfg.as_dict(), started, int(rep.diverged))) + "\n")
    sys.stdout.write(text)
    return EXIT_FAIL if args.strict and rep.diverged else EXIT_OK


def _explicit_spec(args):
    if args.var is None or args.lo is None or args.hi is None or args.points is None:
        raise UsageError("sweep needs --preset or all of --var, --lo, --hi, --points")
    template = InterferometerConfig(args.alpha, args.r1, args.r1 if args.r2 is None else args.r2,
                                    args.phi, args.eta)
    optimize = frozenset(s for s in (args.optimize or "").split(",") if s)
    return SweepSpec(args.var, args.lo, args.hi, args.points, template, optimize, args.balanced)


def cmd_sweep(args):
    started = time.perf_counter()
    if args.preset:
        table: Table = PRESETS[args.preset](args.threads)
        params = {"preset": args.preset}
    else:
        spec = _explicit_spec(args)
        table = sweep_table(spec, args.threads)
        params = {"variable": spec.variable, "lo": spec.lo, "hi": spec.hi, "points": spec.points,
                  "fixed": spec.fixed.as_dict(), "optimize_over": sorted(spec.optimize_over),
                  "balanced": spec.balanced}
    meta = manifest("sweep", params, started, table.divergences, columns=table.header,
                    rows=len(table.rows))
    _emit(args, to_csv(table), meta)
    return EXIT_FAIL if args.strict and table.divergences else EXIT_OK


def cmd_optimize(args):
    started = time.perf_counter()
    try:
        if args.joint:
            r2_opt, phi_opt, rep = optimal_r2(args.alpha, args.r1, args.eta)
            body = {"phi_opt": phi_opt, "r2_opt": r2_opt, "report": rep.as_dict()}
        else:
            phi_opt, rep = optimal_phase(args.alpha, args.r1, args.r1, args.eta)
            body = {"phi_opt": phi_opt, "report": rep.as_dict()}
    except OptimizationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    text = to_json(body) + "\n"
    if args.out:
        params = {"alpha": args.alpha, "r1": args.r1, "eta": args.eta, "joint": args.joint}
        atomic_write(args.out, text)
        atomic_write(args.out + ".manifest.json",
                     to_json(manifest("optimize", params, started, int(rep.diverged))) + "\n")
    sys.stdout.write(text)
    return EXIT_FAIL if args.strict and rep.diverged else EXIT_OK


def cmd_wigner(args):
    started = time.perf_counter()
    if not (args.xmin < args.xmax and args.pmin < args.pmax and args.res >= 2):
        raise UsageError("wigner grid needs xmin < xmax, pmin < pmax and --res >= 2")
    cfg = _config(args)
    state = gs.ds_mzi_output(cfg)
    marginals = {m: gs.mode_marginal(state, m) for m in "ab"}
    xs = np.linspace(args.xmin, args.xmax, args.res)
    ps = np.linspace(args.pmin, args.pmax, args.res)
    X, P = np.meshgrid(xs, ps, indexing="ij")
    W = gs.wigner_value(marginals[args.mode], X, P)
    lines = ["x,p,W"] + [f"{format_value(x)},{format_value(p)},{format_value(w)}"
                         for x, p, w in zip(X.ravel(), P.ravel(), W.ravel())]
    params = dict(cfg.as_dict(), mode=args.mode, xmin=args.xmin, xmax=args.xmax,
                  pmin=args.pmin, pmax=args.pmax, res=args.res)
    meta = manifest("wigner", params, started, 0,
                    I_a=gs.mode_intensity(marginals["a"]), I_b=gs.mode_intensity(marginals["b"]))
    _emit(args, "\n".join(lines) + "\n", meta)
    return EXIT_OK


def cmd_validate(args):
    from .validate import acceptance_checks, format_table, quick_checks

    results = acceptance_checks() if args.full else quick_checks()
    if args.json:
        print(to_json([{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results]))
    else:
        print(format_table(results))
    failed = [r.name for r in results if not r.passed]
    if failed:
        print("failed: " + "; ".join(failed), file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the result here (a .manifest.json sidecar is added)")
    common.add_argument("--json", action="store_true", help="machine-readable summary on stdout")
    common.add_argument("--strict", action="store_true", help="exit 1 on any divergence")
    common.add_argument("--threads", type=_positive_int, default=1,
                        help="worker processes for sweeps")

    parser = argparse.ArgumentParser(prog="dsmzi", parents=[common],
                                     description="Dual-squeezing interferometer phase sensitivity")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def physical(p, required=True, defaults=None):
        defaults = defaults or {}
        p.add_argument("--alpha", type=float, required=required, default=defaults.get("alpha"))
        p.add_argument("--r1", type=float, required=required, default=defaults.get("r1"))
        p.add_argument("--r2", type=float, default=None, help="defaults to r1")
        p.add_argument("--phi", type=float, required=required, default=defaults.get("phi"))
        p.add_argument("--eta", type=float, default=1.0)

    p = sub.add_parser("report", parents=[common], help="sensitivity at one configuration")
    physical(p)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("sweep", parents=[common], help="tabulate a curve as CSV")
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--var", choices=["r", "r2", "phi", "alpha"])
    p.add_argument("--lo", type=float)
    p.add_argument("--hi", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--optimize", help="comma-separated subset of phi,r2")
    p.add_argument("--balanced", action="store_true", help="sweeping r sets r1 = r2")
    physical(p, required=False, defaults={"alpha": math.sqrt(10), "r1": 0.0, "phi": math.pi / 2})
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("optimize", parents=[common], help="optimal working point")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--r1", type=float, required=True)
    p.add_argument("--eta", type=float, default=1.0)
    p.add_argument("--joint", action="store_true", help="optimize r2 together with phi")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("wigner", parents=[common], help="output-mode Wigner function on a grid")
    physical(p)
    p.add_argument("--mode", choices=["a", "b"], default="a")
    p.add_argument("--xmin", type=float, default=-6.0)
    p.add_argument("--xmax", type=float, default=6.0)
    p.add_argument("--pmin", type=float, default=-6.0)
    p.add_argument("--pmax", type=float, default=6.0)
    p.add_argument("--res", type=int, default=101)
    p.set_defaults(func=cmd_wigner)

    p = sub.add_parser("validate", parents=[common], help="run the consistency checks")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--quick", action="store_true", help="small grids (default)")
    group.add_argument("--full", action="store_true", help="every acceptance criterion")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, InvalidParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OptimizationError, TruncationError, NumericalDegeneracyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
