"""Command-line front end: ``cha-bch {bracket,bch,verify,sweep,selftest}``.

Elements are JSON objects ``{"n": 1, "z": 0.0, "a": [1.0], "b": [0.0], "c": 0.0}``
given inline (``--x '{...}'``) or as a path to a file holding one. The
``b`` field is the coefficient of ``-X_p``: the generator ``X_p`` is
``{"z": 0, "a": [0], "b": [-1], "c": 0}``.

Exit codes: 0 ok, 2 parse/usage error, 3 dimension mismatch, 4 series does
not converge, 5 group-law verification failed, 6 selftest failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .algebra import ChaElement, commutator
from .bch import bch, bch_first_order, bch_heisenberg, f_coeff, g1_coeff, g2_coeff
from .errors import ConvergenceError, DimensionError, NumericError
from .kernels import ScalarKernelSet
from .oracle import OracleOptions, bch_series, verify_group_law
from .selftest import run_selftest

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DIMENSION = 3
EXIT_CONVERGENCE = 4
EXIT_VERIFY = 5
EXIT_SELFTEST = 6

DEFAULT_VERIFY_TOL = 1e-10
SWEEP_X = ChaElement(0.3, [1.0], [0.5], 0.0)
SWEEP_Y = ChaElement(-0.2, [0.4], [-1.1], 0.0)


@dataclass(frozen=True)
class ToleranceConfig:
    kernels: ScalarKernelSet = field(default_factory=ScalarKernelSet)
    oracle: OracleOptions = field(default_factory=OracleOptions)
    verify_tol: float = DEFAULT_VERIFY_TOL


@dataclass(frozen=True)
class CliConfig:
    tolerances: ToleranceConfig
    output: str = "json"
    seed: int = 0


class UsageError(Exception):
    pass


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        # JSON has no literal for these; they only show up in diagnostics
        return json.dumps(str(x))
    return "%.17g" % x


def dumps(obj, pretty=False, _level=0) -> str:
    """JSON with every float printed to 17 significant digits."""
    ind = "  " if pretty else ""
    nl = "\n" if pretty else ""
    pad = ind * (_level + 1)
    sep = ": " if pretty else ":"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [pad + json.dumps(str(k)) + sep + dumps(v, pretty, _level + 1)
                 for k, v in obj.items()]
        return "{" + nl + ("," + nl).join(items) + nl + ind * _level + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + dumps(v, pretty, _level + 1) for v in obj]
        return "[" + nl + ("," + nl).join(items) + nl + ind * _level + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def load_element(text: str) -> ChaElement:
    """Parse an element from inline JSON or from a file path."""
    src = text.strip()
    if not src.startswith("{"):
        path = Path(src)
        if not path.is_file():
            raise UsageError(f"{text!r} is neither inline JSON nor an existing file")
        src = path.read_text()
    try:
        data = json.loads(src)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON: {exc}") from None
    try:
        return ChaElement.from_dict(data)
    except DimensionError:
        raise
    except (ValueError, TypeError, NumericError) as exc:
        raise UsageError(f"invalid element: {exc}") from None


def _emit(cfg: CliConfig, obj):
    print(dumps(obj, pretty=cfg.output == "pretty"))


def cmd_bracket(args, cfg):
    X, Y = load_element(args.x), load_element(args.y)
    _emit(cfg, commutator(X, Y).to_dict())
    return EXIT_OK


def cmd_bch(args, cfg):
    X, Y = load_element(args.x), load_element(args.y)
    kernels = cfg.tolerances.kernels
    out = {"method": args.method}
    if args.method == "closed":
        Z = bch(X, Y, kernels)
    elif args.method == "heisenberg":
        Z = bch_heisenberg(X, Y)
    elif args.method == "first-order":
        Z = bch_first_order(X, Y)
    else:
        Z, diag = bch_series(X, Y, cfg.tolerances.oracle)
        out["diagnostics"] = diag.to_dict()
    out["result"] = Z.to_dict()
    _emit(cfg, out)
    return EXIT_OK


def cmd_verify(args, cfg):
    X, Y = load_element(args.x), load_element(args.y)
    Z = bch(X, Y, cfg.tolerances.kernels)
    tol = cfg.tolerances.verify_tol * max(1.0, X.norm(), Y.norm())
    ok, residual = verify_group_law(X, Y, Z, tol)
    _emit(cfg, {"ok": ok, "residual": residual, "tol": tol, "result": Z.to_dict()})
    return EXIT_OK if ok else EXIT_VERIFY


def _sweep_params(locus, p, fixed):
    if locus == "c":
        return p, fixed
    if locus == "cbar":
        return fixed, p
    if locus == "sum":
        return fixed, p - fixed
    return p, p


def cmd_sweep(args, cfg):
    lo, hi, steps = args.start, args.stop, args.steps
    if steps < 2 or not (math.isfinite(lo) and math.isfinite(hi)) or lo == hi:
        raise UsageError("sweep needs finite, distinct --from/--to and --steps >= 2")
    if args.log:
        if lo * hi <= 0:
            raise UsageError("--log needs endpoints of the same sign, both nonzero")
        grid = np.sign(lo) * np.geomspace(abs(lo), abs(hi), steps)
    else:
        grid = np.linspace(lo, hi, steps)
    X = load_element(args.x) if args.x else SWEEP_X
    Y = load_element(args.y) if args.y else SWEEP_Y
    kernels = cfg.tolerances.kernels
    rows = []
    for p in grid:
        c, cbar = _sweep_params(args.locus, float(p), args.fixed)
        Z = bch(X.replace(c=c), Y.replace(c=cbar), kernels)
        rows.append({
            "param": float(p),
            "params": {"c": c, "cbar": cbar},
            "f": f_coeff(c, cbar, kernels),
            "g1": g1_coeff(c, cbar, kernels),
            "g2": g2_coeff(c, cbar, kernels),
            "Z": Z.to_dict(),
        })
    _emit(cfg, rows)
    return EXIT_OK


def cmd_selftest(args, cfg):
    if args.cases < 1 or args.n < 1:
        raise UsageError("--cases and --n must be >= 1")
    report = run_selftest(args.n, args.cases, cfg.seed,
                          cfg.tolerances.kernels, cfg.tolerances.oracle)
    _emit(cfg, report)
    return EXIT_OK if report["ok"] else EXIT_SELFTEST


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help="verify: group-law tolerance, relative to max(1, |X|, |Y|) "
                             f"(default {DEFAULT_VERIFY_TOL:g}); bch --method series: "
                             "term tolerance of the series")
    common.add_argument("--output", choices=("json", "pretty"), default="json")
    common.add_argument("--switch-radius", type=float, default=None,
                        help="node spread below which kernels use their Taylor series")
    common.add_argument("--taylor-degree", type=int, default=None)
    common.add_argument("--max-terms", type=int, default=None, help="series cutoff")
    common.add_argument("--quad-nodes", type=int, default=None,
                        help="Gauss-Legendre order for the series oracle")

    parser = _Parser(prog="cha-bch", description=__doc__.splitlines()[0],
                     epilog="The b component of an element multiplies -X_p, not X_p.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def pair(p):
        p.add_argument("--x", required=True, help="first element: inline JSON or file path")
        p.add_argument("--y", required=True, help="second element: inline JSON or file path")

    p = sub.add_parser("bracket", parents=[common], help="commutator [X, Y]")
    pair(p)
    p.set_defaults(func=cmd_bracket)

    p = sub.add_parser("bch", parents=[common], help="BCH product log(e^X e^Y)")
    pair(p)
    p.add_argument("--method", choices=("closed", "series", "heisenberg", "first-order"),
                   default="closed")
    p.set_defaults(func=cmd_bch)

    p = sub.add_parser("verify", parents=[common],
                       help="check e^{ad Z} = e^{ad X} e^{ad Y} for Z = bch(X, Y)")
    pair(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", parents=[common],
                       help="tabulate f, g1, g2 and Z along a line in (c, cbar)")
    p.add_argument("--locus", choices=("c", "cbar", "sum", "diag"), required=True,
                   help="c: c varies, cbar fixed; cbar: the reverse; sum: c fixed, "
                        "c + cbar varies; diag: c = cbar varies")
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--fixed", type=float, default=0.5,
                   help="value of the non-swept parameter (default 0.5)")
    p.add_argument("--log", action="store_true", help="geometric spacing")
    p.add_argument("--x", default=None, help="template X (its c is overwritten)")
    p.add_argument("--y", default=None, help="template Y (its c is overwritten)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("selftest", parents=[common], help="randomized invariant suite")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--cases", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_selftest)
    return parser


def _config(args) -> CliConfig:
    kernel_kw = {}
    if args.switch_radius is not None:
        kernel_kw["switch_radius"] = args.switch_radius
    if args.taylor_degree is not None:
        kernel_kw["taylor_degree"] = args.taylor_degree
    oracle_kw = {}
    if args.max_terms is not None:
        oracle_kw["max_terms"] = args.max_terms
    if args.quad_nodes is not None:
        oracle_kw["quad_nodes"] = args.quad_nodes
    verify_tol = DEFAULT_VERIFY_TOL
    if args.tol is not None:
        if not args.tol >= 0:
            raise UsageError("--tol must be nonnegative")
        if args.command == "bch":
            oracle_kw["term_tol"] = args.tol
        else:
            verify_tol = args.tol
    try:
        tolerances = ToleranceConfig(ScalarKernelSet(**kernel_kw),
                                     OracleOptions(**oracle_kw), verify_tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return CliConfig(tolerances, args.output, getattr(args, "seed", 0))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"cha-bch: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DimensionError as exc:
        print(f"cha-bch: dimension mismatch: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except ConvergenceError as exc:
        print(f"cha-bch: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except NumericError as exc:
        print(f"cha-bch: numeric error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
