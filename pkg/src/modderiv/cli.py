"""Command-line front end.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 internal
consistency error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from .config import AnalysisConfig, load_config_file
from .corpus import corpus_list, resolve_function
from .errors import (ConsistencyError, DivisionGuard, DomainError, EvalError, FormatError,
                     ParseError, RangeError)
from .limits import EpsilonLadder, LimitConfig
from .report import analyze, classify, dumps, envelope, oscillation_report, svc_report

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_CONSISTENCY = 0, 2, 3, 4


class ConfigError(Exception):
    """Bad flags, bad config files or unknown names."""


def _pair(text: str) -> tuple[float, float]:
    try:
        a, b = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a,b but got {text!r}") from None
    return a, b


def _add_function(p: argparse.ArgumentParser) -> None:
    p.add_argument("--fn", help="function spec, e.g. power:0.5, expr:x^2, svc-cdf:8")
    p.add_argument("--csv", help="CSV file of x,y samples")


def _add_ladder(p: argparse.ArgumentParser) -> None:
    p.add_argument("--eps0", type=float)
    p.add_argument("--ratio", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--floor", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--resolution", type=int)
    p.add_argument("--tol-conv", dest="tol_conv", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modderiv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="run the estimator suite at points or on a grid")
    _add_function(p)
    _add_ladder(p)
    p.add_argument("--point", type=float, action="append", dest="points")
    p.add_argument("--interval", type=_pair)
    p.add_argument("--grid", type=int)
    p.add_argument("--modulus")
    p.add_argument("--beta", type=float)
    p.add_argument("--workers", type=int)
    p.add_argument("--config", help="JSON file with the same keys; flags override it")
    p.add_argument("--out")

    p = sub.add_parser("classify", help="canonical modulus and Lipschitz/singular verdict")
    _add_function(p)
    _add_ladder(p)
    p.add_argument("--point", type=float, required=True)
    p.add_argument("--out")

    p = sub.add_parser("oscillation", help="oscillation profiles and discontinuities")
    _add_function(p)
    _add_ladder(p)
    p.add_argument("--point", type=float, action="append", dest="points")
    p.add_argument("--interval", type=_pair)
    p.add_argument("--grid", type=int)
    p.add_argument("--threshold", type=float, default=1e-3)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")

    p = sub.add_parser("svc", help="Smith-Volterra-Cantor generation and remaining length")
    p.add_argument("n", type=int)
    p.add_argument("--emit-plot", dest="emit_plot", metavar="PATH")
    p.add_argument("--out")

    sub.add_parser("corpus-list", help="list the named functions")
    return parser


_CONFIG_KEYS = ("fn", "csv", "points", "interval", "grid", "modulus", "beta", "eps0", "ratio",
                "steps", "floor", "tol_conv", "seed", "resolution", "workers")


def _analysis_config(args: argparse.Namespace) -> AnalysisConfig:
    data: dict[str, Any] = {}
    if getattr(args, "config", None):
        try:
            data = load_config_file(args.config)
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from None
    for key in _CONFIG_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            data[key] = v
    if args.fn is not None:
        data.pop("csv", None)
    if args.csv is not None:
        data.pop("fn", None)
    return AnalysisConfig.from_mapping(data)


def _ladder(args: argparse.Namespace) -> EpsilonLadder:
    d = EpsilonLadder()
    return EpsilonLadder(args.eps0 or d.eps0, args.ratio or d.ratio, args.steps or d.steps,
                         args.floor or d.floor)


def _function(args: argparse.Namespace):
    if (args.fn is None) == (args.csv is None):
        raise ConfigError("give exactly one of --fn and --csv")
    return resolve_function(args.fn if args.fn is not None else f"csv:{args.csv}")


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def run(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "corpus-list":
        for name, desc in corpus_list():
            print(f"{name:12s} {desc}")
        return EXIT_OK
    if args.command == "svc":
        body = svc_report(args.n, args.emit_plot)
        _emit(dumps(envelope("svc", {"n": args.n, "emit_plot": args.emit_plot}, **body)),
              args.out)
        return EXIT_OK
    if args.command == "analyze":
        config = _analysis_config(args)
        _emit(dumps(analyze(config)), args.out)
        return EXIT_OK

    f = _function(args)
    ladder = _ladder(args)
    limit = LimitConfig(tol_conv=args.tol_conv) if args.tol_conv else LimitConfig()
    resolution = args.resolution or 1024
    cfg = {"fn": args.fn, "csv": args.csv, "ladder": ladder.as_dict(),
           "tol_conv": limit.tol_conv, "resolution": resolution, "seed": args.seed or 0}
    if args.command == "classify":
        body = classify(f, args.point, ladder, limit, resolution, args.seed or 0)
        _emit(dumps(envelope("classify", {**cfg, "point": args.point},
                             function=f.label, points=[body])), args.out)
        return EXIT_OK
    xs = sorted(set(args.points or []))
    if not xs and args.interval is None:
        raise ConfigError("give --point or --interval")
    if args.grid is not None and args.interval is None:
        raise ConfigError("--grid requires --interval")
    body = oscillation_report(f, xs, ladder, limit, resolution, args.interval, args.grid,
                              args.threshold, args.workers)
    cfg.update(points=xs, interval=list(args.interval) if args.interval else None,
               grid=args.grid, threshold=args.threshold)
    _emit(dumps(envelope("oscillation", cfg, function=f.label, **body)), args.out)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        return run(argv)
    except ConsistencyError as exc:
        print(f"consistency error: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except (FormatError, DomainError, EvalError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ConfigError, RangeError, ParseError, DivisionGuard, KeyError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
