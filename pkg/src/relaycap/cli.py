"""Command-line front end.

Subcommands reproduce the sweep data behind the reference figures (fig4,
fig6, fig7), run arbitrary sweeps, and solve or classify discrete models
loaded from JSON files. Exit codes: 0 success, 2 validation/usage error,
3 solver error, 4 I/O error. Re-running a command with the same flags and
seed produces byte-identical output files.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .errors import DomainError, SolverError, UsageError, ValidationError
from .models import (
    BinaryMrcd,
    GaussianMrcd,
    ParallelBinaryMrcd,
    as_discrete,
    load_model,
)
from .rates import RateCurve, sweep
from .solver import (
    SolveConfig,
    classify_cutset_tightness,
    report_to_dict,
    solve_capacity,
)

__all__ = [
    "main",
    "build_parser",
    "run_fig4",
    "run_fig6",
    "run_fig7",
    "run_solve",
    "run_classify",
]

DEFAULT_STEPS = 201


def _parse_grid(spec: str) -> np.ndarray:
    try:
        start_s, stop_s, steps_s = spec.split(":")
        start, stop, steps = float(start_s), float(stop_s), int(steps_s)
    except ValueError:
        raise UsageError(f"--grid expects start:stop:steps, got {spec!r}") from None
    if steps < 2:
        raise UsageError(f"--grid needs at least 2 steps, got {steps}")
    if not stop > start:
        raise UsageError(f"--grid needs stop > start, got {spec!r}")
    return np.linspace(start, stop, steps)


def _write_curve(curve: RateCurve, out_path: str, fmt: str) -> None:
    if fmt == "csv":
        curve.to_csv(out_path)
    elif fmt == "json":
        curve.to_json(out_path)
    else:
        raise UsageError(f"unknown format {fmt!r}")


def run_fig4(
    out_path: str,
    fmt: str = "csv",
    grid: np.ndarray | None = None,
    r1: float = 1.2,
    p_z: float = 0.15,
) -> RateCurve:
    """Parallel binary sweep over the noise parameter (cutset/df/cf/pdcf)."""
    if grid is None:
        grid = np.linspace(0.0, 0.5, DEFAULT_STEPS)
    curve = sweep(ParallelBinaryMrcd(delta=0.0, p_z=p_z, r1=r1), "delta", grid)
    _write_curve(curve, out_path, fmt)
    return curve


def run_fig6(
    out_path: str,
    fmt: str = "csv",
    grid: np.ndarray | None = None,
    r1: float = 1.0,
    power: float = 0.3,
) -> RateCurve:
    """Gaussian sweep over the state correlation (cutset/df/cf/pdcf)."""
    if grid is None:
        grid = np.linspace(0.0, 1.0, DEFAULT_STEPS)
    curve = sweep(GaussianMrcd(power=power, rho=0.0, r1=r1), "rho", grid)
    _write_curve(curve, out_path, fmt)
    return curve


def run_fig7(
    out_path: str,
    fmt: str = "csv",
    grid: np.ndarray | None = None,
    r1: float = 0.25,
    p_z: float = 0.5,
) -> RateCurve:
    """Binary sweep over the noise parameter; includes capacity at p_z = 0.5."""
    if grid is None:
        grid = np.linspace(0.0, 0.5, DEFAULT_STEPS)
    curve = sweep(BinaryMrcd(delta=0.0, p_z=p_z, r1=r1), "delta", grid)
    _write_curve(curve, out_path, fmt)
    return curve


def _cmd_fig(args: argparse.Namespace) -> int:
    grid = _parse_grid(args.grid) if args.grid else None
    if args.command == "fig4":
        run_fig4(args.out, args.format, grid, r1=args.r1, p_z=args.pz)
    elif args.command == "fig6":
        run_fig6(args.out, args.format, grid, r1=args.r1, power=args.power)
    else:
        run_fig7(args.out, args.format, grid, r1=args.r1, p_z=args.pz)
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    curve = sweep(model, args.param, _parse_grid(args.grid))
    _write_curve(curve, args.out, args.format)
    return 0


def run_solve(model_path: str, out_path: str, cfg: SolveConfig | None = None) -> dict:
    """Solve the capacity expression for a model file; write the JSON report."""
    model = as_discrete(load_model(model_path))
    report = solve_capacity(model, cfg)
    payload = report_to_dict(report)
    with open(out_path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return payload


def run_classify(model_path: str, out_path: str) -> dict:
    """Classify cut-set tightness for a model file; write the JSON case list."""
    model = as_discrete(load_model(model_path))
    payload = {"cases": sorted(classify_cutset_tightness(model))}
    with open(out_path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return payload


def _solve_config(args: argparse.Namespace) -> SolveConfig:
    kwargs = {}
    for name in ("restarts", "seed", "max_iters", "card_u", "card_yhat"):
        value = getattr(args, name)
        if value is not None:
            kwargs[name] = value
    return SolveConfig(**kwargs)


def _cmd_solve(args: argparse.Namespace) -> int:
    run_solve(args.model, args.out, _solve_config(args))
    return 0


def _cmd_classify(args: argparse.Namespace) -> int:
    run_classify(args.model, args.out)
    return 0


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", required=True, help="output file path")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--grid", default=None, help="override grid as start:stop:steps")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relaycap",
        description=(
            "Rates, bounds, and capacity solves for state-dependent orthogonal "
            "relay channels with destination side information."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fig4 = sub.add_parser("fig4", help="parallel binary sweep over the noise parameter")
    _add_output_flags(fig4)
    fig4.add_argument("--r1", type=float, default=1.2)
    fig4.add_argument("--pz", type=float, default=0.15)
    fig4.set_defaults(func=_cmd_fig)

    fig6 = sub.add_parser("fig6", help="gaussian sweep over the state correlation")
    _add_output_flags(fig6)
    fig6.add_argument("--r1", type=float, default=1.0)
    fig6.add_argument("--power", type=float, default=0.3)
    fig6.set_defaults(func=_cmd_fig)

    fig7 = sub.add_parser("fig7", help="binary sweep over the noise parameter")
    _add_output_flags(fig7)
    fig7.add_argument("--r1", type=float, default=0.25)
    fig7.add_argument("--pz", type=float, default=0.5)
    fig7.set_defaults(func=_cmd_fig)

    sw = sub.add_parser("sweep", help="sweep one parameter of a model file")
    sw.add_argument("--model", required=True, help="model JSON path")
    sw.add_argument("--param", required=True, help="model field to sweep")
    sw.add_argument("--out", required=True)
    sw.add_argument("--format", choices=("csv", "json"), default="csv")
    sw.add_argument("--grid", required=True, help="grid as start:stop:steps")
    sw.set_defaults(func=_cmd_sweep)

    sol = sub.add_parser("solve", help="solve the capacity expression for a model file")
    sol.add_argument("--model", required=True, help="model JSON path")
    sol.add_argument("--out", required=True)
    sol.add_argument("--restarts", type=int, default=None)
    sol.add_argument("--seed", type=int, default=None)
    sol.add_argument("--max-iters", dest="max_iters", type=int, default=None)
    sol.add_argument("--card-u", dest="card_u", type=int, default=None)
    sol.add_argument("--card-yhat", dest="card_yhat", type=int, default=None)
    sol.set_defaults(func=_cmd_solve)

    cls = sub.add_parser("classify", help="report cut-set tightness cases for a model file")
    cls.add_argument("--model", required=True, help="model JSON path")
    cls.add_argument("--out", required=True)
    cls.set_defaults(func=_cmd_classify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, DomainError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
