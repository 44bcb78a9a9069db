"""Batch front-end: single evaluations, parameter sweeps, optimal-density
searches and Monte Carlo validation, all emitting CSV for external plotting.

Exit codes: 0 success, 1 validation failure, 2 input error.
"""

from __future__ import annotations

import argparse
import sys

from . import analytic, mc
from .config import (
    ConfigError,
    INT_KEYS,
    build_config,
    load_config,
    parse_config_file,
    parse_sweep_file,
)
from .quadrature import QuadratureError

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INPUT = 2

EVAL_COLUMNS = (
    "p_bu", "p_br", "p_ru", "lambda_prime",
    "tau_nc", "tau_c", "p_b_avg", "p_r_avg", "ee",
)


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def _eval_row(cfg) -> str:
    cov, ee = analytic.evaluate(cfg)
    values = (
        cov.p_bu, cov.p_br, cov.p_ru, cov.lambda_prime,
        ee.tau_nc, ee.tau_c, ee.p_b_avg, ee.p_r_avg, ee.ee,
    )
    return ",".join(_fmt(v) for v in values)


def _emit(lines: list[str], out_path: str | None) -> None:
    text = "\n".join(lines) + "\n"
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_eval(config_path: str) -> int:
    """One scenario, one CSV row (with header) on stdout."""
    cfg = load_config(config_path)
    _emit([",".join(EVAL_COLUMNS), _eval_row(cfg)], None)
    return EXIT_OK


def cmd_sweep(config_path: str, sweep_path: str, out_path: str | None = None) -> int:
    """One CSV row per (overlay, swept value), overlay-major order."""
    base = parse_config_file(config_path)
    spec = parse_sweep_file(sweep_path)
    overlays = spec.overlays or (("base", {}),)
    lines = ["overlay,value," + ",".join(EVAL_COLUMNS)]
    for name, overrides in overlays:
        for value in spec.values:
            mapping = dict(base)
            mapping.update(overrides)
            mapping[spec.variable] = value
            cfg = build_config(mapping)
            lines.append(f"{name},{_fmt(value)}," + _eval_row(cfg))
    _emit(lines, out_path)
    return EXIT_OK


def cmd_optimal(config_path: str, sweep_path: str) -> int:
    """Energy-efficiency argmax over a lambda_B grid, one row per overlay."""
    base = parse_config_file(config_path)
    spec = parse_sweep_file(sweep_path)
    if spec.variable != "lambda_B":
        raise ConfigError("cmd_optimal requires a sweep over 'lambda_B'")
    overlays = spec.overlays or (("base", {}),)
    lines = ["overlay,lambda_star,ee_star"]
    for name, overrides in overlays:
        mapping = dict(base)
        mapping.update(overrides)
        cfg = build_config(mapping)
        lam_star, ee_star = analytic.optimal_bs_density(cfg, spec.values)
        boundary = len(spec.values) > 1 and lam_star in (spec.values[0], spec.values[-1])
        if boundary:
            print(
                f"warning: overlay '{name}': lambda_star {_fmt(lam_star)} sits on the "
                "grid boundary; the true optimum may lie outside the grid",
                file=sys.stderr,
            )
        lines.append(f"{name},{_fmt(lam_star)},{_fmt(ee_star)}")
    _emit(lines, None)
    return EXIT_OK


def cmd_validate(config_path: str, trials: int, seed: int,
                 out_path: str | None = None) -> int:
    """Analytic-vs-simulation report; exit 1 if any link fails."""
    if trials < 10_000:
        raise ConfigError("--trials must be at least 10000")
    if seed < 0:
        raise ConfigError("--seed must be nonnegative")
    cfg = load_config(config_path)
    rows = mc.mc_validate(cfg, trials, seed)
    lines = ["link,analytic,mc_mean,half_width,abs_diff,pass"]
    for r in rows:
        lines.append(
            f"{r.link},{_fmt(r.analytic)},{_fmt(r.mc_mean)},{_fmt(r.half_width)},"
            f"{_fmt(r.abs_diff)},{'true' if r.passed else 'false'}"
        )
    _emit(lines, out_path)
    return EXIT_OK if all(r.passed for r in rows) else EXIT_VALIDATION


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mmrelay",
        description="Coverage and energy-efficiency engine for relay-assisted "
                    "mmWave cellular networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate one config, print a CSV row")
    p.add_argument("--config", required=True, metavar="PATH")

    p = sub.add_parser("sweep", help="sweep one config key over a value grid")
    p.add_argument("--config", required=True, metavar="PATH")
    p.add_argument("--sweep", required=True, metavar="PATH")
    p.add_argument("--out", metavar="PATH", default=None)

    p = sub.add_parser("optimal", help="find the EE-maximizing lambda_B on a grid")
    p.add_argument("--config", required=True, metavar="PATH")
    p.add_argument("--sweep", required=True, metavar="PATH")

    p = sub.add_parser("validate", help="cross-check analytic results by simulation")
    p.add_argument("--config", required=True, metavar="PATH")
    p.add_argument("--trials", type=int, default=100_000, metavar="N")
    p.add_argument("--seed", type=int, default=1, metavar="N")
    p.add_argument("--out", metavar="PATH", default=None)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "eval":
            return cmd_eval(args.config)
        if args.command == "sweep":
            return cmd_sweep(args.config, args.sweep, args.out)
        if args.command == "optimal":
            return cmd_optimal(args.config, args.sweep)
        if args.command == "validate":
            return cmd_validate(args.config, args.trials, args.seed, args.out)
        raise AssertionError(f"unhandled command {args.command!r}")
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (QuadratureError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
