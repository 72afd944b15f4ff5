"""Command-line entry point.

Subcommands: kernel-eval, poisson, potential, cover, growth.
Exit codes: 0 success, 1 config error, 2 numeric/singularity error,
3 trend failure, 4 budget-assertion failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from .boundary import (AdmissibilityError, BoundaryData, ConvergenceError,
                       poisson_integral, poisson_integral_split)
from .config import ConfigError, ExperimentConfig
from .covering import exceptional_union
from .growth import (GrowthTarget, ObstructedRayError,
                     discretize_boundary_weight, growth_ratio_series,
                     sample_ray)
from .kernels import (SingularityError, fundamental_solution, green,
                      green_abs_bound, poisson_kernel)
from .measures import green_potential, weighted_measure
from .params import ParamError

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERIC = 2
EXIT_TREND = 3
EXIT_BUDGET = 4


def _fmt(v: float) -> str:
    return f"{v:.9g}"


def _parse_point(text):
    return np.array([float(v) for v in text.split(",")])


def cmd_kernel_eval(args) -> int:
    x = _parse_point(args.x)
    if len(x) != args.n:
        print(f"error: point dimension {len(x)} != n = {args.n}",
              file=sys.stderr)
        return EXIT_CONFIG
    rows = [("E(x)", fundamental_solution(x))]
    if args.yp is not None:
        yp = _parse_point(args.yp)
        rows.append(("P(x,y')", poisson_kernel(x, yp)))
    if args.y is not None:
        y = _parse_point(args.y)
        rows.append(("G(x,y)", green(x, y)))
        rows.append(("bound(2x_n y_n/w|x-y|^n)", green_abs_bound(x, y)))
    for name, val in rows:
        print(f"{name} = {_fmt(val)}")
    return EXIT_OK


def cmd_poisson(args) -> int:
    if args.kind == "compact-bump":
        f = BoundaryData.compact_bump(args.n, radius=args.radius,
                                      amplitude=args.amplitude)
    elif args.kind == "gaussian":
        f = BoundaryData.gaussian(args.n, amplitude=args.amplitude,
                                  width=args.width)
    elif args.kind == "radial-power":
        f = BoundaryData.radial_power(args.n, args.s)
    else:
        print(f"error: unknown kind {args.kind}", file=sys.stderr)
        return EXIT_CONFIG
    x = _parse_point(args.x)
    if args.split:
        parts = poisson_integral_split(f, x)
        for i, v in enumerate(parts, 1):
            print(f"v{i}(x) = {_fmt(v)}")
        print(f"v(x) = {_fmt(sum(parts))}")
    else:
        print(f"v(x) = {_fmt(poisson_integral(f, x))}")
    return EXIT_OK


def cmd_potential(args) -> int:
    from .measures import DiscreteMeasure

    mu = DiscreteMeasure.from_csv(args.measure)
    x = _parse_point(args.x)
    print(f"h(x) = {_fmt(green_potential(mu, x))}")
    return EXIT_OK


def _exceptional_source(cfg: ExperimentConfig):
    if cfg.measure is not None:
        return weighted_measure(cfg.measure, cfg.params)
    if cfg.boundary is not None:
        return discretize_boundary_weight(
            cfg.boundary, cfg.params,
            shells_per_octave=cfg.covering["shells_per_octave"])
    raise ConfigError("config needs a boundary or measure block")


def cmd_cover(args) -> int:
    cfg = ExperimentConfig.load(args.config)
    source = _exceptional_source(cfg)
    exc = exceptional_union(source, cfg.params,
                            cfg.covering["band_count"],
                            cfg.covering["sampler"])
    text = exc.to_json(indent=2)
    if cfg.output_dir and cfg.output_dir != ".":
        os.makedirs(cfg.output_dir, exist_ok=True)
        out = os.path.join(cfg.output_dir, "exceptional_set.json")
        with open(out, "w") as fh:
            fh.write(text + "\n")
        print(out)
    else:
        print(text)
    return EXIT_OK


def cmd_growth(args) -> int:
    cfg = ExperimentConfig.load(args.config)
    params = cfg.params
    f = cfg.boundary
    mu = cfg.measure
    source = _exceptional_source(cfg)
    exc = exceptional_union(source, params, cfg.covering["band_count"],
                            cfg.covering["sampler"])

    def evaluator(x):
        v = poisson_integral(f, x, cfg.quad) if f is not None else 0.0
        h = green_potential(mu, x) if mu is not None and mu.size else 0.0
        return v + h

    os.makedirs(cfg.output_dir, exist_ok=True)
    with open(os.path.join(cfg.output_dir, "exceptional_set.json"),
              "w") as fh:
        fh.write(exc.to_json(indent=2) + "\n")

    target = GrowthTarget(params)
    summary = {
        "params": params.to_dict(),
        "target": {
            "xn_exponent": target.xn_exponent,
            "abs_exponent": target.abs_exponent,
            "log_factor": target.log_factor,
        },
        "total_budget": exc.total_budget,
        "rays": [],
    }
    all_pass = True
    for i, direction in enumerate(cfg.rays["directions"]):
        samples = sample_ray(
            direction, cfg.rays["t_values"], exc,
            min_clear_fraction=cfg.rays["min_clear_fraction"],
            aperture_deg=cfg.rays["aperture_deg"],
        )
        series, trend, witnessed = growth_ratio_series(
            evaluator, params, samples,
            threshold=cfg.rays["trend_threshold"],
        )
        csv_path = os.path.join(cfg.output_dir, f"ray_{i:02d}.csv")
        series.write_csv(csv_path)
        all_pass = all_pass and witnessed
        summary["rays"].append({
            "index": i,
            "direction": [float(c) for c in direction],
            "trend": trend,
            "witnessed": witnessed,
            "csv": os.path.basename(csv_path),
        })
    summary["all_pass"] = all_pass
    with open(os.path.join(cfg.output_dir, "summary.json"), "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(json.dumps({"all_pass": all_pass,
                      "trends": [r["trend"] for r in summary["rays"]]},
                     sort_keys=True))
    return EXIT_OK if all_pass else EXIT_TREND


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hsgrowth",
        description="Half-space potential kernels, covers, and growth checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pk = sub.add_parser("kernel-eval", help="evaluate closed-form kernels")
    pk.add_argument("--n", type=int, required=True)
    pk.add_argument("--x", required=True, help="comma-separated point in H")
    pk.add_argument("--y", help="half-space point for G and its bound")
    pk.add_argument("--yp", help="boundary point for the Poisson kernel")
    pk.set_defaults(func=cmd_kernel_eval)

    pp = sub.add_parser("poisson", help="evaluate a Poisson integral")
    pp.add_argument("--n", type=int, default=3)
    pp.add_argument("--kind", default="compact-bump")
    pp.add_argument("--radius", type=float, default=1.0)
    pp.add_argument("--amplitude", type=float, default=1.0)
    pp.add_argument("--width", type=float, default=1.0)
    pp.add_argument("--s", type=float, default=0.0)
    pp.add_argument("--x", required=True)
    pp.add_argument("--split", action="store_true")
    pp.set_defaults(func=cmd_poisson)

    pt = sub.add_parser("potential", help="evaluate a Green potential")
    pt.add_argument("--measure", required=True, help="atom CSV path")
    pt.add_argument("--x", required=True)
    pt.set_defaults(func=cmd_potential)

    pc = sub.add_parser("cover", help="build the exceptional-ball cover")
    pc.add_argument("config")
    pc.set_defaults(func=cmd_cover)

    pg = sub.add_parser("growth", help="run the growth-trend experiment")
    pg.add_argument("config")
    pg.set_defaults(func=cmd_growth)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ParamError, FileNotFoundError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SingularityError, ConvergenceError, AdmissibilityError,
            ObstructedRayError, ValueError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except AssertionError as exc:
        print(f"budget assertion failed: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
