"""bunchlab command line: quantum, hv, sweep and projectors reports.

Exit codes: 0 success, 2 usage error, 1 computation or invariant failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict

import numpy as np

from . import hv
from .bounds import BoundReport, evaluate_bounds
from .experiments import (
    CANONICAL_EVENTS,
    PROJECTOR_TOL,
    ExperimentConfig,
    projector_report,
    quantum_event_probability,
)
from .hv import fmt

SEED_ENV = "BUNCHLAB_SEED"
DEFAULT_SEED = 42
LABELS = [e.label for e in CANONICAL_EVENTS]


class InvariantError(RuntimeError):
    pass


def _rounded(obj):
    """Round every float to 12 significant digits for JSON output."""
    if isinstance(obj, float):
        return float(fmt(obj))
    if isinstance(obj, dict):
        return {k: _rounded(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_rounded(v) for v in obj]
    return obj


def _json(doc) -> str:
    return json.dumps(_rounded(doc), indent=2) + "\n"


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt(v)
    return str(v)


def _csv(header, rows) -> str:
    lines = [",".join(header)]
    lines += [",".join(_cell(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


BOUND_HEADER = (
    ["backend"]
    + [f"p_{k}" for k in LABELS]
    + ["sum"]
    + [f"stderr_{k}" for k in LABELS]
    + ["exclusivity_violated", "no_disturbance_saturated", "no_disturbance_exceeded"]
)


def _bound_row(rep: BoundReport) -> list:
    stderr = list(rep.stderr) if rep.stderr is not None else [None] * 3
    return [
        rep.backend,
        *rep.probabilities,
        rep.sum,
        *stderr,
        rep.exclusivity_violated,
        rep.no_disturbance_saturated,
        rep.no_disturbance_exceeded,
    ]


# -- subcommands ------------------------------------------------------------


def cmd_quantum(args) -> str:
    cfg = ExperimentConfig(reflectivity=args.reflectivity)
    probs = [quantum_event_probability(e, cfg) for e in CANONICAL_EVENTS]
    rep = evaluate_bounds(probs, backend="quantum")
    if args.format == "json":
        doc = {"reflectivity": args.reflectivity, "events": LABELS, **rep.to_dict()}
        return _json(doc)
    return _csv(BOUND_HEADER, [_bound_row(rep)])


def _pattern_rows(dist: hv.PatternDistribution) -> list:
    return [[*pat, dist[pat], dist.method] for pat in hv.PATTERNS]


def cmd_hv(args) -> str:
    delta = args.delta
    analytic = [hv.analytic_event_prob(e, delta) for e in CANONICAL_EVENTS]
    mc = [
        hv.monte_carlo_event_prob(e, delta, args.samples, args.seed, args.workers)
        for e in CANONICAL_EVENTS
    ]
    reports = [
        evaluate_bounds(analytic, backend="hv-analytic"),
        evaluate_bounds([m.estimate for m in mc], [m.stderr for m in mc], backend="hv-mc"),
    ]
    if delta == 0.0:
        joint = hv.joint_pattern_distribution(0.0)
    else:
        joint = hv.joint_pattern_distribution(delta, args.samples, args.seed, args.workers)
    if joint.method == "exact" and (joint[(True,) * 3] or joint[(False,) * 3]):
        raise InvariantError("cyclic pattern with nonzero probability at delta = 0")

    if args.format == "json":
        doc = {
            "delta": delta,
            "n_samples": args.samples,
            "seed": args.seed,
            "events": LABELS,
            "analytic_sum": hv.analytic_sum(delta),
            "reports": [r.to_dict() for r in reports],
            "joint_patterns": {
                "method": joint.method,
                "rows": [
                    {**dict(zip(LABELS, pat)), "probability": joint[pat]}
                    for pat in hv.PATTERNS
                ],
            },
        }
        return _json(doc)
    return (
        _csv(BOUND_HEADER, [_bound_row(r) for r in reports])
        + "\n"
        + _csv([*LABELS, "probability", "method"], _pattern_rows(joint))
    )


def _grid(args, parser) -> list[float]:
    ranged = [args.start, args.stop, args.steps]
    if all(v is None for v in ranged):
        return [args.delta]
    if any(v is None for v in ranged):
        parser.error("--from, --to and --steps must be given together")
    if args.steps < 1:
        parser.error("--steps must be at least 1")
    grid = [float(x) for x in np.linspace(args.start, args.stop, args.steps)]
    for d in grid:
        if not 0.0 <= d <= 1.0:
            parser.error(f"delta grid value {d} lies outside [0, 1]")
    return grid


def cmd_sweep(args) -> str:
    rows = hv.sweep_sum(args.grid, args.samples, args.seed, args.workers)
    if args.format == "json":
        return _json([asdict(r) for r in rows])
    return hv.sweep_csv(rows)


def cmd_projectors(args) -> str:
    rep = projector_report(ExperimentConfig(reflectivity=args.reflectivity))
    worst = max(rep.idempotence_residuals + rep.hermiticity_residuals)
    if worst > PROJECTOR_TOL:
        raise InvariantError(f"projector residual {worst:.3e} exceeds {PROJECTOR_TOL}")
    if args.format == "csv":
        rows = [
            [i, j, v, rep.commutator_norms[(i, j)]] for (i, j), v in rep.product_norms.items()
        ]
        return _csv(["first", "second", "product_norm", "commutator_norm"], rows)
    return _json(rep.to_dict())


COMMANDS = {
    "quantum": cmd_quantum,
    "hv": cmd_hv,
    "sweep": cmd_sweep,
    "projectors": cmd_projectors,
}


def _unit_interval(name):
    def parse(text):
        try:
            v = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a number, got {text!r}")
        if not 0.0 <= v <= 1.0:
            raise argparse.ArgumentTypeError(f"{name} must lie in [0, 1], got {v}")
        return v

    return parse


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _seed(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError("seed must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--delta", type=_unit_interval("delta"), default=0.0)
    common.add_argument("--from", dest="start", type=float)
    common.add_argument("--to", dest="stop", type=float)
    common.add_argument("--steps", type=int)
    common.add_argument("--samples", type=_positive_int, default=1_000_000)
    common.add_argument("--seed", type=_seed, default=None,
                        help=f"default {DEFAULT_SEED}, or ${SEED_ENV} when set")
    common.add_argument("--reflectivity", type=_unit_interval("reflectivity"), default=0.5)
    common.add_argument("--format", choices=("csv", "json"), default=None,
                        help="csv (default) or json; projectors defaults to json")
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--workers", type=_positive_int, default=1,
                        help="threads for Monte Carlo sampling; output does not depend on it")

    parser = argparse.ArgumentParser(prog="bunchlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.seed is None:
        env = os.environ.get(SEED_ENV)
        if env is None:
            args.seed = DEFAULT_SEED
        else:
            try:
                args.seed = _seed(env)
            except argparse.ArgumentTypeError as exc:
                parser.error(f"${SEED_ENV}: {exc}")
    if args.format is None:
        args.format = "json" if args.command == "projectors" else "csv"
    if args.command == "sweep":
        args.grid = _grid(args, parser)

    try:
        text = COMMANDS[args.command](args)
    except (InvariantError, ValueError, ArithmeticError) as exc:
        print(f"bunchlab: error: {exc}", file=sys.stderr)
        return 1

    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
