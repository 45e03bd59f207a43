"""Command line entry point: ``arceloc {solve,sweep,crlb,simulate}``.

Exit codes: 0 success, 1 configuration error, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from . import harness
from .arce import arce_estimate

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2


def _load(args):
    cfg = harness.load_scenario(args.config)
    changes = {}
    if getattr(args, "trials", None) is not None:
        changes["trials"] = args.trials
    if getattr(args, "seed", None) is not None:
        changes["seed"] = args.seed
    if getattr(args, "epsilon", None) is not None:
        changes["epsilon"] = args.epsilon
    return cfg.replace(**changes) if changes else cfg


def cmd_solve(args) -> int:
    cfg = _load(args)
    if args.delays is not None:
        try:
            delays = [float(v) for v in args.delays.split(",")]
        except ValueError:
            raise harness.ConfigError("--delays: expected comma-separated numbers") from None
        cfg = cfg.replace(delays_s=tuple(delays))
    if cfg.delays_s is None:
        raise harness.ConfigError("no delays: add 'delays_s' to the config or pass --delays")
    tau = np.asarray(cfg.delays_s)
    b0 = harness.SPEED_OF_LIGHT * tau[0] / 2.0
    rng = (b0 - cfg.range_halfwidth, b0 + cfg.range_halfwidth)
    est = arce_estimate(tau, cfg.network, cfg.beam, rng, cfg.epsilon)
    x, y, z = est.position
    print(f"position_m: {x:.6f} {y:.6f} {z:.6f}")
    print(f"objective_m4: {est.objective:.9e}")
    print(f"family: {est.winning_family}  candidates: {est.candidate_count}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _load(args)
    records = harness.run_monte_carlo(cfg)
    harness.emit_csv(records, args.out)
    if args.plot_dir:
        harness.emit_plot_data(records, args.plot_dir)
    failed = sum(r.failures for r in records)
    if failed:
        logging.getLogger(__name__).warning("%d estimator failures recorded", failed)
    return EXIT_OK


def cmd_crlb(args) -> int:
    cfg = _load(args)
    harness.emit_crlb_csv(harness.crlb_curve(cfg), args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = _load(args)
    harness.emit_delays_csv(cfg, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="arceloc", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="one-shot estimate from measured delays")
    s.add_argument("--config", required=True)
    s.add_argument("--epsilon", type=float)
    s.add_argument("--delays", help="comma-separated delays in seconds, monostatic first")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("sweep", help="Monte Carlo RMSE sweep")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--trials", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--plot-dir", help="also write two-column plot data files here")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("crlb", help="RCRLB curve only")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_crlb)

    s = sub.add_parser("simulate", help="write simulated delay sets")
    s.add_argument("--config", required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--trials", type=int)
    s.set_defaults(func=cmd_simulate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except harness.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (np.linalg.LinAlgError, FloatingPointError, ValueError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
