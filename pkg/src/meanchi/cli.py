"""Command-line interface.

Subcommands: predict, simulate, validate, density, flag-density.
Exit codes: 0 success, 2 config error, 3 embedding failure, 4 acceptance
failure in validate mode.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys

import numpy as np

from .config import ConfigError, load_config
from .densities import ExcursionSpec, flag_density_qk
from .grassmann import Flag, Subspace
from .harness import density_report, density_table_text, predict, run_validation
from .simulate import EmbeddingNotPD, dump_sample, simulate

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_EMBEDDING = 3
EXIT_ACCEPTANCE = 4

THREADS_ENV = "MEANCHI_THREADS"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="meanchi",
        description="Expected Euler characteristics of Gaussian excursion sets",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="path to the TOML config")
        p.add_argument("--seed", type=int, default=None, help="override mc.seed")
        p.add_argument(
            "--threads", type=int, default=None,
            help=f"worker threads (default: ${THREADS_ENV} or 1)",
        )
        return p

    common(sub.add_parser("predict", help="closed-form expected Euler characteristic"))

    p_sim = common(sub.add_parser("simulate", help="draw one field realization"))
    p_sim.add_argument("--out", default=None, help="dump raw sample (float64 row-major)")

    p_val = common(sub.add_parser("validate", help="Monte-Carlo test of the prediction"))
    p_val.add_argument("--report", default=None, help="write the report to this path")
    p_val.add_argument("--chi-table", default=None, help="write per-replication chi table")

    common(sub.add_parser("density", help="curvature densities by all routes"))

    p_flag = common(sub.add_parser("flag-density", help="evaluate the flag density q_k"))
    p_flag.add_argument("--k", type=int, required=True, help="density order k")
    p_flag.add_argument("--u", required=True, help="direction, comma-separated")
    p_flag.add_argument(
        "--frame", default="",
        help="subspace frame columns, ';'-separated vectors of ','-separated entries",
    )
    return parser


def _resolve_threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get(THREADS_ENV)
    return max(1, int(env)) if env else 1


def _parse_vector(text: str) -> np.ndarray:
    return np.array([float(x) for x in text.split(",")], dtype=float)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        if args.seed is not None:
            config = dataclasses.replace(config, seed=args.seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.command == "predict":
            print(repr(predict(config)))
        elif args.command == "simulate":
            if config.grid is None:
                raise ConfigError("simulate requires a [grid] section")
            seed = config.seed if config.seed is not None else 0
            sample = simulate(config.model, config.grid, seed)
            if args.out:
                dump_sample(sample, args.out, config.model)
            print(
                f"simulated {config.grid.n}^{config.model.dim} grid, "
                f"seed {seed}, clipped eigenvalue mass {sample.clipped_mass:.3e}"
            )
        elif args.command == "validate":
            report = run_validation(config, threads=_resolve_threads(args))
            text = report.to_text()
            if args.report:
                with open(args.report, "w") as fh:
                    fh.write(text)
            else:
                sys.stdout.write(text)
            if args.chi_table:
                with open(args.chi_table, "w") as fh:
                    fh.write(report.chi_table())
            if not report.passed:
                print(
                    f"acceptance failure: |mean - prediction| = "
                    f"{abs(report.mc_mean - report.prediction):.4g} exceeds "
                    f"3*SE + 5% margin",
                    file=sys.stderr,
                )
                return EXIT_ACCEPTANCE
        elif args.command == "density":
            sys.stdout.write(density_table_text(density_report(config)))
        elif args.command == "flag-density":
            u = _parse_vector(args.u)
            u = u / np.linalg.norm(u)
            if args.frame:
                cols = [_parse_vector(v) for v in args.frame.split(";")]
                # orthogonalize the supplied columns against u
                cols = [c - (c @ u) * u for c in cols]
                subspace = Subspace.from_vectors(cols)
            else:
                subspace = Subspace(np.empty((u.shape[0], 0)))
            flag = Flag(u, subspace)
            spec = ExcursionSpec(config.model, config.alpha)
            print(repr(flag_density_qk(spec, args.k, flag)))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EmbeddingNotPD as exc:
        print(f"embedding failure: {exc}", file=sys.stderr)
        return EXIT_EMBEDDING
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
