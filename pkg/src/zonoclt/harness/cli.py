"""Command line entry point: ``zonoclt <experiment> [options]``.

Exit codes: 0 success, 2 invalid configuration, 3 subset budget exceeded.
"""
from __future__ import annotations

import argparse
import logging
import sys

from ..errors import BudgetExceededError, InvalidInputError
from .config import DEFAULT_SEED, EXPERIMENTS, ExperimentConfig
from .experiments import run_experiment
from .report import CSV_COLUMNS, emit_report

log = logging.getLogger("zonoclt")

EXIT_INVALID = 2
EXIT_BUDGET = 3


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zonoclt", description=__doc__.splitlines()[0])
    p.add_argument("experiment", choices=EXPERIMENTS)
    p.add_argument("--n", type=int, default=2, help="dimension of the projection")
    p.add_argument("--N-grid", dest="N_grid", type=_int_list, default=[50, 100, 200])
    p.add_argument("--samples", type=int, default=2000, help="replications per grid point")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", default=None, help="output file; JSON goes to stdout if omitted")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--emit-qq", action="store_true")
    p.add_argument("--kernel", default=None, help="abs-det, det-sq, clt-combined, mixed-volume, identity")
    p.add_argument("--p", type=int, default=4, help="moment order for moment-scaling")
    p.add_argument("--zeta-outer", type=int, default=2000)
    p.add_argument("--zeta-inner", type=int, default=2000)
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        cfg = ExperimentConfig(
            experiment=args.experiment, n=args.n, N_grid=args.N_grid,
            replications=args.samples, master_seed=args.seed, threads=args.threads,
            output_path=args.out, output_format=args.format, emit_qq=args.emit_qq,
            kernel=args.kernel, p=args.p, zeta_outer=args.zeta_outer, zeta_inner=args.zeta_inner,
        )
        report = run_experiment(cfg)
    except BudgetExceededError as exc:
        print(f"zonoclt: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InvalidInputError as exc:
        print(f"zonoclt: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_INVALID
    log.info("%s finished in %.1f s", cfg.experiment, report.wall_clock)
    if cfg.output_path is None:
        if cfg.output_format == "json":
            print(report.to_json())
        else:
            print(",".join(CSV_COLUMNS))
            for r in report.rows:
                print(",".join("" if getattr(r, c) is None else repr(getattr(r, c)) for c in CSV_COLUMNS))
        return 0
    for path in emit_report(report, cfg):
        log.info("wrote %s", path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
