"""Command-line entry point: ``gcdvsms {run,summarize,list}``.

Exit codes: 0 on success, 1 for configuration errors, 2 for runtime or
evaluation errors.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .benchmarks import REGISTRY
from .errors import ConfigError, GCDError
from .harness import (
    ExperimentConfig,
    format_summary,
    read_results,
    run_experiment,
    summarize,
)

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    # usage errors are configuration errors
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gcdvsms", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a seeded experiment")
    run.add_argument("config", nargs="?", help="YAML/JSON experiment config")
    run.add_argument("--function", help=", ".join(sorted(REGISTRY)))
    run.add_argument("--n", type=int)
    run.add_argument("--d", type=int)
    run.add_argument("--seeds", help='e.g. "1,2,3" or "0:100"')
    run.add_argument("--variant", help="canonical or paper_literal")
    run.add_argument("--baseline", help="random_search")
    run.add_argument("--trace", action="store_true", default=None)
    run.add_argument("--out", dest="output_path")
    run.add_argument("--parallel", dest="parallel_starts", type=int)

    summ = sub.add_parser("summarize", help="print a summary table of a results file")
    summ.add_argument("results")

    sub.add_parser("list", help="list the benchmark registry")
    return parser


def _config_from_args(args) -> ExperimentConfig:
    data = {}
    if args.config:
        data = vars(ExperimentConfig.load(args.config)).copy()
    for key in ("function", "n", "d", "seeds", "variant", "baseline", "trace",
                "output_path", "parallel_starts"):
        value = getattr(args, key)
        if value is not None:
            data[key] = value
    return ExperimentConfig.from_dict(data)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "list":
            for name, (_, l, u) in REGISTRY.items():
                print(f"{name:<10} box=[{l:g}, {u:g}]^d  variants=canonical,paper_literal")
            return EXIT_OK
        if args.command == "summarize":
            print(format_summary(summarize(read_results(args.results))))
            return EXIT_OK
        config = _config_from_args(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (GCDError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    try:
        rows = run_experiment(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (GCDError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    print(format_summary(summarize(rows)))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
