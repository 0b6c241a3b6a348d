"""Command line interface: ``peterlin run | plot | check``.

Every flag can also be given in a JSON file passed with ``--config``; its keys
are the flag names with dashes replaced by underscores. Flags given on the
command line override the file, which overrides the preset.
"""

import argparse
import sys

from peterlin import config as peterlin_config
from peterlin.experiments.checks import SUITES, cmd_check
from peterlin.experiments.convergence import cmd_run
from peterlin.experiments.plotting import CsvFormatError, cmd_plot
from peterlin.experiments.RunConfig import PRESETS, RunConfig, read_config_file
from peterlin.version import __version__


def _add_run_flags(parser):
    parser.add_argument("--nu", type=float, help="fluid viscosity")
    parser.add_argument("--eps", type=float, help="conformation diffusion")
    parser.add_argument("--delta0", type=float, help="pressure stabilization")
    parser.add_argument("--levels", help="comma separated division numbers")
    parser.add_argument("--dt-ratio", type=float, help="dt = dt_ratio / N")
    parser.add_argument("--t-end", type=float, help="final time")
    parser.add_argument("--newton-tol", type=float)
    parser.add_argument("--newton-max-iter", type=int)
    parser.add_argument("--out", help="CSV file of the errors")
    parser.add_argument("--plot-out", help="SVG file of the log-log plot")
    parser.add_argument(
        "--assert",
        dest="assert_bands",
        action="store_const",
        const=True,
        help="fail unless the errors lie in the published bands",
    )
    parser.add_argument("--preset", choices=list(PRESETS))
    parser.add_argument("--workers", type=int, help="levels run in parallel")
    parser.add_argument("--config", help="JSON file of flag values")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="peterlin",
        description="Lagrange-Galerkin solver for the Oseen-type Peterlin model.",
    )
    parser.add_argument(
        "--version", action="version", version="%(prog)s " + __version__
    )
    parser.add_argument(
        "--quiet", action="store_true", help="no progress bars or messages"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    run = subparsers.add_parser("run", help="convergence study on several levels")
    _add_run_flags(run)

    plot = subparsers.add_parser("plot", help="log-log plot of a convergence CSV")
    _add_run_flags(plot)

    check = subparsers.add_parser("check", help="property suites")
    _add_run_flags(check)
    check.add_argument(
        "--suite",
        dest="suites",
        action="append",
        choices=list(SUITES),
        help="run only this suite (repeatable)",
    )
    return parser


def resolve_config(args):
    """RunConfig of parsed arguments, and whether a plot path was requested."""
    file_values = read_config_file(args.config) if args.config else {}
    overrides = {
        key: value
        for key, value in vars(args).items()
        if key in RunConfig.keys()
    }
    plot_requested = args.plot_out is not None or "plot_out" in file_values
    return RunConfig.resolve(file_values, overrides), plot_requested


def main(argv=None):
    """Entry point of the ``peterlin`` command. Returns the exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        run_config, plot_requested = resolve_config(args)
    except (OSError, ValueError) as err:
        parser.error(str(err))

    logger = None if args.quiet else peterlin_config.LOGGER

    if args.command == "run":
        status = cmd_run(run_config, logger=logger)
        if plot_requested:
            try:
                cmd_plot(run_config.out, run_config.plot_out)
            except CsvFormatError as err:
                print("peterlin - no plot: %s" % err, file=sys.stderr)
        return status

    if args.command == "plot":
        try:
            return cmd_plot(run_config.out, run_config.plot_out)
        except (OSError, CsvFormatError) as err:
            print("peterlin - %s" % err, file=sys.stderr)
            return 1

    return cmd_check(run_config, suites=args.suites)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
