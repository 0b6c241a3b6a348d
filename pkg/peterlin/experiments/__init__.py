"""Convergence studies, plots and property checks driven by the command line."""

from peterlin.experiments.checks import SUITES, cmd_check
from peterlin.experiments.convergence import (
    ACCEPTANCE_BANDS,
    CSV_COLUMNS,
    ERROR_COLUMNS,
    check_acceptance,
    cmd_run,
    run_level,
)
from peterlin.experiments.plotting import (
    CsvFormatError,
    cmd_plot,
    plot_convergence,
    read_convergence_csv,
)
from peterlin.experiments.RunConfig import PRESETS, RunConfig, read_config_file


__all__ = [
    "RunConfig",
    "PRESETS",
    "read_config_file",
    "run_level",
    "cmd_run",
    "check_acceptance",
    "ACCEPTANCE_BANDS",
    "CSV_COLUMNS",
    "ERROR_COLUMNS",
    "read_convergence_csv",
    "plot_convergence",
    "cmd_plot",
    "CsvFormatError",
    "cmd_check",
    "SUITES",
]
