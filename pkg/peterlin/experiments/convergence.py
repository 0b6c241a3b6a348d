"""Convergence studies with the manufactured solution: one simulation per
level, CSV output, a printed table with slopes and acceptance bands.
"""

import csv
import math
import time
from concurrent.futures import ProcessPoolExecutor

import proglog

from peterlin.experiments.RunConfig import PRESETS
from peterlin.manufactured import ErrorAccumulator, get_exact_solution
from peterlin.mesh import build_structured
from peterlin.scheme import LagrangeGalerkin, SchemeParams
from peterlin.tools import convergence_slopes, format_float


ERROR_COLUMNS = ["Er1", "Er2", "Er3", "Er4", "Er5", "Er6"]
CSV_COLUMNS = (
    ["N", "h", "dt", "nu", "eps"] + ERROR_COLUMNS + ["newton_avg_iters", "wall_seconds"]
)
CSV_COMMENT = (
    "# h = 1/N is the grid spacing; element diameters h_K = sqrt(2)/N are used "
    "in the pressure stabilization and the |.|_h seminorm"
)

# Published errors on the coarsest level and slope bands checked by --assert.
# Slope bands are (column, lower, upper) over every successive pair of levels.
ACCEPTANCE_BANDS = {
    "diffusive": {
        "reference": {32: {"Er1": 2.07e-2, "Er5": 1.12e-2}},
        "relative_tolerance": 0.4,
        "slopes": [("Er1", 1.0, 1.6), ("Er2", 1.0, 1.6), ("Er5", 1.0, 1.6)],
        "increasing": [],
    },
    "weakly-diffusive": {
        "reference": {32: {"Er1": 1.75e-2}},
        "relative_tolerance": 0.4,
        "slopes": [(column, 1.0, math.inf) for column in ERROR_COLUMNS[:5]],
        "increasing": ["Er6"],
    },
    "non-diffusive": {
        "reference": {},
        "relative_tolerance": 0.4,
        "slopes": [("Er5", 1.0, math.inf), ("Er6", -math.inf, 0.8)],
        "increasing": [],
    },
}


def scheme_params(config, level):
    return SchemeParams(
        nu=config.nu,
        eps=config.eps,
        delta0=config.delta0,
        dt=config.dt(level),
        t_end=config.t_end,
        newton_tol=config.newton_tol,
        newton_max_iter=config.newton_max_iter,
    )


def run_level(config, level, logger=None):
    """Runs the manufactured problem on the ``level x level`` grid.

    Returns
    -------

    dict
      One CSV row (keys of ``CSV_COLUMNS``) plus ``trace_weighted``.
    """
    start = time.perf_counter()
    exact = get_exact_solution()
    mesh = build_structured(level)
    params = scheme_params(config, level)

    solver = LagrangeGalerkin(
        mesh,
        params,
        exact.velocity_field(),
        forcing=exact.forcing_provider(params.nu, params.eps),
    )
    accumulator = ErrorAccumulator(exact, mesh, params.dt)
    initial = solver.initial_state(
        exact.initial_velocity(), exact.initial_conformation()
    )
    solver.run(initial, callback=accumulator, keep_trajectory=False, logger=logger)

    row = {
        "N": level,
        "h": 1.0 / level,
        "dt": params.dt,
        "nu": params.nu,
        "eps": params.eps,
        "newton_avg_iters": solver.average_newton_iterations(),
    }
    row.update(accumulator.relative_errors())
    row["wall_seconds"] = time.perf_counter() - start
    return row


def _run_level_quietly(args):
    config, level = args
    return run_level(config, level)


def format_row(row):
    """CSV fields of a row, floats with 17 significant digits."""
    return [
        str(row[column]) if column == "N" else format_float(row[column])
        for column in CSV_COLUMNS
    ]


def format_table(rows):
    """Aligned text table of the errors, with a slope row between successive
    levels.
    """
    columns = ["N", "h", "dt"] + ERROR_COLUMNS + ["newton_avg_iters", "wall_seconds"]
    lines = [columns]
    levels = [row["N"] for row in rows]
    slopes = {
        column: convergence_slopes([row[column] for row in rows], levels)
        for column in ERROR_COLUMNS
    }
    for index, row in enumerate(rows):
        lines.append(
            [str(row["N"]), "1/%d" % row["N"], "%.4g" % row["dt"]]
            + ["%.3e" % row[column] for column in ERROR_COLUMNS]
            + ["%.2f" % row["newton_avg_iters"], "%.1f" % row["wall_seconds"]]
        )
        if index < len(rows) - 1:
            lines.append(
                ["slope", "", ""]
                + ["%.2f" % slopes[column][index] for column in ERROR_COLUMNS]
                + ["", ""]
            )
    widths = [max(len(line[i]) for line in lines) for i in range(len(columns))]
    return "\n".join(
        "  ".join(cell.rjust(width) for cell, width in zip(line, widths))
        for line in lines
    )


def preset_of(config):
    """Name of the preset matching ``config`` (explicit or by ``(nu, eps)``)."""
    if config.preset is not None:
        return config.preset
    for name, values in PRESETS.items():
        if values["nu"] == config.nu and values["eps"] == config.eps:
            return name
    return None


def check_acceptance(rows, preset):
    """Checks rows against the bands of ``preset``.

    Returns
    -------

    list of str
      One message per violated band, empty when everything passes.
    """
    if preset not in ACCEPTANCE_BANDS:
        return ["no acceptance bands for preset %r" % (preset,)]
    bands = ACCEPTANCE_BANDS[preset]
    failures = []
    by_level = {row["N"]: row for row in rows}

    for level, references in bands["reference"].items():
        if level not in by_level:
            continue
        for column, reference in references.items():
            value = by_level[level][column]
            tolerance = bands["relative_tolerance"]
            if abs(value - reference) > tolerance * reference:
                failures.append(
                    "%s at N=%d is %.3e, outside %.3e +/- %d%%"
                    % (column, level, value, reference, 100 * tolerance)
                )

    levels = [row["N"] for row in rows]
    for column, lower, upper in bands["slopes"]:
        slopes = convergence_slopes([row[column] for row in rows], levels)
        for level, slope in zip(levels, slopes):
            if not lower <= slope <= upper:
                failures.append(
                    "%s slope from N=%d is %.2f, outside [%g, %g]"
                    % (column, level, slope, lower, upper)
                )
    for column in bands["increasing"]:
        slopes = convergence_slopes([row[column] for row in rows], levels)
        if any(b <= a for a, b in zip(slopes[:-1], slopes[1:])):
            failures.append(
                "%s slopes %s are not increasing"
                % (column, ", ".join("%.2f" % slope for slope in slopes))
            )
    return failures


def cmd_run(config, logger="bar", stream=print):
    """Runs the convergence study described by ``config``.

    Rows are written to ``config.out`` in level order as soon as they are
    available. When a level fails, a ``# FAILED`` marker row is written and
    the study stops.

    Parameters
    ----------

    config : RunConfig
      The study.

    logger : {"bar", None} or any proglog logger, optional
      Progress over levels and time steps.

    stream : callable, optional
      Receives the printed table and messages.

    Returns
    -------

    int
      Exit status: 0 on success, 1 on a solver failure or a violated
      acceptance band.
    """
    logger = proglog.default_bar_logger(logger)
    rows = []
    status = 0

    with open(config.out, "w", newline="") as file:
        writer = csv.writer(file, lineterminator="\n")
        file.write(CSV_COMMENT + "\n")
        writer.writerow(CSV_COLUMNS)
        file.flush()

        if config.workers > 1:
            executor = ProcessPoolExecutor(max_workers=config.workers)
            results = executor.map(
                _run_level_quietly, [(config, level) for level in config.levels]
            )
        else:
            executor = None
            results = (
                run_level(config, level, logger=logger) for level in config.levels
            )

        try:
            for level in logger.iter_bar(level=config.levels):
                logger(message="peterlin - running N=%d" % level)
                try:
                    row = next(results)
                except Exception as err:
                    file.write("# FAILED N=%d: %s\n" % (level, err))
                    file.flush()
                    stream("peterlin - level N=%d failed: %s" % (level, err))
                    status = 1
                    break
                rows.append(row)
                writer.writerow(format_row(row))
                file.flush()
        finally:
            if executor is not None:
                executor.shutdown(cancel_futures=True)

    if rows:
        stream(format_table(rows))
        for row in rows:
            logger(
                message="peterlin - N=%d: trace-weighted conformation error %.3e"
                % (row["N"], row["trace_weighted"])
            )
    logger(message="peterlin - results written to %s" % config.out)

    if status == 0 and config.assert_bands:
        failures = check_acceptance(rows, preset_of(config))
        for failure in failures:
            stream("ASSERT FAILED: %s" % failure)
        if failures:
            status = 1
    return status
