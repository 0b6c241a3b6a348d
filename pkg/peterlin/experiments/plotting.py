"""Log-log plots of the errors written by ``cmd_run``."""

import csv

import matplotlib
import numpy as np
from matplotlib.backends.backend_svg import FigureCanvasSVG
from matplotlib.figure import Figure

from peterlin.decorators import convert_path_to_string
from peterlin.experiments.convergence import CSV_COLUMNS, ERROR_COLUMNS


# Open/filled pairs: Er1/Er2 circles, Er3/Er4 triangles, Er5/Er6 squares.
MARKERS = {
    "Er1": ("o", "none"),
    "Er2": ("o", "full"),
    "Er3": ("^", "none"),
    "Er4": ("^", "full"),
    "Er5": ("s", "none"),
    "Er6": ("s", "full"),
}


class CsvFormatError(ValueError):
    """Raised for a malformed convergence CSV; names the offending line."""

    def __init__(self, filename, line_number, message):
        self.filename = filename
        self.line_number = line_number
        super().__init__(f"{filename}, line {line_number}: {message}")


@convert_path_to_string(["filename"])
def read_convergence_csv(filename):
    """Reads the rows of a CSV written by ``cmd_run``.

    Lines starting with ``#`` (comments and failure markers) are skipped.

    Returns
    -------

    list of dict
      One dict of floats per level, ``N`` as int.

    Raises
    ------

    CsvFormatError
      When the header is wrong, a row has the wrong number of fields or a
      field is not a number, or when there is no data row.
    """
    rows = []
    header = None
    with open(filename, newline="") as file:
        for line_number, fields in enumerate(csv.reader(file), start=1):
            if not fields or fields[0].lstrip().startswith("#"):
                continue
            if header is None:
                if fields != CSV_COLUMNS:
                    raise CsvFormatError(
                        filename,
                        line_number,
                        "expected header %s" % ",".join(CSV_COLUMNS),
                    )
                header = fields
                continue
            if len(fields) != len(header):
                raise CsvFormatError(
                    filename,
                    line_number,
                    "expected %d fields, got %d" % (len(header), len(fields)),
                )
            try:
                row = {name: float(value) for name, value in zip(header, fields)}
            except ValueError as err:
                raise CsvFormatError(filename, line_number, str(err))
            row["N"] = int(row["N"])
            rows.append(row)

    if header is None:
        raise CsvFormatError(filename, 1, "empty convergence file")
    if not rows:
        raise CsvFormatError(filename, line_number, "no data rows")
    return rows


def reference_triangle(h, errors):
    """Corners of a slope-1 triangle placed below the data, in data coordinates."""
    h_min, h_max = min(h), max(h)
    left = h_min * (h_max / h_min) ** 0.25
    right = h_min * (h_max / h_min) ** 0.75
    bottom = 0.5 * min(errors) * (left / h_min)
    return np.array(
        [
            [left, bottom],
            [right, bottom],
            [right, bottom * right / left],
            [left, bottom],
        ]
    )


def plot_convergence(rows, filename):
    """Draws Er1..Er6 against ``h = 1/N`` on log-log axes with a slope-1
    reference triangle, and writes the SVG to ``filename``.

    The output is byte-identical for identical rows: no date in the metadata
    and a fixed hash salt for the generated ids.
    """
    h = [row["h"] for row in rows]
    figure = Figure(figsize=(6, 5))
    FigureCanvasSVG(figure)
    axes = figure.add_subplot(1, 1, 1)

    all_errors = []
    for column in ERROR_COLUMNS:
        errors = [row[column] for row in rows]
        all_errors += [error for error in errors if error > 0]
        marker, fill = MARKERS[column]
        (line,) = axes.loglog(
            h,
            errors,
            marker=marker,
            fillstyle=fill,
            color="black",
            linewidth=0.8,
            label=column,
        )
        line.set_gid(column)

    if all_errors:
        corners = reference_triangle(h, all_errors)
        (triangle,) = axes.plot(corners[:, 0], corners[:, 1], color="gray")
        triangle.set_gid("reference-triangle")

    axes.set_xlabel("h")
    axes.set_ylabel("relative error")
    axes.legend(loc="upper left")
    axes.grid(True, which="major", linewidth=0.3)

    with matplotlib.rc_context({"svg.hashsalt": "peterlin", "svg.fonttype": "path"}):
        figure.savefig(filename, format="svg", metadata={"Date": None})


@convert_path_to_string(["csv_path", "out_path"])
def cmd_plot(csv_path, out_path):
    """Reads ``csv_path`` and writes the log-log SVG to ``out_path``.

    Returns
    -------

    int
      Exit status 0.
    """
    plot_convergence(read_convergence_csv(csv_path), out_path)
    return 0
