"""Run-time configuration of peterlin, read from the environment.

Values can be placed in a ``.env`` file when python-dotenv is installed.
"""

import math
import os
from pathlib import Path


try:
    from dotenv import find_dotenv, load_dotenv

    DOTENV = find_dotenv(usecwd=True)
    load_dotenv(DOTENV)
except ImportError:
    DOTENV = None

# Column ordering handed to SuperLU. Minimum degree on A^T + A keeps the fill of
# the Jacobians low only together with a small diagonal pivot threshold; with
# full partial pivoting COLAMD fills less.
PERMC_SPEC = os.getenv("PETERLIN_PERMC_SPEC", "MMD_AT_PLUS_A")

# SuperLU keeps the diagonal pivot unless it is smaller than this fraction of
# the largest entry of its column. 1 is plain partial pivoting.
try:
    DIAG_PIVOT_THRESH = float(os.getenv("PETERLIN_DIAG_PIVOT_THRESH", "0.01"))
except ValueError:
    DIAG_PIVOT_THRESH = math.nan

# Logger used by the command line when nothing else is requested.
LOGGER = os.getenv("PETERLIN_LOGGER", "bar")
if LOGGER.lower() in ("none", "", "0"):
    LOGGER = None

try:
    WORKERS = max(1, int(os.getenv("PETERLIN_WORKERS", "1")))
except ValueError:
    raise ValueError(
        "PETERLIN_WORKERS should be a positive integer, got %r"
        % os.getenv("PETERLIN_WORKERS")
    )

_PERMC_SPECS = ("NATURAL", "MMD_ATA", "MMD_AT_PLUS_A", "COLAMD")
if PERMC_SPEC not in _PERMC_SPECS:
    raise ValueError(
        f"PETERLIN_PERMC_SPEC should be one of {', '.join(_PERMC_SPECS)}, "
        f"got {PERMC_SPEC!r}"
    )
if not 0 <= DIAG_PIVOT_THRESH <= 1:
    raise ValueError(
        "PETERLIN_DIAG_PIVOT_THRESH should be a number in [0, 1], got %r"
        % os.getenv("PETERLIN_DIAG_PIVOT_THRESH")
    )


def check():
    """Print the configuration peterlin is running with."""
    print(f"peterlin: SuperLU column ordering '{PERMC_SPEC}'.")
    print(f"peterlin: SuperLU diagonal pivot threshold {DIAG_PIVOT_THRESH:g}.")
    print(f"peterlin: default logger '{LOGGER}'.")
    print(f"peterlin: {WORKERS} worker(s) for convergence levels.")

    if DOTENV:
        print(f"\n.env file content at {DOTENV}:\n")
        print(Path(DOTENV).read_text())


if __name__ == "__main__":  # pragma: no cover
    check()
