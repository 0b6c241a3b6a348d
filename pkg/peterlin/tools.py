"""Misc. useful functions that can be used at many places in the program."""

import math

import numpy as np


def convert_to_levels(levels):
    """Will convert any description of division numbers into a sorted list.

    If the type of ``levels`` is not valid, it's returned as is.

    Here are the accepted formats:

    >>> convert_to_levels("32,64,128")
    [32, 64, 128]
    >>> convert_to_levels((64, 32))
    [32, 64]
    >>> convert_to_levels(16)
    [16]
    """
    if isinstance(levels, str):
        levels = [int(part) for part in levels.replace(" ", "").split(",") if part]
    elif isinstance(levels, (int, np.integer)):
        levels = [int(levels)]

    if not isinstance(levels, (tuple, list)):
        return levels

    return sorted(int(level) for level in levels)


def convergence_slopes(errors, levels):
    """Returns the observed orders ``log(Er_N / Er_2N) / log(2)`` between
    successive levels.

    Parameters
    ----------

    errors : list of float
      Error values, one per level.

    levels : list of int
      Division numbers ``N`` matching ``errors``. Successive levels need not be
      doubled: the general ratio ``log(Er_a / Er_b) / log(N_b / N_a)`` is used.

    Returns
    -------

    list of float
      ``len(levels) - 1`` slopes, ``nan`` whenever an error is not positive.
    """
    slopes = []
    for (n_a, e_a), (n_b, e_b) in zip(
        zip(levels[:-1], errors[:-1]), zip(levels[1:], errors[1:])
    ):
        if e_a > 0 and e_b > 0:
            slopes.append(math.log(e_a / e_b) / math.log(n_b / n_a))
        else:
            slopes.append(float("nan"))
    return slopes


def format_float(value):
    """Serializes a float with 17 significant digits (round-trip exact)."""
    return "%.17g" % value


def log_factor(h):
    """The logarithmic mesh factor ``D(h) = (1 + |log h|)^(1/2)``."""
    return math.sqrt(1.0 + abs(math.log(h)))


def uniqueness_advisory(h, dt, eps):
    """Evaluates the step-size conditions under which the discrete solution
    is known to be unique.

    The constants of the conditions are not computable, they are replaced by 1,
    so the result is advisory only.

    Parameters
    ----------

    h : float
      Mesh size (largest element diameter).

    dt : float
      Time increment.

    eps : float
      Diffusion coefficient of the conformation equation.

    Returns
    -------

    dict
      ``{"condition": str, "bound": float, "satisfied": bool}``.
    """
    if eps > 0:
        bound = log_factor(h) ** -2
        condition = "dt <= D(h)^-2"
    else:
        bound = h
        condition = "dt <= h"
    return {"condition": condition, "bound": bound, "satisfied": dt <= bound}
