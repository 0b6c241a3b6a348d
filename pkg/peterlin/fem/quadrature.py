"""Symmetric quadrature rules on triangles.

Points are given in barycentric coordinates and weights are normalized by the
triangle area (they sum to 1), so ``integral over K of g ~= |K| * sum w_q g(x_q)``.
"""

from functools import lru_cache

import numpy as np


class QuadratureRule:
    """Quadrature rule on the reference triangle.

    Parameters
    ----------

    points : array_like
      Qx3 barycentric coordinates of the quadrature points.

    weights : array_like
      Q positive weights summing to 1.

    degree : int
      Polynomial degree integrated exactly.
    """

    def __init__(self, points, weights, degree):
        self.points = np.array(points, dtype=float).reshape(-1, 3)
        self.weights = np.array(weights, dtype=float)
        self.degree = degree

        if len(self.points) != len(self.weights):
            raise ValueError("One weight per quadrature point is required")
        if np.any(self.weights <= 0):
            raise ValueError("Quadrature weights should be positive")
        if abs(self.weights.sum() - 1.0) > 1e-14:
            raise ValueError("Quadrature weights should sum to 1")
        if np.any(np.abs(self.points.sum(axis=1) - 1.0) > 1e-14):
            raise ValueError("Barycentric coordinates should sum to 1")

        self.points.flags.writeable = False
        self.weights.flags.writeable = False

    def __len__(self):
        return len(self.weights)

    def __repr__(self):
        return "QuadratureRule(%d points, degree %d)" % (len(self), self.degree)


def _orbit(a, b):
    """The three permutations of the barycentric triple ``(a, b, b)``."""
    return [(a, b, b), (b, a, b), (b, b, a)]


@lru_cache(maxsize=None)
def get_rule(degree):
    """Get the cheapest symmetric rule exact for polynomials of ``degree``.

    Parameters
    ----------

    degree : int
      Required exactness, 1, 2 or up to 5.

    Raises
    ------

    ValueError
      If no rule of that degree is available.
    """
    if degree <= 1:
        return QuadratureRule([(1 / 3, 1 / 3, 1 / 3)], [1.0], 1)
    elif degree == 2:
        return QuadratureRule(_orbit(0.0, 0.5), [1 / 3] * 3, 2)
    elif degree <= 5:
        root = np.sqrt(15.0)
        a_1, b_1 = (9 - 2 * root) / 21, (6 + root) / 21
        a_2, b_2 = (9 + 2 * root) / 21, (6 - root) / 21
        return QuadratureRule(
            [(1 / 3, 1 / 3, 1 / 3)] + _orbit(a_1, b_1) + _orbit(a_2, b_2),
            [9 / 40] + [(155 + root) / 1200] * 3 + [(155 - root) / 1200] * 3,
            5,
        )
    raise ValueError(f"Triangular quadrature of degree {degree} not supported")
