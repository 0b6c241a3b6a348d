"""Parameters of the scheme and the discrete state of one time level."""

import math
from dataclasses import dataclass, field

import numpy as np

from peterlin.fem.assembly import mean_vector


# Relative slack in the step count so that T / dt = 2 - 1e-16 still gives 2.
_STEP_COUNT_SLACK = 1e-12


@dataclass(frozen=True)
class SchemeParams:
    """Physical and numerical parameters of a run.

    Parameters
    ----------

    nu : float
      Fluid viscosity, positive.

    eps : float
      Elastic stress viscosity (diffusion of the conformation tensor), in
      ``[0, 1]``. ``eps = 0`` drops the diffusion term.

    dt : float
      Time increment.

    t_end : float
      Final time ``T``, at least ``dt``.

    delta0 : float, optional
      Pressure stabilization constant, positive.

    newton_tol : float, optional
      Newton stops when ``||R|| <= newton_tol * (1 + ||rhs||)``.

    newton_max_iter : int, optional
      Iteration cap, ``NewtonDivergedError`` beyond it.

    damping_min : float, optional
      Smallest step fraction tried by the backtracking line search.
    """

    nu: float
    eps: float
    dt: float
    t_end: float
    delta0: float = 1.0
    newton_tol: float = 1e-10
    newton_max_iter: int = 20
    damping_min: float = 1.0 / 64

    def __post_init__(self):
        if not self.nu > 0:
            raise ValueError("'nu' should be positive, got %r" % (self.nu,))
        if not 0 <= self.eps <= 1:
            raise ValueError("'eps' should lie in [0, 1], got %r" % (self.eps,))
        if not self.delta0 > 0:
            raise ValueError("'delta0' should be positive, got %r" % (self.delta0,))
        if not self.dt > 0:
            raise ValueError("'dt' should be positive, got %r" % (self.dt,))
        if not self.t_end >= self.dt:
            raise ValueError(
                "'t_end' should be at least dt = %r, got %r" % (self.dt, self.t_end)
            )
        if not self.newton_tol > 0:
            raise ValueError(
                "'newton_tol' should be positive, got %r" % (self.newton_tol,)
            )
        if int(self.newton_max_iter) < 1:
            raise ValueError(
                "'newton_max_iter' should be at least 1, got %r"
                % (self.newton_max_iter,)
            )
        if not 0 < self.damping_min <= 1:
            raise ValueError(
                "'damping_min' should lie in (0, 1], got %r" % (self.damping_min,)
            )

    @property
    def n_steps(self):
        """``N_T = floor(T / dt)``.

        >>> SchemeParams(nu=1, eps=0, dt=0.15, t_end=0.5).n_steps
        3
        """
        return math.floor(self.t_end / self.dt * (1 + _STEP_COUNT_SLACK))

    def time(self, step):
        """``t^n = n dt``."""
        return step * self.dt


@dataclass(frozen=True)
class StateTriple:
    """Discrete solution ``(u, p, C)`` at time ``t``.

    ``u`` is a ``vector2`` function vanishing on the boundary, ``p`` a scalar
    function of zero mean and ``c`` a ``symtensor2`` function.
    """

    u: object
    p: object
    c: object
    t: float = 0.0
    multiplier: float = field(default=0.0, compare=False)

    @property
    def mesh(self):
        return self.u.mesh

    def check(self, mean_tolerance=1e-10):
        """Raises ValueError when the boundary or mean constraints are broken."""
        mesh = self.mesh
        if not (self.p.mesh is mesh and self.c.mesh is mesh):
            raise ValueError("The fields of a state must share one mesh")
        if np.any(self.u.nodal[mesh.boundary_vertex] != 0):
            raise ValueError("Boundary velocity dofs should be exactly 0")
        mean = float(mean_vector(mesh) @ self.p.coeffs)
        if abs(mean) > mean_tolerance:
            raise ValueError("The pressure mean should vanish, got %.3e" % mean)
        return self
