"""Implements the LagrangeGalerkin solver: the nonlinear stabilized
Lagrange-Galerkin scheme for the Oseen-type Peterlin model, with P1 elements
for velocity, pressure and conformation tensor.
"""

import warnings

import numpy as np
import proglog
import scipy.sparse as sparse

from peterlin.characteristics import transported_load, warn_step_condition
from peterlin.fem.assembly import (
    assemble_ac,
    assemble_au,
    assemble_b,
    assemble_mass,
    assemble_sh,
    element_dofs,
    load_vector,
    mean_vector,
    scatter,
)
from peterlin.fem.FeFunction import FROBENIUS_WEIGHTS, FeFunction
from peterlin.fem.quadrature import get_rule
from peterlin.linalg import SparseMatrix, block_matrix, finalize, solve
from peterlin.scheme import forms
from peterlin.scheme.params import StateTriple
from peterlin.scheme.stokes import free_velocity_dofs, stokes_project
from peterlin.scheme.tensors import project_sym
from peterlin.tools import uniqueness_advisory


class NewtonDivergedError(RuntimeError):
    """Raised when Newton's method misses the tolerance within the iteration cap.

    Attributes
    ----------

    residual_norm : float
      Residual norm after the last iteration.

    iterations : int
      Iterations performed.
    """

    def __init__(self, residual_norm, iterations):
        self.residual_norm = float(residual_norm)
        self.iterations = int(iterations)
        super().__init__(
            "newton diverged: residual %.3e after %d iterations"
            % (self.residual_norm, self.iterations)
        )


class StepFailedError(RuntimeError):
    """Raised by ``LagrangeGalerkin.run`` when a time step fails. The original
    error is chained as ``__cause__``.
    """

    def __init__(self, step, message=""):
        self.step = int(step)
        super().__init__("time step %d failed%s" % (self.step, message))


class LagrangeGalerkin:
    """Solver of the scheme on a fixed mesh.

    At each time level the coupled system in ``(u, p, C)`` is solved by Newton's
    method with the exact Jacobian. Unknowns are gathered in one vector:
    interleaved velocity, pressure, interleaved conformation ``(C11, C12, C22)``
    and the multiplier enforcing the zero pressure mean. Boundary velocity dofs
    are fixed to 0 and eliminated.

    Parameters
    ----------

    mesh : TriMesh
      The mesh.

    params : SchemeParams
      Scheme parameters.

    velocity : VelocityField
      Transporting velocity ``w`` of the material derivative.

    forcing : callable, optional
      ``forcing(points, t)`` returning ``(f, F)``, arrays of shapes (N, 2) and
      (N, 2, 2). No forcing when omitted.

    rule : QuadratureRule, optional
      Rule for the nonlinear, transported and forcing terms (degree 5 by
      default).

    Attributes
    ----------

    newton_history : list of dict
      One entry per solved step: ``{"step", "t", "iterations", "residual"}``.
    """

    def __init__(self, mesh, params, velocity, forcing=None, rule=None):
        self.mesh = mesh
        self.params = params
        self.velocity = velocity
        self.forcing = forcing
        self.rule = get_rule(5) if rule is None else rule
        self.newton_history = []

        n_vertices = mesh.n_vertices
        self.offset_p = 2 * n_vertices
        self.offset_c = 3 * n_vertices
        self.offset_multiplier = 6 * n_vertices
        self.n_dofs = 6 * n_vertices + 1

        dt = params.dt
        self.velocity_mass = assemble_mass(mesh, 2)
        self.conformation_mass = assemble_mass(mesh, 3, FROBENIUS_WEIGHTS)
        conformation_block = (1.0 / dt) * self.conformation_mass
        if params.eps > 0:
            conformation_block = conformation_block + params.eps * assemble_ac(mesh)

        b = assemble_b(mesh)
        mean = SparseMatrix(sparse.csr_matrix(mean_vector(mesh)[:, None]))
        self.linear = block_matrix(
            [
                [
                    (1.0 / dt) * self.velocity_mass + params.nu * assemble_au(mesh),
                    b.T,
                    None,
                    None,
                ],
                [b, -assemble_sh(mesh, params.delta0), None, mean],
                [None, None, conformation_block, None],
                [None, mean.T, None, None],
            ]
        )

        self.velocity_dofs = element_dofs(mesh, 2)
        self.conformation_dofs = self.offset_c + element_dofs(mesh, 3)
        self.free_dofs = self._free_dofs(freeze_velocity=False)
        self.pinned_dofs = self._free_dofs(freeze_velocity=True)

    def _free_dofs(self, freeze_velocity):
        others = np.arange(self.offset_p, self.n_dofs)
        if freeze_velocity:
            return others
        return np.concatenate([free_velocity_dofs(self.mesh), others])

    # Conversions between states and unknown vectors

    def pack(self, state):
        """Unknown vector of a StateTriple."""
        vector = np.empty(self.n_dofs)
        vector[: self.offset_p] = state.u.coeffs
        vector[self.offset_p : self.offset_c] = state.p.coeffs
        vector[self.offset_c : self.offset_multiplier] = state.c.coeffs
        vector[self.offset_multiplier] = state.multiplier
        return vector

    def unpack(self, vector, t):
        mesh = self.mesh
        return StateTriple(
            u=FeFunction(mesh, "vector2", vector[: self.offset_p]),
            p=FeFunction(mesh, "scalar", vector[self.offset_p : self.offset_c]),
            c=FeFunction(
                mesh, "symtensor2", vector[self.offset_c : self.offset_multiplier]
            ),
            t=t,
            multiplier=float(vector[self.offset_multiplier]),
        )

    # Residual and Jacobian

    def data_loads(self, state_prev, t):
        """Part of the residual independent of the unknowns (to be subtracted):
        transported previous values over ``dt`` plus the forcing loads at ``t``.
        """
        dt = self.params.dt
        mesh, rule = self.mesh, self.rule
        loads = np.zeros(self.n_dofs)

        velocity_load = transported_load(state_prev.u, self.velocity, t, dt, rule)
        conformation_load = transported_load(state_prev.c, self.velocity, t, dt, rule)
        conformation_load *= np.tile(FROBENIUS_WEIGHTS, mesh.n_vertices)
        loads[: self.offset_p] = velocity_load / dt
        loads[self.offset_c : self.offset_multiplier] = conformation_load / dt

        if self.forcing is not None:
            points = mesh.quadrature_points(rule)
            f, big_f = self.forcing(points.reshape(-1, 2), t)
            shape = points.shape[:2]
            loads[: self.offset_p] += load_vector(
                mesh, np.asarray(f).reshape(shape + (2,)), rule
            )
            loads[self.offset_c : self.offset_multiplier] += load_vector(
                mesh, project_sym(np.asarray(big_f).reshape(shape + (2, 2))), rule
            )
        return loads

    def _quadrature_data(self, vector):
        state = self.unpack(vector, 0.0)
        return forms.QuadratureData(self.mesh, self.rule, state.u, state.c)

    def residual_vector(self, vector, loads):
        """Residual of the unknown vector ``vector``, all rows included."""
        data = self._quadrature_data(vector)
        result = self.linear @ vector - loads
        result += scatter(
            self.n_dofs, self.velocity_dofs, forms.momentum_terms(data)
        )
        result += scatter(
            self.n_dofs, self.conformation_dofs, forms.conformation_terms(data)
        )
        return result

    def residual(self, state_prev, candidate, t=None):
        """Residual of the scheme at ``candidate`` given the previous level.

        Rows are ordered as the unknowns: momentum, continuity, conformation
        and the pressure-mean row. Boundary velocity rows are included but
        play no role in the solve.
        """
        t = candidate.t if t is None else t
        loads = self.data_loads(state_prev, t)
        return self.residual_vector(self.pack(candidate), loads)

    def jacobian_matrix(self, vector):
        """Jacobian of ``residual_vector`` at ``vector``, all rows and columns."""
        data = self._quadrature_data(vector)
        builder = self.linear.to_builder()
        builder.add_block(
            self.velocity_dofs,
            self.conformation_dofs,
            forms.jacobian_momentum_conformation(data),
        )
        builder.add_block(
            self.conformation_dofs,
            self.velocity_dofs,
            forms.jacobian_conformation_velocity(data),
        )
        builder.add_block(
            self.conformation_dofs,
            self.conformation_dofs,
            forms.jacobian_conformation_conformation(data),
        )
        return finalize(builder)

    def jacobian(self, candidate):
        return self.jacobian_matrix(self.pack(candidate))

    # Newton iteration

    def solve_timestep(self, state_prev, freeze_velocity=False):
        """Computes the next time level by Newton's method.

        Parameters
        ----------

        state_prev : StateTriple
          Previous time level; also the initial guess.

        freeze_velocity : bool, optional
          Keep the velocity at its previous values instead of solving for it.

        Returns
        -------

        StateTriple
          The state at ``state_prev.t + dt``.

        Raises
        ------

        NewtonDivergedError
          If the tolerance is not reached within ``newton_max_iter`` iterations.
        """
        params = self.params
        t = state_prev.t + params.dt
        free = self.pinned_dofs if freeze_velocity else self.free_dofs

        loads = self.data_loads(state_prev, t)
        target = params.newton_tol * (1.0 + np.linalg.norm(loads[free]))
        vector = self.pack(state_prev)
        residual = self.residual_vector(vector, loads)
        norm = np.linalg.norm(residual[free])

        for iteration in range(1, params.newton_max_iter + 1):
            jacobian = self.jacobian_matrix(vector).submatrix(free)
            step = solve(jacobian, -residual[free])

            damping = 1.0
            while True:
                trial = vector.copy()
                trial[free] += damping * step
                trial_residual = self.residual_vector(trial, loads)
                trial_norm = np.linalg.norm(trial_residual[free])
                if trial_norm <= norm or damping / 2 < params.damping_min:
                    break
                damping /= 2

            vector, residual, norm = trial, trial_residual, trial_norm
            if not np.isfinite(norm):
                raise NewtonDivergedError(norm, iteration)
            if norm <= target:
                break
        else:
            raise NewtonDivergedError(norm, params.newton_max_iter)

        self.newton_history.append(
            {
                "step": len(self.newton_history) + 1,
                "t": t,
                "iterations": iteration,
                "residual": norm,
            }
        )
        return self.unpack(vector, t)

    def initial_state(self, u0, c0):
        """Initial level: Stokes projection of ``(u0, 0)`` for velocity and
        pressure, nodal interpolant of ``c0`` for the conformation tensor.

        Parameters
        ----------

        u0 : AnalyticField or FeFunction
          Initial velocity, with its gradient.

        c0 : callable
          Vectorized initial conformation tensor, (N, 2) -> (N, 2, 2).
        """
        u_hat, p_hat = stokes_project(u0, None, self.mesh, self.params, self.rule)
        c_h = FeFunction.interpolate(self.mesh, c0, kind="symtensor2")
        return StateTriple(u=u_hat, p=p_hat, c=c_h, t=0.0)

    def advise(self, logger=None):
        """Checks the step conditions of the upwind map and the uniqueness
        conditions; warns (never raises) when one fails.
        """
        params = self.params
        warn_step_condition(self.velocity, params.dt, logger=logger)
        advisory = uniqueness_advisory(self.mesh.h, params.dt, params.eps)
        if not advisory["satisfied"]:
            message = "uniqueness condition %s not met (bound %.3g, dt %.3g)" % (
                advisory["condition"],
                advisory["bound"],
                params.dt,
            )
            warnings.warn(message, UserWarning)
            if logger is not None:
                logger(message="peterlin - %s" % message)
        return advisory

    def run(
        self,
        initial,
        callback=None,
        keep_trajectory=True,
        freeze_velocity=False,
        logger=None,
    ):
        """Runs the time loop ``n = 1, ..., N_T``.

        Parameters
        ----------

        initial : StateTriple
          State at ``t = 0``.

        callback : callable, optional
          Called as ``callback(step, state)`` for every level, ``step = 0``
          included.

        keep_trajectory : bool, optional
          Return every level. When false only the last one is kept.

        logger : {"bar", None} or any proglog logger, optional
          Progress bar over the time steps.

        Returns
        -------

        list of StateTriple
          Levels ``0..N_T`` (or the final one only).

        Raises
        ------

        StepFailedError
          Wrapping the error of the failing step.
        """
        logger = proglog.default_bar_logger(logger)
        self.advise(logger)
        logger(
            message="peterlin - %d time steps on %d triangles"
            % (self.params.n_steps, self.mesh.n_triangles)
        )

        state = initial
        trajectory = [state]
        if callback is not None:
            callback(0, state)
        for step in logger.iter_bar(step=range(1, self.params.n_steps + 1)):
            try:
                state = self.solve_timestep(state, freeze_velocity=freeze_velocity)
            except Exception as err:
                raise StepFailedError(step, ": %s" % err) from err
            if callback is not None:
                callback(step, state)
            if keep_trajectory:
                trajectory.append(state)
            else:
                trajectory = [state]
        return trajectory

    def average_newton_iterations(self):
        if not self.newton_history:
            return 0.0
        return float(np.mean([entry["iterations"] for entry in self.newton_history]))
