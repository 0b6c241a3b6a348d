"""First-order characteristics: the upwind map ``X(x) = x - w(x, t) dt`` and the
transported loads ``(g o X, phi)`` of the material derivative.
"""

import warnings

import numpy as np

from peterlin.decorators import requires_positive_step
from peterlin.fem.assembly import load_vector
from peterlin.fem.quadrature import get_rule
from peterlin.mesh.TriMesh import PointOutsideDomainError, snap_to_domain


# Number of boundary samples checked for a boundary-compatible field.
BOUNDARY_SAMPLES = 100

BOUNDARY_VELOCITY_TOLERANCE = 1e-12


class UpwindEscapeError(PointOutsideDomainError):
    """Raised when an upwind point leaves the domain by more than the snapping
    tolerance, which means the step condition of the characteristics map is
    violated.
    """

    default_message = "upwind point escaped domain"


def boundary_samples(n_samples=BOUNDARY_SAMPLES):
    """``n_samples`` points spread evenly along the boundary of the unit square."""
    s = (np.arange(n_samples) + 0.5) * 4.0 / n_samples
    side, offset = np.divmod(s, 1.0)
    zeros, ones = np.zeros_like(offset), np.ones_like(offset)
    x = np.choose(side.astype(int), [offset, ones, 1.0 - offset, zeros])
    y = np.choose(side.astype(int), [zeros, offset, ones, 1.0 - offset])
    return np.stack([x, y], axis=1)


class VelocityField:
    """Transporting velocity ``w(x, t)``.

    Parameters
    ----------

    evaluate : callable
      ``evaluate(points, t)`` returning the (N, 2) velocities at the (N, 2)
      ``points`` and time ``t``.

    gradient : callable, optional
      ``gradient(points, t)`` returning (N, 2, 2) arrays with
      ``(i, j) = d w_i / d x_j``. Used by ``seminorm_w1inf``.

    boundary_compatible : bool, optional
      When true, ``w`` is checked to vanish on the boundary at ``t = 0``
      (sampled at ``BOUNDARY_SAMPLES`` points, ``|w| <= 1e-12``).

    Raises
    ------

    ValueError
      If a boundary-compatible field does not vanish on the boundary.
    """

    def __init__(self, evaluate, gradient=None, boundary_compatible=True):
        self.evaluate = evaluate
        self.gradient = gradient
        self.boundary_compatible = boundary_compatible
        self._mesh = None
        if boundary_compatible:
            self.check_boundary()

    @classmethod
    def from_function(cls, evaluate, gradient=None, boundary_compatible=True):
        return cls(evaluate, gradient, boundary_compatible)

    @classmethod
    def from_fefunction(cls, velocity, boundary_compatible=True):
        """Time-independent field given by a discrete ``vector2`` function."""
        if velocity.kind != "vector2":
            raise ValueError(
                "A velocity field requires a 'vector2' function, got '%s'"
                % velocity.kind
            )
        mesh = velocity.mesh

        def evaluate(points, t):
            triangles, coords = mesh.locate_many(points)
            return velocity.evaluate_at(triangles, coords)

        def gradient(points, t):
            triangles, _ = mesh.locate_many(points)
            return velocity.gradients()[triangles]

        field = cls(evaluate, gradient, boundary_compatible)
        field._mesh = mesh
        field._nodal_gradient = velocity.gradients()
        return field

    @classmethod
    def constant(cls, vector):
        vector = np.asarray(vector, dtype=float)
        return cls(
            lambda points, t: np.broadcast_to(vector, np.shape(points)).copy(),
            lambda points, t: np.zeros((len(points), 2, 2)),
            boundary_compatible=False,
        )

    @classmethod
    def zero(cls):
        return cls.constant([0.0, 0.0])

    def __call__(self, points, t):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return np.asarray(self.evaluate(points, t), dtype=float).reshape(-1, 2)

    def check_boundary(self, t=0.0):
        """Raises ValueError if ``w`` does not vanish at the boundary samples."""
        samples = boundary_samples()
        speeds = np.hypot(*self(samples, t).T)
        worst = int(np.argmax(speeds))
        if speeds[worst] > BOUNDARY_VELOCITY_TOLERANCE:
            raise ValueError(
                "The velocity field is flagged boundary-compatible but "
                "|w(%s)| = %.3e" % (samples[worst].tolist(), speeds[worst])
            )

    def seminorm_w1inf(self, t=0.0, resolution=64):
        """Estimate of ``|w(t)|_{W^{1,inf}} = max_ij sup |d w_i / d x_j|``.

        Discrete fields use their exact piecewise constant gradients; analytic
        fields are sampled on a ``resolution`` x ``resolution`` grid, through
        ``gradient`` when given and central differences otherwise.
        """
        if self._mesh is not None:
            return float(np.abs(self._nodal_gradient).max())

        coords = (np.arange(resolution) + 0.5) / resolution
        xx, yy = np.meshgrid(coords, coords)
        points = np.stack([xx.ravel(), yy.ravel()], axis=1)
        if self.gradient is not None:
            gradient = np.asarray(self.gradient(points, t))
        else:
            step = 1e-6
            gradient = np.empty((len(points), 2, 2))
            for j in range(2):
                shift = np.zeros(2)
                shift[j] = step
                gradient[:, :, j] = (
                    self(points + shift, t) - self(points - shift, t)
                ) / (2 * step)
        return float(np.abs(gradient).max())


@requires_positive_step
def upwind_points(w, points, t, dt):
    """Vectorized ``upwind_point`` for an (N, 2) array of points.

    Raises
    ------

    UpwindEscapeError
      If a point lands farther than ``SNAP_TOLERANCE`` outside the unit square.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    feet = points - dt * w(points, t)
    return snap_to_domain(feet, error_class=UpwindEscapeError)


def upwind_point(w, x, t, dt):
    """Foot of the characteristic ``x - w(x, t) dt``, snapped onto the boundary
    when it lies within ``SNAP_TOLERANCE`` outside.

    Examples
    --------

    >>> w = VelocityField.constant([1.0, 0.0])
    >>> upwind_point(w, [0.5, 0.5], 0.0, 0.1)
    array([0.4, 0.5])
    """
    return upwind_points(w, np.reshape(x, (1, 2)), t, dt)[0]


def check_step_condition(w_sup_w1inf, dt):
    """Evaluates the step conditions of the upwind map.

    Parameters
    ----------

    w_sup_w1inf : float
      Bound of ``|w|_{W^{1,inf}}`` over the time interval.

    dt : float
      Time increment.

    Returns
    -------

    dict
      ``bijective``: ``dt |w| < 1``, under which the map is one-to-one onto
      the domain. ``jacobian_bounded``: ``dt |w| <= 1/4``, under which its
      Jacobian stays within ``[1/2, 3/2]``.
    """
    if w_sup_w1inf < 0:
        raise ValueError("'w_sup_w1inf' should be nonnegative, got %r" % w_sup_w1inf)
    product = dt * w_sup_w1inf
    return {"bijective": product < 1.0, "jacobian_bounded": product <= 0.25}


def warn_step_condition(w, dt, t=0.0, logger=None):
    """Emits a warning when the step conditions fail for ``w`` at time ``t``.

    Returns the result of ``check_step_condition``.
    """
    seminorm = w.seminorm_w1inf(t)
    conditions = check_step_condition(seminorm, dt)
    failed = [name for name, ok in conditions.items() if not ok]
    if failed:
        message = "step condition not met (%s): dt |w|_W1inf = %.3g" % (
            ", ".join(failed),
            dt * seminorm,
        )
        warnings.warn(message, UserWarning)
        if logger is not None:
            logger(message="peterlin - %s" % message)
    return conditions


def transported_load(g_prev, w, t, dt, rule=None):
    """Load vector ``(g_prev o X, phi_a)`` for every test basis function.

    The composed function is sampled at the quadrature points ``x_q`` of every
    triangle: ``X(x_q)`` is located in the mesh and ``g_prev`` evaluated there.
    Components are integrated separately (no Frobenius weighting).

    Parameters
    ----------

    g_prev : FeFunction
      Function of the previous time level.

    w : VelocityField
      Transporting velocity, evaluated at time ``t``.

    t, dt : float
      Current time and time increment.

    rule : QuadratureRule, optional
      Defaults to the 7-point degree-5 rule.

    Returns
    -------

    numpy.ndarray
      Interleaved vector of length ``n_vertices * components``.
    """
    rule = get_rule(5) if rule is None else rule
    mesh = g_prev.mesh
    points = mesh.quadrature_points(rule)
    feet = upwind_points(w, points.reshape(-1, 2), t, dt)
    hints = np.repeat(np.arange(mesh.n_triangles), len(rule))
    triangles, coords = mesh.locate_many(feet, hints=hints)
    local = g_prev.nodal[mesh.triangles[triangles]]
    values = np.einsum("na,nac->nc", coords, local)
    return load_vector(
        mesh, values.reshape(mesh.n_triangles, len(rule), g_prev.n_components), rule
    )
