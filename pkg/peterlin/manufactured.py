"""Manufactured solution of the Peterlin model on the unit square, its forcing
terms, and the relative error norms of a computed trajectory.

The exact solution is built symbolically with sympy, every derivative is taken
symbolically and the resulting expressions are lambdified to numpy.
"""

from functools import lru_cache

import numpy as np
import sympy

from peterlin.characteristics import VelocityField
from peterlin.fem.FeFunction import AnalyticField, FeFunction
from peterlin.fem.norms import (
    h1_seminorm_squared,
    l2_norm_squared,
    pressure_h_seminorm,
)
from peterlin.fem.quadrature import get_rule


x1, x2, t = sympy.symbols("x1 x2 t", real=True)
nu, eps = sympy.symbols("nu eps", positive=True)
SPACE = (x1, x2)


def _exact_fields():
    """Stream function, velocity, pressure and conformation tensor."""
    pi = sympy.pi
    psi = (
        sympy.sqrt(3)
        / (2 * pi)
        * sympy.sin(pi * x1) ** 2
        * sympy.sin(pi * x2) ** 2
        * sympy.sin(pi * (x1 + x2 + t))
    )
    u = sympy.Matrix([sympy.diff(psi, x2), -sympy.diff(psi, x1)])
    p = sympy.sin(pi * (x1 + 2 * x2 + t))
    envelope = sympy.Rational(1, 2) * sympy.sin(pi * x1) ** 2 * sympy.sin(pi * x2) ** 2
    c11 = envelope * sympy.sin(pi * (x1 + t)) + 1
    c22 = envelope * sympy.sin(pi * (x2 + t)) + 1
    c12 = envelope * sympy.sin(pi * (x1 + x2 + t))
    c = sympy.Matrix([[c11, c12], [c12, c22]])
    return psi, u, p, c


def _gradient(vector):
    """``(i, j) = d v_i / d x_j``."""
    return vector.jacobian(sympy.Matrix(SPACE))


def _divergence(matrix):
    """Row-wise divergence ``(div A)_i = sum_j d A_ij / d x_j``."""
    return sympy.Matrix(
        [sum(sympy.diff(matrix[i, j], SPACE[j]) for j in range(2)) for i in range(2)]
    )


def _forcing_expressions(u, p, c):
    grad_u = _gradient(u)
    strain = (grad_u + grad_u.T) / 2
    trace_c = c.trace()
    f = (
        sympy.diff(u, t)
        + grad_u * u
        - _divergence(2 * nu * strain)
        + sympy.Matrix([sympy.diff(p, x) for x in SPACE])
        - _divergence(trace_c * c)
    )
    transport = sum((u[k] * sympy.diff(c, SPACE[k]) for k in range(2)), sympy.zeros(2))
    laplacian = sum((sympy.diff(c, x, 2) for x in SPACE), sympy.zeros(2))
    big_f = (
        sympy.diff(c, t)
        + transport
        - eps * laplacian
        - grad_u * c
        - c * grad_u.T
        + trace_c**2 * c
        - trace_c * sympy.eye(2)
    )
    return f, big_f


def _map_nested(items, function):
    if isinstance(items, list):
        return [_map_nested(item, function) for item in items]
    return function(items)


def _flatten(items):
    if isinstance(items, list):
        return [leaf for item in items for leaf in _flatten(item)]
    return [items]


def _with_gradient(array):
    """Appends a last axis holding the derivatives along ``x1`` and ``x2``."""
    return sympy.Array(
        _map_nested(array.tolist(), lambda item: [sympy.diff(item, x) for x in SPACE])
    )


def _vectorize(expression, arguments):
    """Lambdifies a sympy expression or array into a function of broadcastable
    numpy arguments returning an array of shape ``broadcast + expression shape``.
    """
    if isinstance(expression, sympy.NDimArray):
        shape = tuple(expression.shape)
        flat = _flatten(expression.tolist())
    else:
        shape = ()
        flat = [expression]
    function = sympy.lambdify(arguments, flat, modules="numpy", cse=True)

    def evaluate(*values):
        broadcast = np.broadcast(*values).shape
        results = [
            np.broadcast_to(np.asarray(item, dtype=float), broadcast)
            for item in function(*values)
        ]
        return np.stack(results, axis=-1).reshape(broadcast + shape)

    return evaluate


class ExactSolution:
    """Closed-form solution ``(u, p, C)`` with ``u = (d psi/d x2, -d psi/d x1)``.

    All evaluators take an (N, 2) array of points and a time ``t``.

    Examples
    --------

    >>> exact = ExactSolution()
    >>> float(exact.eval_exact([0.5, 0.5], 0.0)["C"][0, 0])
    1.5
    """

    def __init__(self):
        psi, u, p, c = _exact_fields()
        self.expressions = {"psi": psi, "u": u, "p": p, "C": c}
        u = sympy.Array(list(u))
        c = sympy.Array(c.tolist())
        grad_u = _with_gradient(u)
        grad_c = _with_gradient(c)

        arguments = (x1, x2, t)
        self._evaluators = {
            name: _vectorize(expression, arguments)
            for name, expression in [
                ("psi", psi),
                ("u", u),
                ("p", p),
                ("C", c),
                ("grad_u", grad_u),
                ("hess_u", _with_gradient(grad_u)),
                ("grad_p", sympy.Array([sympy.diff(p, x) for x in SPACE])),
                ("u_t", sympy.diff(u, t)),
                ("p_t", sympy.diff(p, t)),
                ("C_t", sympy.diff(c, t)),
                ("grad_C", grad_c),
                ("hess_C", _with_gradient(grad_c)),
            ]
        }

        f, big_f = _forcing_expressions(*_exact_fields()[1:])
        self.forcing_expressions = {"f": f, "F": big_f}
        forcing_arguments = (x1, x2, t, nu, eps)
        self._forcing = {
            "f": _vectorize(sympy.Array(list(f)), forcing_arguments),
            "F": _vectorize(sympy.Array(big_f.tolist()), forcing_arguments),
        }

    def evaluate(self, name, points, t):
        """Evaluates ``name`` (one of ``psi, u, p, C, grad_u, hess_u, grad_p,
        u_t, p_t, C_t, grad_C, hess_C``) at the (N, 2) points and time ``t``.

        Gradient axes come last: ``grad_u[n, i, j] = d u_i / d x_j``,
        ``grad_C[n, i, j, l] = d C_ij / d x_l``.
        """
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return self._evaluators[name](points[:, 0], points[:, 1], t)

    def velocity(self, points, t):
        return self.evaluate("u", points, t)

    def velocity_gradient(self, points, t):
        return self.evaluate("grad_u", points, t)

    def pressure(self, points, t):
        return self.evaluate("p", points, t)

    def conformation(self, points, t):
        return self.evaluate("C", points, t)

    def eval_exact(self, x, t):
        """Exact ``{"u": 2-vector, "p": float, "C": 2x2 matrix}`` at one point."""
        point = np.reshape(np.asarray(x, dtype=float), (1, 2))
        return {
            "u": self.velocity(point, t)[0],
            "p": float(self.pressure(point, t)[0]),
            "C": self.conformation(point, t)[0],
        }

    def derivatives(self, points, t):
        """All derivatives entering the forcing, as a dict of arrays."""
        return {
            name: self.evaluate(name, points, t)
            for name in ("grad_u", "hess_u", "grad_p", "u_t", "C_t", "grad_C", "hess_C")
        }

    def forcing(self, points, t, nu, eps):
        """Forcing ``(f, F)`` making the exact solution solve the model with
        transporting velocity ``w = u``. Arrays of shapes (N, 2) and (N, 2, 2).
        """
        points = np.atleast_2d(np.asarray(points, dtype=float))
        args = (points[:, 0], points[:, 1], t, nu, eps)
        return self._forcing["f"](*args), self._forcing["F"](*args)

    def forcing_provider(self, nu, eps):
        """``forcing(points, t)`` callable with the parameters bound, as
        expected by ``LagrangeGalerkin``.
        """
        return lambda points, t: self.forcing(points, t, nu, eps)

    def strong_residuals(self, points, t, nu, eps):
        """Residuals of the momentum and conformation equations evaluated from
        the numeric derivatives and forcing. Zero up to rounding.
        """
        d = self.derivatives(points, t)
        u = self.velocity(points, t)
        c = self.conformation(points, t)
        f, big_f = self.forcing(points, t, nu, eps)
        grad_u, grad_c = d["grad_u"], d["grad_C"]
        trace_c = c[:, 0, 0] + c[:, 1, 1]

        # div(2 nu D(u)) = nu (lap u + grad div u)
        lap_u = np.einsum("nixx->ni", d["hess_u"])
        grad_div_u = np.einsum("nxxj->nj", d["hess_u"])
        grad_trace_c = grad_c[:, 0, 0] + grad_c[:, 1, 1]
        div_stress = np.einsum("nj,nij->ni", grad_trace_c, c) + trace_c[:, None] * (
            np.einsum("nijj->ni", grad_c)
        )
        momentum = (
            d["u_t"]
            + np.einsum("nij,nj->ni", grad_u, u)
            - nu * (lap_u + grad_div_u)
            + d["grad_p"]
            - div_stress
            - f
        )

        lap_c = np.einsum("nijxx->nij", d["hess_C"])
        conformation = (
            d["C_t"]
            + np.einsum("nk,nijk->nij", u, grad_c)
            - eps * lap_c
            - grad_u @ c
            - c @ np.swapaxes(grad_u, 1, 2)
            + (trace_c**2)[:, None, None] * c
            - trace_c[:, None, None] * np.eye(2)
            - big_f
        )
        return momentum, conformation

    def velocity_field(self):
        """The transporting velocity ``w = u`` as a VelocityField."""
        return VelocityField(self.velocity, self.velocity_gradient)

    def initial_velocity(self):
        """``u(., 0)`` with its gradient, ready for the Stokes projection."""
        return AnalyticField(
            lambda points: self.velocity(points, 0.0),
            lambda points: self.velocity_gradient(points, 0.0),
        )

    def initial_conformation(self):
        return lambda points: self.conformation(points, 0.0)

    def interpolate(self, mesh, t):
        """Nodal interpolants ``(u, p, C)`` at time ``t``. Boundary velocity
        values are set to exactly 0.
        """
        vertices = mesh.vertices
        velocity = self.velocity(vertices, t)
        velocity[mesh.boundary_vertex] = 0.0
        return (
            FeFunction.interpolate(mesh, velocity, "vector2"),
            FeFunction.interpolate(mesh, self.pressure(vertices, t), "scalar"),
            FeFunction.interpolate(mesh, self.conformation(vertices, t), "symtensor2"),
        )


@lru_cache(maxsize=None)
def get_exact_solution():
    """Shared ExactSolution; symbolic differentiation runs once per process."""
    return ExactSolution()


def _trace_weighted_squared(error, rule):
    """``||tr(E) E||_0^2`` for a symtensor2 function ``E``."""
    values = error.at_quadrature(rule)
    weighted = (values[..., 0, 0] + values[..., 1, 1])[..., None, None] * values
    weights = error.mesh.areas[:, None] * rule.weights[None, :]
    return float(np.einsum("tq,tqij,tqij->", weights, weighted, weighted))


class ErrorAccumulator:
    """Accumulates the norms behind the relative errors level by level, so a
    trajectory need not be stored. Use as the ``callback`` of
    ``LagrangeGalerkin.run`` (``accumulator(step, state)``).

    Parameters
    ----------

    exact : ExactSolution
      The exact solution.

    mesh : TriMesh
      Mesh of the discrete states.

    dt : float
      Time increment (the ``l2`` time sums carry a factor ``dt``).
    """

    def __init__(self, exact, mesh, dt):
        self.exact = exact
        self.mesh = mesh
        self.dt = dt
        self.rule = get_rule(5)
        self.max_error = {"u": 0.0, "C": 0.0}
        self.max_exact = {"u": 0.0, "C": 0.0}
        self.sums = {
            name: 0.0
            for name in (
                "u_h1",
                "u_h1_exact",
                "p_l2",
                "p_h",
                "p_l2_exact",
                "C_h1",
                "C_h1_exact",
                "C_trace",
            )
        }
        self.steps = []

    def __call__(self, step, state):
        self.add(step, state)

    def add(self, step, state):
        u_exact, p_exact, c_exact = self.exact.interpolate(self.mesh, state.t)
        error_u = state.u - u_exact
        error_p = state.p - p_exact
        error_c = state.c - c_exact

        self.max_error["u"] = max(self.max_error["u"], l2_norm_squared(error_u))
        self.max_exact["u"] = max(self.max_exact["u"], l2_norm_squared(u_exact))
        self.max_error["C"] = max(self.max_error["C"], l2_norm_squared(error_c))
        self.max_exact["C"] = max(self.max_exact["C"], l2_norm_squared(c_exact))
        self.steps.append(step)
        if step == 0:
            return

        def h1(function):
            return l2_norm_squared(function) + h1_seminorm_squared(function)

        dt = self.dt
        sums = self.sums
        sums["u_h1"] += dt * h1(error_u)
        sums["u_h1_exact"] += dt * h1(u_exact)
        sums["p_l2"] += dt * l2_norm_squared(error_p)
        sums["p_h"] += dt * pressure_h_seminorm(error_p) ** 2
        sums["p_l2_exact"] += dt * l2_norm_squared(p_exact)
        sums["C_h1"] += dt * h1(error_c)
        sums["C_h1_exact"] += dt * h1(c_exact)
        sums["C_trace"] += dt * _trace_weighted_squared(error_c, self.rule)

    def relative_errors(self):
        """``{"Er1": ..., "Er6": ..., "trace_weighted": ...}``.

        ``trace_weighted`` is the absolute ``l2(L2)`` norm of
        ``tr(C_h - C) (C_h - C)``.
        """
        sums = self.sums
        return {
            "Er1": _ratio(self.max_error["u"], self.max_exact["u"]),
            "Er2": _ratio(sums["u_h1"], sums["u_h1_exact"]),
            "Er3": _ratio(sums["p_l2"], sums["p_l2_exact"]),
            "Er4": _ratio(sums["p_h"], sums["p_l2_exact"]),
            "Er5": _ratio(self.max_error["C"], self.max_exact["C"]),
            "Er6": _ratio(sums["C_h1"], sums["C_h1_exact"]),
            "trace_weighted": float(np.sqrt(sums["C_trace"])),
        }


def _ratio(numerator_squared, denominator_squared):
    """Square root of a ratio of squared norms, 0 when both vanish."""
    if numerator_squared == 0:
        return 0.0
    if denominator_squared == 0:
        return float("inf")
    return float(np.sqrt(numerator_squared / denominator_squared))


def relative_errors(trajectory, exact, mesh, dt):
    """Relative errors Er1..Er6 of a complete trajectory (levels ``0..N_T``)
    against the nodal interpolants of ``exact``.

    ``l_inf`` time norms take the maximum over all levels, ``l2`` time norms
    sum levels ``1..N_T`` with weight ``dt``.
    """
    accumulator = ErrorAccumulator(exact, mesh, dt)
    for step, state in enumerate(trajectory):
        accumulator.add(step, state)
    return accumulator.relative_errors()
