"""Property suites run by ``peterlin check``.

Every suite is a function ``suite(config, rng, **options)`` returning a
``(passed, detail)`` pair, or raising ``SkipSuite``.
"""

import numpy as np

from peterlin.characteristics import VelocityField, transported_load
from peterlin.fem import (
    FeFunction,
    assemble_ac,
    assemble_mass,
    get_rule,
    h1_norm,
)
from peterlin.manufactured import get_exact_solution
from peterlin.mesh import build_structured
from peterlin.scheme import LagrangeGalerkin, SchemeParams, StateTriple, stokes_project
from peterlin.scheme.tensors import adjugate as default_adjugate
from peterlin.scheme.tensors import cancellation_residual, determinant
from peterlin.tools import convergence_slopes


N_TENSOR_SAMPLES = 100_000
N_JACOBIAN_SAMPLES = 20
N_FORCING_SAMPLES = 1000


class SkipSuite(Exception):
    """Raised by a suite that does not apply to the configuration."""


def _random_symmetric(rng, size, scale=10.0):
    d = rng.uniform(-scale, scale, (size, 2, 2))
    return 0.5 * (d + np.swapaxes(d, 1, 2))


def suite_cancellation(config, rng, adjugate=default_adjugate):
    """Cancellation identity of the adjugate term on random matrix pairs."""
    e = rng.uniform(-10, 10, (N_TENSOR_SAMPLES, 2, 2))
    d = _random_symmetric(rng, N_TENSOR_SAMPLES)
    residual = np.abs(cancellation_residual(e, d, adjugate=adjugate))
    scale = 1.0 + np.linalg.norm(e, axis=(1, 2)) * np.linalg.norm(d, axis=(1, 2)) ** 2
    worst = float((residual / scale).max())
    return worst <= 1e-10, "max scaled residual %.2e" % worst


def suite_adjugate(config, rng, adjugate=default_adjugate):
    """``D adj(D) = det(D) I`` on random symmetric matrices."""
    d = _random_symmetric(rng, N_TENSOR_SAMPLES)
    product = d @ adjugate(d)
    expected = determinant(d)[:, None, None] * np.eye(2)
    scale = 1.0 + np.linalg.norm(d, axis=(1, 2)) ** 2
    worst = float((np.abs(product - expected).max(axis=(1, 2)) / scale).max())
    return worst <= 1e-12, "max scaled deviation %.2e" % worst


def _manufactured_solver(config, level, dt):
    exact = get_exact_solution()
    mesh = build_structured(level)
    params = SchemeParams(
        nu=config.nu, eps=config.eps, delta0=config.delta0, dt=dt, t_end=dt
    )
    solver = LagrangeGalerkin(
        mesh,
        params,
        exact.velocity_field(),
        exact.forcing_provider(config.nu, config.eps),
    )
    u, p, c = exact.interpolate(mesh, 0.0)
    return solver, StateTriple(u, p, c, 0.0)


def suite_jacobian(config, rng):
    """Analytic Jacobian action against central differences of the residual
    on random states and directions.
    """
    solver, previous = _manufactured_solver(config, 8, 1.0 / 16)
    loads = solver.data_loads(previous, solver.params.dt)
    free = solver.free_dofs
    worst = 0.0
    for _ in range(N_JACOBIAN_SAMPLES):
        state = solver.pack(previous)
        state[free] += 0.1 * rng.standard_normal(free.size)
        direction = np.zeros(solver.n_dofs)
        direction[free] = rng.uniform(-1, 1, free.size)

        step = 1e-6 * max(1.0, np.abs(state).max())
        forward = solver.residual_vector(state + step * direction, loads)
        backward = solver.residual_vector(state - step * direction, loads)
        difference = (forward - backward)[free] / (2 * step)
        action = solver.jacobian_matrix(state).submatrix(free) @ direction[free]
        error = np.linalg.norm(difference - action) / np.linalg.norm(action)
        worst = max(worst, error)
    return worst <= 1e-6, "max relative error %.2e" % worst


def suite_transport(config, rng):
    """With ``w = 0`` the transported load is the mass action."""
    mesh = build_structured(8)
    worst = 0.0
    for kind, components in (("scalar", 1), ("vector2", 2), ("symtensor2", 3)):
        g = FeFunction(mesh, kind, rng.standard_normal(components * mesh.n_vertices))
        load = transported_load(g, VelocityField.zero(), 0.0, 0.1, get_rule(5))
        expected = assemble_mass(mesh, components) @ g.coeffs
        worst = max(worst, float(np.abs(load - expected).max()))
    return worst <= 1e-12, "max deviation %.2e" % worst


def _backward_euler_reaction(c, dt):
    """One backward Euler step of ``c' = -4 c^3 + 2 c``, solved by Newton."""
    value = c
    for _ in range(50):
        residual = value - c - dt * (-4 * value**3 + 2 * value)
        derivative = 1 - dt * (-12 * value**2 + 2)
        update = residual / derivative
        value -= update
        if abs(update) < 1e-16 * (1 + abs(value)):
            break
    return value


def suite_reaction(config, rng, n_steps=20, dt=0.05, c0=0.5):
    """With the velocity held at 0, a constant ``C = c I`` follows the scalar
    reaction ODE integrated by backward Euler.
    """
    mesh = build_structured(4)
    params = SchemeParams(
        nu=config.nu,
        eps=config.eps,
        delta0=config.delta0,
        dt=dt,
        t_end=n_steps * dt,
        newton_tol=1e-13,
    )
    solver = LagrangeGalerkin(mesh, params, VelocityField.zero())
    c = FeFunction.interpolate(mesh, c0 * np.eye(2), kind="symtensor2")
    state = StateTriple(
        FeFunction(mesh, "vector2"), FeFunction(mesh, "scalar"), c, 0.0
    )

    oracle = c0
    worst = 0.0
    for _ in range(n_steps):
        state = solver.solve_timestep(state, freeze_velocity=True)
        oracle = _backward_euler_reaction(oracle, dt)
        nodal = state.c.nodal
        worst = max(
            worst,
            float(np.abs(nodal[:, [0, 2]] - oracle).max()),
            float(np.abs(nodal[:, 1]).max()),
        )
    return worst <= 1e-9, "max deviation %.2e after %d steps" % (worst, n_steps)


def suite_stokes(config, rng, levels=(16, 32, 64)):
    """Discrete velocities are fixed points of the Stokes projection, and the
    projection of the initial velocity converges in H1.
    """
    mesh = build_structured(8)
    params = SchemeParams(
        nu=config.nu, eps=config.eps, delta0=config.delta0, dt=1, t_end=1
    )
    coeffs = rng.standard_normal((mesh.n_vertices, 2))
    coeffs[mesh.boundary_vertex] = 0.0
    u_h = FeFunction(mesh, "vector2", coeffs)
    u_hat, p_hat = stokes_project(u_h, None, mesh, params)
    fixed = max(
        float(np.abs(u_hat.coeffs - u_h.coeffs).max()),
        float(np.abs(p_hat.coeffs).max()),
    )

    exact = get_exact_solution()
    errors = []
    for level in levels:
        mesh = build_structured(level)
        u_hat, _ = stokes_project(exact.initial_velocity(), None, mesh, params)
        u_interpolant, _, _ = exact.interpolate(mesh, 0.0)
        errors.append(h1_norm(u_hat - u_interpolant))
    slopes = convergence_slopes(errors, list(levels))

    passed = fixed <= 1e-10 and all(slope >= 0.9 for slope in slopes)
    return passed, "fixed point deviation %.2e, H1 slopes %s" % (
        fixed,
        ", ".join("%.2f" % slope for slope in slopes),
    )


def suite_diffusion(config, rng):
    """The conformation diffusion enters the residual as ``eps a_c(C, D)``."""
    if config.eps == 0:
        raise SkipSuite("eps = 0")
    solver, previous = _manufactured_solver(config, 8, 1.0 / 16)
    zero_eps = type(config)(**{**config.to_dict(), "eps": 0.0})
    solver_0, _ = _manufactured_solver(zero_eps, 8, 1.0 / 16)

    state = solver.pack(previous)
    state[solver.offset_c : solver.offset_multiplier] += rng.standard_normal(
        3 * solver.mesh.n_vertices
    )
    loads = solver.data_loads(previous, solver.params.dt)
    difference = solver.residual_vector(state, loads) - solver_0.residual_vector(
        state, loads
    )
    c = state[solver.offset_c : solver.offset_multiplier]
    expected = np.zeros(solver.n_dofs)
    expected[solver.offset_c : solver.offset_multiplier] = config.eps * (
        assemble_ac(solver.mesh) @ c
    )
    deviation = float(np.abs(difference - expected).max())
    scale = 1.0 + float(np.abs(solver.residual_vector(state, loads)).max())
    return deviation <= 1e-12 * scale, "max deviation %.2e" % deviation


def _central_difference(function, points, t, axis, step):
    if axis == "t":
        return (function(points, t + step) - function(points, t - step)) / (2 * step)
    shift = np.zeros(2)
    shift[axis] = step
    return (function(points + shift, t) - function(points - shift, t)) / (2 * step)


def suite_forcing(config, rng, step=1e-5):
    """Analytic derivatives of the exact solution against central differences."""
    exact = get_exact_solution()
    points = rng.uniform(0, 1, (N_FORCING_SAMPLES, 2))
    t = float(rng.uniform(0, 1))

    def evaluator(name):
        return lambda points, t: exact.evaluate(name, points, t)

    pairs = [
        ("u", "grad_u"),
        ("grad_u", "hess_u"),
        ("p", "grad_p"),
        ("C", "grad_C"),
        ("grad_C", "hess_C"),
    ]
    worst = 0.0
    for base, derivative in pairs:
        analytic = exact.evaluate(derivative, points, t)
        numeric = np.stack(
            [
                _central_difference(evaluator(base), points, t, j, step)
                for j in range(2)
            ],
            axis=-1,
        )
        worst = max(worst, _relative_deviation(numeric, analytic))
    for base, derivative in (("u", "u_t"), ("p", "p_t"), ("C", "C_t")):
        analytic = exact.evaluate(derivative, points, t)
        numeric = _central_difference(evaluator(base), points, t, "t", step)
        worst = max(worst, _relative_deviation(numeric, analytic))

    momentum, conformation = exact.strong_residuals(points, t, config.nu, config.eps)
    f, big_f = exact.forcing(points, t, config.nu, config.eps)
    strong = max(_relative_size(momentum, f), _relative_size(conformation, big_f))
    return worst <= 1e-7 and strong <= 1e-9, (
        "max relative derivative deviation %.2e, strong residual %.2e" % (worst, strong)
    )


def _relative_deviation(numeric, analytic):
    return float(np.abs(numeric - analytic).max() / (1.0 + np.abs(analytic).max()))


def _relative_size(residual, reference):
    return float(np.abs(residual).max() / (1.0 + np.abs(reference).max()))


SUITES = {
    "cancellation": suite_cancellation,
    "adjugate": suite_adjugate,
    "jacobian": suite_jacobian,
    "transport": suite_transport,
    "reaction": suite_reaction,
    "stokes": suite_stokes,
    "diffusion": suite_diffusion,
    "forcing": suite_forcing,
}


def cmd_check(config, adjugate=default_adjugate, suites=None, stream=print, seed=0):
    """Runs the property suites and reports pass/fail per suite.

    Parameters
    ----------

    config : RunConfig
      Supplies ``nu``, ``eps`` and ``delta0``.

    adjugate : callable, optional
      Adjugate used by the tensor suites, replaceable to check that they
      detect a faulty implementation.

    suites : list of str, optional
      Names of the suites to run, all by default.

    Returns
    -------

    int
      0 when no suite failed, 1 otherwise.
    """
    rng = np.random.default_rng(seed)
    status = 0
    for name in suites or list(SUITES):
        suite = SUITES[name]
        uses_adjugate = name in ("cancellation", "adjugate")
        options = {"adjugate": adjugate} if uses_adjugate else {}
        try:
            passed, detail = suite(config, rng, **options)
        except SkipSuite as reason:
            stream("SKIP %-10s %s" % (name, reason))
            continue
        except Exception as err:
            passed, detail = False, "%s: %s" % (type(err).__name__, err)
        stream("%s %-10s %s" % ("PASS" if passed else "FAIL", name, detail))
        if not passed:
            status = 1
    return status
