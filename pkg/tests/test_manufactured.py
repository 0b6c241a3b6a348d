"""Manufactured solution and error norm tests."""

import numpy as np
import sympy

import pytest

from peterlin.characteristics import VelocityField, boundary_samples
from peterlin.manufactured import ErrorAccumulator, get_exact_solution, relative_errors
from peterlin.scheme import StateTriple


def exact_trajectory(exact, mesh, dt, n_steps, velocity_factor=1.0):
    trajectory = []
    for step in range(n_steps + 1):
        u, p, c = exact.interpolate(mesh, step * dt)
        trajectory.append(StateTriple(u * velocity_factor, p, c, step * dt))
    return trajectory


def test_eval_exact(exact):
    values = exact.eval_exact([0.5, 0.5], 0.0)
    half = np.sqrt(3) / 2
    assert values["C"][0, 0] == pytest.approx(1.5)
    assert values["C"][1, 1] == pytest.approx(1.5)
    assert values["u"] == pytest.approx([-half, half])
    assert values["p"] == pytest.approx(np.sin(1.5 * np.pi))


def test_shared_instance(exact):
    assert get_exact_solution() is exact


@pytest.mark.parametrize("t", (0.0, 0.4, 1.0))
def test_velocity_vanishes_on_boundary(exact, t):
    assert np.abs(exact.velocity(boundary_samples(), t)).max() <= 1e-15
    VelocityField(lambda points, s: exact.velocity(points, t))


@pytest.mark.parametrize("t", (0.0, 0.7))
def test_velocity_is_divergence_free(exact, t):
    points = np.random.default_rng(0).uniform(0, 1, (200, 2))
    gradient = exact.velocity_gradient(points, t)
    assert np.abs(gradient[:, 0, 0] + gradient[:, 1, 1]).max() <= 1e-13


def test_conformation_is_symmetric_positive_definite(exact):
    points = np.random.default_rng(1).uniform(0, 1, (500, 2))
    c = exact.conformation(points, 0.3)
    assert np.array_equal(c[:, 0, 1], c[:, 1, 0])
    assert np.all(np.linalg.eigvalsh(c) > 0)


def test_pressure_has_zero_mean(exact):
    x1, x2 = sympy.symbols("x1 x2", real=True)
    p = exact.expressions["p"]
    mean = sympy.integrate(p, (x1, 0, 1), (x2, 0, 1))
    assert sympy.simplify(mean) == 0


def test_evaluate_shapes(exact):
    points = np.random.default_rng(2).uniform(0, 1, (7, 2))
    shapes = {
        "psi": (7,),
        "u": (7, 2),
        "p": (7,),
        "C": (7, 2, 2),
        "grad_u": (7, 2, 2),
        "hess_u": (7, 2, 2, 2),
        "grad_p": (7, 2),
        "C_t": (7, 2, 2),
        "grad_C": (7, 2, 2, 2),
        "hess_C": (7, 2, 2, 2, 2),
    }
    for name, shape in shapes.items():
        assert exact.evaluate(name, points, 0.1).shape == shape

    with pytest.raises(KeyError):
        exact.evaluate("vorticity", points, 0.1)


@pytest.mark.parametrize(("nu", "eps"), ((1.0, 0.1), (0.1, 0.0), (1.0, 1.0)))
def test_strong_residuals_vanish(exact, nu, eps):
    points = np.random.default_rng(3).uniform(0, 1, (300, 2))
    momentum, conformation = exact.strong_residuals(points, 0.25, nu, eps)
    f, big_f = exact.forcing(points, 0.25, nu, eps)
    assert np.abs(momentum).max() <= 1e-10 * (1 + np.abs(f).max())
    assert np.abs(conformation).max() <= 1e-10 * (1 + np.abs(big_f).max())


def test_forcing_depends_on_diffusion(exact):
    points = np.array([[0.3, 0.6]])
    f0, big_f0 = exact.forcing(points, 0.1, 1.0, 0.0)
    f1, big_f1 = exact.forcing(points, 0.1, 1.0, 1.0)
    assert np.allclose(f0, f1)
    laplacian = np.einsum("nijxx->nij", exact.evaluate("hess_C", points, 0.1))
    assert np.allclose(big_f0 - big_f1, laplacian)


def test_interpolate(mesh, exact):
    mesh = mesh(8)
    u, p, c = exact.interpolate(mesh, 0.2)
    assert not u.nodal[mesh.boundary_vertex].any()
    assert np.allclose(p.coeffs, exact.pressure(mesh.vertices, 0.2))
    assert np.allclose(c.nodal[:, 1], exact.conformation(mesh.vertices, 0.2)[:, 0, 1])


def test_exact_trajectory_has_zero_errors(mesh, exact):
    mesh = mesh(4)
    errors = relative_errors(exact_trajectory(exact, mesh, 0.25, 4), exact, mesh, 0.25)
    assert errors == {
        "Er1": 0.0,
        "Er2": 0.0,
        "Er3": 0.0,
        "Er4": 0.0,
        "Er5": 0.0,
        "Er6": 0.0,
        "trace_weighted": 0.0,
    }


def test_scaled_velocity_errors(mesh, exact):
    mesh = mesh(4)
    trajectory = exact_trajectory(exact, mesh, 0.25, 4, velocity_factor=1.1)
    accumulator = ErrorAccumulator(exact, mesh, 0.25)
    for step, state in enumerate(trajectory):
        accumulator(step, state)
    errors = accumulator.relative_errors()
    assert accumulator.steps == [0, 1, 2, 3, 4]
    assert errors["Er1"] == pytest.approx(0.1)
    assert errors["Er2"] == pytest.approx(0.1)
    assert errors["Er5"] == 0.0
