"""Characteristics (upwind map and transported loads) tests."""

import numpy as np

import pytest

from peterlin.characteristics import (
    UpwindEscapeError,
    VelocityField,
    boundary_samples,
    check_step_condition,
    transported_load,
    upwind_point,
    upwind_points,
    warn_step_condition,
)
from peterlin.fem import FeFunction, assemble_mass, get_rule
from peterlin.mesh import PointOutsideDomainError


def shear(points, t):
    x = points[:, 0]
    return np.stack([x * (1 - x), np.zeros(len(x))], axis=1)


def test_upwind_point_constant_field():
    w = VelocityField.constant([1.0, 0.0])
    assert np.allclose(upwind_point(w, [0.5, 0.5], 0.0, 0.1), [0.4, 0.5])


def test_upwind_point_zero_field():
    point = upwind_point(VelocityField.zero(), [0.3, 0.7], 1.0, 0.5)
    assert point.tolist() == [0.3, 0.7]


def test_upwind_point_manufactured_velocity(exact):
    w = exact.velocity_field()
    half = np.sqrt(3) / 2
    point = upwind_point(w, [0.5, 0.5], 0.0, 0.01)
    assert np.allclose(point, [0.5 + 0.01 * half, 0.5 - 0.01 * half], atol=1e-14)


def test_upwind_point_escapes():
    w = VelocityField.constant([1.0, 0.0])
    with pytest.raises(UpwindEscapeError) as exc:
        upwind_point(w, [0.05, 0.5], 0.0, 0.1)
    assert isinstance(exc.value, PointOutsideDomainError)
    assert "upwind point escaped domain" in str(exc.value)
    assert exc.value.distance == pytest.approx(0.05)


def test_upwind_point_snaps():
    w = VelocityField.constant([1.0, 0.0])
    assert upwind_point(w, [0.1 - 1e-11, 0.5], 0.0, 0.1).tolist() == [0.0, 0.5]


@pytest.mark.parametrize("dt", (0.0, -0.1))
def test_upwind_point_requires_positive_step(dt):
    with pytest.raises(ValueError):
        upwind_point(VelocityField.zero(), [0.5, 0.5], 0.0, dt)


def test_upwind_points_match_upwind_point(exact):
    w = exact.velocity_field()
    points = np.random.default_rng(0).uniform(0, 1, (50, 2))
    feet = upwind_points(w, points, 0.3, 0.02)
    for point, foot in zip(points, feet):
        assert np.allclose(upwind_point(w, point, 0.3, 0.02), foot, atol=1e-15)


@pytest.mark.parametrize(
    ("seminorm", "dt", "bijective", "jacobian_bounded"),
    ((2.0, 0.1, True, True), (2.0, 0.2, True, False), (2.0, 0.6, False, False)),
)
def test_check_step_condition(seminorm, dt, bijective, jacobian_bounded):
    assert check_step_condition(seminorm, dt) == {
        "bijective": bijective,
        "jacobian_bounded": jacobian_bounded,
    }


def test_check_step_condition_negative_seminorm():
    with pytest.raises(ValueError):
        check_step_condition(-1.0, 0.1)


def test_warn_step_condition():
    conditions = warn_step_condition(VelocityField.zero(), 0.1)
    assert conditions == {"bijective": True, "jacobian_bounded": True}

    fast = VelocityField.from_function(shear, boundary_compatible=False)
    with pytest.warns(UserWarning, match="step condition not met"):
        conditions = warn_step_condition(fast, 2.0)
    assert conditions == {"bijective": False, "jacobian_bounded": False}


def test_boundary_samples():
    samples = boundary_samples(100)
    assert samples.shape == (100, 2)
    on_boundary = np.isclose(samples, 0.0) | np.isclose(samples, 1.0)
    assert np.all(on_boundary.any(axis=1))


def test_boundary_compatibility_check():
    with pytest.raises(ValueError) as exc:
        VelocityField(lambda points, t: np.ones((len(points), 2)))
    assert "boundary-compatible" in str(exc.value)

    field = VelocityField(
        lambda points, t: np.ones((len(points), 2)), boundary_compatible=False
    )
    assert field([[0.0, 0.0]], 0.0).tolist() == [[1.0, 1.0]]


def test_seminorm_w1inf():
    rotation = VelocityField.from_function(
        lambda points, t: np.stack([points[:, 1], -3 * points[:, 0]], axis=1),
        boundary_compatible=False,
    )
    assert rotation.seminorm_w1inf() == pytest.approx(3.0, rel=1e-6)


def test_seminorm_w1inf_of_fefunction(mesh):
    mesh = mesh(4)
    u = FeFunction.interpolate(mesh, lambda x: np.stack([2 * x[:, 1], 0 * x[:, 0]], 1))
    w = VelocityField.from_fefunction(u, boundary_compatible=False)
    assert w.seminorm_w1inf() == pytest.approx(2.0)
    assert np.allclose(w([[0.3, 0.25]], 0.0), [[0.5, 0.0]])

    with pytest.raises(ValueError):
        VelocityField.from_fefunction(FeFunction(mesh, "scalar"))


def test_seminorm_of_manufactured_velocity(exact):
    assert exact.velocity_field().seminorm_w1inf() > 0


@pytest.mark.parametrize(("kind", "components"), (("scalar", 1), ("symtensor2", 3)))
def test_transported_load_zero_velocity(mesh, kind, components):
    mesh = mesh(4)
    coeffs = np.random.default_rng(components).standard_normal(
        components * mesh.n_vertices
    )
    g = FeFunction(mesh, kind, coeffs)
    load = transported_load(g, VelocityField.zero(), 0.0, 0.1, get_rule(5))
    expected = assemble_mass(mesh, components) @ coeffs
    assert np.abs(load - expected).max() <= 1e-12


def test_transported_load_of_constant(mesh, exact):
    mesh = mesh(8)
    g = FeFunction(mesh, "scalar", np.full(mesh.n_vertices, 3.0))
    load = transported_load(g, exact.velocity_field(), 0.2, 1 / 16)
    expected = 3.0 * (assemble_mass(mesh) @ np.ones(mesh.n_vertices))
    assert np.allclose(load, expected, atol=1e-14)


def test_transported_load_of_linear_function(mesh):
    mesh = mesh(8)
    g = FeFunction.interpolate(mesh, lambda x: x[:, 0])
    w = VelocityField.from_function(shear, boundary_compatible=False)
    load = transported_load(g, w, 0.0, 0.25)
    # integral of x1 - 0.25 x1 (1 - x1) over the unit square
    assert load.sum() == pytest.approx(0.5 - 0.25 / 6, abs=1e-13)


def test_transported_load_is_linear(mesh, exact):
    mesh = mesh(8)
    rng = np.random.default_rng(5)
    g1 = FeFunction(mesh, "vector2", rng.standard_normal(2 * mesh.n_vertices))
    g2 = FeFunction(mesh, "vector2", rng.standard_normal(2 * mesh.n_vertices))
    w = exact.velocity_field()
    combined = transported_load(g1 * 2.0 + g2 * -3.0, w, 0.1, 1 / 16)
    separate = 2.0 * transported_load(g1, w, 0.1, 1 / 16) - 3.0 * transported_load(
        g2, w, 0.1, 1 / 16
    )
    assert np.abs(combined - separate).max() <= 1e-13
