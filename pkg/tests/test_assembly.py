"""Assembly of bilinear forms and loads tests."""

import numpy as np

import pytest

from peterlin.fem import (
    FROBENIUS_WEIGHTS,
    FeFunction,
    assemble_ac,
    assemble_au,
    assemble_b,
    assemble_mass,
    assemble_sh,
    assemble_stiffness,
    element_dofs,
    get_rule,
    load_vector,
    mean_vector,
    quadrature_load,
)
from peterlin.mesh import TriMesh


def vector_field(mesh, function):
    return FeFunction.interpolate(mesh, function, kind="vector2")


def rotation(x):
    return np.stack([x[:, 1], -x[:, 0]], axis=1)


def stretch(x):
    return np.stack([x[:, 0], np.zeros(len(x))], axis=1)


def test_element_dofs(mesh):
    mesh = mesh(1)
    dofs = element_dofs(mesh, 3)
    assert dofs.shape == (2, 9)
    first = mesh.triangles[0, 0]
    assert dofs[0, :3].tolist() == [3 * first, 3 * first + 1, 3 * first + 2]


def test_mass_total(mesh):
    assert assemble_mass(mesh(1)).values.sum() == pytest.approx(1.0, abs=1e-14)


def test_element_mass_of_unit_triangle():
    mesh = TriMesh([[0, 0], [1, 0], [0, 1]], [[0, 1, 2]])
    expected = 0.5 / 12 * np.array([[2, 1, 1], [1, 2, 1], [1, 1, 2]])
    assert np.allclose(assemble_mass(mesh).toarray(), expected, atol=1e-15)


@pytest.mark.parametrize("components", (1, 2, 3))
def test_mass_positive_definite(mesh, components):
    matrix = assemble_mass(mesh(3), components)
    rng = np.random.default_rng(components)
    for _ in range(5):
        x = rng.standard_normal(matrix.n_rows)
        assert x @ (matrix @ x) > 0


def test_mass_matches_quadrature(mesh):
    mesh = mesh(4)
    rule = get_rule(2)
    matrix = assemble_mass(mesh, 3, FROBENIUS_WEIGHTS)
    weights = mesh.areas[:, None] * rule.weights
    rng = np.random.default_rng(0)
    for _ in range(20):
        f = FeFunction(mesh, "symtensor2", rng.standard_normal(3 * mesh.n_vertices))
        g = FeFunction(mesh, "symtensor2", rng.standard_normal(3 * mesh.n_vertices))
        direct = np.einsum(
            "tq,tqij,tqij->", weights, f.at_quadrature(rule), g.at_quadrature(rule)
        )
        assert g.coeffs @ (matrix @ f.coeffs) == pytest.approx(direct, rel=1e-12)


def test_mass_invalid_weights(mesh):
    with pytest.raises(ValueError):
        assemble_mass(mesh(2), 3, [1.0, 2.0])


def test_au_rigid_rotation(mesh):
    mesh = mesh(4)
    matrix = assemble_au(mesh)
    u = vector_field(mesh, rotation).coeffs
    assert abs(u @ (matrix @ u)) <= 1e-12


def test_au_stretch(mesh):
    mesh = mesh(4)
    matrix = assemble_au(mesh)
    u = vector_field(mesh, stretch).coeffs
    assert u @ (matrix @ u) == pytest.approx(2.0, abs=1e-12)


def test_au_symmetric(mesh):
    matrix = assemble_au(mesh(5)).toarray()
    assert np.abs(matrix - matrix.T).max() <= 1e-14


def test_au_matches_strain_product(mesh):
    mesh = mesh(3)
    matrix = assemble_au(mesh)
    rng = np.random.default_rng(1)
    for _ in range(20):
        u = FeFunction(mesh, "vector2", rng.standard_normal(2 * mesh.n_vertices))
        v = FeFunction(mesh, "vector2", rng.standard_normal(2 * mesh.n_vertices))
        direct = 2 * np.einsum(
            "t,tij,tij->", mesh.areas, u.symmetric_gradient(), v.symmetric_gradient()
        )
        assert v.coeffs @ (matrix @ u.coeffs) == pytest.approx(direct, rel=1e-12)


def test_b_divergence_free(mesh):
    mesh = mesh(4)
    u = vector_field(mesh, rotation).coeffs
    assert np.abs(assemble_b(mesh) @ u).max() <= 1e-12


def test_b_stretch(mesh):
    mesh = mesh(4)
    matrix = assemble_b(mesh)
    assert matrix.shape == (mesh.n_vertices, 2 * mesh.n_vertices)
    u = vector_field(mesh, stretch).coeffs
    q = np.ones(mesh.n_vertices)
    assert q @ (matrix @ u) == pytest.approx(-1.0, abs=1e-12)


@pytest.mark.parametrize("n", (2, 4, 8))
def test_sh(mesh, n):
    mesh = mesh(n)
    matrix = assemble_sh(mesh, 1.0)
    constant = np.ones(mesh.n_vertices)
    assert abs(constant @ (matrix @ constant)) <= 1e-12

    p = mesh.vertices[:, 0]
    assert p @ (matrix @ p) == pytest.approx(2.0 / n**2, rel=1e-12)

    doubled = assemble_sh(mesh, 2.0)
    assert np.allclose(doubled.toarray(), 2 * matrix.toarray())


@pytest.mark.parametrize("delta0", (0.0, -1.0))
def test_sh_invalid_delta0(mesh, delta0):
    with pytest.raises(ValueError) as exc:
        assemble_sh(mesh(2), delta0)
    assert "'delta0' should be positive" in str(exc.value)


@pytest.mark.parametrize(
    ("components", "expected"),
    (((1.0, 1.0, 1.0), 0.0), (("x", 0.0, 0.0), 1.0), ((0.0, "x", 0.0), 2.0)),
)
def test_ac(mesh, components, expected):
    mesh = mesh(4)
    x = mesh.vertices[:, 0]
    nodal = np.stack(
        [
            x if value == "x" else np.full(mesh.n_vertices, value)
            for value in components
        ],
        axis=1,
    )
    c = nodal.ravel()
    assert c @ (assemble_ac(mesh) @ c) == pytest.approx(expected, abs=1e-12)


def test_stiffness_scaled(mesh):
    mesh = mesh(2)
    plain = assemble_stiffness(mesh).toarray()
    scaled = assemble_stiffness(mesh, scale=np.full(mesh.n_triangles, 3.0)).toarray()
    assert np.allclose(scaled, 3 * plain)


def test_mean_vector(mesh):
    mesh = mesh(4)
    m = mean_vector(mesh)
    assert m.sum() == pytest.approx(1.0)
    assert m @ mesh.vertices[:, 0] == pytest.approx(0.5)


def test_load_vector_of_constant_is_mass_row_sums(mesh):
    mesh = mesh(3)
    rule = get_rule(5)
    load = load_vector(mesh, np.full((mesh.n_triangles, len(rule)), 2.0), rule)
    expected = 2.0 * (assemble_mass(mesh) @ np.ones(mesh.n_vertices))
    assert np.allclose(load, expected, atol=1e-15)


def test_quadrature_load_of_tensor(mesh):
    mesh = mesh(3)
    load = quadrature_load(
        mesh, lambda x: np.broadcast_to([[1.0, 2.0], [2.0, 3.0]], (len(x), 2, 2))
    )
    mass_row_sums = assemble_mass(mesh) @ np.ones(mesh.n_vertices)
    assert np.allclose(load.reshape(-1, 3), np.outer(mass_row_sums, [1.0, 2.0, 3.0]))
