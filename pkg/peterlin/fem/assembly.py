"""Assembly of the bilinear forms acting on P1 spaces.

Element matrices of bilinear P1 x P1 forms are computed in closed form; only
data terms (loads) go through quadrature. Degrees of freedom of a field with
``c`` components are interleaved per vertex: component ``k`` of vertex ``v``
is dof ``c * v + k``.
"""

import numpy as np

from peterlin.fem.FeFunction import FROBENIUS_WEIGHTS
from peterlin.fem.quadrature import get_rule
from peterlin.linalg import CooBuilder, finalize


# P1 element mass divided by the area.
REFERENCE_MASS = (np.ones((3, 3)) + np.eye(3)) / 12.0


def element_dofs(mesh, components=1):
    """Global dofs of every triangle, (n_triangles, 3 * components), local dof
    ``a * components + k`` being component ``k`` at local vertex ``a``.
    """
    triangles = mesh.triangles
    dofs = components * triangles[:, :, None] + np.arange(components)
    return dofs.reshape(len(triangles), 3 * components)


def scatter(size, dofs, local_values):
    """Sums element contributions ``local_values`` (same shape as ``dofs``) into
    a global vector of length ``size``.
    """
    return np.bincount(
        np.ravel(dofs), weights=np.ravel(local_values), minlength=size
    ).astype(float)


def _block_diagonal(mesh, scalar_blocks, components, weights):
    """Builds the block-diagonal-by-component matrix whose scalar element
    matrices are ``scalar_blocks`` (n_triangles, 3, 3).
    """
    if weights is None:
        weights = np.ones(components)
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (components,):
        raise ValueError(
            "'weights' should hold %d values, got %s" % (components, weights.shape)
        )

    size = components * mesh.n_vertices
    builder = CooBuilder(size, size)
    for component, weight in enumerate(weights):
        dofs = components * mesh.triangles + component
        builder.add_block(dofs, dofs, weight * scalar_blocks)
    return finalize(builder)


def assemble_mass(mesh, components=1, weights=None):
    """L2 mass matrix, block diagonal by component.

    Parameters
    ----------

    mesh : TriMesh
      The mesh.

    components : {1, 2, 3}
      Number of interleaved components (scalar, vector, symmetric tensor).

    weights : array_like, optional
      Scaling of each component block. ``FROBENIUS_WEIGHTS`` turns the stored
      ``(T11, T12, T22)`` components into the tensor inner product ``(C, D)``.

    Examples
    --------

    >>> from peterlin.mesh import build_structured
    >>> mass = assemble_mass(build_structured(1))
    >>> round(float(mass.values.sum()), 12)
    1.0
    """
    blocks = mesh.areas[:, None, None] * REFERENCE_MASS
    return _block_diagonal(mesh, blocks, components, weights)


def assemble_stiffness(mesh, components=1, weights=None, scale=None):
    """Componentwise P1 stiffness ``(grad f, grad g)``, optionally scaled by a
    per-triangle factor ``scale``.
    """
    gradients = mesh.basis_gradients
    factor = mesh.areas if scale is None else mesh.areas * np.asarray(scale)
    blocks = factor[:, None, None] * np.einsum("kai,kbi->kab", gradients, gradients)
    return _block_diagonal(mesh, blocks, components, weights)


def element_au(mesh):
    """Element matrices of ``a_u(u, v) = 2 (D(u), D(v))``, (n_triangles, 6, 6)
    in local dof order ``(a, i) -> 2 a + i``.

    Entry ``((a, i), (b, j))`` is ``|K| (delta_ij g_a . g_b + g_a[j] g_b[i])``.
    """
    gradients = mesh.basis_gradients
    dot = np.einsum("kai,kbi->kab", gradients, gradients)
    blocks = np.einsum("kab,ij->kaibj", dot, np.eye(2)) + np.einsum(
        "kaj,kbi->kaibj", gradients, gradients
    )
    blocks *= mesh.areas[:, None, None, None, None]
    return blocks.reshape(-1, 6, 6)


def assemble_au(mesh):
    """Matrix of ``a_u(u, v) = 2 (D(u), D(v))`` on the vector space.

    Symmetric positive semidefinite; rigid motions lie in its kernel before
    boundary conditions are imposed.
    """
    size = 2 * mesh.n_vertices
    dofs = element_dofs(mesh, 2)
    builder = CooBuilder(size, size)
    builder.add_block(dofs, dofs, element_au(mesh))
    return finalize(builder)


def element_b(mesh):
    """Element matrices of ``b(v, q) = -(div v, q)``, (n_triangles, 3, 6) with
    pressure rows and velocity columns.
    """
    blocks = -np.einsum("k,kbj->kbj", mesh.areas / 3.0, mesh.basis_gradients)
    return np.broadcast_to(
        blocks.reshape(-1, 1, 6), (mesh.n_triangles, 3, 6)
    ).copy()


def assemble_b(mesh):
    """Rectangular (n_vertices x 2 n_vertices) matrix ``B`` with
    ``q^T B u = b(u, q) = -(div u, q)``.
    """
    builder = CooBuilder(mesh.n_vertices, 2 * mesh.n_vertices)
    builder.add_block(mesh.triangles, element_dofs(mesh, 2), element_b(mesh))
    return finalize(builder)


def assemble_sh(mesh, delta0):
    """Pressure stabilization ``S_h(p, q) = delta0 sum_K h_K^2 (grad p, grad q)_K``.

    Raises
    ------

    ValueError
      If ``delta0`` is not positive.
    """
    if not delta0 > 0:
        raise ValueError("'delta0' should be positive, got %r" % (delta0,))
    return assemble_stiffness(mesh, scale=delta0 * mesh.h_K**2)


def assemble_ac(mesh):
    """Matrix of ``a_c(C, D) = (grad C, grad D)`` on stored ``(C11, C12, C22)``
    components; the off-diagonal block counts twice.
    """
    return assemble_stiffness(mesh, components=3, weights=FROBENIUS_WEIGHTS)


def mean_vector(mesh):
    """Vector ``m`` with ``m^T p = integral of p``."""
    return scatter(
        mesh.n_vertices,
        mesh.triangles,
        np.repeat(mesh.areas[:, None] / 3.0, 3, axis=1),
    )


def load_vector(mesh, values, rule):
    """Componentwise load ``(f_k, phi_a)`` from values at quadrature points.

    Parameters
    ----------

    values : numpy.ndarray
      (n_triangles, n_points) for scalars or (n_triangles, n_points, c) for
      ``c`` interleaved components.

    rule : QuadratureRule
      Rule the values were sampled with.
    """
    values = np.asarray(values, dtype=float)
    if values.ndim == 2:
        values = values[:, :, None]
    components = values.shape[2]
    local = np.einsum(
        "k,q,qa,kqc->kac", mesh.areas, rule.weights, rule.points, values
    )
    return scatter(
        components * mesh.n_vertices,
        element_dofs(mesh, components),
        local.reshape(mesh.n_triangles, -1),
    )


def quadrature_load(mesh, func, degree=5):
    """Load vector of a vectorized function of points, sampled with the rule of
    the given degree. Symmetric matrix values are reduced to their stored
    ``(T11, T12, T22)`` components.
    """
    rule = get_rule(degree)
    points = mesh.quadrature_points(rule)
    values = np.asarray(func(points.reshape(-1, 2)), dtype=float)
    if values.ndim == 3:
        values = np.stack([values[:, 0, 0], values[:, 0, 1], values[:, 1, 1]], -1)
    return load_vector(mesh, values.reshape(points.shape[:2] + values.shape[1:]), rule)
