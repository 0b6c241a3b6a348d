"""Stabilized Stokes projection, used to build the initial velocity."""

import numpy as np
import scipy.sparse as sparse

from peterlin.fem.assembly import (
    assemble_au,
    assemble_b,
    assemble_sh,
    element_dofs,
    mean_vector,
    scatter,
)
from peterlin.fem.FeFunction import FeFunction
from peterlin.fem.quadrature import get_rule
from peterlin.linalg import SparseMatrix, block_matrix, solve


def free_velocity_dofs(mesh):
    """Velocity dofs not on the boundary, in increasing order."""
    return np.flatnonzero(~np.repeat(mesh.boundary_vertex, 2))


def stokes_matrix(mesh, nu, delta0):
    """Full matrix ``[[nu A_u, B^T, 0], [B, -S_h, m], [0, m^T, 0]]`` on all
    velocity dofs, pressure dofs and the mean multiplier.
    """
    mean = SparseMatrix(sparse.csr_matrix(mean_vector(mesh)[:, None]))
    b = assemble_b(mesh)
    return block_matrix(
        [
            [nu * assemble_au(mesh), b.T, None],
            [b, -assemble_sh(mesh, delta0), mean],
            [None, mean.T, None],
        ]
    )


def _quadrature_values(field, rule, mesh, gradient=False):
    if field is None:
        return None
    if gradient:
        return field.gradient_at_quadrature(rule, mesh)
    return field.at_quadrature(rule, mesh)


def stokes_project(u_exact, p_exact, mesh, params, rule=None):
    """Projection ``(u_hat, p_hat)`` of a velocity/pressure pair.

    Solves, for all discrete ``(v, q)`` with ``v`` vanishing on the boundary::

        nu a_u(u_hat, v) + b(v, p_hat) + b(u_hat, q) - S_h(p_hat, q)
            = nu a_u(u, v) + b(v, p) + b(u, q)

    with ``p_hat`` of zero mean. The right side is integrated with the
    degree-5 rule using values and gradients of the given fields.

    Parameters
    ----------

    u_exact : AnalyticField or FeFunction or None
      Velocity, with a gradient. ``None`` stands for zero.

    p_exact : AnalyticField or FeFunction or None
      Pressure. ``None`` stands for zero.

    mesh : TriMesh
      The mesh.

    params : SchemeParams
      Provides ``nu`` and ``delta0``.

    Returns
    -------

    (FeFunction, FeFunction)
      The projected velocity and pressure.
    """
    rule = get_rule(5) if rule is None else rule
    weights = mesh.areas[:, None] * rule.weights[None, :]
    gradients = mesh.basis_gradients
    n_vertices = mesh.n_vertices

    local_u = np.zeros((mesh.n_triangles, 3, 2))
    local_q = np.zeros((mesh.n_triangles, 3))
    grad_u = _quadrature_values(u_exact, rule, mesh, gradient=True)
    if grad_u is not None:
        grad_u = np.asarray(grad_u, dtype=float)
        # 2 D(u) : D(phi_a e_i) = (grad u + grad u^T)_il g_a[l]
        strain = grad_u + np.swapaxes(grad_u, -1, -2)
        local_u += params.nu * np.einsum("tq,tqil,tal->tai", weights, strain, gradients)
        divergence = grad_u[..., 0, 0] + grad_u[..., 1, 1]
        local_q -= np.einsum("tq,qa,tq->ta", weights, rule.points, divergence)
    p_values = _quadrature_values(p_exact, rule, mesh)
    if p_values is not None:
        # b(phi_a e_i, p) = -(g_a[i], p)
        local_u -= np.einsum("tq,tq,tai->tai", weights, np.asarray(p_values), gradients)

    rhs = np.concatenate(
        [
            scatter(2 * n_vertices, element_dofs(mesh, 2), local_u.reshape(-1, 6)),
            scatter(n_vertices, mesh.triangles, local_q),
            [0.0],
        ]
    )

    free = np.concatenate(
        [free_velocity_dofs(mesh), 2 * n_vertices + np.arange(n_vertices + 1)]
    )
    matrix = stokes_matrix(mesh, params.nu, params.delta0).submatrix(free)
    solution = np.zeros(3 * n_vertices + 1)
    solution[free] = solve(matrix, rhs[free])

    u_hat = FeFunction(mesh, "vector2", solution[: 2 * n_vertices])
    p_hat = FeFunction(mesh, "scalar", solution[2 * n_vertices : 3 * n_vertices])
    return u_hat, p_hat
