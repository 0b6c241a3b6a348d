"""Element kernels of the nonlinear terms of the scheme and of their Jacobian.

All kernels work on every triangle at once. With ``C`` the conformation
tensor at the quadrature points and ``grad u`` the (constant) velocity
gradient of each triangle, the nonlinear terms are

- momentum: ``((tr C) C, grad v)``
- conformation: ``(X, D)`` with
  ``X = -2 (grad u) C - (div u) adj(C) + (tr C)^2 C - (tr C) I``.

Conformation test functions are ``phi_a S_k`` for the symmetric basis
``S_k`` of ``tensors.SYM_BASIS``, so ``(X, phi_a S_k)`` uses ``X : S_k``.
Local dofs follow ``fem.assembly.element_dofs``.
"""

import numpy as np

from peterlin.scheme.tensors import (
    IDENTITY,
    SYM_BASIS,
    SYM_BASIS_ADJUGATE,
    SYM_BASIS_TRACE,
    adjugate,
    project_sym,
    trace,
)


class QuadratureData:
    """Values of the discrete fields needed by the kernels, at the points of
    ``rule`` on every triangle.

    Parameters
    ----------

    mesh : TriMesh
      The mesh.

    rule : QuadratureRule
      Quadrature rule.

    u, c : FeFunction
      Velocity (``vector2``) and conformation (``symtensor2``).
    """

    def __init__(self, mesh, rule, u, c):
        self.mesh = mesh
        self.rule = rule
        # area-scaled weights, (n_triangles, n_points)
        self.weights = mesh.areas[:, None] * rule.weights[None, :]
        self.c = c.at_quadrature(rule)
        self.trace_c = trace(self.c)
        self.grad_u = u.gradients()
        self.div_u = trace(self.grad_u)


def momentum_terms(data):
    """Local vectors of ``((tr C) C, grad(phi_a e_i))``, (n_triangles, 6)."""
    stress = data.trace_c[..., None, None] * data.c
    local = np.einsum(
        "tq,tqil,tal->tai", data.weights, stress, data.mesh.basis_gradients
    )
    return local.reshape(len(local), 6)


def conformation_source(data):
    """``X`` at the quadrature points, (n_triangles, n_points, 2, 2)."""
    c = data.c
    trace_c = data.trace_c[..., None, None]
    return (
        -2.0 * np.einsum("tij,tqjl->tqil", data.grad_u, c)
        - data.div_u[:, None, None, None] * adjugate(c)
        + trace_c**2 * c
        - trace_c * IDENTITY
    )


def conformation_terms(data):
    """Local vectors of ``(X, phi_a S_k)``, (n_triangles, 9)."""
    projected = project_sym(conformation_source(data))
    local = np.einsum(
        "tq,qa,tqk->tak", data.weights, data.rule.points, projected
    )
    return local.reshape(len(local), 9)


def jacobian_momentum_conformation(data):
    """Derivative of the momentum terms with respect to the conformation
    dofs: ``((tr dC) C + (tr C) dC, grad v)``, (n_triangles, 6, 9).
    """
    # directional stress for dC = S_m, (t, q, m, i, l)
    stress = (
        SYM_BASIS_TRACE[None, None, :, None, None] * data.c[:, :, None]
        + data.trace_c[:, :, None, None, None] * SYM_BASIS[None, None]
    )
    local = np.einsum(
        "tq,qb,tqmil,tal->taibm",
        data.weights,
        data.rule.points,
        stress,
        data.mesh.basis_gradients,
    )
    return local.reshape(len(local), 6, 9)


def jacobian_conformation_velocity(data):
    """Derivative of the conformation terms with respect to the velocity
    dofs, (n_triangles, 9, 6).

    For ``du = phi_b e_j``: ``grad du = e_j (x) g_b`` and ``div du = g_b[j]``,
    so ``dX = -2 e_j (x) (C g_b) - g_b[j] adj(C)``.
    """
    gradients = data.mesh.basis_gradients
    c_g = np.einsum("tqsl,tbl->tqbs", data.c, gradients)
    # (t, q, b, j, r, s)
    d_source = -2.0 * np.einsum("jr,tqbs->tqbjrs", IDENTITY, c_g)
    d_source -= np.einsum("tbj,tqrs->tqbjrs", gradients, adjugate(data.c))
    projected = project_sym(d_source)
    local = np.einsum(
        "tq,qa,tqbjk->takbj", data.weights, data.rule.points, projected
    )
    return local.reshape(len(local), 9, 6)


def jacobian_conformation_conformation(data):
    """Derivative of the conformation terms with respect to the conformation
    dofs, (n_triangles, 9, 9).

    For ``dC = phi_b S_m``:
    ``dX = -2 (grad u) S_m - (div u) adj(S_m) + 2 (tr C)(tr S_m) C
    + (tr C)^2 S_m - (tr S_m) I``.
    """
    n_triangles, n_points = data.trace_c.shape
    trace_c = data.trace_c[:, :, None, None, None]
    # (t, q, m, i, l)
    d_source = np.broadcast_to(
        (
            -2.0 * np.einsum("tij,mjl->tmil", data.grad_u, SYM_BASIS)
            - data.div_u[:, None, None, None] * SYM_BASIS_ADJUGATE[None]
        )[:, None],
        (n_triangles, n_points, 3, 2, 2),
    ).copy()
    d_source += 2.0 * trace_c * SYM_BASIS_TRACE[None, None, :, None, None] * (
        data.c[:, :, None]
    )
    d_source += trace_c**2 * SYM_BASIS[None, None]
    d_source -= SYM_BASIS_TRACE[None, None, :, None, None] * IDENTITY
    projected = project_sym(d_source)
    local = np.einsum(
        "tq,qa,qb,tqmk->takbm",
        data.weights,
        data.rule.points,
        data.rule.points,
        projected,
    )
    return local.reshape(n_triangles, 9, 9)
