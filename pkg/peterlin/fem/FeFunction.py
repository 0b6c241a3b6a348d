"""Continuous piecewise linear (P1) finite-element functions.

Three flavors share one class, distinguished by ``kind``:

- ``"scalar"``: one coefficient per vertex (pressures, test functions).
- ``"vector2"``: two coefficients per vertex, interleaved ``(u1, u2)``.
- ``"symtensor2"``: three coefficients per vertex, interleaved
  ``(T11, T12, T22)``; evaluation always returns a symmetric 2x2 matrix.
"""

import numpy as np

from peterlin.decorators import requires_kind, requires_same_mesh


COMPONENTS = {"scalar": 1, "vector2": 2, "symtensor2": 3}

# Weights turning the stored components of a symmetric tensor into the
# Frobenius product: T:S = T11 S11 + 2 T12 S12 + T22 S22.
FROBENIUS_WEIGHTS = np.array([1.0, 2.0, 1.0])


def sym_to_matrix(components):
    """Converts (..., 3) stored components ``(T11, T12, T22)`` into (..., 2, 2)
    symmetric matrices.
    """
    components = np.asarray(components)
    matrix = np.empty(components.shape[:-1] + (2, 2))
    matrix[..., 0, 0] = components[..., 0]
    matrix[..., 0, 1] = matrix[..., 1, 0] = components[..., 1]
    matrix[..., 1, 1] = components[..., 2]
    return matrix


def matrix_to_sym(matrix):
    """Stored components ``(T11, T12, T22)`` of (..., 2, 2) matrices; the
    off-diagonal entry is the mean of ``T12`` and ``T21``.
    """
    matrix = np.asarray(matrix)
    return np.stack(
        [
            matrix[..., 0, 0],
            0.5 * (matrix[..., 0, 1] + matrix[..., 1, 0]),
            matrix[..., 1, 1],
        ],
        axis=-1,
    )


class FeFunction:
    """P1 finite-element function on a TriMesh.

    Parameters
    ----------

    mesh : TriMesh
      Mesh the function lives on.

    kind : {"scalar", "vector2", "symtensor2"}
      Flavor of the function.

    coeffs : array_like, optional
      Nodal coefficients, ``n_vertices * components`` values interleaved per
      vertex. Zero when omitted.

    Examples
    --------

    >>> from peterlin.mesh import build_structured
    >>> mesh = build_structured(4)
    >>> f = FeFunction.interpolate(mesh, lambda x: x[:, 0])
    >>> f.eval(0, [1.0, 0.0, 0.0])
    0.0
    """

    def __init__(self, mesh, kind="scalar", coeffs=None):
        if kind not in COMPONENTS:
            raise ValueError(
                "'kind' should be one of %s, got %r" % (", ".join(COMPONENTS), kind)
            )
        self.mesh = mesh
        self.kind = kind

        size = mesh.n_vertices * self.n_components
        if coeffs is None:
            coeffs = np.zeros(size)
        coeffs = np.array(coeffs, dtype=float).ravel()
        if coeffs.size != size:
            raise ValueError(
                "A %s function on %d vertices needs %d coefficients, got %d"
                % (kind, mesh.n_vertices, size, coeffs.size)
            )
        self.coeffs = coeffs

    @classmethod
    def zeros(cls, mesh, kind="scalar"):
        return cls(mesh, kind)

    @classmethod
    def interpolate(cls, mesh, func, kind=None):
        """Nodal (Lagrange) interpolant of ``func``.

        Parameters
        ----------

        func : callable or number
          Vectorized function of Nx2 points returning (N,), (N, 2) or
          (N, 2, 2) values. A constant is accepted too.

        kind : str, optional
          Flavor of the result. Deduced from the value shape when omitted.
        """
        values = func(mesh.vertices) if callable(func) else func
        values = np.asarray(values, dtype=float)
        n = mesh.n_vertices
        if values.ndim == 0:
            values = np.full(n, float(values))
        elif values.shape[0] != n:
            values = np.broadcast_to(values, (n,) + values.shape)

        if kind is None:
            kind = {1: "scalar", 2: "vector2", 3: "symtensor2"}[values.ndim]
        if kind == "symtensor2" and values.shape[1:] == (2, 2):
            values = matrix_to_sym(values)
        return cls(mesh, kind, values.reshape(n, -1))

    @property
    def n_components(self):
        return COMPONENTS[self.kind]

    @property
    def nodal(self):
        """Coefficients as an (n_vertices, components) view."""
        return self.coeffs.reshape(self.mesh.n_vertices, self.n_components)

    def copy(self):
        return FeFunction(self.mesh, self.kind, self.coeffs.copy())

    def _shape_values(self, components):
        """Turns (..., components) arrays into the natural value shape."""
        if self.kind == "scalar":
            return components[..., 0]
        if self.kind == "symtensor2":
            return sym_to_matrix(components)
        return components

    def eval(self, tri, bary):
        """Value on triangle ``tri`` at barycentric coordinates ``bary``.

        Returns a float, a 2-vector or a symmetric 2x2 matrix depending on
        ``kind``.
        """
        local = self.nodal[self.mesh.triangles[tri]]
        value = self._shape_values(np.asarray(bary, dtype=float) @ local)
        return float(value) if self.kind == "scalar" else value

    def evaluate_at(self, triangles, coords):
        """Vectorized ``eval`` for arrays of triangles and Nx3 coordinates."""
        local = self.nodal[self.mesh.triangles[triangles]]
        return self._shape_values(np.einsum("na,nac->nc", coords, local))

    def at_quadrature(self, rule, mesh=None):
        """Values at the quadrature points of every triangle, shaped
        (n_triangles, n_points, ...).
        """
        local = self.nodal[self.mesh.triangles]
        return self._shape_values(np.einsum("qa,kac->kqc", rule.points, local))

    def gradients(self):
        """Piecewise constant gradients on all triangles.

        Returns an (n_triangles, components, 2) array, entry ``[k, c, j]`` being
        the derivative of component ``c`` along ``x_j``. For ``vector2`` this is
        the velocity gradient with ``(i, j) = d u_i / d x_j``.
        """
        local = self.nodal[self.mesh.triangles]
        return np.einsum("kac,kaj->kcj", local, self.mesh.basis_gradients)

    def grad(self, tri):
        """Constant gradient on triangle ``tri``: a 2-vector for scalars, the
        2x2 matrix ``d u_i / d x_j`` for vectors, a 3x2 array (one row per stored
        component) for symmetric tensors.
        """
        local = self.nodal[self.mesh.triangles[tri]]
        gradient = local.T @ self.mesh.basis_gradients[tri]
        return gradient[0] if self.kind == "scalar" else gradient

    @requires_kind("vector2")
    def symmetric_gradient(self):
        """Strain rate ``D(u) = (grad u + grad u^T) / 2`` per triangle."""
        gradient = self.gradients()
        return 0.5 * (gradient + np.swapaxes(gradient, 1, 2))

    @requires_kind("vector2")
    def divergence(self):
        """Piecewise constant divergence per triangle."""
        gradient = self.gradients()
        return gradient[:, 0, 0] + gradient[:, 1, 1]

    def gradient_at_quadrature(self, rule, mesh=None):
        """Gradients broadcast to the quadrature points, (n_triangles,
        n_points, ...) like ``AnalyticField.gradient_at_quadrature``.
        """
        gradient = self.gradients()
        if self.kind == "scalar":
            gradient = gradient[:, 0]
        return np.repeat(gradient[:, None], len(rule), axis=1)

    @requires_same_mesh
    def __add__(self, other):
        return FeFunction(self.mesh, self.kind, self.coeffs + other.coeffs)

    @requires_same_mesh
    def __sub__(self, other):
        return FeFunction(self.mesh, self.kind, self.coeffs - other.coeffs)

    def __mul__(self, scalar):
        return FeFunction(self.mesh, self.kind, float(scalar) * self.coeffs)

    __rmul__ = __mul__

    def __neg__(self):
        return FeFunction(self.mesh, self.kind, -self.coeffs)

    def __repr__(self):
        return "FeFunction(%s, %d vertices)" % (self.kind, self.mesh.n_vertices)


class AnalyticField:
    """A field given by closed-form, vectorized callables.

    Used wherever an operation accepts either a discrete function or an exact
    one (Stokes projection right-hand sides, interpolation).

    Parameters
    ----------

    value : callable
      ``points (N, 2) -> values`` with shapes (N,), (N, 2) or (N, 2, 2).

    gradient : callable, optional
      ``points -> gradients``: (N, 2) for scalars, (N, 2, 2) with
      ``(i, j) = d f_i / d x_j`` for vectors.
    """

    def __init__(self, value, gradient=None):
        self.value = value
        self.gradient = gradient

    def __call__(self, points):
        return self.value(points)

    def at_quadrature(self, rule, mesh):
        points = mesh.quadrature_points(rule)
        values = np.asarray(self.value(points.reshape(-1, 2)))
        return values.reshape(points.shape[:2] + values.shape[1:])

    def gradient_at_quadrature(self, rule, mesh):
        if self.gradient is None:
            raise ValueError("This AnalyticField has no gradient")
        points = mesh.quadrature_points(rule)
        values = np.asarray(self.gradient(points.reshape(-1, 2)))
        return values.reshape(points.shape[:2] + values.shape[1:])
