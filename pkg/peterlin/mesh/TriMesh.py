"""Implements TriMesh, the conforming triangulation every other object of
peterlin lives on, together with point location.
"""

import numpy as np


# Distance outside the domain below which points are snapped onto it.
SNAP_TOLERANCE = 1e-10

# Barycentric coordinates above -BARY_TOLERANCE are considered inside.
BARY_TOLERANCE = 1e-13

BOUNDARY_TOLERANCE = 1e-12


class PointOutsideDomainError(ValueError):
    """Raised when a point lies farther than ``SNAP_TOLERANCE`` outside the
    domain.

    Attributes
    ----------

    point : numpy.ndarray
      The offending point.

    distance : float
      Its distance to the closed domain.
    """

    default_message = "point outside domain"

    def __init__(self, point, distance, message=None):
        self.point = np.asarray(point, dtype=float)
        self.distance = float(distance)
        super().__init__(
            "%s: %s at distance %.3e"
            % (message or self.default_message, self.point.tolist(), self.distance)
        )


def distance_outside(points, lower=0.0, upper=1.0):
    """Distances of ``points`` (Nx2) to the closed box ``[lower, upper]^2``."""
    points = np.atleast_2d(points)
    excess = np.maximum(lower - points, 0.0) + np.maximum(points - upper, 0.0)
    return np.hypot(excess[:, 0], excess[:, 1])


def snap_to_domain(points, lower=0.0, upper=1.0, error_class=PointOutsideDomainError):
    """Snaps points lying within ``SNAP_TOLERANCE`` outside the box back onto its
    boundary.

    Raises ``error_class`` for the first point farther away than that.
    """
    points = np.array(points, dtype=float, ndmin=2)
    distances = distance_outside(points, lower, upper)
    escaped = np.flatnonzero(distances > SNAP_TOLERANCE)
    if escaped.size:
        first = escaped[0]
        raise error_class(points[first], distances[first])
    return np.clip(points, lower, upper)


class TriMesh:
    """Conforming triangulation of a polygonal domain.

    A TriMesh is immutable after construction: every derived quantity is computed
    once in ``__init__`` and arrays are flagged read-only, so a mesh can be shared
    between workers.

    Parameters
    ----------

    vertices : array_like
      Nx2 array of vertex coordinates.

    triangles : array_like
      Mx3 array of vertex indices, counterclockwise.

    structured_n : int, optional
      Division number ``N`` when the mesh is the structured grid built by
      ``build_structured``. Enables O(1) point location.

    Attributes
    ----------

    boundary_vertex : numpy.ndarray
      Boolean per vertex, true when a coordinate equals 0 or 1 (within 1e-12).

    areas : numpy.ndarray
      Area of each triangle.

    h_K : numpy.ndarray
      Diameter (longest edge) of each triangle.

    h : float
      Largest diameter.

    basis_gradients : numpy.ndarray
      Mx3x2 array, constant gradients of the three barycentric basis functions
      of each triangle.

    neighbors : numpy.ndarray
      Mx3 array, index of the triangle across the edge opposite to each local
      vertex, ``-1`` on the boundary.
    """

    def __init__(self, vertices, triangles, structured_n=None):
        self.vertices = np.array(vertices, dtype=float).reshape(-1, 2)
        self.triangles = np.array(triangles, dtype=np.int64).reshape(-1, 3)
        self.structured_n = structured_n

        n_vertices = len(self.vertices)
        if self.triangles.size and (
            self.triangles.min() < 0 or self.triangles.max() >= n_vertices
        ):
            raise ValueError("Triangle vertex indices out of range")

        corners = self.vertices[self.triangles]
        edge_1 = corners[:, 1] - corners[:, 0]
        edge_2 = corners[:, 2] - corners[:, 0]
        signed_areas = 0.5 * (edge_1[:, 0] * edge_2[:, 1] - edge_1[:, 1] * edge_2[:, 0])
        if np.any(signed_areas <= 0):
            bad = int(np.flatnonzero(signed_areas <= 0)[0])
            raise ValueError(
                "Triangle %d is not counterclockwise or is degenerate "
                "(signed area %g)" % (bad, signed_areas[bad])
            )
        self.areas = signed_areas

        edges = corners[:, [1, 2, 0]] - corners[:, [2, 0, 1]]
        self.h_K = np.sqrt((edges**2).sum(axis=2)).max(axis=1)
        self.h = float(self.h_K.max())

        # Rows of the inverse Jacobian are the gradients of lambda_1, lambda_2.
        jacobians = np.stack([edge_1, edge_2], axis=2)
        inverse = np.linalg.inv(jacobians)
        gradients = np.empty((len(self.triangles), 3, 2))
        gradients[:, 1:] = inverse
        gradients[:, 0] = -inverse.sum(axis=1)
        self.basis_gradients = gradients

        on_side = (np.abs(self.vertices) < BOUNDARY_TOLERANCE) | (
            np.abs(self.vertices - 1.0) < BOUNDARY_TOLERANCE
        )
        self.boundary_vertex = on_side.any(axis=1)

        self.neighbors = self._compute_neighbors()
        self.lower = self.vertices.min(axis=0) if n_vertices else np.zeros(2)
        self.upper = self.vertices.max(axis=0) if n_vertices else np.ones(2)

        for array in (
            self.vertices,
            self.triangles,
            self.areas,
            self.h_K,
            self.basis_gradients,
            self.boundary_vertex,
            self.neighbors,
        ):
            array.flags.writeable = False

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_triangles(self):
        return len(self.triangles)

    def _compute_neighbors(self):
        """Triangle adjacency through shared edges. Raises if an edge is shared
        by more than two triangles.
        """
        n_triangles = len(self.triangles)
        neighbors = -np.ones((n_triangles, 3), dtype=np.int64)
        if not n_triangles:
            return neighbors

        # edge opposite to local vertex i joins the two other vertices
        local_edges = [(1, 2), (2, 0), (0, 1)]
        edges = np.concatenate(
            [np.sort(self.triangles[:, list(pair)], axis=1) for pair in local_edges]
        )
        owners = np.tile(np.arange(n_triangles), 3)
        local = np.repeat(np.arange(3), n_triangles)

        order = np.lexsort((edges[:, 1], edges[:, 0]))
        edges, owners, local = edges[order], owners[order], local[order]
        same = np.all(edges[1:] == edges[:-1], axis=1)
        if np.any(same[1:] & same[:-1]):
            raise ValueError("An edge is shared by more than two triangles")

        first = np.flatnonzero(same)
        second = first + 1
        neighbors[owners[first], local[first]] = owners[second]
        neighbors[owners[second], local[second]] = owners[first]
        return neighbors

    def barycentric(self, triangle, point):
        """Barycentric coordinates of ``point`` with respect to ``triangle``."""
        point = np.asarray(point, dtype=float)
        origin = self.vertices[self.triangles[triangle, 0]]
        gradients = self.basis_gradients[triangle]
        coords = np.empty(3)
        coords[1:] = gradients[1:] @ (point - origin)
        coords[0] = 1.0 - coords[1] - coords[2]
        return coords

    def locate(self, point, hint=None):
        """Finds the triangle containing ``point``.

        Parameters
        ----------

        point : array_like
          2D coordinates. Points within ``SNAP_TOLERANCE`` outside the domain are
          snapped onto its boundary first.

        hint : int, optional
          Triangle where the walking search starts on unstructured meshes.

        Returns
        -------

        (int, numpy.ndarray)
          Triangle index and the barycentric coordinates of the point in it.

        Raises
        ------

        PointOutsideDomainError
          When the point lies farther than ``SNAP_TOLERANCE`` outside the domain.
        """
        triangles, coords = self.locate_many(
            np.asarray(point, dtype=float).reshape(1, 2),
            hints=None if hint is None else [hint],
        )
        return int(triangles[0]), coords[0]

    def locate_many(self, points, hints=None):
        """Vectorized ``locate``: returns arrays of triangle indices and Nx3
        barycentric coordinates.
        """
        points = snap_to_domain(points, self.lower, self.upper)
        if self.structured_n is not None:
            return self._locate_structured(points)

        if hints is None:
            hints = np.zeros(len(points), dtype=np.int64)
        found = np.empty(len(points), dtype=np.int64)
        coords = np.empty((len(points), 3))
        for index, (point, hint) in enumerate(zip(points, hints)):
            found[index], coords[index] = self._walk(point, int(hint))
        return found, coords

    def _locate_structured(self, points):
        n = self.structured_n
        scaled = points * n
        cells = np.minimum(np.floor(scaled), n - 1).astype(np.int64)
        s, r = (scaled - cells).T
        lower = s >= r
        cell = cells[:, 0] + n * cells[:, 1]
        triangles = 2 * cell + (~lower)

        coords = np.where(
            lower[:, None],
            np.stack([1.0 - s, s - r, r], axis=1),
            np.stack([1.0 - r, s, r - s], axis=1),
        )
        return triangles, coords

    def _walk(self, point, start):
        """Visibility walk from ``start``; falls back on an exhaustive search
        when the walk leaves through the boundary (non-convex meshes).
        """
        triangle = start if 0 <= start < self.n_triangles else 0
        for _ in range(self.n_triangles):
            coords = self.barycentric(triangle, point)
            worst = int(np.argmin(coords))
            if coords[worst] >= -BARY_TOLERANCE:
                return triangle, _clean(coords)
            following = self.neighbors[triangle, worst]
            if following < 0:
                break
            triangle = following
        return self._search_all(point)

    def _search_all(self, point):
        origins = self.vertices[self.triangles[:, 0]]
        coords = np.empty((self.n_triangles, 3))
        coords[:, 1:] = np.einsum(
            "kij,kj->ki", self.basis_gradients[:, 1:], point - origins
        )
        coords[:, 0] = 1.0 - coords[:, 1] - coords[:, 2]
        best = int(np.argmax(coords.min(axis=1)))
        if coords[best].min() < -SNAP_TOLERANCE:
            raise PointOutsideDomainError(point, -coords[best].min())
        return best, _clean(coords[best])

    def point_from_barycentric(self, triangle, coords):
        """Reconstructs the position ``sum_i coords_i * v_i``."""
        return np.asarray(coords) @ self.vertices[self.triangles[triangle]]

    def quadrature_points(self, rule):
        """Physical coordinates of the quadrature points of ``rule`` on every
        triangle, as an (n_triangles, n_points, 2) array.
        """
        return np.einsum("qa,kai->kqi", rule.points, self.vertices[self.triangles])


def _clean(coords):
    coords = np.maximum(coords, 0.0)
    return coords / coords.sum()


def build_structured(n):
    """Uniform triangulation of the unit square with ``n`` divisions per side.

    Every grid square is split along its diagonal from lower-left to
    upper-right. Vertex ``(i, j)`` has index ``i + j * (n + 1)``; the cell
    ``(i, j)`` owns triangles ``2 * (i + j * n)`` (lower) and
    ``2 * (i + j * n) + 1`` (upper).

    Parameters
    ----------

    n : int
      Number of divisions of each side, at least 1.

    Examples
    --------

    >>> mesh = build_structured(32)
    >>> mesh.n_vertices, mesh.n_triangles
    (1089, 2048)
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError("'n' should be a positive integer, got %r" % (n,))
    n = int(n)

    coords = np.arange(n + 1) / n
    xx, yy = np.meshgrid(coords, coords)
    vertices = np.stack([xx.ravel(), yy.ravel()], axis=1)

    i, j = np.meshgrid(np.arange(n), np.arange(n))
    i, j = i.ravel(), j.ravel()
    v00 = i + j * (n + 1)
    v10 = v00 + 1
    v01 = v00 + n + 1
    v11 = v01 + 1
    triangles = np.empty((2 * n * n, 3), dtype=np.int64)
    triangles[0::2] = np.stack([v00, v10, v11], axis=1)
    triangles[1::2] = np.stack([v00, v11, v01], axis=1)

    return TriMesh(vertices, triangles, structured_n=n)
