"""Reading and writing meshes in the plain-text interchange format.

The format is: line 1 ``"nv nt"``, then ``nv`` lines ``"x y"``, then ``nt`` lines
``"i j k"`` with 0-based vertex indices, one record per line.
"""

import numpy as np

from peterlin.decorators import convert_path_to_string
from peterlin.mesh.TriMesh import TriMesh


@convert_path_to_string(["filename"])
def read_mesh(filename):
    """Loads a TriMesh from ``filename``.

    Raises
    ------

    ValueError
      When the header or a record does not match the format. The message names
      the offending line.
    """
    with open(filename) as file:
        lines = [line.strip() for line in file]
    while lines and not lines[-1]:
        lines.pop()

    if not lines:
        raise ValueError(f"{filename}: empty mesh file")
    try:
        n_vertices, n_triangles = (int(field) for field in lines[0].split())
    except ValueError:
        raise ValueError(f"{filename}, line 1: expected 'nv nt', got {lines[0]!r}")

    expected = 1 + n_vertices + n_triangles
    if len(lines) != expected:
        raise ValueError(
            f"{filename}: expected {expected} lines for {n_vertices} vertices and "
            f"{n_triangles} triangles, found {len(lines)}"
        )

    vertices = np.empty((n_vertices, 2))
    triangles = np.empty((n_triangles, 3), dtype=np.int64)
    for number, line in enumerate(lines[1:], start=2):
        fields = line.split()
        try:
            if number <= n_vertices + 1:
                if len(fields) != 2:
                    raise ValueError
                vertices[number - 2] = [float(field) for field in fields]
            else:
                if len(fields) != 3:
                    raise ValueError
                triangles[number - 2 - n_vertices] = [int(field) for field in fields]
        except ValueError:
            raise ValueError(f"{filename}, line {number}: malformed record {line!r}")

    return TriMesh(vertices, triangles)


@convert_path_to_string(["filename"])
def write_mesh(mesh, filename):
    """Writes ``mesh`` to ``filename`` using the interchange format.

    Coordinates are written with 17 significant digits so reading the file back
    reproduces the mesh exactly.
    """
    with open(filename, "w") as file:
        file.write(f"{mesh.n_vertices} {mesh.n_triangles}\n")
        for x, y in mesh.vertices:
            file.write(f"{x:.17g} {y:.17g}\n")
        for i, j, k in mesh.triangles:
            file.write(f"{i} {j} {k}\n")
