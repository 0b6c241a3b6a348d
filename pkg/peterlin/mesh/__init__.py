from peterlin.mesh.io import read_mesh, write_mesh
from peterlin.mesh.TriMesh import (
    PointOutsideDomainError,
    TriMesh,
    build_structured,
    snap_to_domain,
)


__all__ = [
    "TriMesh",
    "build_structured",
    "PointOutsideDomainError",
    "snap_to_domain",
    "read_mesh",
    "write_mesh",
]
