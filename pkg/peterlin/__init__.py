"""Nonlinear stabilized Lagrange-Galerkin scheme for the Oseen-type Peterlin
viscoelastic model, with P1 finite elements and a manufactured-solution
convergence harness.

Everything needed to set up and run a simulation can be imported directly,
as in ``from peterlin import LagrangeGalerkin, build_structured``.
"""

from peterlin.characteristics import (
    UpwindEscapeError,
    VelocityField,
    check_step_condition,
    transported_load,
    upwind_point,
)
from peterlin.fem import AnalyticField, FeFunction, get_rule, norms
from peterlin.linalg import LinearSolveError, SparseMatrix, solve
from peterlin.manufactured import ExactSolution, get_exact_solution, relative_errors
from peterlin.mesh import (
    PointOutsideDomainError,
    TriMesh,
    build_structured,
    read_mesh,
    write_mesh,
)
from peterlin.scheme import (
    LagrangeGalerkin,
    NewtonDivergedError,
    SchemeParams,
    StateTriple,
    StepFailedError,
    adjugate,
    cancellation_residual,
    stokes_project,
)
from peterlin.version import __version__


__all__ = [
    "__version__",
    "TriMesh",
    "build_structured",
    "read_mesh",
    "write_mesh",
    "PointOutsideDomainError",
    "SparseMatrix",
    "LinearSolveError",
    "solve",
    "FeFunction",
    "AnalyticField",
    "get_rule",
    "norms",
    "VelocityField",
    "UpwindEscapeError",
    "upwind_point",
    "transported_load",
    "check_step_condition",
    "SchemeParams",
    "StateTriple",
    "LagrangeGalerkin",
    "NewtonDivergedError",
    "StepFailedError",
    "stokes_project",
    "adjugate",
    "cancellation_residual",
    "ExactSolution",
    "get_exact_solution",
    "relative_errors",
]
