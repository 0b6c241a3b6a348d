from peterlin.scheme.LagrangeGalerkin import (
    LagrangeGalerkin,
    NewtonDivergedError,
    StepFailedError,
)
from peterlin.scheme.params import SchemeParams, StateTriple
from peterlin.scheme.stokes import stokes_project
from peterlin.scheme.tensors import adjugate, cancellation_residual


__all__ = [
    "LagrangeGalerkin",
    "NewtonDivergedError",
    "StepFailedError",
    "SchemeParams",
    "StateTriple",
    "stokes_project",
    "adjugate",
    "cancellation_residual",
]
