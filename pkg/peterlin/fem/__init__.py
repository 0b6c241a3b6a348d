"""P1 finite elements: functions, quadrature, assembly and norms."""

from peterlin.fem.assembly import (
    assemble_ac,
    assemble_au,
    assemble_b,
    assemble_mass,
    assemble_sh,
    assemble_stiffness,
    element_dofs,
    load_vector,
    mean_vector,
    quadrature_load,
    scatter,
)
from peterlin.fem.FeFunction import (
    FROBENIUS_WEIGHTS,
    AnalyticField,
    FeFunction,
    matrix_to_sym,
    sym_to_matrix,
)
from peterlin.fem.norms import h1_norm, norms, pressure_h_seminorm
from peterlin.fem.quadrature import QuadratureRule, get_rule


__all__ = [
    "FeFunction",
    "AnalyticField",
    "FROBENIUS_WEIGHTS",
    "sym_to_matrix",
    "matrix_to_sym",
    "QuadratureRule",
    "get_rule",
    "assemble_mass",
    "assemble_stiffness",
    "assemble_au",
    "assemble_b",
    "assemble_sh",
    "assemble_ac",
    "element_dofs",
    "mean_vector",
    "load_vector",
    "quadrature_load",
    "scatter",
    "norms",
    "h1_norm",
    "pressure_h_seminorm",
]
