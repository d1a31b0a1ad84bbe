"""Discretized algebroid paths, the 2-form Omega, gauge flows and their checks."""

from tpw.pathspace.forms import (
    OMEGA1_WEIGHT,
    momentum,
    omega,
    omega0,
    omega0_density,
    omega1,
    omega1_density,
    omega1_matrices,
    transgression,
)
from tpw.pathspace.gauge import (
    EPS_FD,
    FLOW_STEPS,
    TRANSPORT_EPS,
    gauge_flow,
    gauge_vector_field,
    hamiltonian_relation_residual,
    hamiltonian_vector_field,
    horizontality_residual,
    invariance_residual,
    transported_tangent,
)
from tpw.pathspace.grid import Grid, derivative_matrix
from tpw.pathspace.numeric_model import NumericModel, numeric
from tpw.pathspace.paths import (
    AlgebroidPath,
    GaugeGenerator,
    PathDivergenceError,
    PathTangent,
    anchor_residual,
    anchor_residual_norm,
    identity_path,
    solve_base_path,
)
from tpw.pathspace.stokes import PolynomialFamily, stokes_residual, stokes_terms

__all__ = [
    "EPS_FD",
    "FLOW_STEPS",
    "OMEGA1_WEIGHT",
    "TRANSPORT_EPS",
    "AlgebroidPath",
    "GaugeGenerator",
    "Grid",
    "NumericModel",
    "PathDivergenceError",
    "PathTangent",
    "PolynomialFamily",
    "anchor_residual",
    "anchor_residual_norm",
    "derivative_matrix",
    "gauge_flow",
    "gauge_vector_field",
    "hamiltonian_relation_residual",
    "hamiltonian_vector_field",
    "horizontality_residual",
    "identity_path",
    "invariance_residual",
    "momentum",
    "numeric",
    "omega",
    "omega0",
    "omega0_density",
    "omega1",
    "omega1_density",
    "omega1_matrices",
    "solve_base_path",
    "stokes_residual",
    "stokes_terms",
    "transgression",
    "transported_tangent",
]
