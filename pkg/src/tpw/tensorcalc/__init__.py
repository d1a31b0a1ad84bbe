"""Coordinate tensor calculus for twisted Poisson structures."""

from tpw.tensorcalc.brackets import (
    StructureFunctions,
    anchor_morphism_residual,
    bracket_consistency_residual,
    differential_bracket_residual,
    hamiltonian_bracket_residual,
    hamiltonian_vf,
    jacobi_trivector,
    jacobiator,
    pairing,
    phi_contraction,
    phi_trivector,
    poisson_bracket_fn,
    sharp,
    structure_functions,
    twisted_bracket,
    twisted_jacobi_residual,
)
from tpw.tensorcalc.delta import (
    NotTwistedPoissonError,
    delta,
    delta_identities_residuals,
    delta_square_residual,
    derivation_residual,
    extended_bracket,
)
from tpw.tensorcalc.forms import (
    Bivector,
    KForm,
    MultiVector,
    ThreeForm,
    exterior_derivative,
    interior,
    lie_derivative,
    vector_bracket,
    wedge,
)
from tpw.tensorcalc.model import ALLOWED_CONSTANTS, CalibrationConstants, Model, ModelError

__all__ = [
    "ALLOWED_CONSTANTS",
    "Bivector",
    "CalibrationConstants",
    "KForm",
    "Model",
    "ModelError",
    "MultiVector",
    "NotTwistedPoissonError",
    "StructureFunctions",
    "ThreeForm",
    "anchor_morphism_residual",
    "bracket_consistency_residual",
    "delta",
    "delta_identities_residuals",
    "delta_square_residual",
    "derivation_residual",
    "differential_bracket_residual",
    "extended_bracket",
    "exterior_derivative",
    "hamiltonian_bracket_residual",
    "hamiltonian_vf",
    "interior",
    "jacobi_trivector",
    "jacobiator",
    "lie_derivative",
    "pairing",
    "phi_contraction",
    "phi_trivector",
    "poisson_bracket_fn",
    "sharp",
    "structure_functions",
    "twisted_bracket",
    "twisted_jacobi_residual",
    "vector_bracket",
    "wedge",
]
