"""Groupoid operations on path representatives and the structure of Omega at the identity."""

from tpw.groupoid.elements import (
    GLUE_TOL,
    GlueError,
    GroupoidElementRep,
    arc_length_split,
    concatenate,
    flatten_rate,
    flatten_time,
    identity_element,
    invert,
    invert_tangent,
    join_tangents,
)
from tpw.groupoid.structure import (
    BasePairing,
    base_pairing,
    horizontal_constant,
    multiplicativity_residual,
    nondegeneracy_at_identity,
    omega_gram_at_identity,
    identity_section_checks,
    prop22_checks,
    unit_fiber_lift,
)

__all__ = [
    "GLUE_TOL",
    "BasePairing",
    "GlueError",
    "GroupoidElementRep",
    "arc_length_split",
    "base_pairing",
    "concatenate",
    "flatten_rate",
    "flatten_time",
    "horizontal_constant",
    "identity_element",
    "invert",
    "invert_tangent",
    "join_tangents",
    "multiplicativity_residual",
    "nondegeneracy_at_identity",
    "omega_gram_at_identity",
    "identity_section_checks",
    "prop22_checks",
    "unit_fiber_lift",
]
