"""Causal symmetric space models built on quadrics and on SL(2,R)."""

from .group import (
    GROUP_INVOLUTIONS,
    SemigroupReport,
    check_invariance,
    default_group_cone,
    disc_action,
    group_involution,
    group_semigroup_check,
    group_wedge_contains,
    group_wedge_margin,
    quotient_embedding,
    sample_wedge_element,
    split_cone_rays,
    strip_to_bidisc,
    strip_to_disc,
    su11_matrix,
)
from .models import (
    CausalSpace,
    ComplexPoint,
    SpacePoint,
    TangentCone,
    anti_de_sitter,
    de_sitter,
    sl2_group,
    unit_disc,
)
from .wedges import (
    NegativeEulerReport,
    PointCloud,
    boundary_orbit_point,
    crown_contains,
    crown_margin,
    crown_orbit_point,
    ds_wedge_oracle,
    kms_domain_contains,
    kms_margin,
    modular_flow,
    modular_vector_field,
    negative_euler_check,
    positivity_domain_contains,
    positivity_margin,
    positivity_margins,
    strip_grid,
    tangent_cone,
    wedge_sample,
)
