"""Matrix Lie algebra structure theory and invariant cones."""

from .algebra import (
    AlgebraElement,
    Grading,
    Involution,
    LieAlgebra,
    Spectrum,
    Subspace,
    ad_matrix,
    adjoint_exp,
    bracket,
    cartan_involution_transpose,
    compose,
    eigenspace_split,
    grading,
    grading_projections,
    is_elliptic,
    is_euler,
    is_hyperbolic,
    killing_form,
    matrix_spectrum,
    span,
    spectrum,
    tau_h,
)
from .library import builtin_algebra, euler_element, so_1d, so_2d, so_pq, sl2, su11
from .cones import (
    ConvexCone,
    Membership,
    cone_contains,
    cone_contains_interior,
    cone_dual,
    cone_interior_margin,
    cone_is_generating,
    cone_is_pointed,
    cone_make,
    cone_membership,
    invariance_defect,
    orbit_cone,
)
