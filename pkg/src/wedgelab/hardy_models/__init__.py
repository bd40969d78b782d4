from .halfplane import (
    DELTA_SIGN,
    GENERATING_PHASE,
    MEMBERSHIP_THRESHOLD,
    affine_action,
    calibrate_delta_sign,
    halfplane_J,
    halfplane_kernel,
    halfplane_membership,
    mellin_J,
    mellin_transform,
    membership_report,
    plancherel_defect,
    rotation_path_residual,
    sigma_grid,
)
from .kernels import HALFPLANE, STRIP, KernelCombination, KernelModel, SmearedVector, smear
from .quadrature import TestFunction, bump, gauss_legendre_panels, interval_family
from .strip import (
    KMS_THRESHOLD,
    apply_J,
    boundary_distribution,
    boundary_gram,
    boundary_gram_stability,
    continued_orbit,
    kms_report,
    orbit_norm_squared,
    strip_J,
    strip_kernel,
    strip_kms_test,
    strip_translate,
)
from .net import (
    AffineNet,
    affine_net,
    containment_residual,
    covariance_gap,
    frequency_vector,
    isotony_residual,
    nested_pairs,
    net_checks,
    reeh_schlieder_rank,
    subspace_gap,
)
