import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wedgelab import DomainError, PreconditionError, SingularityError
from wedgelab.hardy_models import (
    DELTA_SIGN,
    GENERATING_PHASE,
    HALFPLANE,
    STRIP,
    KernelCombination,
    KernelModel,
    SmearedVector,
    TestFunction,
    affine_action,
    affine_net,
    apply_J,
    boundary_distribution,
    boundary_gram,
    boundary_gram_stability,
    calibrate_delta_sign,
    covariance_gap,
    gauss_legendre_panels,
    halfplane_J,
    halfplane_kernel,
    halfplane_membership,
    interval_family,
    isotony_residual,
    kms_report,
    membership_report,
    orbit_norm_squared,
    plancherel_defect,
    reeh_schlieder_rank,
    rotation_path_residual,
    smear,
    strip_J,
    strip_kernel,
    strip_kms_test,
    strip_translate,
)
from wedgelab.hardy_models.strip import smeared_vector as strip_vector

FOUR_PI = 4 * np.pi
strip_points = st.tuples(st.floats(-3, 3), st.floats(0.05, np.pi - 0.05)).map(lambda p: p[0] + 1j * p[1])
upper_points = st.tuples(st.floats(-3, 3), st.floats(0.05, 3)).map(lambda p: p[0] + 1j * p[1])


def _interior(model, rng, n):
    top = np.pi - 0.1 if model.kind == "strip" else 3.0
    return rng.uniform(-3, 3, n) + 1j * rng.uniform(0.1, top, n)


# ----------------------------------------------------------------------
# quadrature


def test_gauss_legendre_panels_integrate_smooth_functions():
    x, w = gauss_legendre_panels(0.0, np.pi, 256)
    assert np.isclose(np.sum(w * np.sin(x)), 2.0, atol=1e-13)
    assert np.all(w > 0)


def test_test_function_support_and_transport():
    phi = TestFunction.on_interval(1.0, 2.0)
    assert phi.support == (1.0, 2.0)
    assert phi(1.0) == 0.0 and phi(1.5) > 0
    moved = phi.transported(0.5, 2.0)
    assert moved.support == (2.5, 4.5)
    assert np.isclose(moved.l2_norm_squared(), phi.l2_norm_squared())
    with pytest.raises(DomainError):
        phi.transported(0.0, -1.0)


def test_interval_family_stays_inside():
    for phi in interval_family(-1.0, 3.0, 5):
        assert phi.within(-1.0, 3.0)


def test_smeared_vector_validates_quadrature_data():
    with pytest.raises(DomainError):
        SmearedVector(STRIP, [0.0, 1.0], [1.0, -1.0], [1.0, 1.0])
    with pytest.raises(DomainError):
        SmearedVector(STRIP, [0.0, 3.0], [1.0, 1.0], [1.0, 1.0], 1.0, (0.0, 1.0))


# ----------------------------------------------------------------------
# strip kernel


def test_strip_kernel_golden_values():
    w = 0.5j * np.pi
    assert abs(strip_kernel(w, w) - 1 / FOUR_PI) < 1e-12
    assert abs(strip_kernel(w + 2.3, w + 2.3) - 1 / FOUR_PI) < 1e-12
    z = 0.3 + 1.1j
    assert abs(strip_kernel(z, z) - 1 / (FOUR_PI * np.sin(1.1))) < 1e-12
    a, b = 0.25j * np.pi, 1 + 1j * np.pi / 3
    assert abs(strip_kernel(a, b) - np.conj(strip_kernel(b, a))) < 1e-12


def test_strip_kernel_errors():
    with pytest.raises(SingularityError):
        strip_kernel(1.0, 1.0)
    with pytest.raises(DomainError):
        strip_kernel(4j, 1j)


@given(strip_points, strip_points)
def test_strip_kernel_hermitian(z, w):
    assert abs(strip_kernel(z, w) - np.conj(strip_kernel(w, z))) <= 1e-12 * max(1.0, abs(strip_kernel(z, w)))


@pytest.mark.parametrize("model", [STRIP, HALFPLANE])
def test_gram_is_psd(model, rng):
    g = model.gram(_interior(model, rng, 64))
    assert np.abs(g - g.conj().T).max() < 1e-12
    assert np.linalg.eigvalsh(g).min() >= -1e-10


def test_strip_J_parameters():
    assert np.isclose(strip_J(0.5j * np.pi), 0.5j * np.pi)
    assert np.isclose(strip_J(1.7 + 0.5j * np.pi), 1.7 + 0.5j * np.pi)
    assert np.isclose(strip_translate(0.4, 1 + 1j), 0.6 + 1j)


@given(strip_points, strip_points)
def test_strip_J_functional_identity(z, w):
    lhs = np.conj(strip_kernel(np.pi * 1j + np.conj(z), w))
    assert abs(lhs - strip_kernel(z, strip_J(w))) <= 1e-12 * max(1.0, abs(lhs))


@given(strip_points, strip_points, st.floats(-2, 2))
def test_strip_translation_covariance(z, w, t):
    lhs = strip_kernel(z + t, w)
    assert abs(lhs - strip_kernel(z, strip_translate(t, w))) <= 1e-12 * max(1.0, abs(lhs))


def test_J_is_isometric_and_involutive(rng):
    for model, jfun in ((STRIP, apply_J), (HALFPLANE, halfplane_J)):
        c = KernelCombination(model, _interior(model, rng, 12), rng.standard_normal(12) + 1j * rng.standard_normal(12))
        j = jfun(c)
        assert abs(j.norm() - c.norm()) <= 1e-12
        jj = jfun(j)
        pts = _interior(model, rng, 5)
        assert np.allclose(jj(pts), c(pts), atol=1e-12)
        # anti-unitary: <J a, J b> = conj <a, b>
        d = KernelCombination(model, _interior(model, rng, 4), rng.standard_normal(4))
        assert abs(jfun(c).inner(jfun(d)) - np.conj(c.inner(d))) < 1e-12


def test_orbit_norm_closed_form():
    ts = np.linspace(-0.45 * np.pi, 0.45 * np.pi, 20)
    assert np.allclose(orbit_norm_squared(ts), 1 / (FOUR_PI * np.sin(np.pi / 2 + ts)), atol=1e-10, rtol=0)
    assert np.isclose(orbit_norm_squared(np.pi / 4), np.sqrt(2) / FOUR_PI)
    grid = np.linspace(0, 0.49 * np.pi, 50)
    assert np.all(np.diff(orbit_norm_squared(grid)) > 0)
    assert orbit_norm_squared(0.49 * np.pi) > orbit_norm_squared(0.4 * np.pi)
    with pytest.raises(DomainError):
        orbit_norm_squared(np.pi / 2)


def test_boundary_distribution_values():
    assert np.isclose(boundary_distribution(0.0, "upper"), 1 / FOUR_PI, atol=1e-12)
    x = np.linspace(-4, 4, 17)
    assert np.allclose(boundary_distribution(x, "upper"), 1 / (FOUR_PI * np.cosh(x / 2)), atol=1e-12)
    assert np.isclose(boundary_distribution(2.0, "lower", 0.0), 1j / (FOUR_PI * np.sinh(1.0)))
    assert abs(boundary_distribution(2.0, "lower", 1e-9) - 1j / (FOUR_PI * np.sinh(1.0))) < 1e-9
    with pytest.raises(DomainError):
        boundary_distribution(0.0, "lower", 0.0)
    with pytest.raises(DomainError):
        boundary_distribution(1.0, "lower", -1e-3)
    with pytest.raises(DomainError):
        boundary_distribution(1.0, "side")


def test_regularized_boundary_gram_is_psd():
    x = np.linspace(-3, 3, 32)
    g = boundary_gram(x, 1e-3)
    assert np.linalg.eigvalsh(0.5 * (g + g.conj().T)).min() >= -1e-8
    stability = boundary_gram_stability(x)
    assert set(stability) == {1e-2, 1e-3, 1e-4}
    assert all(v >= -1e-8 for v in stability.values())


# ----------------------------------------------------------------------
# smearing and the strip KMS test


def test_smear_zero_and_linearity():
    pts = STRIP.evaluation_set()
    zero = TestFunction(0.0, 1.0, amplitude=0.0)
    assert np.allclose(smear(STRIP, zero, pts), 0)
    a, b = TestFunction(-0.5, 0.5), TestFunction(0.5, 0.7)
    va, vb = strip_vector(a), strip_vector(b)
    assert np.allclose(smear(STRIP, va + vb, pts), smear(STRIP, va, pts) + smear(STRIP, vb, pts), atol=1e-12)


def test_smear_matches_double_resolution():
    phi = TestFunction.on_interval(-1.0, 1.0)
    z = np.array([0.5j * np.pi])
    coarse = smear(STRIP, strip_vector(phi, n_nodes=2048), z)
    fine = smear(STRIP, strip_vector(phi, n_nodes=4096), z)
    assert np.all(np.isfinite(coarse))
    assert abs(coarse[0] - fine[0]) <= 1e-8


def test_smear_rejects_boundary_points():
    with pytest.raises(DomainError):
        smear(STRIP, strip_vector(TestFunction(0.0, 1.0)), np.array([0.5 + 0.0j]))


def test_strip_kms_membership():
    phi = TestFunction.on_interval(-1.0, 1.0)
    assert strip_kms_test(phi) <= 1e-6
    assert strip_kms_test(phi, 1j) >= 0.5
    assert strip_kms_test(TestFunction(0.0, 1.0, amplitude=0.0)) == 0.0
    rep = kms_report(phi)
    assert rep["verdict"] == "member" and set(rep) == {"model", "phase", "support", "nodes", "residual", "verdict"}


@pytest.mark.parametrize("n", [256, 512, 1024])
def test_strip_kms_refinement(n):
    phi = TestFunction(0.3, 1.2)
    coarse, fine = strip_kms_test(phi, n_nodes=n), strip_kms_test(phi, n_nodes=2 * n)
    assert fine <= coarse or fine <= 1e-6


@given(st.floats(-2, 2), st.floats(0.1, 2))
def test_real_bumps_are_kms_members(c, hw):
    assert strip_kms_test(TestFunction(c, hw), n_nodes=512) <= 1e-6


# ----------------------------------------------------------------------
# half-plane model


def test_halfplane_kernel_values():
    assert abs(halfplane_kernel(1j, 1j) - 1 / FOUR_PI) < 1e-15
    with pytest.raises(DomainError):
        halfplane_kernel(-1j, 1j)
    with pytest.raises(SingularityError):
        halfplane_kernel(0.0, 0.0)


@given(upper_points, upper_points)
def test_halfplane_kernel_hermitian(z, w):
    assert abs(halfplane_kernel(z, w) - np.conj(halfplane_kernel(w, z))) <= 1e-12 * max(1.0, abs(halfplane_kernel(z, w)))


def test_affine_action_is_unitary(rng):
    pts = _interior(HALFPLANE, rng, 16)
    c = KernelCombination(HALFPLANE, pts, rng.standard_normal(16) + 1j * rng.standard_normal(16))
    u = affine_action(0.7, 2.0, c)
    assert abs(u.norm() ** 2 - c.norm() ** 2) <= 1e-10
    g0 = HALFPLANE.gram(pts)
    g1 = HALFPLANE.gram(2.0 * pts - 0.7) * 2.0
    assert np.abs(g0 - g1).max() <= 1e-10
    ident = affine_action(0.0, 1.0, c)
    assert np.allclose(ident.points, c.points) and np.allclose(ident.coeffs, c.coeffs)
    with pytest.raises(DomainError):
        affine_action(0.0, 0.0, c)


def test_affine_action_on_functions(rng):
    # (U f)(z) = a^{-1/2} f((z + b)/a)
    c = KernelCombination(HALFPLANE, _interior(HALFPLANE, rng, 5), rng.standard_normal(5))
    b, a = 0.4, 1.7
    z = _interior(HALFPLANE, rng, 6)
    assert np.allclose(affine_action(b, a, c)(z), a ** -0.5 * c((z + b) / a), atol=1e-12)


def test_delta_sign_calibration():
    cal = calibrate_delta_sign()
    assert cal[DELTA_SIGN]["jdj_residual"] <= 1e-10
    assert cal[DELTA_SIGN]["reference_residual"] <= 1e-4
    assert cal[-DELTA_SIGN]["reference_residual"] >= 0.5


def test_halfplane_membership_examples():
    phi = TestFunction.on_interval(1.0, 2.0)
    assert halfplane_membership(phi) <= 1e-4
    assert halfplane_membership(phi, 1.0) >= 0.5
    assert halfplane_membership(TestFunction.on_interval(-2.0, -1.0)) >= 0.5
    rep = membership_report(TestFunction.on_interval(-2.0, -1.0))
    assert rep["residual"] == "inf" and rep["verdict"] == "not member"


def test_halfplane_support_touching_zero():
    with pytest.raises(PreconditionError):
        halfplane_membership(TestFunction.on_interval(-0.5, 0.5))
    with pytest.raises(PreconditionError):
        halfplane_membership(TestFunction.on_interval(1e-6, 1.0))


def test_mellin_cross_checks():
    phi = TestFunction.on_interval(1.0, 2.0)
    assert rotation_path_residual(phi) <= 1e-10
    assert plancherel_defect(phi) <= 1e-6


@given(st.floats(0.3, 4.0), st.floats(0.05, 0.5))
def test_wedge_bumps_are_members(c, frac):
    phi = TestFunction(c, frac * c)
    assert halfplane_membership(phi, GENERATING_PHASE, n_nodes=256) <= 1e-4


# ----------------------------------------------------------------------
# affine net


def test_net_isotony_example():
    net = affine_net([(1.0, 2.0), (0.0, 3.0)])
    assert isotony_residual(net, (1.0, 2.0), (0.0, 3.0)) <= 1e-8
    assert isotony_residual(net, (0.0, 3.0), (1.0, 2.0)) > 1e-3


def test_net_dilation_covariance():
    assert covariance_gap((1.0, 2.0), 0.0, 2.0) <= 1e-8
    assert covariance_gap((1.0, 2.0), 0.0, 2.5) <= 1e-8


def test_net_rejects_escaping_test_function():
    with pytest.raises(PreconditionError):
        affine_net([(0.0, 1.0)], basis={(0.0, 1.0): [TestFunction(0.9, 0.5)]})


def test_reeh_schlieder_finite_rank():
    rank, count = reeh_schlieder_rank((1.0, 1.2))
    assert rank == count


def test_evaluation_sets_are_interior():
    for model in (STRIP, HALFPLANE):
        pts = model.evaluation_set()
        assert pts.shape == (32,)
        assert np.all(model.in_domain(pts, closed=False))
    with pytest.raises(DomainError):
        KernelModel("disc")
