"""Hardy space of the strip 0 < Im z < pi with translation flow and J."""

from __future__ import annotations

import numpy as np

from ..errors import DomainError
from .kernels import STRIP, KernelCombination, SmearedVector, smear
from .quadrature import DEFAULT_NODES, TestFunction

DEFAULT_EPSILON = 1e-3
EPSILON_LADDER = (1e-2, 1e-3, 1e-4)
KMS_THRESHOLD = 1e-6


def strip_kernel(z, w):
    """i / (4 pi sinh((z - conj w)/2)); diagonal value 1/(4 pi sin(Im z))."""
    return STRIP.kernel(z, w)


def strip_J(w):
    """Parameter w' with J K_w = K_{w'}."""
    STRIP.check_domain(w)
    return STRIP.j_parameter(w)


def strip_translate(t, w):
    """Parameter of U_t K_w = K_{w - t}, where (U_t F)(z) = F(z + t)."""
    STRIP.check_domain(w)
    return np.asarray(w, dtype=complex) - np.asarray(t, dtype=float)


def apply_J(combo):
    """Antilinear J on a kernel combination: sum c K_w -> sum conj(c) K_{J w}."""
    return KernelCombination(combo.model, combo.model.j_parameter(combo.points), np.conj(combo.coeffs))


def apply_function_J(f, z):
    """(J F)(z) = conj(F(pi i + conj z)) for a callable F on the strip."""
    z = np.asarray(z, dtype=complex)
    return np.conj(f(np.pi * 1j + np.conj(z)))


def orbit_norm_squared(t):
    """||alpha^eta(i t)||^2 for eta = K_{pi i/2}, i.e. K(w, w) at w = pi i/2 + i t."""
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) >= np.pi / 2):
        raise DomainError("orbit continuation needs |t| < pi/2")
    w = 1j * (np.pi / 2 + t)
    return np.real(STRIP.kernel(w, w))


def boundary_distribution(x, side="lower", epsilon=DEFAULT_EPSILON):
    """Boundary value of K(., 0) on the lower or upper edge.

    The lower edge is regularized as i/(4 pi sinh((x + i eps)/2)); eps = 0 is
    allowed only away from the singular point x = 0. The upper edge is the
    direct evaluation i/(4 pi sinh((x + i pi)/2)) = 1/(4 pi cosh(x/2)).
    """
    x = np.asarray(x, dtype=float)
    if side == "upper":
        return 1j / (4 * np.pi * np.sinh((x + 1j * np.pi) / 2))
    if side != "lower":
        raise DomainError(f"side must be 'lower' or 'upper', got {side!r}")
    if epsilon < 0 or (epsilon == 0 and np.any(x == 0)):
        raise DomainError("lower boundary value needs eps > 0 on the singular ray")
    return 1j / (4 * np.pi * np.sinh((x + 1j * epsilon) / 2))


def boundary_gram(points, epsilon=DEFAULT_EPSILON):
    """Regularized Gram D(x_i - x_j) of lower-boundary points."""
    x = np.asarray(points, dtype=float).ravel()
    if epsilon <= 0:
        raise DomainError("boundary Gram needs eps > 0")
    return boundary_distribution(x[:, None] - x[None, :], "lower", epsilon)


def boundary_gram_stability(points, epsilons=EPSILON_LADDER):
    """Minimum eigenvalue of the Hermitian part of the boundary Gram for each eps."""
    out = {}
    for eps in epsilons:
        g = boundary_gram(points, eps)
        out[eps] = float(np.linalg.eigvalsh(0.5 * (g + g.conj().T)).min())
    return out


def smeared_vector(phi, phase=1.0, n_nodes=DEFAULT_NODES):
    return SmearedVector.from_test_function(STRIP, phi, phase, n_nodes)


def continued_orbit(vec, z, u):
    """alpha^xi(z)(u) = sum_k c_k K(u + z, x_k), evaluated by the closed-form shift."""
    u = np.asarray(u, dtype=complex)
    k = STRIP.raw_kernel(u[..., None] + z, vec.boundary_points)
    return k @ vec.coefficients


def strip_kms_test(phi, phase=1.0, n_nodes=DEFAULT_NODES):
    """Relative residual of alpha^xi(pi i) - J xi on the evaluation set.

    ``phi`` is a TestFunction or a SmearedVector; ``phase`` multiplies the
    test function. A zero vector has residual 0 by convention.
    """
    if isinstance(phi, TestFunction):
        vec = smeared_vector(phi, phase, n_nodes)
    else:
        vec = SmearedVector(STRIP, phi.nodes, phi.weights, phi.values, phi.phase * phase, phi.interval)
    if np.iscomplexobj(vec.values) and np.any(np.abs(np.imag(vec.values)) > 0):
        raise DomainError("the strip test function must be real-valued")
    pts = STRIP.evaluation_set()
    xi = smear(STRIP, vec, pts)
    norm = float(np.linalg.norm(xi))
    if norm == 0.0:
        return 0.0
    cont = continued_orbit(vec, np.pi * 1j, pts)
    jxi = apply_function_J(lambda z: smear(STRIP, vec, z), pts)
    return float(np.linalg.norm(cont - jxi) / norm)


def kms_report(phi, phase=1.0, n_nodes=DEFAULT_NODES, threshold=KMS_THRESHOLD):
    r = strip_kms_test(phi, phase, n_nodes)
    return {"model": "strip", "phase": _phase_repr(phase), "support": list(phi.support),
            "nodes": n_nodes, "residual": r, "verdict": "member" if r <= threshold else "not member"}


def _phase_repr(phase):
    phase = complex(phase)
    return [phase.real, phase.imag]
