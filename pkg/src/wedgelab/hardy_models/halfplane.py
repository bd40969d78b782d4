"""Hardy space of the upper half-plane with its affine action and modular objects.

Smeared vectors are sums of kernels at boundary points.  In frequency space
an element is F on (0, inf) with f(z) = (2 pi)^{-1/2} int F(k) e^{ikz} dk, so
K_x has F(k) = (2 pi)^{-1/2} e^{-ikx}.  The Mellin transform
MF(sigma) = int F(k) k^{s-1} dk with s = 1/2 - i sigma diagonalizes the
dilations, and the modular operator acts there by multiplication.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import scipy.special

from ..errors import DomainError, PreconditionError
from .kernels import HALFPLANE, KernelCombination, SmearedVector
from .quadrature import DEFAULT_NODES, TestFunction, gauss_legendre_panels

GENERATING_PHASE = np.exp(-0.25j * np.pi)
MEMBERSHIP_THRESHOLD = 1e-4
SIGMA_MAX = 200.0
SIGMA_NODES = 4096
# Delta = exp(DELTA_SIGN * 2 pi sigma); frozen by calibrate_delta_sign()
DELTA_SIGN = -1.0
_LOG_OVERFLOW = 700.0


def halfplane_kernel(z, w):
    """(1/2 pi) i / (z - conj w)."""
    return HALFPLANE.kernel(z, w)


def affine_action(b, a, sample):
    """U(b, a) with (U f)(z) = a^{-1/2} f((z + b)/a), so U K_w = a^{1/2} K_{a w - b}.

    ``sample`` is a KernelCombination or a SmearedVector.
    """
    if not a > 0:
        raise DomainError("dilation factor a must be positive")
    if isinstance(sample, KernelCombination):
        return KernelCombination(sample.model, a * sample.points - b, np.sqrt(a) * sample.coeffs)
    if isinstance(sample, SmearedVector):
        # boundary point -p moves to -(a p + b)
        lo, hi = sample.interval
        return SmearedVector(sample.model, a * sample.nodes + b, a * sample.weights,
                             sample.values / np.sqrt(a), sample.phase, (a * lo + b, a * hi + b))
    raise DomainError("affine_action expects a KernelCombination or SmearedVector")


def halfplane_J(sample):
    """(J f)(z) = conj f(-conj z): sum c K_w -> sum conj(c) K_{-conj w}."""
    if isinstance(sample, KernelCombination):
        return KernelCombination(sample.model, -np.conj(sample.points), np.conj(sample.coeffs))
    if isinstance(sample, SmearedVector):
        lo, hi = sample.interval
        return SmearedVector(sample.model, -sample.nodes, sample.weights, np.conj(sample.values),
                             np.conj(sample.phase), (-hi, -lo))
    raise DomainError("halfplane_J expects a KernelCombination or SmearedVector")


def smeared_vector(phi, phase=1.0, n_nodes=DEFAULT_NODES):
    """phase * sum w phi(p) K_{-p}, the smeared vector of a boundary test function."""
    return SmearedVector.from_test_function(HALFPLANE, phi, phase, n_nodes)


@lru_cache(maxsize=4)
def sigma_grid(sigma_max=SIGMA_MAX, n_nodes=SIGMA_NODES):
    """Mirror-symmetric Gauss-Legendre grid on [-sigma_max, sigma_max].

    Node i and node n-1-i are exact negatives, so G(-sigma) is a reversal.
    """
    half, w = gauss_legendre_panels(0.0, sigma_max, n_nodes // 2)
    nodes = np.concatenate([-half[::-1], half])
    weights = np.concatenate([w[::-1], w])
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _log_mellin(points, coeffs, sigma, chunk=512):
    """log of MF(sigma) for f = sum c_k K_{x_k} with real boundary points x_k != 0.

    Uses int_0^inf e^{-ikx} k^{s-1} dk = Gamma(s) (i x)^{-s}. Returns the
    complex logarithm (real part is log|MF|) to survive extreme dynamic range.
    """
    x = np.asarray(points, dtype=float)
    c = np.asarray(coeffs, dtype=complex) / np.sqrt(2 * np.pi)
    if np.any(x == 0):
        raise PreconditionError("boundary point at the origin: Mellin transform is singular")
    s = 0.5 - 1j * sigma
    lg = scipy.special.loggamma(s)
    total = np.full(sigma.shape, -np.inf + 0j)
    for sgn in (1.0, -1.0):
        m = np.sign(x) == sgn
        if not np.any(m):
            continue
        lx = np.log(np.abs(x[m]))
        cm = c[m]
        acc = np.empty(sigma.shape, dtype=complex)
        for i in range(0, sigma.size, chunk):
            sg = sigma[i:i + chunk]
            # |x|^{-s} = |x|^{-1/2} e^{i sigma log|x|}
            acc[i:i + chunk] = np.exp(1j * np.outer(sg, lx)) @ (cm * np.exp(-0.5 * lx))
        with np.errstate(divide="ignore"):
            part = lg - 1j * sgn * (np.pi / 2) * s + np.log(acc)
        total = _log_add(total, part)
    return total


def _log_add(a, b):
    """log(e^a + e^b) for complex logs, scaled by the larger real part."""
    hi = np.where(a.real >= b.real, a, b)
    lo = np.where(a.real >= b.real, b, a)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = hi + np.log1p(np.exp(lo - hi))
    return np.where(np.isfinite(lo.real), out, hi)


def mellin_transform(vec, sigma=None):
    """MF(sigma) for a SmearedVector or KernelCombination of boundary points."""
    if sigma is None:
        sigma = sigma_grid()[0]
    return np.exp(_log_mellin(*_boundary_data(vec), np.asarray(sigma, dtype=float)))


def _boundary_data(vec):
    if isinstance(vec, SmearedVector):
        return vec.boundary_points.real, vec.coefficients
    if isinstance(vec, KernelCombination):
        if np.any(np.abs(vec.points.imag) > 0):
            raise DomainError("Mellin route needs boundary (real) kernel points")
        return vec.points.real, vec.coeffs
    raise DomainError("expected a SmearedVector or KernelCombination")


def delta_power(sigma, power, sign=DELTA_SIGN):
    """Log of the Mellin multiplier of Delta^power."""
    return sign * 2 * np.pi * power * np.asarray(sigma, dtype=float)


def mellin_J(values):
    """J in Mellin space on the mirror grid: G(sigma) -> conj(G(-sigma))."""
    return np.conj(np.asarray(values)[::-1])


def _check_support(lo, hi, n_nodes):
    if lo <= 0.0 <= hi:
        raise PreconditionError("test function support contains the origin")
    gap = min(abs(lo), abs(hi))
    if gap < (hi - lo) / n_nodes:
        raise PreconditionError("support is closer to the origin than the quadrature resolution")


def _membership_residual(vec, sign=DELTA_SIGN):
    sigma, w = sigma_grid()
    logm = _log_mellin(*_boundary_data(vec), sigma)
    norm2 = float(np.sum(w * np.exp(2 * logm.real)))
    if norm2 == 0.0:
        return 0.0
    log_half = logm + delta_power(sigma, 0.5, sign)
    if np.max(log_half.real) > _LOG_OVERFLOW:
        return np.inf
    with np.errstate(over="ignore", invalid="ignore"):
        diff = np.exp(log_half) - mellin_J(np.exp(logm))
        r2 = float(np.sum(w * np.abs(diff) ** 2)) / norm2
    return float(np.sqrt(r2)) if np.isfinite(r2) else np.inf


def halfplane_membership(phi, phase=GENERATING_PHASE, n_nodes=DEFAULT_NODES):
    """||Delta^{1/2} xi - J xi|| / ||xi|| for xi = phase * xi_phi, via the Mellin route.

    Returns inf when Delta^{1/2} xi overflows on the grid, i.e. xi is far
    outside the domain of Delta^{1/2}.
    """
    lo, hi = phi.support
    _check_support(lo, hi, n_nodes)
    return _membership_residual(smeared_vector(phi, phase, n_nodes))


def membership_report(phi, phase=GENERATING_PHASE, n_nodes=DEFAULT_NODES,
                      threshold=MEMBERSHIP_THRESHOLD):
    r = halfplane_membership(phi, phase, n_nodes)
    phase = complex(phase)
    return {"model": "halfplane", "phase": [phase.real, phase.imag], "support": list(phi.support),
            "nodes": n_nodes, "residual": r if np.isfinite(r) else "inf",
            "verdict": "member" if r <= threshold else "not member"}


def plancherel_defect(phi, phase=GENERATING_PHASE, n_nodes=DEFAULT_NODES):
    """Relative gap between (1/2 pi) int |MF|^2 and the closed form |c|^2/2 int phi^2."""
    vec = smeared_vector(phi, phase, n_nodes)
    sigma, w = sigma_grid()
    mellin_norm = float(np.sum(w * np.abs(mellin_transform(vec, sigma)) ** 2)) / (2 * np.pi)
    exact = 0.5 * abs(complex(phase)) ** 2 * phi.l2_norm_squared(n_nodes)
    return abs(mellin_norm - exact) / exact


def rotation_path_residual(phi, phase=GENERATING_PHASE, n_nodes=DEFAULT_NODES):
    """Compare Delta^{1/2} xi from the Mellin multiplier with the rotated kernel sum.

    Continuing the dilation orbit of K_x (x < 0) to the half-turn gives
    Delta^{1/2} K_x = i K_{-x}; both sides are compared in Mellin space.
    """
    vec = smeared_vector(phi, phase, n_nodes)
    if np.any(vec.boundary_points.real > 0):
        raise PreconditionError("rotation path formula needs support in (0, inf)")
    sigma, w = sigma_grid()
    lhs = np.exp(_log_mellin(*_boundary_data(vec), sigma) + delta_power(sigma, 0.5))
    rotated = KernelCombination(HALFPLANE, -vec.boundary_points, 1j * vec.coefficients)
    rhs = mellin_transform(rotated, sigma)
    return float(np.sqrt(np.sum(w * np.abs(lhs - rhs) ** 2) / np.sum(w * np.abs(rhs) ** 2)))


def reference_generator(n_nodes=DEFAULT_NODES):
    return smeared_vector(TestFunction.on_interval(1.0, 2.0), GENERATING_PHASE, n_nodes)


def calibrate_delta_sign(seed=0):
    """Residuals of both sign conventions for Delta = exp(+-2 pi sigma).

    For each sign: the J Delta J = Delta^{-1} residual on a random Mellin
    vector and the membership residual of the reference generator. The sign
    for which both are small is the frozen ``DELTA_SIGN``.
    """
    sigma, w = sigma_grid()
    rng = np.random.default_rng(seed)
    g = (rng.standard_normal(sigma.size) + 1j * rng.standard_normal(sigma.size)) * np.exp(-np.abs(sigma) / 20)
    ref = reference_generator()
    out = {}
    for sign in (-1.0, 1.0):
        log_d = delta_power(sigma, 1.0, sign)
        # (J Delta J g)(sigma) = Delta(-sigma) g(sigma), compared with g/Delta(sigma) in log form
        jdj = np.exp(log_d[::-1] + log_d)
        calib = float(np.sqrt(np.sum(w * np.abs(g * (jdj - 1.0)) ** 2) / np.sum(w * np.abs(g) ** 2)))
        out[sign] = {"jdj_residual": calib, "reference_residual": _membership_residual(ref, sign)}
    return out
