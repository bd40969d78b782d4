"""Reproducing kernels of the strip and upper half-plane Hardy spaces."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError, SingularityError
from .quadrature import DEFAULT_NODES, TestFunction

KINDS = ("strip", "halfplane")


def _strip_raw(z, w):
    arg = 0.5 * (np.asarray(z, dtype=complex) - np.conj(np.asarray(w, dtype=complex)))
    return 1j / (4 * np.pi * np.sinh(arg))


def _halfplane_raw(z, w):
    return (1j / (2 * np.pi)) / (np.asarray(z, dtype=complex) - np.conj(np.asarray(w, dtype=complex)))


@dataclass(frozen=True)
class KernelModel:
    """Closed-form kernel K(z, w) on the strip 0 <= Im z <= pi or the closed upper half-plane."""

    kind: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown kernel model {self.kind!r}")

    def in_domain(self, z, closed=True):
        y = np.imag(np.asarray(z, dtype=complex))
        if self.kind == "strip":
            return (y >= 0) & (y <= np.pi) if closed else (y > 0) & (y < np.pi)
        return y >= 0 if closed else y > 0

    def check_domain(self, z):
        if not np.all(self.in_domain(z)):
            name = "strip 0 <= Im z <= pi" if self.kind == "strip" else "upper half-plane"
            raise DomainError(f"point outside the closed {name}")

    def kernel(self, z, w):
        """K(z, w) = <K_w, K_z>, vectorized by broadcasting."""
        self.check_domain(z)
        self.check_domain(w)
        d = np.asarray(z, dtype=complex) - np.conj(np.asarray(w, dtype=complex))
        if self.kind == "strip":
            # sinh vanishes on 2 pi i Z; inside the closed strip that means d = 0
            k = np.round(d.imag / (2 * np.pi))
            near = np.abs(d - 2j * np.pi * k) < 1e-14
            if np.any(near):
                raise SingularityError("sinh((z - conj w)/2) = 0: kernel pole")
            return _strip_raw(z, w)
        if np.any(np.abs(d) < 1e-14):
            raise SingularityError("z = conj(w): kernel pole")
        return _halfplane_raw(z, w)

    def raw_kernel(self, z, w):
        """Closed-form expression without domain checks (used for analytic continuation)."""
        return _strip_raw(z, w) if self.kind == "strip" else _halfplane_raw(z, w)

    def gram(self, points):
        """Gram matrix G[i, j] = <K_{w_j}, K_{w_i}> = K(w_i, w_j)."""
        p = np.asarray(points, dtype=complex).ravel()
        return self.kernel(p[:, None], p[None, :])

    def j_parameter(self, w):
        """w' with J K_w = K_{w'}: pi i + conj(w) on the strip, -conj(w) on the half-plane."""
        w = np.asarray(w, dtype=complex)
        return np.pi * 1j + np.conj(w) if self.kind == "strip" else -np.conj(w)

    def boundary_point(self, p):
        """Boundary point carrying a test-function variable p.

        The strip uses the lower edge x = p; the half-plane uses x = -p, which
        makes p -> a p + b correspond to the affine action on kernels.
        """
        p = np.asarray(p, dtype=float)
        return p + 0j if self.kind == "strip" else -p + 0j

    def evaluation_set(self):
        """32 deterministic interior points used for all evaluation-set norms."""
        re = np.linspace(-3.0, 3.0, 16)
        ims = (np.pi / 3, 2 * np.pi / 3) if self.kind == "strip" else (0.5, 1.5)
        return np.concatenate([re + 1j * y for y in ims])


STRIP = KernelModel("strip")
HALFPLANE = KernelModel("halfplane")


@dataclass(frozen=True, eq=False)
class KernelCombination:
    """Finite sum  sum_k coeffs[k] K_{points[k]}."""

    model: KernelModel
    points: np.ndarray
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        p = np.array(self.points, dtype=complex).ravel()
        c = np.array(self.coeffs, dtype=complex).ravel()
        if p.shape != c.shape:
            raise DomainError("points and coeffs must have equal length")
        self.model.check_domain(p)
        object.__setattr__(self, "points", p)
        object.__setattr__(self, "coeffs", c)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return self.model.kernel(z[..., None], self.points) @ self.coeffs

    def inner(self, other):
        """<self, other>, linear in the first slot."""
        g = self.model.kernel(other.points[:, None], self.points[None, :])
        return complex(np.conj(other.coeffs) @ g @ self.coeffs)

    def norm(self):
        return float(np.sqrt(max(self.inner(self).real, 0.0)))


@dataclass(frozen=True, eq=False)
class SmearedVector:
    """phase * sum_k weights[k] values[k] K_{x_k} for boundary points x_k.

    ``nodes`` are values of the test-function variable; the model decides
    the boundary point carrying each node.
    """

    model: KernelModel
    nodes: np.ndarray
    weights: np.ndarray
    values: np.ndarray
    phase: complex = 1.0
    interval: tuple = (-np.inf, np.inf)

    def __post_init__(self):
        x = np.array(self.nodes, dtype=float).ravel()
        w = np.array(self.weights, dtype=float).ravel()
        v = np.array(self.values).ravel()
        if not (x.shape == w.shape == v.shape):
            raise DomainError("quadrature arrays must have equal length")
        if np.any(w <= 0):
            raise DomainError("quadrature weights must be positive")
        lo, hi = self.interval
        if x.size and (x.min() < lo or x.max() > hi):
            raise DomainError("quadrature nodes leave the declared support interval")
        object.__setattr__(self, "nodes", x)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "phase", complex(self.phase))

    @classmethod
    def from_test_function(cls, model, phi, phase=1.0, n_nodes=DEFAULT_NODES):
        x, w, v = phi.quadrature(n_nodes)
        return cls(model, x, w, v, phase, phi.support)

    @property
    def boundary_points(self):
        return self.model.boundary_point(self.nodes)

    @property
    def coefficients(self):
        return self.phase * self.weights * self.values

    def __call__(self, z):
        return smear(self.model, self, z)

    def __add__(self, other):
        if other.model != self.model:
            raise DomainError("cannot add vectors of different models")
        return SmearedVector(self.model, np.r_[self.nodes, other.nodes],
                             np.r_[self.weights, other.weights],
                             np.r_[self.phase * self.values, other.phase * other.values], 1.0,
                             (min(self.interval[0], other.interval[0]),
                              max(self.interval[1], other.interval[1])))


def smear(model, vec, z):
    """Values of the smeared vector at interior points z (quadrature sum)."""
    if isinstance(vec, TestFunction):
        vec = SmearedVector.from_test_function(model, vec)
    z = np.asarray(z, dtype=complex)
    if not np.all(model.in_domain(z, closed=False)):
        raise DomainError("smeared vectors are evaluated at interior points only")
    if vec.nodes.size == 0:
        return np.zeros(z.shape, dtype=complex)
    k = model.raw_kernel(z[..., None], vec.boundary_points)
    return k @ vec.coefficients
