"""Concrete causal symmetric space models and their cone fields.

Points live in ambient coordinates: de Sitter and anti-de Sitter space as
quadrics in R^{d+1}, the disc as complex numbers with |z| < 1, and the group
case as 2x2 real matrices of determinant one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ..errors import DomainError, PreconditionError, UnsupportedError
from ..lie_core import AlgebraElement, LieAlgebra, euler_element, sl2, so_1d, so_pq, su11
from ..lie_core.algebra import same_algebra
from ..lie_core.library import derealify

QUADRIC_TOLERANCE = 1e-9
KINDS = ("ds", "ads", "disc", "group")


@dataclass(frozen=True, eq=False)
class CausalSpace:
    """A homogeneous model: symmetry algebra, ambient metric and quadric level.

    For ``ds`` and ``ads`` the ambient form is ``metric`` and points satisfy
    ``eta(x, x) = level``. The disc and group models have no metric.
    """

    kind: str
    dim: int
    algebra: LieAlgebra
    metric: np.ndarray | None = field(default=None, repr=False)
    level: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown model kind {self.kind!r}")

    @property
    def label(self):
        if self.kind in ("ds", "ads"):
            return f"{self.kind}{self.dim}"
        return self.kind

    @property
    def supports_complex(self):
        return self.kind in ("ds", "disc")

    @property
    def has_cone_field(self):
        return self.kind in ("ds", "ads")

    def euler(self):
        """Standard Euler element of the symmetry algebra."""
        return euler_element(self.algebra)

    def acting_matrix(self, x):
        """Matrix by which x acts on ambient coordinates (complex 2x2 for the disc)."""
        if not isinstance(x, AlgebraElement) or not same_algebra(x.algebra, self.algebra):
            raise DomainError("element does not belong to this model's symmetry algebra")
        if self.kind == "disc":
            return derealify(x.matrix)
        return x.matrix

    def quadric(self, x):
        """eta(x, x) - level, bilinear (no conjugation) for complex input."""
        if self.metric is None:
            raise UnsupportedError(f"model {self.kind!r} has no quadric")
        x = np.asarray(x)
        return np.einsum("...i,i,...i->...", x, np.diag(self.metric), x) - self.level

    def eta(self, x, y):
        return np.einsum("...i,i,...i->...", x, np.diag(self.metric), y)

    def base_point(self):
        """e_1 for de Sitter and anti-de Sitter, 0 for the disc, 1 for the group."""
        if self.kind in ("ds", "ads"):
            x = np.zeros(self.dim + 1)
            x[1] = 1.0
            return SpacePoint(self, x)
        if self.kind == "disc":
            return SpacePoint(self, np.array([0.0 + 0.0j]))
        return SpacePoint(self, np.eye(2))

    def time_field(self, x):
        """Future time-like tangent vector field (vectorized over leading axes).

        de Sitter: e_0 + x_0 x. Anti-de Sitter: the rotation (x_1, -x_0, 0, ...).
        """
        x = np.asarray(x, dtype=float)
        if self.kind == "ds":
            t = x * x[..., :1]
            t[..., 0] += 1.0
            return t
        if self.kind == "ads":
            t = np.zeros_like(x)
            t[..., 0] = x[..., 1]
            t[..., 1] = -x[..., 0]
            return t
        raise UnsupportedError(f"model {self.kind!r} carries no cone field")

    def cone_margin(self, x, v):
        """Signed distance-like margin of tangent vector v in the open future cone at x.

        With the unit time vector u and the orthogonal split v = a u + s, the
        margin is a - |s|; it is positive exactly for future time-like v.
        """
        if not self.has_cone_field:
            raise UnsupportedError(f"model {self.kind!r} carries no cone field")
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        t = self.time_field(x)
        alpha = self.eta(v, t) / np.sqrt(self.eta(t, t))
        spatial = np.sqrt(np.maximum(alpha ** 2 - self.eta(v, v), 0.0))
        return alpha - spatial


def de_sitter(d):
    """dS^d = {x in R^{1+d} : x_0^2 - x_1^2 - ... - x_d^2 = -1} with so(1,d) acting."""
    if d < 2:
        raise DomainError("de Sitter model needs d >= 2")
    metric = np.diag([1.0] + [-1.0] * d)
    return CausalSpace("ds", d, so_1d(d), metric, -1.0)


def anti_de_sitter(d):
    """AdS^d = {x in R^{d+1} : x_0^2 + x_1^2 - x_2^2 - ... - x_d^2 = 1} with so(2,d-1) acting."""
    if d < 2:
        raise DomainError("anti-de Sitter model needs d >= 2")
    metric = np.diag([1.0, 1.0] + [-1.0] * (d - 1))
    return CausalSpace("ads", d, so_pq(2, d - 1), metric, 1.0)


def unit_disc():
    """Open unit disc with SU(1,1) acting by Moebius maps."""
    return CausalSpace("disc", 1, su11())


def sl2_group():
    """SL(2,R) as a symmetric space; sl2 acts by conjugation."""
    return CausalSpace("group", 3, sl2())


@dataclass(frozen=True, eq=False)
class SpacePoint:
    """A point of a real model, validated on construction."""

    model: CausalSpace
    coords: np.ndarray

    def __post_init__(self):
        m = self.model
        c = np.array(self.coords)
        if m.kind in ("ds", "ads"):
            c = c.astype(float).reshape(-1)
            if c.shape != (m.dim + 1,):
                raise DomainError(f"{m.label} points have {m.dim + 1} coordinates")
            res = abs(float(m.quadric(c)))
            if res > QUADRIC_TOLERANCE * max(1.0, float(c @ c)):
                raise DomainError(f"point is off the {m.label} quadric (residual {res:.3e})")
        elif m.kind == "disc":
            c = c.astype(complex).reshape(-1)
            if c.shape != (1,) or not abs(c[0]) < 1.0:
                raise DomainError("disc points need a single complex coordinate with |z| < 1")
        else:
            c = c.astype(float)
            if c.shape != (2, 2):
                raise DomainError("group points are 2x2 matrices")
            det = float(np.linalg.det(c))
            if abs(det - 1.0) > QUADRIC_TOLERANCE * max(1.0, float(np.abs(c).max()) ** 2):
                raise DomainError(f"group point has determinant {det!r}, expected 1")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    def __repr__(self):
        return f"SpacePoint({self.model.label}, {np.array2string(self.coords, precision=6)})"


@dataclass(frozen=True, eq=False)
class ComplexPoint:
    """Complexified ambient coordinates; ``on_quadric`` triggers the quadric check."""

    model: CausalSpace
    coords: np.ndarray
    on_quadric: bool = True

    def __post_init__(self):
        c = np.array(self.coords, dtype=complex).reshape(-1)
        m = self.model
        if m.kind in ("ds", "ads"):
            if c.shape != (m.dim + 1,):
                raise DomainError(f"{m.label} points have {m.dim + 1} coordinates")
            if self.on_quadric:
                res = abs(complex(m.quadric(c)))
                if res > QUADRIC_TOLERANCE * max(1.0, float(np.vdot(c, c).real)):
                    raise PreconditionError(
                        f"point is off the complexified {m.label} quadric (residual {res:.3e})")
        elif m.kind == "disc":
            if c.shape != (1,):
                raise DomainError("disc points have one complex coordinate")
        else:
            raise UnsupportedError("group model has no complexification here")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    @property
    def imag(self):
        return self.coords.imag

    def __repr__(self):
        return f"ComplexPoint({self.model.label}, {np.array2string(self.coords, precision=6)})"


@dataclass(frozen=True, eq=False)
class TangentCone:
    """Closed future cone C_m in T_m(M) for de Sitter or anti-de Sitter space."""

    point: SpacePoint

    def __post_init__(self):
        if not self.point.model.has_cone_field:
            raise UnsupportedError(f"model {self.point.model.kind!r} carries no cone field")

    @property
    def model(self):
        return self.point.model

    @cached_property
    def time_vector(self):
        t = self.model.time_field(self.point.coords)
        return t / np.sqrt(self.model.eta(t, t))

    @cached_property
    def spatial_frame(self):
        """Orthonormal (for -eta) basis of the space-like part of T_m(M)."""
        m = self.model
        x = self.point.coords
        # tangent space = eta-orthogonal complement of x
        g = np.diag(m.metric)
        cons = np.vstack([g * x, g * self.time_vector])
        _, _, vh = np.linalg.svd(cons)
        sp = vh[2:].T
        gram = -(sp.T * g) @ sp
        chol = np.linalg.cholesky(0.5 * (gram + gram.T))
        return sp @ np.linalg.inv(chol.T)

    def is_tangent(self, v, tol=QUADRIC_TOLERANCE):
        v = np.asarray(v, dtype=float)
        return abs(float(self.model.eta(self.point.coords, v))) <= tol * max(1.0, float(np.linalg.norm(v)))

    def margin(self, v):
        return float(self.model.cone_margin(self.point.coords, v))

    def contains(self, v, tol=0.0):
        return self.is_tangent(v) and self.margin(v) >= -tol

    def contains_interior(self, v, margin=1e-8):
        return self.is_tangent(v) and self.margin(v) >= margin

    def generators(self, count):
        """``count`` light-like boundary rays u + s with unit space-like s."""
        sp = self.spatial_frame
        k = sp.shape[1]
        if k == 1:
            dirs = np.array([[1.0], [-1.0]])
        else:
            angles = 2 * np.pi * np.arange(count) / count
            if k == 2:
                dirs = np.stack([np.cos(angles), np.sin(angles)], axis=1)
            else:
                # Fibonacci directions on the sphere, lifted to k dimensions
                z = 1 - 2 * (np.arange(count) + 0.5) / count
                r = np.sqrt(1 - z * z)
                golden = np.pi * (3 - np.sqrt(5))
                phi = golden * np.arange(count)
                base = np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)
                dirs = np.zeros((count, k))
                dirs[:, :3] = base
        return self.time_vector[None, :] + dirs @ sp.T
