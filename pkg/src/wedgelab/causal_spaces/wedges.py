"""Modular flows and the wedge regions they define."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg

from .._parallel import chunked_map
from ..errors import DomainError, PreconditionError, UnsupportedError
from ..lie_core import AlgebraElement
from ..lie_core.algebra import same_algebra
from .models import ComplexPoint, SpacePoint, TangentCone, de_sitter

POSITIVITY_MARGIN = 1e-8
CROWN_MARGIN = 1e-10
QUADRIC_TOLERANCE = 1e-9


def _check_h(model, h):
    if not isinstance(h, AlgebraElement) or not same_algebra(h.algebra, model.algebra):
        raise DomainError("h must be an element of the model's symmetry algebra")


def _flow_matrix(model, h, t):
    return scipy.linalg.expm(t * model.acting_matrix(h))


def _moebius(g, z):
    return (g[0, 0] * z + g[0, 1]) / (g[1, 0] * z + g[1, 1])


def modular_flow(h, t, m):
    """exp(t h) . m; complex t is allowed on de Sitter space and the disc."""
    model = m.model
    _check_h(model, h)
    complex_t = np.iscomplexobj(t) and complex(t).imag != 0.0
    if isinstance(m, ComplexPoint) or complex_t:
        if not model.supports_complex:
            raise UnsupportedError(f"model {model.kind!r} has no complexified flow")
        g = _flow_matrix(model, h, complex(t))
        c = np.asarray(m.coords, dtype=complex)
        if model.kind == "disc":
            return ComplexPoint(model, [_moebius(g, c[0])])
        return ComplexPoint(model, g @ c)
    t = float(np.real(t))
    g = _flow_matrix(model, h, t)
    if model.kind == "disc":
        return SpacePoint(model, [_moebius(g, m.coords[0])])
    if model.kind == "group":
        return SpacePoint(model, g @ m.coords @ np.linalg.inv(g))
    return SpacePoint(model, g @ m.coords)


def modular_vector_field(h, m):
    """Derivative at t = 0 of the modular flow through m."""
    model = m.model
    _check_h(model, h)
    a = model.acting_matrix(h)
    c = m.coords
    if model.kind == "disc":
        z = c[0]
        return np.array([a[0, 1] + (a[0, 0] - a[1, 1]) * z - a[1, 0] * z * z])
    if model.kind == "group":
        return a @ c - c @ a
    return a @ c


def positivity_margin(h, m):
    """Signed margin of the modular vector field in the open cone at m."""
    model = m.model
    if not model.has_cone_field:
        raise UnsupportedError(f"model {model.kind!r} carries no cone field")
    return float(model.cone_margin(m.coords, modular_vector_field(h, m)))


def positivity_domain_contains(h, m, margin=POSITIVITY_MARGIN):
    """(inside, margin): inside iff the vector field lies in C_m with margin >= ``margin``."""
    mg = positivity_margin(h, m)
    return mg >= margin, mg


def tangent_cone(m):
    return TangentCone(m)


def _sample_quadric(model, rng, size, spread=2.0):
    d = model.dim
    s = rng.uniform(-spread, spread, size)
    if model.kind == "ds":
        u = rng.standard_normal((size, d))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        x = np.empty((size, d + 1))
        x[:, 0] = np.sinh(s)
        x[:, 1:] = np.cosh(s)[:, None] * u
        return x
    if model.kind == "ads":
        theta = rng.uniform(0.0, 2 * np.pi, size)
        u = rng.standard_normal((size, d - 1))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        x = np.empty((size, d + 1))
        x[:, 0] = np.cosh(s) * np.cos(theta)
        x[:, 1] = np.cosh(s) * np.sin(theta)
        x[:, 2:] = np.sinh(s)[:, None] * u
        return x
    raise UnsupportedError(f"sampling is implemented for de Sitter and anti-de Sitter, not {model.kind!r}")


@dataclass(frozen=True, eq=False)
class PointCloud:
    """Sampled quadric points with positivity labels and margins."""

    model: object
    seed: int
    points: np.ndarray
    labels: np.ndarray
    margins: np.ndarray

    def __len__(self):
        return len(self.points)

    def to_csv(self):
        """Rows ``model, d, x_0 ... x_d, label, margin`` at full double precision."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        d = self.model.dim
        w.writerow(["model", "d"] + [f"x{i}" for i in range(d + 1)] + ["label", "margin"])
        for p, lab, mg in zip(self.points, self.labels, self.margins):
            w.writerow([self.model.kind, d] + ["%.17g" % v for v in p]
                       + [int(lab), "%.17g" % mg])
        return buf.getvalue()


def positivity_margins(model, h, points):
    """Vectorized positivity margins for an (N, d+1) array of points."""
    _check_h(model, h)
    x = np.asarray(points, dtype=float)
    v = x @ model.acting_matrix(h).T
    return model.cone_margin(x, v)


def wedge_sample(model, h, count, seed, margin=POSITIVITY_MARGIN):
    """Deterministic labeled point cloud on the model quadric."""
    if count < 1:
        raise DomainError("count must be at least 1")
    _check_h(model, h)

    def chunk(rng, start, size):
        x = _sample_quadric(model, rng, size)
        return x, positivity_margins(model, h, x)

    parts = chunked_map(chunk, count, seed)
    pts = np.vstack([p[0] for p in parts])
    mgs = np.concatenate([p[1] for p in parts])
    return PointCloud(model, seed, pts, mgs >= margin, mgs)


def ds_wedge_oracle(points):
    """Closed-form de Sitter wedge {m_1 > |m_0|}; returns the margin m_1 - |m_0|."""
    x = np.asarray(points)
    return x[..., 1] - np.abs(x[..., 0])


@dataclass(frozen=True)
class NegativeEulerReport:
    """Sampled positivity domain of -h on de Sitter space."""

    count: int
    positives: int
    agrees: bool
    disagreements: int
    symmetry_defect: float

    @property
    def nonempty(self):
        return self.positives > 0

    def __bool__(self):
        return self.agrees and self.nonempty


def negative_euler_check(model, h, count, seed, band=POSITIVITY_MARGIN):
    """Positivity domain of -h compared with the reflected wedge {m_1 < -|m_0|}.

    The symmetry defect compares margin(-h, m) with margin(h, R m), where R
    flips the sign of x_1 (so R h R = -h for the standard boost).
    """
    if model.kind != "ds":
        raise UnsupportedError("negative Euler check is implemented for de Sitter space")
    _check_h(model, h)
    if h.norm() == 0.0:
        raise PreconditionError("h must be nonzero")
    hm = -h
    cloud = wedge_sample(model, hm, count, seed)
    oracle = -cloud.points[:, 1] - np.abs(cloud.points[:, 0])
    decisive = (np.abs(oracle) > band) & (np.abs(cloud.margins) > band)
    disagree = int(np.sum(decisive & ((oracle > 0) != cloud.labels)))
    refl = cloud.points.copy()
    refl[:, 1] *= -1
    sym = np.abs(cloud.margins - positivity_margins(model, h, refl))
    return NegativeEulerReport(count, int(cloud.labels.sum()), disagree == 0, disagree,
                               float(sym.max()))


def crown_margin(z):
    """Im(z)_0 - |Im(z)_spatial| for a point of the complexified de Sitter quadric."""
    model = z.model
    if model.kind != "ds":
        raise UnsupportedError("the crown is implemented for de Sitter space")
    if not z.on_quadric:
        z = ComplexPoint(model, z.coords, True)
    y = z.coords.imag
    return float(y[0] - np.linalg.norm(y[1:]))


def crown_contains(z, margin=CROWN_MARGIN):
    """z in Xi, i.e. Im z lies in the open forward light cone with the given margin."""
    return crown_margin(z) >= margin


def boundary_orbit_point(h, sign, model=None):
    """exp(sign * (pi i / 2) h) . i e_0 on de Sitter space; a real point."""
    if sign not in (1, -1, "+", "-"):
        raise DomainError("sign must be +1 or -1")
    s = 1 if sign in (1, "+") else -1
    model = model if model is not None else de_sitter(h.algebra.matrix_size - 1)
    _check_h(model, h)
    if model.kind != "ds":
        raise UnsupportedError("boundary orbits are implemented for de Sitter space")
    ie0 = np.zeros(model.dim + 1, dtype=complex)
    ie0[0] = 1j
    z = scipy.linalg.expm(s * 0.5j * np.pi * model.acting_matrix(h)) @ ie0
    if np.abs(z.imag).max() > 1e-12:
        raise PreconditionError("boundary orbit point is not real; is h the standard boost?")
    return SpacePoint(model, z.real)


def crown_orbit_point(h, z, model=None):
    """exp(z h) . i e_0 as a complex point."""
    model = model if model is not None else de_sitter(h.algebra.matrix_size - 1)
    ie0 = np.zeros(model.dim + 1, dtype=complex)
    ie0[0] = 1j
    return ComplexPoint(model, scipy.linalg.expm(complex(z) * model.acting_matrix(h)) @ ie0)


def strip_grid(size=11, t_range=2.0, offset=0.05):
    """Interior grid of the strip 0 < Im z < pi used by the KMS test."""
    t = np.linspace(-t_range, t_range, size)
    s = np.linspace(offset, np.pi - offset, size)
    return (t[:, None] + 1j * s[None, :]).ravel()


@lru_cache(maxsize=None)
def _kms_orientation(d):
    # base point e_1 must be a KMS point for the standard boost
    model = de_sitter(d)
    h = model.euler()
    z = modular_flow(h, 0.5j * np.pi, ComplexPoint(model, model.base_point().coords))
    return 1.0 if z.coords.imag[0] > 0 else -1.0


def kms_margin(h, m, z_samples=None):
    """Smallest crown margin of exp(z h) . m over a grid of the strip."""
    model = m.model
    if model.kind != "ds":
        raise UnsupportedError("the KMS wedge domain is implemented for de Sitter space")
    _check_h(model, h)
    zs = strip_grid() if z_samples is None else np.asarray(z_samples, dtype=complex).ravel()
    a = model.acting_matrix(h)
    orient = _kms_orientation(model.dim)
    w, v = np.linalg.eig(a)
    if np.linalg.cond(v) < 1e8:
        # exp(z A) m = V diag(exp(z w)) V^{-1} m for every z at once
        c = np.linalg.solve(v, m.coords)
        pts = (v[None, :, :] * np.exp(zs[:, None] * w[None, :])[:, None, :]) @ c
    else:
        pts = np.array([scipy.linalg.expm(z * a) @ m.coords for z in zs])
    y = orient * pts.imag
    return float((y[:, 0] - np.linalg.norm(y[:, 1:], axis=1)).min())


def kms_domain_contains(h, m, z_samples=None, margin=CROWN_MARGIN):
    """Every exp(z h) . m for z in the strip grid lands in the crown."""
    return kms_margin(h, m, z_samples) >= margin
