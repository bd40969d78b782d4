"""The group case G = SL(2,R) with its wedge semigroup and the maps around it."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from ..errors import DomainError, PreconditionError
from ..lie_core import (
    AlgebraElement,
    Subspace,
    cone_interior_margin,
    cone_membership,
    grading,
    invariance_defect,
    orbit_cone,
)
from ..lie_core.algebra import same_algebra
from .models import SpacePoint, sl2_group

GROUP_MARGIN = 1e-8
# relative residual allowed when re-checking Ad-invariance of a sampled cone
INVARIANCE_TOLERANCE = 1e-2


def default_group_cone(sample_count=256, seed_rng=0, radius=8.0):
    """Sampled Ad(G)-invariant cone of sl2 generated from the elliptic seed e - f."""
    g = sl2_group()
    alg = g.algebra
    return orbit_cone(Subspace.whole(alg), alg["e"] - alg["f"], sample_count, seed_rng,
                      radius=radius, ambient=Subspace.whole(alg))


def _group_point(g):
    if isinstance(g, SpacePoint):
        if g.model.kind != "group":
            raise DomainError("expected a point of the group model")
        return g.coords
    return SpacePoint(sl2_group(), g).coords


def group_wedge_margin(g, h, cone):
    """Interior margin of Ad(g^{-1}) h - h in the cone."""
    m = _group_point(g)
    alg = h.algebra
    x = np.linalg.solve(m, h.matrix @ m)
    v = AlgebraElement(alg, alg.coordinates(x, check=True)) - h
    return cone_interior_margin(cone, v)


def group_wedge_contains(g, h, cone, margin=GROUP_MARGIN):
    """g lies in the group wedge iff Ad(g^{-1}) h - h is interior to the cone."""
    return group_wedge_margin(g, h, cone) >= margin


def split_cone_rays(cone, h, closure_tol=1e-2):
    """Unit rays spanning C_+ = C ∩ g_1 and C_- = -C ∩ g_{-1} for one-dimensional g_{±1}.

    Sampled cones only approximate their light-like boundary from inside, so
    each eigenline is tested in both directions and the direction with the
    small membership residual (below ``closure_tol``) is kept, provided the
    opposite direction is clearly outside.
    """
    plus, _, minus = grading(h)
    if plus.dim != 1 or minus.dim != 1:
        raise PreconditionError("ray selection needs one-dimensional g_1 and g_-1")
    out = []
    for sub, sgn in ((plus, 1.0), (minus, -1.0)):
        v = sub.frame[:, 0]
        res = [cone_membership(cone, sgn * s * v).residual for s in (1.0, -1.0)]
        k = int(np.argmin(res))
        if res[k] > closure_tol or res[1 - k] <= closure_tol:
            raise PreconditionError(
                f"could not select a unique cone ray in an eigenline (residuals {res})")
        out.append(AlgebraElement(h.algebra, (1.0 if k == 0 else -1.0) * v))
    return tuple(out)


def check_invariance(cone, h_fix=None, sample_count=8, seed_rng=12345, radius=0.1,
                     tol=INVARIANCE_TOLERANCE):
    """Raise PreconditionError if sampled Ad moves push generators out of the cone."""
    h_fix = Subspace.whole(cone.algebra) if h_fix is None else h_fix
    defect = invariance_defect(cone, h_fix, sample_count, seed_rng, radius)
    if defect > tol:
        raise PreconditionError(f"cone is not Ad-invariant on samples (defect {defect:.3e})")
    return defect


@dataclass
class SemigroupReport:
    """Outcome of the sampled subsemigroup check (JSON: samples/passes/failures/seed)."""

    samples: int
    passes: int
    failures: list = field(default_factory=list)
    seed: int = 0
    min_factor_margin: float = np.inf
    min_product_margin: float = np.inf

    @property
    def ok(self):
        return self.passes == self.samples

    def to_dict(self):
        return {"samples": self.samples, "passes": self.passes,
                "failures": list(self.failures), "seed": self.seed,
                "min_factor_margin": self.min_factor_margin,
                "min_product_margin": self.min_product_margin}


def sample_wedge_element(rng, h, rays, r_range=1.0, c_range=(0.1, 1.0)):
    """k exp(x) with k = exp(r h) and x = s c_+ + t c_- for random r, s, t."""
    cp, cm = rays
    r = rng.uniform(-r_range, r_range)
    s, t = rng.uniform(*c_range, size=2)
    x = s * cp.coeffs + t * cm.coeffs
    k = scipy.linalg.expm(r * h.matrix)
    return k @ scipy.linalg.expm(AlgebraElement(h.algebra, x).matrix)


def group_semigroup_check(samples, seed=0, cone=None, h=None, margin=GROUP_MARGIN):
    """Sample pairs from G^h exp(C_+° + C_-°); each factor and the product must lie in the wedge."""
    model = sl2_group()
    if h is None:
        h = model.algebra["h"]
    if cone is None:
        cone = default_group_cone()
    if not same_algebra(h.algebra, cone.algebra):
        raise DomainError("h and the cone live in different algebras")
    check_invariance(cone)
    rays = split_cone_rays(cone, h)
    rng = np.random.default_rng(seed)
    rep = SemigroupReport(samples, 0, [], seed)
    for i in range(samples):
        g1 = sample_wedge_element(rng, h, rays)
        g2 = sample_wedge_element(rng, h, rays)
        m1 = group_wedge_margin(g1, h, cone)
        m2 = group_wedge_margin(g2, h, cone)
        mp = group_wedge_margin(g1 @ g2, h, cone)
        rep.min_factor_margin = min(rep.min_factor_margin, m1, m2)
        rep.min_product_margin = min(rep.min_product_margin, mp)
        if min(m1, m2, mp) >= margin:
            rep.passes += 1
        else:
            rep.failures.append(i)
    return rep


# ----------------------------------------------------------------------
# quotient map and group involutions

_D = np.diag([1.0, -1.0])


def involution_cartan(g):
    """theta(g) = (g^T)^{-1}, integrating x -> -x^T."""
    return np.linalg.inv(g).T


def involution_tau_h(g):
    """Conjugation by diag(1, -1), integrating tau_h for h = diag(1/2, -1/2)."""
    return _D @ g @ _D


def involution_composed(g):
    return involution_cartan(involution_tau_h(g))


GROUP_INVOLUTIONS = {
    "cartan": involution_cartan,
    "tau_h": involution_tau_h,
    "composed": involution_composed,
}


def group_involution(name):
    try:
        return GROUP_INVOLUTIONS[name]
    except KeyError:
        raise DomainError(f"unknown group involution {name!r}") from None


def quotient_embedding(g, tau):
    """Q(g) = g tau(g)^{-1}; constant on cosets of the fixed group of tau."""
    if isinstance(tau, str):
        tau = group_involution(tau)
    m = _group_point(g)
    return SpacePoint(sl2_group(), m @ np.linalg.inv(tau(m)))


# ----------------------------------------------------------------------
# disc and strip


def su11_matrix(a, b):
    """[[a, b], [conj b, conj a]] with |a|^2 - |b|^2 = 1 checked."""
    a, b = complex(a), complex(b)
    if abs(abs(a) ** 2 - abs(b) ** 2 - 1.0) > 1e-10:
        raise DomainError("SU(1,1) needs |a|^2 - |b|^2 = 1")
    return np.array([[a, b], [b.conjugate(), a.conjugate()]])


def disc_action(g, z):
    """Moebius action (a z + b)/(conj(b) z + conj(a)) of SU(1,1) on the unit disc."""
    g = np.asarray(g, dtype=complex)
    if g.shape != (2, 2):
        raise DomainError("SU(1,1) elements are 2x2 matrices")
    a, b = g[0, 0], g[0, 1]
    if (abs(g[1, 0] - np.conj(b)) > 1e-10 or abs(g[1, 1] - np.conj(a)) > 1e-10
            or abs(abs(a) ** 2 - abs(b) ** 2 - 1.0) > 1e-10):
        raise DomainError("matrix is not in SU(1,1)")
    z = complex(z)
    if not abs(z) < 1.0:
        raise DomainError(f"|z| = {abs(z)} is not inside the unit disc")
    return (a * z + b) / (np.conj(b) * z + np.conj(a))


def strip_to_disc(z):
    """tanh(z/2), mapping the strip |Im z| < pi/2 onto the disc.

    The boundary lines |Im z| = pi/2 are accepted and land on the unit circle.
    """
    z = complex(z)
    if abs(z.imag) > np.pi / 2 + 1e-15:
        raise DomainError(f"|Im z| = {abs(z.imag)} exceeds pi/2")
    return complex(np.tanh(z / 2))


def strip_to_bidisc(z):
    """Diagonal embedding z -> (tanh(z/2), tanh(z/2))."""
    w = strip_to_disc(z)
    return (w, w)
