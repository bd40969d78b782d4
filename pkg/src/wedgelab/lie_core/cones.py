"""Finitely generated convex cones inside a subspace of a Lie algebra.

All geometry happens in coordinates that are orthonormal for the algebra's
positive inner product (see :attr:`LieAlgebra.inner_product_gram`), so the
dual cone is the usual Euclidean dual in those coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import NamedTuple

import numpy as np
import scipy.linalg
import scipy.optimize

from ..errors import NumericError, PreconditionError
from .algebra import AlgebraElement, Subspace, _rank, adjoint_exp, span

CONE_TOLERANCE = 1e-9
# above this many candidate facets the brute-force dual is refused
_MAX_FACET_CANDIDATES = 200_000


class Membership(NamedTuple):
    inside: bool
    residual: float
    certificate: np.ndarray | None


def _coeffs(x):
    return x.coeffs if isinstance(x, AlgebraElement) else np.asarray(x, dtype=float)


@dataclass(frozen=True, eq=False)
class ConvexCone:
    """Cone generated by finitely many elements of ``ambient``.

    ``generators`` is an (m, d) array of coefficient rows. Build instances
    with :func:`cone_make`, which validates the input.
    """

    ambient: Subspace
    generators: np.ndarray
    tolerance: float = CONE_TOLERANCE

    def __repr__(self):
        return (f"ConvexCone({self.ambient.algebra.name!r}, ambient_dim={self.ambient.dim}, "
                f"generators={len(self.generators)})")

    @property
    def algebra(self):
        return self.ambient.algebra

    def generator_elements(self):
        return [AlgebraElement(self.algebra, g) for g in self.generators]

    @cached_property
    def _chart(self):
        """(to_frame, from_frame) linear maps between coefficients and orthonormal coordinates."""
        q = self.ambient.frame
        gram = q.T @ self.algebra.inner_product_gram @ q
        if q.shape[1] == 0:
            return np.zeros((0, self.algebra.dim)), np.zeros((self.algebra.dim, 0))
        chol = np.linalg.cholesky(0.5 * (gram + gram.T))
        to_frame = chol.T @ q.T
        from_frame = q @ np.linalg.inv(chol.T)
        return to_frame, from_frame

    def to_frame(self, x):
        return self._chart[0] @ _coeffs(x)

    def from_frame(self, u):
        return self._chart[1] @ np.asarray(u, dtype=float)

    @cached_property
    def frame_generators(self):
        """Generators in orthonormal coordinates, shape (k, m)."""
        if len(self.generators) == 0:
            return np.zeros((self.ambient.dim, 0))
        return self._chart[0] @ self.generators.T

    @cached_property
    def dual_rays(self):
        """Unit generators of the dual cone in orthonormal coordinates, shape (k, r)."""
        return _dual_rays(self.frame_generators, self.tolerance)


def cone_make(ambient, generators, tolerance=CONE_TOLERANCE):
    """Validate generators against ``ambient`` and build the cone.

    Zero generators are dropped; they do not change the cone.
    """
    rows = [_coeffs(g) for g in generators]
    gens = np.array(rows, dtype=float).reshape(len(rows), ambient.algebra.dim)
    for i, g in enumerate(gens):
        if not ambient.contains(g, tol=max(tolerance, ambient.tolerance)):
            raise PreconditionError(
                f"generator {i} is not in the ambient subspace "
                f"(residual {ambient.residual(g):.3e})")
    norms = np.linalg.norm(gens, axis=1) if len(gens) else np.zeros(0)
    gens = gens[norms > 1e-14]
    gens.setflags(write=False)
    return ConvexCone(ambient, gens, tolerance)


def cone_membership(cone, x):
    """Non-negative least squares decision of x in C.

    When x is outside, the certificate ``r = x - G lam`` (in orthonormal
    coordinates) separates: ``<r, g> <= 0`` for every generator and
    ``<r, x> > 0``.
    """
    c = _coeffs(x)
    off = cone.ambient.residual(c)
    scale = max(1.0, float(np.linalg.norm(c)))
    if off > cone.tolerance * scale:
        return Membership(False, off / scale, None)
    u = cone.to_frame(c)
    g = cone.frame_generators
    if g.shape[1] == 0:
        res = float(np.linalg.norm(u))
        return Membership(res <= cone.tolerance * scale, res / scale, u if res else None)
    # bounded-variable least squares; the residual is recomputed from lam
    # below rather than taken from the solver report
    sol = scipy.optimize.lsq_linear(g, u, bounds=(0.0, np.inf), method="bvls", tol=1e-14)
    if sol.status < 0 or not np.all(np.isfinite(sol.x)):
        raise NumericError("bounded least squares failed",
                           {"generators": g.shape[1], "status": int(sol.status),
                            "message": sol.message})
    lam = np.maximum(sol.x, 0.0)
    r = u - g @ lam
    res = float(np.linalg.norm(r)) / max(1.0, float(np.linalg.norm(u)))
    inside = res <= cone.tolerance
    return Membership(inside, res, None if inside else r)


def cone_contains(cone, x):
    return cone_membership(cone, x).inside


def cone_interior_margin(cone, x):
    """min over unit dual generators y of <y, x>/|x|; positive exactly on the interior."""
    c = _coeffs(x)
    scale = float(np.linalg.norm(c))
    if cone.ambient.residual(c) > cone.tolerance * max(1.0, scale):
        return -np.inf
    rays = cone.dual_rays
    if rays.shape[1] == 0:
        return np.inf
    if scale == 0.0:
        return 0.0
    u = cone.to_frame(c)
    return float((rays.T @ u).min() / np.linalg.norm(u))


def cone_contains_interior(cone, x, margin=None):
    """Interior membership with the margin required to be at least ``margin``."""
    margin = cone.tolerance if margin is None else margin
    return cone_interior_margin(cone, x) >= margin


def cone_dual(cone):
    """Dual cone {y : <y, x> >= 0 for all x in C} in the same ambient subspace."""
    rays = cone.dual_rays
    gens = [cone.from_frame(r) for r in rays.T]
    return cone_make(cone.ambient, gens, cone.tolerance)


def cone_is_generating(cone):
    g = cone.frame_generators
    return g.shape[1] > 0 and _rank(g, 1e-10) == cone.ambient.dim


def cone_is_pointed(cone):
    """C ∩ -C = {0}: no convex combination of generators vanishes."""
    g = cone.frame_generators
    m = g.shape[1]
    if m == 0:
        return True
    a_eq = np.vstack([g, np.ones((1, m))])
    b_eq = np.concatenate([np.zeros(g.shape[0]), [1.0]])
    res = scipy.optimize.linprog(np.zeros(m), A_eq=a_eq, b_eq=b_eq,
                                 bounds=[(0, None)] * m, method="highs")
    if res.status == 0:
        return False
    if res.status == 2:
        return True
    raise NumericError("linear program for pointedness ended in an unexpected state",
                       {"status": int(res.status), "message": res.message})


def _normalize_columns(v):
    n = np.linalg.norm(v, axis=0)
    return v / n


def _dedupe(cols, tol=1e-9):
    kept = []
    for c in cols:
        if not any(np.linalg.norm(c - k) <= tol for k in kept):
            kept.append(c)
    return kept


def _dual_rays(g, tol):
    """Extreme rays of the dual of cone(g) for columns g in R^k."""
    k, m = g.shape
    if m == 0:
        # the dual of {0} is everything
        eye = np.eye(k)
        return np.hstack([eye, -eye])
    u, s, _ = np.linalg.svd(g, full_matrices=True)
    r = int(np.sum(s > 1e-10 * max(1.0, s[0])))
    basis, perp = u[:, :r], u[:, r:]
    v = basis.T @ g
    v = _normalize_columns(v)
    if r == 1:
        cand = [np.array([1.0]), np.array([-1.0])]
    elif r == 2:
        cand = [np.array([-c[1], c[0]]) for c in v.T]
    elif r == 3:
        i, j = np.triu_indices(m, 1)
        cr = np.cross(v[:, i].T, v[:, j].T)
        cand = list(cr)
    else:
        count = 1
        for t in range(r - 1):
            count = count * (m - t) // (t + 1)
        if count > _MAX_FACET_CANDIDATES:
            raise NumericError("too many facet candidates for brute-force dual",
                               {"rank": r, "generators": m, "candidates": count})
        cand = []
        for idx in combinations(range(m), r - 1):
            ns = scipy.linalg.null_space(v[:, idx].T, rcond=1e-10)
            if ns.shape[1] == 1:
                cand.append(ns[:, 0])
    rays = []
    for c in cand:
        n = np.linalg.norm(c)
        if n <= 1e-12:
            continue
        c = c / n
        p = v.T @ c
        if p.min() >= -tol:
            rays.append(c)
        elif p.max() <= tol:
            rays.append(-c)
    rays = _dedupe(rays)
    cols = [basis @ c for c in rays]
    for j in range(perp.shape[1]):
        cols.append(perp[:, j])
        cols.append(-perp[:, j])
    if not cols:
        return np.zeros((k, 0))
    return np.array(cols).T


def orbit_cone(h_fix, seed, sample_count, seed_rng, radius=8.0, ambient=None):
    """Cone generated by Ad(exp y_k) seed for random y_k in a ball of ``h_fix``.

    ``radius`` is the ball radius in coefficient norm. The seed itself is
    always the first generator. Without ``ambient`` the cone lives in the
    span of its generators.
    """
    if seed.norm() == 0.0:
        raise PreconditionError("orbit cone seed must be nonzero")
    if sample_count < 0:
        raise PreconditionError("sample_count must be non-negative")
    if not h_fix.is_subalgebra():
        raise PreconditionError("h_fix is not closed under the bracket")
    alg = seed.algebra
    rng = np.random.default_rng(seed_rng)
    k = h_fix.dim
    gens = [seed.coeffs]
    if k and sample_count:
        z = rng.standard_normal((sample_count, k))
        z /= np.linalg.norm(z, axis=1, keepdims=True)
        z *= radius * rng.random((sample_count, 1)) ** (1.0 / k)
        for zi in z:
            y = AlgebraElement(alg, h_fix.frame @ zi)
            gens.append(adjoint_exp(y) @ seed.coeffs)
    gens = [g / np.linalg.norm(g) for g in gens]
    if ambient is None:
        ambient = span(alg, gens)
    return cone_make(ambient, gens)


def invariance_defect(cone, h_fix, sample_count, seed_rng, radius=1.0):
    """Largest relative membership residual of Ad(exp y) g over sampled y and generators g."""
    alg = cone.algebra
    rng = np.random.default_rng(seed_rng)
    worst = 0.0
    k = h_fix.dim
    for _ in range(sample_count):
        z = rng.standard_normal(k)
        z *= radius * rng.random() ** (1.0 / k) / np.linalg.norm(z)
        ad = adjoint_exp(AlgebraElement(alg, h_fix.frame @ z))
        for g in cone.generators:
            worst = max(worst, cone_membership(cone, ad @ g).residual)
    return worst
