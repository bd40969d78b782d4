"""A finite-sample net of real subspaces for the affine group on the half-plane.

Vectors are sampled frequency data F(k) on (0, K_MAX); the real inner
product Re <F, G> is realized by stacking sqrt(w) Re F and sqrt(w) Im F.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from ..errors import PreconditionError
from .kernels import HALFPLANE, SmearedVector, smear
from .halfplane import GENERATING_PHASE, MEMBERSHIP_THRESHOLD, halfplane_membership
from .quadrature import TestFunction, gauss_legendre_panels, interval_family

K_MAX = 60.0
FREQUENCY_NODES = 512
VECTOR_NODES = 256
FAMILY_SIZE = 4
NET_TOLERANCE = 1e-8


def frequency_grid(k_max=K_MAX, n_nodes=FREQUENCY_NODES):
    return gauss_legendre_panels(0.0, k_max, n_nodes)


def frequency_vector(phi, phase=GENERATING_PHASE, b=0.0, a=1.0, grid=None, n_nodes=VECTOR_NODES):
    """F(k) of U(b, a) (phase * xi_phi), computed at the original quadrature nodes.

    U(b, a) K_{-p} = a^{1/2} K_{-(a p + b)}, whose frequency data is
    a^{1/2} (2 pi)^{-1/2} e^{ik(a p + b)}.
    """
    if not a > 0:
        raise PreconditionError("dilation factor must be positive")
    k, _ = grid if grid is not None else frequency_grid()
    p, w, v = phi.quadrature(n_nodes)
    coeff = complex(phase) * np.sqrt(a) / np.sqrt(2 * np.pi) * w * v
    return np.exp(1j * np.outer(k, a * p + b)) @ coeff


def realify(vectors, grid=None):
    """Real (2M, m) matrix whose Euclidean inner product is Re <F, G>."""
    _, wk = grid if grid is not None else frequency_grid()
    f = np.atleast_2d(np.asarray(vectors)).T if np.ndim(vectors) == 1 else np.asarray(vectors).T
    sw = np.sqrt(wk)[:, None]
    return np.vstack([sw * f.real, sw * f.imag])


def _orth(m, rtol=1e-10):
    if m.shape[1] == 0:
        return m
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    return u[:, s > rtol * s[0]] if s.size and s[0] > 0 else m[:, :0]


def containment_residual(small, big):
    """max_v |(I - P_big) v| / |v| over the columns of ``small``."""
    q = _orth(big)
    r = small - q @ (q.T @ small)
    n = np.linalg.norm(small, axis=0)
    return float(np.max(np.linalg.norm(r, axis=0) / np.where(n > 0, n, 1.0))) if small.shape[1] else 0.0


def subspace_gap(a, b):
    """Sine of the largest principal angle between the column spans (1 if dims differ)."""
    qa, qb = _orth(a), _orth(b)
    if qa.shape[1] != qb.shape[1]:
        return 1.0
    return float(np.sin(np.max(scipy.linalg.subspace_angles(qa, qb)))) if qa.shape[1] else 0.0


def _inside(inner, outer):
    return outer[0] <= inner[0] and inner[1] <= outer[1]


@dataclass
class AffineNet:
    """O -> real span of the smeared vectors of the families of listed O' inside O."""

    intervals: list
    family_size: int = FAMILY_SIZE
    phase: complex = GENERATING_PHASE
    families: dict = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False)

    def family(self, interval):
        return self.families[tuple(interval)]

    def generating_vectors(self, interval):
        key = tuple(interval)
        if key not in self._cache:
            fam = self.family(key)
            self._cache[key] = realify(np.array([frequency_vector(phi, self.phase) for phi in fam]))
        return self._cache[key]

    def subspace(self, interval):
        """Orthonormal real frame of H_E(interval)."""
        interval = tuple(interval)
        cols = [self.generating_vectors(o) for o in self.intervals if _inside(o, interval)]
        return _orth(np.hstack(cols))

    def __getitem__(self, interval):
        return self.subspace(interval)


def affine_net(intervals, basis=None, family_size=FAMILY_SIZE, phase=GENERATING_PHASE):
    """Build the net on ``intervals``; ``basis`` optionally maps an interval to its test functions.

    Test functions escaping their interval raise PreconditionError.
    """
    intervals = [tuple(map(float, o)) for o in intervals]
    families = {}
    for o in intervals:
        if not o[1] > o[0]:
            raise PreconditionError(f"interval {o} is empty")
        fam = basis[o] if basis is not None and o in basis else interval_family(*o, family_size)
        for phi in fam:
            if not phi.within(*o):
                raise PreconditionError(f"test function with support {phi.support} escapes {o}")
        families[o] = list(fam)
    return AffineNet(intervals, family_size, phase, families)


def isotony_residual(net, inner, outer):
    return containment_residual(net.subspace(inner), net.subspace(outer))


def covariance_gap(interval, b, a, family_size=FAMILY_SIZE, phase=GENERATING_PHASE):
    """Gap between U(b, a) H(O) and H(a O + b) for the generating families."""
    lo, hi = interval
    fam = interval_family(lo, hi, family_size)
    moved = realify(np.array([frequency_vector(phi, phase, b, a) for phi in fam]))
    target = realify(np.array([frequency_vector(phi, phase)
                               for phi in interval_family(a * lo + b, a * hi + b, family_size)]))
    return subspace_gap(moved, target)


def reeh_schlieder_rank(interval, count=6, phase=GENERATING_PHASE):
    """(rank, count) of smeared vectors from a small interval evaluated on the interior set."""
    pts = HALFPLANE.evaluation_set()
    cols = []
    for phi in interval_family(*interval, count):
        vec = SmearedVector.from_test_function(HALFPLANE, phi, phase, VECTOR_NODES)
        vals = smear(HALFPLANE, vec, pts)
        cols.append(np.concatenate([vals.real, vals.imag]))
    m = np.array(cols).T
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > 1e-12 * s[0])), count


def nested_pairs(count=20):
    """Deterministic nested interval pairs (inner, outer) with inner inside outer."""
    pairs = []
    for i in range(count):
        lo = -2.0 + 0.25 * i
        inner = (lo + 0.5, lo + 1.5)
        outer = (lo, lo + 2.0 + 0.1 * (i % 3))
        pairs.append((inner, outer))
    return pairs


def net_checks(pairs=None, covariance=None, wedge_intervals=None, tolerance=NET_TOLERANCE,
               membership_nodes=512):
    """Isotony, covariance, wedge containment and finite Reeh-Schlieder checks."""
    pairs = nested_pairs() if pairs is None else pairs
    covariance = [((1.0, 2.0), 0.0, 2.0), ((0.0, 1.0), 0.5, 1.0), ((-1.0, 0.5), -0.3, 0.7)] \
        if covariance is None else covariance
    wedge_intervals = [(0.5, 1.5), (1.0, 2.0), (2.0, 4.0)] if wedge_intervals is None else wedge_intervals
    checks = []
    intervals = sorted({o for pair in pairs for o in pair})
    net = affine_net(intervals)
    iso = [isotony_residual(net, inner, outer) for inner, outer in pairs]
    checks.append({"name": "isotony", "pairs": len(pairs), "max_residual": max(iso),
                   "pass": max(iso) <= tolerance})
    cov = [covariance_gap(o, b, a) for o, b, a in covariance]
    checks.append({"name": "covariance", "cases": [[list(o), b, a] for o, b, a in covariance],
                   "max_gap": max(cov), "pass": max(cov) <= tolerance})
    res = []
    for o in wedge_intervals:
        if o[0] <= 0:
            raise PreconditionError("wedge intervals must lie in (0, inf)")
        for phi in interval_family(*o, FAMILY_SIZE):
            res.append(halfplane_membership(phi, GENERATING_PHASE, membership_nodes))
    checks.append({"name": "wedge_containment", "vectors": len(res), "max_residual": max(res),
                   "relation": "containment", "pass": max(res) <= MEMBERSHIP_THRESHOLD})
    rank, count = reeh_schlieder_rank((1.0, 1.2))
    checks.append({"name": "reeh_schlieder_finite", "rank": rank, "vectors": count,
                   "pass": rank == count})
    return checks


__all__ = [
    "AffineNet", "TestFunction", "affine_net", "containment_residual", "covariance_gap",
    "frequency_grid", "frequency_vector", "isotony_residual", "nested_pairs", "net_checks",
    "realify", "reeh_schlieder_rank", "subspace_gap",
]
