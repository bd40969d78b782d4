"""Standard subspaces of C^n and their modular objects.

Complex vectors xi = a + i b are handled in realified form [a; b] so that
real-linear and antilinear maps are ordinary real 2n x 2n matrices. The inner
product is linear in the first argument and omega(xi, eta) = Im <xi, eta>.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg

from .errors import DomainError, NumericError, PreconditionError

RANK_TOLERANCE = 1e-10
PAIR_TOLERANCE = 1e-12
COMPAT_TOLERANCE = 1e-10
KMS_TOLERANCE = 1e-9


def realify_vector(xi):
    xi = np.asarray(xi, dtype=complex)
    return np.concatenate([xi.real, xi.imag], axis=0)


def complexify_vector(x):
    x = np.asarray(x, dtype=float)
    n = x.shape[0] // 2
    return x[:n] + 1j * x[n:]


def realify_linear(m):
    """Real 2n x 2n matrix of the complex-linear map xi -> m xi."""
    m = np.asarray(m, dtype=complex)
    return np.block([[m.real, -m.imag], [m.imag, m.real]])


def realify_antilinear(m):
    """Real 2n x 2n matrix of the antilinear map xi -> m conj(xi)."""
    r = realify_linear(m)
    n = r.shape[0] // 2
    return r @ np.diag(np.r_[np.ones(n), -np.ones(n)])


def complex_unit(n):
    """Multiplication by i in realified coordinates."""
    eye = np.eye(n)
    z = np.zeros((n, n))
    return np.block([[z, -eye], [eye, z]])


def symplectic_matrix(n):
    """omega(x, y) = x^T Omega y for omega = Im <., .>."""
    return -complex_unit(n)


def _rank(a, tol=RANK_TOLERANCE):
    a = np.atleast_2d(a)
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    return int(np.sum(s > tol * max(1.0, s[0])))


def _orth(a, tol=RANK_TOLERANCE):
    if a.shape[1] == 0:
        return a
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    r = int(np.sum(s > tol * max(1.0, s[0])))
    return u[:, :r]


def _null(a, tol=RANK_TOLERANCE):
    """Orthonormal kernel basis; ``tol`` is relative to the largest singular value."""
    a = np.atleast_2d(a)
    if a.shape[0] == 0:
        return np.eye(a.shape[1])
    _, s, vh = np.linalg.svd(a)
    r = int(np.sum(s > tol * max(1.0, s[0] if s.size else 0.0)))
    return vh[r:].T


class RealSubspace:
    """Real-linear subspace of C^n given by a real basis.

    ``vectors`` is either a sequence of complex n-vectors or, with
    ``realified=True``, a real (2n, k) matrix whose columns are realified
    vectors.
    """

    def __init__(self, n, vectors, realified=False, check=True):
        if n < 1:
            raise DomainError("ambient dimension must be positive")
        self.n = int(n)
        if realified:
            r = np.array(vectors, dtype=float).reshape(2 * n, -1)
        else:
            vecs = [np.asarray(v, dtype=complex).reshape(n) for v in vectors]
            r = np.array([realify_vector(v) for v in vecs]).T.reshape(2 * n, len(vecs))
        if check and r.shape[1] and _rank(r) != r.shape[1]:
            raise PreconditionError("basis vectors are not linearly independent over R")
        self.realified = r
        self.realified.setflags(write=False)

    @classmethod
    def from_realified(cls, r, check=True):
        r = np.asarray(r, dtype=float)
        return cls(r.shape[0] // 2, r, realified=True, check=check)

    @classmethod
    def zero(cls, n):
        return cls(n, np.zeros((2 * n, 0)), realified=True)

    @classmethod
    def full(cls, n):
        return cls(n, np.eye(2 * n), realified=True)

    @property
    def dim(self):
        return self.realified.shape[1]

    def __repr__(self):
        return f"RealSubspace(n={self.n}, dim={self.dim})"

    @cached_property
    def frame(self):
        """Orthonormal real basis (2n, k) for the real inner product Re <., .>."""
        return _orth(self.realified) if self.dim else self.realified

    def complex_basis(self):
        return [complexify_vector(c) for c in self.realified.T]

    def project(self, xi):
        x = realify_vector(xi)
        return complexify_vector(self.frame @ (self.frame.T @ x))

    def residual(self, xi):
        x = realify_vector(xi)
        return float(np.linalg.norm(x - self.frame @ (self.frame.T @ x)))

    def contains(self, xi, tol=1e-9):
        return self.residual(xi) <= tol * max(1.0, float(np.linalg.norm(xi)))

    def times_i(self):
        return RealSubspace.from_realified(complex_unit(self.n) @ self.realified)

    def contains_subspace(self, other, tol=1e-9):
        return all(self.contains(v, tol) for v in other.complex_basis())

    def to_csv(self):
        """The (2n, k) realified basis, one row per real coordinate."""
        buf = io.StringIO()
        for row in self.realified:
            buf.write(",".join("%.17g" % v for v in row) + "\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text):
        rows = [[float(v) for v in line.split(",")] for line in text.strip().splitlines()]
        return cls.from_realified(np.array(rows))


def subspace_distance(v, w):
    """Largest principal angle between the real spans (pi/2 if dimensions differ)."""
    if v.n != w.n:
        raise DomainError("subspaces live in different ambient spaces")
    if v.dim != w.dim:
        return np.pi / 2
    if v.dim == 0:
        return 0.0
    return float(np.max(scipy.linalg.subspace_angles(v.frame, w.frame)))


def intersect(v, w):
    """Real intersection V ∩ W."""
    if v.dim == 0 or w.dim == 0:
        return RealSubspace.zero(v.n)
    ker = _null(np.hstack([v.frame, -w.frame]), 1e-9)
    if ker.shape[1] == 0:
        return RealSubspace.zero(v.n)
    return RealSubspace.from_realified(_orth(v.frame @ ker[: v.dim]))


def subspace_sum(v, w):
    return RealSubspace.from_realified(_orth(np.hstack([v.realified, w.realified])))


def is_cyclic(v):
    """V + iV = C^n."""
    return _rank(np.hstack([v.realified, complex_unit(v.n) @ v.realified])) == 2 * v.n


def is_separating(v):
    """V ∩ iV = {0}."""
    if v.dim == 0:
        return True
    return _rank(np.hstack([v.realified, complex_unit(v.n) @ v.realified])) == 2 * v.dim


def is_standard(v):
    return is_cyclic(v) and is_separating(v)


def tomita_operator(v):
    """Real 2n x 2n matrix of S with S = 1 on V and S = -1 on iV."""
    if not is_standard(v):
        raise PreconditionError("Tomita operator needs a standard subspace")
    n = v.n
    b = np.hstack([v.realified, complex_unit(n) @ v.realified])
    d = np.diag(np.r_[np.ones(n), -np.ones(n)])
    return b @ d @ np.linalg.inv(b)


@dataclass(frozen=True, eq=False)
class ModularPair:
    """Spectral form of (J, Delta).

    Delta u_i = lambdas[i] u_i for the orthonormal columns u_i of ``frame``
    and J(sum c_i u_i) = sum conj(c_i) u_{pairing[i]}.
    """

    lambdas: np.ndarray
    pairing: np.ndarray
    frame: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        lam = np.array(self.lambdas, dtype=float).reshape(-1)
        p = np.array(self.pairing, dtype=int).reshape(-1)
        n = lam.size
        if p.shape != (n,):
            raise DomainError("pairing must have one entry per eigenvalue")
        if n == 0:
            raise DomainError("modular pair needs n >= 1")
        if np.any(lam <= 0) or not np.all(np.isfinite(lam)):
            raise PreconditionError("eigenvalues of Delta must be positive and finite")
        if np.any((p < 0) | (p >= n)) or np.any(p[p] != np.arange(n)):
            raise PreconditionError("pairing must be an involution of {0, ..., n-1}")
        defect = np.abs(lam * lam[p] - 1.0)
        if defect.max() > PAIR_TOLERANCE:
            i = int(np.argmax(defect))
            raise PreconditionError(
                f"lambda[{int(p[i])}] = {lam[p[i]]!r} is not 1/lambda[{i}] = {1 / lam[i]!r}")
        u = np.eye(n, dtype=complex) if self.frame is None else np.array(self.frame, dtype=complex)
        if u.shape != (n, n) or np.abs(u.conj().T @ u - np.eye(n)).max() > 1e-10:
            raise PreconditionError("frame must be a unitary n x n matrix")
        for a in (lam, p, u):
            a.setflags(write=False)
        object.__setattr__(self, "lambdas", lam)
        object.__setattr__(self, "pairing", p)
        object.__setattr__(self, "frame", u)

    @property
    def n(self):
        return self.lambdas.size

    def delta(self, power=1.0):
        """Complex n x n matrix of Delta**power (power may be complex)."""
        u = self.frame
        return (u * self.lambdas.astype(complex) ** power) @ u.conj().T

    def delta_real(self, power=1.0):
        return realify_linear(self.delta(power))

    @property
    def j_complex(self):
        """M with J xi = M conj(xi)."""
        u = self.frame
        perm = np.eye(self.n)[:, self.pairing]
        return u @ perm @ u.T

    @property
    def j_real(self):
        return realify_antilinear(self.j_complex)

    def apply_j(self, xi):
        return self.j_complex @ np.conj(np.asarray(xi, dtype=complex))

    def compatibility_residual(self):
        return compatibility_residual(self.j_real, self.delta_real())

    def to_dict(self):
        out = {"n": self.n, "lambdas": self.lambdas.tolist(),
               "pairing": self.pairing.tolist(), "J_convention": "swap-conjugate"}
        if not np.array_equal(self.frame, np.eye(self.n)):
            out["frame"] = {"re": self.frame.real.tolist(), "im": self.frame.imag.tolist()}
        return out

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data):
        if data.get("J_convention", "swap-conjugate") != "swap-conjugate":
            raise DomainError(f"unsupported J_convention {data['J_convention']!r}")
        n = int(data["n"])
        lam, p = data["lambdas"], data["pairing"]
        if len(lam) != n or len(p) != n:
            raise DomainError(f"lambdas and pairing must have n = {n} entries")
        frame = None
        if "frame" in data:
            frame = np.array(data["frame"]["re"]) + 1j * np.array(data["frame"]["im"])
        return cls(lam, p, frame)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def compatibility_residual(j_real, delta_real):
    """Residual of J Delta J = Delta^{-1}, evaluated as |Delta J Delta - J| / max(1, |Delta|).

    The equivalent form Delta J Delta = J avoids inverting Delta, whose small
    eigenvalues carry only absolute precision eps * |Delta| in a dense matrix.
    """
    d = np.asarray(delta_real, dtype=float)
    r = np.abs(d @ j_real @ d - j_real).max()
    return float(r / max(1.0, np.abs(d).max()))


def _fixed_basis(w, m_j):
    """Orthonormal basis of Fix(J) inside the J-invariant span of w's columns."""
    a = w.conj().T @ m_j @ np.conj(w)
    k = w.shape[1]
    r = realify_antilinear(a)
    fix = _null(r - np.eye(2 * k), 1e-8)
    if fix.shape[1] != k:
        raise NumericError("J is not an involution on the unit eigenspace",
                           {"fixed_dim": fix.shape[1], "expected": k})
    # J-fixed vectors have real mutual inner products, so a real-orthonormal
    # basis of the fixed space is already complex-orthonormal
    return w @ complexify_vector(fix)


def polar_modular(s, unit_tol=1e-8):
    """Polar decomposition S = J Delta^{1/2} returned in spectral form."""
    s = np.asarray(s, dtype=float)
    n2 = s.shape[0]
    if s.shape != (n2, n2) or n2 % 2:
        raise DomainError("S must be a real 2n x 2n matrix")
    n = n2 // 2
    cond = np.linalg.cond(s)
    if not np.isfinite(cond) or cond > 1e14:
        raise NumericError("S is singular", {"condition_number": float(cond)})
    delta = s.T @ s
    delta_c = delta[:n, :n] + 1j * delta[n:, :n]
    delta_c = 0.5 * (delta_c + delta_c.conj().T)
    lam, u = np.linalg.eigh(delta_c)
    if lam.min() <= 0:
        raise NumericError("Delta is not positive", {"min_eigenvalue": float(lam.min())})
    w_half = realify_linear((u * lam ** -0.5) @ u.conj().T)
    j_real = s @ w_half
    m_j = complexify_vector(j_real[:, :n])  # J e_k = M conj(e_k) = M e_k
    big = lam > 1 + unit_tol
    small = lam < 1 - unit_tol
    mid = ~(big | small)
    if big.sum() != small.sum():
        raise NumericError("spectrum of Delta is not symmetric under lambda -> 1/lambda",
                           {"above": int(big.sum()), "below": int(small.sum())})
    ub = u[:, big]
    lb = lam[big]
    ju = m_j @ np.conj(ub)
    fixed = _fixed_basis(u[:, mid], m_j) if mid.any() else np.zeros((n, 0), dtype=complex)
    k, f = ub.shape[1], fixed.shape[1]
    frame = np.hstack([ub, ju, fixed])
    lambdas = np.r_[lb, 1.0 / lb, np.ones(f)]
    pairing = np.r_[np.arange(k, 2 * k), np.arange(k), np.arange(2 * k, 2 * k + f)]
    # re-orthonormalize to absorb rounding; J images are orthonormal in exact arithmetic
    q, r = np.linalg.qr(frame)
    frame = q * (np.diag(r) / np.abs(np.diag(r)))
    return ModularPair(lambdas, pairing, frame)


def _as_pair_matrices(j, delta):
    if isinstance(j, ModularPair):
        return j.j_real, j.delta_real()
    j = np.asarray(j, dtype=float)
    d = np.asarray(delta)
    if np.iscomplexobj(d) or d.shape[0] * 2 == j.shape[0]:
        d = realify_linear(d)
    return j, np.asarray(d, dtype=float)


def _real_power(delta_real, power):
    n = delta_real.shape[0] // 2
    dc = delta_real[:n, :n] + 1j * delta_real[n:, :n]
    lam, u = np.linalg.eigh(0.5 * (dc + dc.conj().T))
    return realify_linear((u * lam ** power) @ u.conj().T)


def standard_from_pair(j, delta=None):
    """V = Fix(J Delta^{1/2}) from a ModularPair or from realified (J, Delta)."""
    if isinstance(j, ModularPair) and delta is None:
        pair = j
        u, lam, p = pair.frame, pair.lambdas, pair.pairing
        vecs = []
        for i in range(pair.n):
            if p[i] == i:
                vecs.append(u[:, i])
            elif lam[i] > 1:
                # xi = lam^{-1/2} conj(w) u_i + w u_p(i) for w = 1, i
                a = lam[i] ** -0.5
                vecs.append(a * u[:, i] + u[:, p[i]])
                vecs.append(-1j * a * u[:, i] + 1j * u[:, p[i]])
        return RealSubspace(pair.n, vecs)
    jr, dr = _as_pair_matrices(j, delta)
    res = compatibility_residual(jr, dr)
    if res > COMPAT_TOLERANCE:
        raise PreconditionError(f"J Delta J != Delta^-1 (residual {res:.3e})")
    t = jr @ _real_power(dr, 0.5)
    fix = _null(t - np.eye(t.shape[0]), 1e-9)
    return RealSubspace.from_realified(fix)


def symplectic_complement(v):
    """V' = {xi : Im <xi, v> = 0 for all v in V}."""
    omega = symplectic_matrix(v.n)
    if v.dim == 0:
        return RealSubspace.full(v.n)
    ker = _null(v.realified.T @ omega.T, 1e-10)
    return RealSubspace.from_realified(ker)


@dataclass(frozen=True, eq=False)
class ModularRep:
    """U(e^t) = Delta^{-it/2pi} and U(-1) = J for a standard subspace."""

    pair: ModularPair

    def unitary(self, t):
        return self.pair.delta(-1j * t / (2 * np.pi))

    def unitary_real(self, t):
        return realify_linear(self.unitary(t))

    @property
    def j_real(self):
        return self.pair.j_real

    def standard_subspace(self):
        return standard_from_pair(self.pair)


def rep_from_standard(v):
    return ModularRep(polar_modular(tomita_operator(v)))


def rep_roundtrip(j, delta=None):
    """(J, Delta) -> V -> (J, Delta) -> V; returns the final subspace."""
    v = standard_from_pair(j, delta)
    return rep_from_standard(v).standard_subspace()


def kms_membership(xi, j, delta=None):
    """(inside, residual) for |Delta^{1/2} xi - J xi| <= 1e-9 |xi|."""
    jr, dr = _as_pair_matrices(j, delta)
    x = realify_vector(xi)
    nx = float(np.linalg.norm(x))
    if nx == 0.0:
        return True, 0.0
    r = float(np.linalg.norm(_real_power(dr, 0.5) @ x - jr @ x)) / nx
    return r <= KMS_TOLERANCE, r


@dataclass(frozen=True)
class NetValue:
    """Value of a net at one region; ``subspace`` is None when no wedge covers it."""

    region: object
    subspace: RealSubspace | None
    wedges: tuple

    @property
    def defined(self):
        return self.subspace is not None


def bgl_net(wedge_family, region_cover):
    """Region -> intersection of Fix(J_k Delta_k^{1/2}) over the covering wedges."""
    fixes = []
    for w in wedge_family:
        if isinstance(w, ModularPair):
            fixes.append(standard_from_pair(w))
        else:
            fixes.append(standard_from_pair(*w))
    out = {}
    for region, cover in region_cover.items():
        idx = tuple(sorted(set(int(k) for k in cover)))
        if not idx:
            out[region] = NetValue(region, None, idx)
            continue
        v = fixes[idx[0]]
        for k in idx[1:]:
            v = intersect(v, fixes[k])
        out[region] = NetValue(region, v, idx)
    return out


def random_standard_subspace(n, rng):
    """Real span of the columns of a random complex matrix (standard almost surely)."""
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return RealSubspace(n, list(m.T))


def random_unitary(n, rng):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_modular_pair(n, rng, log_range=(0.1, 3.0)):
    """Random pairing with random eigenvalues e^{+-s} and a Haar-like frame."""
    k = int(rng.integers(0, n // 2 + 1))
    s = rng.uniform(*log_range, size=k)
    perm = rng.permutation(n)
    lam = np.ones(n)
    p = np.arange(n)
    for i in range(k):
        a, b = perm[2 * i], perm[2 * i + 1]
        lam[a], lam[b] = np.exp(s[i]), np.exp(-s[i])
        p[a], p[b] = b, a
    return ModularPair(lam, p, random_unitary(n, rng))


def validate_modular_dict(data):
    """Structural check of a modular-pair JSON object; returns a list of problems."""
    problems = []
    for key in ("n", "lambdas", "pairing"):
        if key not in data:
            problems.append(f"missing key {key!r}")
    if problems:
        return problems
    try:
        ModularPair.from_dict(data)
    except (DomainError, PreconditionError, ValueError, TypeError) as exc:
        problems.append(str(exc))
    return problems
