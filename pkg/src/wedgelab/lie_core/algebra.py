"""Matrix Lie algebras together with their elements and involutions.

A :class:`LieAlgebra` is given by a basis of real ``n x n`` matrices. Structure
constants are solved for once at construction, so every later computation
(brackets, adjoint matrices, Killing form) works on coefficient vectors.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np
import scipy.linalg

from ..errors import DomainError, NumericError, PreconditionError, UnsupportedError

DEFAULT_TOLERANCE = 1e-10
# eigenvalue clustering radius used by the diagonalizability test
CLUSTER_TOLERANCE = 1e-8
# singular-value threshold (relative) for rank decisions on eigenspaces
RANK_TOLERANCE = 1e-9


def _null_space(a, rtol):
    """Orthonormal basis of ker(a) using an absolute-or-relative SVD cutoff."""
    a = np.atleast_2d(a)
    if a.shape[1] == 0:
        return np.zeros((0, 0), dtype=a.dtype)
    u, s, vh = np.linalg.svd(a)
    scale = max(1.0, s[0] if s.size else 0.0)
    rank = int(np.sum(s > rtol * scale))
    return vh[rank:].conj().T


def _rank(a, rtol):
    a = np.atleast_2d(a)
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    scale = max(1.0, s[0])
    return int(np.sum(s > rtol * scale))


class LieAlgebra:
    """A real Lie algebra spanned by ``d`` linearly independent ``n x n`` matrices.

    Parameters
    ----------
    name : str
        Human readable label (``"sl2"``, ``"so(1,3)"``, ...).
    basis : array_like, shape (d, n, n)
        Real basis matrices.
    tolerance : float
        Residual threshold for the structural checks (closure, antisymmetry,
        Jacobi, involution identities).
    basis_names : sequence of str, optional
        Names used by :meth:`element` and the command line parser.
    """

    def __init__(self, name, basis, tolerance=DEFAULT_TOLERANCE, basis_names=None):
        basis = np.asarray(basis, dtype=float)
        if basis.ndim != 3 or basis.shape[1] != basis.shape[2]:
            raise DomainError(f"basis must have shape (d, n, n), got {basis.shape}")
        if tolerance < 0:
            raise DomainError("tolerance must be non-negative")
        self.name = str(name)
        self.basis = basis
        self.basis.setflags(write=False)
        self.dim = basis.shape[0]
        self.matrix_size = basis.shape[1]
        self.tolerance = float(tolerance)
        if basis_names is None:
            basis_names = [f"b{i}" for i in range(self.dim)]
        if len(basis_names) != self.dim:
            raise DomainError("basis_names must have one entry per basis matrix")
        self.basis_names = tuple(str(s) for s in basis_names)

        self._coord_matrix = basis.reshape(self.dim, -1).T
        rank = _rank(self._coord_matrix, 1e-12)
        if rank != self.dim:
            raise PreconditionError(
                f"basis matrices of {self.name!r} are linearly dependent "
                f"(rank {rank} < {self.dim})")
        self._coord_pinv = np.linalg.pinv(self._coord_matrix)

        comm = (np.einsum("iab,jbc->ijac", basis, basis)
                - np.einsum("jab,ibc->ijac", basis, basis))
        flat = comm.reshape(self.dim * self.dim, -1)
        coeffs = flat @ self._coord_pinv.T
        closure = np.abs(coeffs @ self._coord_matrix.T - flat).max() if self.dim else 0.0
        if closure > max(self.tolerance, 1e-12) * max(1.0, np.abs(flat).max(initial=0.0)):
            raise PreconditionError(
                f"basis of {self.name!r} is not closed under the commutator "
                f"(residual {closure:.3e})")
        self.structure_constants = coeffs.reshape(self.dim, self.dim, self.dim)
        self.structure_constants.setflags(write=False)
        self.closure_residual = float(closure)

    def __repr__(self):
        return f"LieAlgebra({self.name!r}, dim={self.dim}, n={self.matrix_size})"

    # -- coordinates ---------------------------------------------------

    def coordinates(self, matrix, check=True):
        """Coefficients of ``matrix`` in the stored basis."""
        m = np.asarray(matrix)
        if np.iscomplexobj(m):
            if np.abs(m.imag).max(initial=0.0) > self.tolerance:
                raise DomainError("complex matrix does not lie in a real Lie algebra")
            m = m.real
        flat = m.reshape(-1)
        coeffs = self._coord_pinv @ flat
        if check:
            res = np.abs(self._coord_matrix @ coeffs - flat).max(initial=0.0)
            if res > max(self.tolerance, 1e-12) * max(1.0, np.abs(flat).max(initial=0.0)):
                raise DomainError(
                    f"matrix is not in the span of {self.name!r} (residual {res:.3e})")
        return coeffs

    def element(self, value):
        """Build an :class:`AlgebraElement` from a name, coefficient vector or matrix."""
        if isinstance(value, AlgebraElement):
            _same_algebra(value.algebra, self)
            return value
        if isinstance(value, str):
            try:
                idx = self.basis_names.index(value)
            except ValueError:
                raise DomainError(f"{self.name!r} has no basis element {value!r}") from None
            coeffs = np.zeros(self.dim)
            coeffs[idx] = 1.0
            return AlgebraElement(self, coeffs)
        arr = np.asarray(value, dtype=float)
        if arr.shape == (self.matrix_size, self.matrix_size) and self.dim != self.matrix_size:
            return AlgebraElement(self, self.coordinates(arr))
        return AlgebraElement(self, arr)

    def __getitem__(self, name):
        return self.element(name)

    def zero(self):
        return AlgebraElement(self, np.zeros(self.dim))

    def basis_elements(self):
        return [AlgebraElement(self, row) for row in np.eye(self.dim)]

    # -- cached structure ----------------------------------------------

    @cached_property
    def ad_basis(self):
        """Stack of ad(b_i) matrices, shape (d, d, d); column j is [b_i, b_j]."""
        # ad(b_i)[k, j] = c[i, j, k]
        out = np.transpose(self.structure_constants, (0, 2, 1)).copy()
        out.setflags(write=False)
        return out

    @cached_property
    def killing_gram(self):
        """Matrix of the Killing form B(b_i, b_j) = tr(ad b_i ad b_j)."""
        g = np.einsum("iab,jba->ij", self.ad_basis, self.ad_basis)
        return 0.5 * (g + g.T)

    @cached_property
    def inner_product_gram(self):
        """Positive definite Gram matrix used for cone duality.

        This is ``-B(x, theta y)`` for the transpose Cartan involution when the
        algebra supports it, otherwise the Frobenius product of the matrices.
        """
        try:
            theta = cartan_involution_transpose(self)
        except UnsupportedError:
            g = np.einsum("iab,jab->ij", self.basis, self.basis)
            return 0.5 * (g + g.T)
        g = -self.killing_gram @ theta.matrix
        return 0.5 * (g + g.T)

    def antisymmetry_residual(self):
        c = self.structure_constants
        return float(np.abs(c + np.transpose(c, (1, 0, 2))).max(initial=0.0))

    def jacobi_residual(self):
        """Max over basis triples of |[x,[y,z]] + [y,[z,x]] + [z,[x,y]]|."""
        c = self.structure_constants
        # [b_j, b_k] = c[j,k,l] b_l ; [b_i, b_l] = c[i,l,m] b_m
        t = np.einsum("jkl,ilm->ijkm", c, c)
        jac = t + np.transpose(t, (1, 2, 0, 3)) + np.transpose(t, (2, 0, 1, 3))
        return float(np.abs(jac).max(initial=0.0))

    def check(self):
        """Residuals of the structural invariants, keyed by name."""
        return {
            "closure": self.closure_residual,
            "antisymmetry": self.antisymmetry_residual(),
            "jacobi": self.jacobi_residual(),
        }

    # -- serialization -------------------------------------------------

    def to_dict(self):
        return {
            "name": self.name,
            "matrix_size": self.matrix_size,
            "basis": [m.tolist() for m in self.basis],
            "tolerance": self.tolerance,
            "basis_names": list(self.basis_names),
        }

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data):
        n = int(data["matrix_size"])
        mats = []
        for i, m in enumerate(data["basis"]):
            arr = np.asarray(m, dtype=float)
            if arr.size != n * n:
                raise DomainError(f"basis[{i}] has {arr.size} entries, expected {n * n}")
            mats.append(arr.reshape(n, n))
        return cls(data["name"], np.array(mats).reshape(len(mats), n, n),
                   tolerance=data.get("tolerance", DEFAULT_TOLERANCE),
                   basis_names=data.get("basis_names"))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def same_algebra(a, b):
    """Identity or equal name and basis; built-in constructors return fresh instances."""
    return a is b or (a.name == b.name and a.basis.shape == b.basis.shape
                      and np.array_equal(a.basis, b.basis))


def _same_algebra(a, b):
    if not same_algebra(a, b):
        raise DomainError(f"elements belong to different algebras ({a.name!r} vs {b.name!r})")


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """Coefficient vector over the basis of a :class:`LieAlgebra`."""

    algebra: LieAlgebra
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float).reshape(-1)
        if c.shape != (self.algebra.dim,):
            raise DomainError(
                f"expected {self.algebra.dim} coefficients, got {c.size}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def matrix(self):
        return np.tensordot(self.coeffs, self.algebra.basis, axes=1)

    def norm(self):
        return float(np.linalg.norm(self.coeffs))

    def _other(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        _same_algebra(self.algebra, other.algebra)
        return other.coeffs

    def __add__(self, other):
        c = self._other(other)
        if c is NotImplemented:
            return c
        return AlgebraElement(self.algebra, self.coeffs + c)

    def __sub__(self, other):
        c = self._other(other)
        if c is NotImplemented:
            return c
        return AlgebraElement(self.algebra, self.coeffs - c)

    def __neg__(self):
        return AlgebraElement(self.algebra, -self.coeffs)

    def __mul__(self, scalar):
        if isinstance(scalar, AlgebraElement):
            return NotImplemented
        return AlgebraElement(self.algebra, float(scalar) * self.coeffs)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return AlgebraElement(self.algebra, self.coeffs / float(scalar))

    def __repr__(self):
        terms = [f"{c:+.6g}*{n}" for c, n in zip(self.coeffs, self.algebra.basis_names) if c != 0]
        return f"<{self.algebra.name}: {' '.join(terms) or '0'}>"

    def allclose(self, other, atol=1e-12):
        c = self._other(other)
        return bool(np.allclose(self.coeffs, c, rtol=0.0, atol=atol))


class Subspace:
    """Linear subspace of a Lie algebra, stored by an orthonormal coefficient frame.

    Orthonormality is Euclidean in coefficient coordinates; it only serves
    membership and projection tests.
    """

    def __init__(self, algebra, vectors, tolerance=None):
        self.algebra = algebra
        self.tolerance = algebra.tolerance if tolerance is None else tolerance
        rows = []
        for v in vectors:
            if isinstance(v, AlgebraElement):
                _same_algebra(v.algebra, algebra)
                rows.append(v.coeffs)
            else:
                rows.append(np.asarray(v, dtype=float).reshape(-1))
        mat = np.array(rows, dtype=float).reshape(len(rows), algebra.dim).T
        if mat.shape[1] and _rank(mat, 1e-10) != mat.shape[1]:
            raise PreconditionError("subspace basis vectors are linearly dependent")
        self.basis = mat
        if mat.shape[1]:
            q, _ = np.linalg.qr(mat)
        else:
            q = np.zeros((algebra.dim, 0))
        self.frame = q

    @classmethod
    def from_frame(cls, algebra, frame, tolerance=None):
        return cls(algebra, np.asarray(frame).T, tolerance=tolerance)

    @classmethod
    def whole(cls, algebra):
        return cls(algebra, np.eye(algebra.dim))

    @classmethod
    def zero(cls, algebra):
        return cls(algebra, [])

    @property
    def dim(self):
        return self.frame.shape[1]

    def __repr__(self):
        return f"Subspace({self.algebra.name!r}, dim={self.dim})"

    def basis_elements(self):
        return [AlgebraElement(self.algebra, c) for c in self.basis.T]

    def project(self, x):
        c = x.coeffs if isinstance(x, AlgebraElement) else np.asarray(x, dtype=float)
        return self.frame @ (self.frame.T @ c)

    @property
    def projector(self):
        return self.frame @ self.frame.T

    def residual(self, x):
        c = x.coeffs if isinstance(x, AlgebraElement) else np.asarray(x, dtype=float)
        return float(np.linalg.norm(c - self.project(c)))

    def contains(self, x, tol=None):
        c = x.coeffs if isinstance(x, AlgebraElement) else np.asarray(x, dtype=float)
        tol = self.tolerance if tol is None else tol
        return self.residual(c) <= tol * max(1.0, float(np.linalg.norm(c)))

    def contains_subspace(self, other, tol=None):
        return all(self.contains(v, tol) for v in other.frame.T)

    def is_subalgebra(self, tol=None):
        tol = self.tolerance if tol is None else tol
        els = self.basis_elements()
        return all(self.contains(bracket(a, b), tol) for a in els for b in els)


class Involution:
    """Linear automorphism of a Lie algebra squaring to the identity.

    ``matrix`` acts on coefficient vectors. The constructor verifies both
    ``matrix @ matrix == 1`` and bracket compatibility on all basis pairs.
    """

    LABELS = ("cartan", "tau_h", "composed", "custom")

    def __init__(self, algebra, matrix, label="custom", check=True):
        if label not in self.LABELS:
            raise DomainError(f"unknown involution label {label!r}")
        m = np.array(matrix, dtype=float)
        if m.shape != (algebra.dim, algebra.dim):
            raise DomainError(f"involution matrix must be {algebra.dim}x{algebra.dim}")
        self.algebra = algebra
        self.matrix = m
        self.matrix.setflags(write=False)
        self.label = label
        if check:
            sq = self.square_residual()
            if sq > 10 * algebra.tolerance * max(1.0, np.abs(m).max()) ** 2:
                raise PreconditionError(f"matrix does not square to the identity (residual {sq:.3e})")
            hom = self.homomorphism_residual()
            if hom > 10 * algebra.tolerance * max(1.0, np.abs(m).max()) ** 3:
                raise PreconditionError(f"matrix is not a Lie algebra automorphism (residual {hom:.3e})")

    def __repr__(self):
        return f"Involution({self.algebra.name!r}, label={self.label!r})"

    def __call__(self, x):
        _same_algebra(x.algebra, self.algebra)
        return AlgebraElement(self.algebra, self.matrix @ x.coeffs)

    def square_residual(self):
        return float(np.abs(self.matrix @ self.matrix - np.eye(self.algebra.dim)).max(initial=0.0))

    def homomorphism_residual(self):
        """max |s[b_i, b_j] - [s b_i, s b_j]| over basis pairs."""
        s = self.matrix
        c = self.algebra.structure_constants
        lhs = np.einsum("ijk,lk->ijl", c, s)
        rhs = np.einsum("ai,bj,abl->ijl", s, s, c)
        return float(np.abs(lhs - rhs).max(initial=0.0))

    def killing_defect(self):
        """max |B(s b_i, s b_j) - B(b_i, b_j)|."""
        g = self.algebra.killing_gram
        return float(np.abs(self.matrix.T @ g @ self.matrix - g).max(initial=0.0))


# ----------------------------------------------------------------------
# operations


def bracket(x, y):
    """Lie bracket computed from the structure constants."""
    _same_algebra(x.algebra, y.algebra)
    c = np.einsum("i,j,ijk->k", x.coeffs, y.coeffs, x.algebra.structure_constants)
    return AlgebraElement(x.algebra, c)


def ad_matrix(x):
    """Matrix of ad x in the stored basis (column j holds [x, b_j])."""
    return np.tensordot(x.coeffs, x.algebra.ad_basis, axes=1)


def adjoint_exp(y):
    """Ad(exp y) = exp(ad y) acting on coefficient vectors."""
    return scipy.linalg.expm(ad_matrix(y))


def killing_form(x, y):
    _same_algebra(x.algebra, y.algebra)
    return float(x.coeffs @ x.algebra.killing_gram @ y.coeffs)


class Spectrum(NamedTuple):
    eigenvalues: np.ndarray
    semisimple: bool


def _clusters(values, tol):
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(values[i] - values[j]) <= tol:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def matrix_spectrum(a, cluster_tol=CLUSTER_TOLERANCE, rank_tol=RANK_TOLERANCE):
    """Eigenvalues of a square matrix and a diagonalizability verdict.

    The Schur form supplies the eigenvalues; they are clustered at
    ``cluster_tol`` and each cluster's geometric multiplicity is compared to
    its size. As a guard against defective blocks whose eigenvalues split
    numerically, the union of all eigenspaces must also span the space.
    """
    a = np.asarray(a)
    d = a.shape[0]
    if d == 0:
        return Spectrum(np.zeros(0, dtype=complex), True)
    try:
        t, _ = scipy.linalg.schur(a.astype(complex), output="complex")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericError("Schur decomposition failed",
                           {"condition_number": float(np.linalg.cond(a)),
                            "reason": str(exc)}) from exc
    eig = np.diag(t).copy()
    if not np.all(np.isfinite(eig)):
        raise NumericError("non-finite eigenvalues",
                           {"condition_number": float(np.linalg.cond(a))})
    scale = max(1.0, float(np.abs(a).max()))
    semisimple = True
    spaces = []
    for idx in _clusters(eig, cluster_tol * scale):
        lam = eig[idx].mean()
        ker = _null_space(a - lam * np.eye(d), rank_tol)
        if ker.shape[1] != len(idx):
            semisimple = False
            break
        spaces.append(ker)
    if semisimple and _rank(np.hstack(spaces), 1e-6) != d:
        semisimple = False
    order = np.lexsort((eig.imag, eig.real))
    return Spectrum(eig[order], semisimple)


def spectrum(x):
    """Spectrum of ad x with a semisimplicity flag."""
    return matrix_spectrum(ad_matrix(x))


def is_euler(h, tol=CLUSTER_TOLERANCE):
    """True iff ad h is diagonalizable with spectrum in {-1, 0, 1} containing both +1 and -1."""
    sp = spectrum(h)
    if not sp.semisimple:
        return False
    ev = sp.eigenvalues
    if np.abs(ev.imag).max(initial=0.0) > tol:
        return False
    nearest = np.clip(np.round(ev.real), -1, 1)
    if np.abs(ev.real - nearest).max(initial=0.0) > tol:
        return False
    return bool(np.any(nearest == 1) and np.any(nearest == -1))


def is_elliptic(x, tol=CLUSTER_TOLERANCE):
    """ad x semisimple with purely imaginary spectrum."""
    sp = spectrum(x)
    return sp.semisimple and float(np.abs(sp.eigenvalues.real).max(initial=0.0)) <= tol


def is_hyperbolic(x, tol=CLUSTER_TOLERANCE):
    """ad x semisimple with real spectrum."""
    sp = spectrum(x)
    return sp.semisimple and float(np.abs(sp.eigenvalues.imag).max(initial=0.0)) <= tol


class Grading(NamedTuple):
    plus: Subspace
    zero: Subspace
    minus: Subspace


def _require_euler(h):
    if not is_euler(h):
        raise PreconditionError(f"{h!r} is not an Euler element")


def _eigenspace(a, lam):
    ker = _null_space(a - lam * np.eye(a.shape[0]), RANK_TOLERANCE)
    return np.real_if_close(ker, tol=1e6).real


def grading_projections(h):
    """Spectral projections {+1: P, 0: P, -1: P} of ad h (oblique in general)."""
    _require_euler(h)
    a = ad_matrix(h)
    blocks = {lam: _eigenspace(a, lam) for lam in (1, 0, -1)}
    frame = np.hstack([blocks[1], blocks[0], blocks[-1]])
    if frame.shape[1] != a.shape[0]:
        raise NumericError("eigenspaces of ad h do not span the algebra",
                           {"dims": {k: v.shape[1] for k, v in blocks.items()}})
    inv = np.linalg.inv(frame)
    out = {}
    start = 0
    for lam in (1, 0, -1):
        k = blocks[lam].shape[1]
        out[lam] = blocks[lam] @ inv[start:start + k]
        start += k
    return out


def grading(h):
    """The 3-grading g = g_1 + g_0 + g_{-1} of an Euler element h."""
    _require_euler(h)
    a = ad_matrix(h)
    alg = h.algebra
    return Grading(*(Subspace(alg, _eigenspace(a, lam).T) for lam in (1, 0, -1)))


def tau_h(h):
    """The involution exp(pi i ad h): +1 on g_0 and -1 on g_1 + g_{-1}."""
    p = grading_projections(h)
    return Involution(h.algebra, p[0] - p[1] - p[-1], label="tau_h")


def cartan_involution_transpose(algebra):
    """theta(x) = -x^T, provided the basis is closed under transposition.

    Raises :class:`UnsupportedError` when some ``-b^T`` leaves the span or
    when ``-B(x, theta y)`` fails to be positive definite.
    """
    cols = []
    for i, b in enumerate(algebra.basis):
        try:
            cols.append(algebra.coordinates(-b.T))
        except DomainError:
            raise UnsupportedError(
                f"{algebra.name!r}: -b^T of basis element {algebra.basis_names[i]!r} "
                "is not in the span") from None
    m = np.array(cols).T
    theta = Involution(algebra, m, label="cartan")
    form = -algebra.killing_gram @ m
    if np.abs(form - form.T).max(initial=0.0) > 1e-8 * max(1.0, np.abs(form).max()):
        raise UnsupportedError("-B(x, theta y) is not symmetric")
    if algebra.dim and np.linalg.eigvalsh(0.5 * (form + form.T)).min() <= 1e-12:
        raise UnsupportedError(f"-B(x, theta y) is not positive definite on {algebra.name!r}")
    return theta


def compose(sigma, rho, as_involution=True):
    """sigma o rho. With ``as_involution`` the two must commute."""
    _same_algebra(sigma.algebra, rho.algebra)
    m = sigma.matrix @ rho.matrix
    if not as_involution:
        return m
    comm = np.abs(m - rho.matrix @ sigma.matrix).max(initial=0.0)
    if comm > 10 * sigma.algebra.tolerance * max(1.0, np.abs(m).max()):
        raise DomainError(f"involutions do not commute (residual {comm:.3e}); "
                          "their composition is not an involution")
    return Involution(sigma.algebra, m, label="composed")


def eigenspace_split(sigma):
    """(fixed, antifixed) = (ker(sigma - 1), ker(sigma + 1))."""
    d = sigma.algebra.dim
    fixed = _null_space(sigma.matrix - np.eye(d), RANK_TOLERANCE)
    anti = _null_space(sigma.matrix + np.eye(d), RANK_TOLERANCE)
    return Subspace(sigma.algebra, fixed.T), Subspace(sigma.algebra, anti.T)


def span(algebra, vectors: Sequence, rtol=1e-9):
    """Subspace spanned by possibly dependent vectors."""
    rows = [v.coeffs if isinstance(v, AlgebraElement) else np.asarray(v, float) for v in vectors]
    if not rows:
        return Subspace.zero(algebra)
    mat = np.array(rows).T
    u, s, _ = np.linalg.svd(mat, full_matrices=False)
    r = int(np.sum(s > rtol * max(1.0, s[0])))
    return Subspace(algebra, u[:, :r].T)
