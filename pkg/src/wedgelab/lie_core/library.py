"""Built-in matrix algebras: sl(2,R), so(p,q), su(1,1) realified."""

from __future__ import annotations

import re
from itertools import combinations

import numpy as np

from ..errors import DomainError
from .algebra import LieAlgebra

_SO_PATTERN = re.compile(r"^so\(?\s*(\d+)\s*,\s*(\d+)\s*\)?$")


def sl2():
    """sl(2,R) with basis h = diag(1/2, -1/2), e = E_12, f = E_21.

    With this normalization [h,e] = e, [h,f] = -f and [e,f] = 2h.
    """
    h = np.array([[0.5, 0.0], [0.0, -0.5]])
    e = np.array([[0.0, 1.0], [0.0, 0.0]])
    f = np.array([[0.0, 0.0], [1.0, 0.0]])
    return LieAlgebra("sl2", np.array([h, e, f]), basis_names=["h", "e", "f"])


def _unit(n, i, j):
    m = np.zeros((n, n))
    m[i, j] = 1.0
    return m


def so_pq(p, q):
    """so(p,q) preserving diag(1_p, -1_q).

    Basis: rotations ``r{i}{j} = E_ij - E_ji`` for index pairs of equal sign
    and boosts ``k{i}{j} = E_ij + E_ji`` for pairs of opposite sign.
    """
    if p < 0 or q < 0 or p + q < 2:
        raise DomainError(f"so({p},{q}) needs p, q >= 0 and p + q >= 2")
    n = p + q
    mats, names = [], []
    for i, j in combinations(range(n), 2):
        same = (i < p) == (j < p)
        if same:
            mats.append(_unit(n, i, j) - _unit(n, j, i))
            names.append(f"r{i}{j}")
        else:
            mats.append(_unit(n, i, j) + _unit(n, j, i))
            names.append(f"k{i}{j}")
    return LieAlgebra(f"so({p},{q})", np.array(mats), basis_names=names)


def so_1d(d):
    """Lorentz algebra so(1,d) on R^{1+d}; index 0 is the time direction."""
    if d < 1:
        raise DomainError("so(1,d) needs d >= 1")
    return so_pq(1, d)


def so_2d(d):
    """so(2,d) preserving diag(1, 1, -1, ..., -1) on R^{2+d}."""
    return so_pq(2, d)


def realify(z):
    """Real 2n x 2n form [[Re, -Im], [Im, Re]] of a complex n x n matrix."""
    z = np.asarray(z, dtype=complex)
    return np.block([[z.real, -z.imag], [z.imag, z.real]])


def derealify(m):
    """Inverse of :func:`realify` (assumes the block structure)."""
    m = np.asarray(m, dtype=float)
    n = m.shape[0] // 2
    return m[:n, :n] + 1j * m[n:, :n]


def su11_complex_basis():
    """Complex 2x2 basis (u0, u1, u2) of su(1,1); u1 is the Euler element."""
    u0 = 0.5 * np.array([[1j, 0], [0, -1j]])
    u1 = 0.5 * np.array([[0, 1], [1, 0]], dtype=complex)
    u2 = 0.5 * np.array([[0, 1j], [-1j, 0]])
    return np.array([u0, u1, u2])


def su11():
    """su(1,1) realified to 4x4 real matrices.

    Transposition of the realified matrix corresponds to the conjugate
    transpose of the complex one, so ``-x^T`` is the usual Cartan involution.
    """
    basis = np.array([realify(u) for u in su11_complex_basis()])
    return LieAlgebra("su(1,1)", basis, basis_names=["u0", "u1", "u2"])


def builtin_algebra(name):
    """Look up a built-in algebra by name: sl2, so(p,q), su(1,1)."""
    key = name.strip().lower().replace(" ", "")
    if key in ("sl2", "sl(2)", "sl(2,r)", "sl2r"):
        return sl2()
    if key in ("su11", "su(1,1)"):
        return su11()
    m = _SO_PATTERN.match(key)
    if m:
        p, q = int(m.group(1)), int(m.group(2))
        if p == 1:
            return so_1d(q)
        return so_pq(p, q)
    raise DomainError(f"unknown built-in algebra {name!r}")


def euler_element(algebra):
    """Standard Euler element of a built-in algebra.

    sl2: h. so(1,d): the boost k01. so(p,q) with p >= 2: the boost mixing the
    first positive and first negative direction. su(1,1): u1.
    """
    name = algebra.name
    if name == "sl2":
        return algebra["h"]
    if name == "su(1,1)":
        return algebra["u1"]
    m = _SO_PATTERN.match(name)
    if m:
        p = int(m.group(1))
        if p == 1:
            return algebra["k01"]
        return algebra[f"k0{p}"]
    raise DomainError(f"no standard Euler element known for {name!r}")
